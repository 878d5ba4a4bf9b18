/*
Copyright 2026 The srnf-wfr Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include "srnf/core.hpp"
#include "srnf/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace srnf
{

/** Largest number of transport cells (Omega > 0) in one connected component */
inline constexpr std::size_t kOracleMaxCells = 9;

namespace detail
{

/**
 * Maximizes G(X) = sum_t sqrt(b_t sum_s X_st w_st) over blocks X_s* with
 * sum <= a_s, searching only the positive-weight cells of each block.
 */
inline double oracle_component(const std::vector<double>& a,
                               const std::vector<double>& b,
                               const std::vector<std::vector<std::size_t>>& cols,
                               const std::vector<std::vector<double>>& wts)
{
    const std::size_t S = a.size();
    // X[s][k]: mass of block s on its k-th positive cell; the last entry is slack
    std::vector<std::vector<double>> X(S);
    for (std::size_t s = 0; s < S; ++s) {
        X[s].assign(cols[s].size() + 1, 0.0);
        X[s].back() = a[s];
    }
    std::vector<double> inner(b.size());
    auto value = [&]() {
        std::fill(inner.begin(), inner.end(), 0.0);
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t k = 0; k < cols[s].size(); ++k) {
                inner[cols[s][k]] += X[s][k] * wts[s][k];
            }
        }
        double g = 0.0;
        for (std::size_t t = 0; t < b.size(); ++t) {
            g += std::sqrt(b[t] * inner[t]);
        }
        return g;
    };

    // grid search of one block at resolution 1/200
    constexpr int kGrid = 200;
    auto grid_block = [&](std::size_t s) {
        const std::size_t B = X[s].size();
        std::vector<int> k(B, 0);
        std::vector<double> best = X[s];
        double best_val = value();
        std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
            if (pos + 1 == B) {
                k[pos] = left;
                for (std::size_t c = 0; c < B; ++c) {
                    X[s][c] = a[s] * k[c] / kGrid;
                }
                const double v = value();
                if (v > best_val) {
                    best_val = v;
                    best = X[s];
                }
                return;
            }
            for (int q = 0; q <= left; ++q) {
                k[pos] = q;
                rec(pos + 1, left - q);
            }
        };
        rec(0, kGrid);
        X[s] = best;
    };
    for (int sweep = 0; sweep < 2; ++sweep) {
        for (std::size_t s = 0; s < S; ++s) {
            grid_block(s);
        }
    }

    // pairwise exchanges; the value is concave along each exchange line
    auto line = [&](std::size_t s, std::size_t p, std::size_t q) {
        double& xp_ref = X[s][p];
        double& xq_ref = X[s][q];
        const double lo = -xp_ref;
        const double hi = xq_ref;
        if (hi - lo <= 0.0) {
            return;
        }
        const double xp = xp_ref;
        const double xq = xq_ref;
        auto at = [&](double d) {
            xp_ref = xp + d;
            xq_ref = xq - d;
            return value();
        };
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double l = lo;
        double h = hi;
        double c = h - phi * (h - l);
        double d = l + phi * (h - l);
        double fc = at(c);
        double fd = at(d);
        for (int i = 0; i < 200 && h - l > 1e-16 * (std::abs(lo) + std::abs(hi)); ++i) {
            if (fc < fd) {
                l = c;
                c = d;
                fc = fd;
                d = l + phi * (h - l);
                fd = at(d);
            } else {
                h = d;
                d = c;
                fd = fc;
                c = h - phi * (h - l);
                fc = at(c);
            }
        }
        // candidates: the bracket midpoint and both ends
        double best_d = 0.0;
        double best_f = at(0.0);
        for (double cand : {0.5 * (l + h), lo, hi}) {
            const double fv = at(cand);
            if (fv > best_f) {
                best_f = fv;
                best_d = cand;
            }
        }
        at(best_d);
        xp_ref = std::max(0.0, xp_ref);
        xq_ref = std::max(0.0, xq_ref);
    };

    double current = value();
    for (int round = 0; round < 500; ++round) {
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t p = 0; p < X[s].size(); ++p) {
                for (std::size_t q = p + 1; q < X[s].size(); ++q) {
                    line(s, p, q);
                }
            }
        }
        const double next = value();
        const bool stalled = next - current <= 1e-15 * std::max(1.0, next);
        current = std::max(current, next);
        if (stalled) {
            break;
        }
    }
    return current;
}

}  // namespace detail

/**
 * @brief Brute-force WFR for small instances
 *
 * Splits the problem into connected components of the cells with positive
 * cosine weight; cells of zero weight are never better than the slack. In
 * each component the side with more atoms is kept as simplex blocks and the
 * other is eliminated in closed form. Each block is searched on a 1/200 grid,
 * then pairs of coordinates are refined by golden-section line search until
 * the value stalls. Shares no code with solve_wfr.
 */
inline double oracle_wfr(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         double delta)
{
    if (mu.manifold() != nu.manifold()) {
        throw ValidationError("manifold mismatch");
    }
    if (!(delta > 0.0)) {
        throw ValidationError("delta must be positive");
    }
    const std::size_t m = mu.size();
    const std::size_t n = nu.size();
    double total = 0.0;
    for (const auto& x : mu.atoms()) {
        total += x.mass;
    }
    for (const auto& x : nu.atoms()) {
        total += x.mass;
    }

    // weights omega^2 with omega = cos(min(arccos(u.v) / 2delta, pi/2))
    std::vector<double> w(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double c = std::clamp(mu[i].u.dot(nu[j].u), -1.0, 1.0);
            const double x = std::acos(c) / (2.0 * delta);
            const double om = x >= kPi / 2 ? 0.0 : std::cos(x);
            w[i * n + j] = om * om;
        }
    }

    // components over nodes 0..m-1 (mu) and m..m+n-1 (nu)
    std::vector<std::size_t> parent(m + n);
    for (std::size_t k = 0; k < parent.size(); ++k) {
        parent[k] = k;
    }
    std::function<std::size_t(std::size_t)> root = [&](std::size_t k) {
        while (parent[k] != k) {
            k = parent[k] = parent[parent[k]];
        }
        return k;
    };
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (w[i * n + j] > 0.0) {
                parent[root(i)] = root(m + j);
            }
        }
    }

    double F = 0.0;
    for (std::size_t r = 0; r < m + n; ++r) {
        if (root(r) != r) {
            continue;
        }
        std::vector<std::size_t> rows;
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < m; ++i) {
            if (root(i) == r) {
                rows.push_back(i);
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (root(m + j) == r) {
                cols.push_back(j);
            }
        }
        if (rows.empty() || cols.empty()) {
            continue;
        }
        const bool swap = rows.size() < cols.size();
        const auto& big = swap ? cols : rows;
        const auto& small = swap ? rows : cols;
        auto weight = [&](std::size_t s, std::size_t t) {
            return swap ? w[small[t] * n + big[s]] : w[big[s] * n + small[t]];
        };
        std::vector<double> a(big.size());
        std::vector<double> b(small.size());
        std::vector<std::vector<std::size_t>> pos(big.size());
        std::vector<std::vector<double>> wts(big.size());
        std::size_t cells = 0;
        for (std::size_t s = 0; s < big.size(); ++s) {
            a[s] = swap ? nu[big[s]].mass : mu[big[s]].mass;
            for (std::size_t t = 0; t < small.size(); ++t) {
                if (weight(s, t) > 0.0) {
                    pos[s].push_back(t);
                    wts[s].push_back(weight(s, t));
                    ++cells;
                }
            }
        }
        for (std::size_t t = 0; t < small.size(); ++t) {
            b[t] = swap ? mu[small[t]].mass : nu[small[t]].mass;
        }
        if (cells > kOracleMaxCells) {
            throw ValidationError("oracle size limit exceeded: a component has " +
                                  std::to_string(cells) + " transport cells > " +
                                  std::to_string(kOracleMaxCells));
        }
        F += detail::oracle_component(a, b, pos, wts);
    }
    return 2.0 * delta * std::sqrt(std::max(0.0, total - 2.0 * F));
}

}  // namespace srnf

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
#include "srnf/manifold.hpp"
#include "srnf/measure.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

namespace srnf
{

/** @brief Which cosine enters the transport term */
enum class CosineKind {
    truncated,  ///< cos(min(x, pi/2))
    raw         ///< cos(min(x, pi)), negative beyond pi/2
};

/**
 * @brief Cone cost between two atom sets
 *
 * complement holds 1 - omega evaluated without cancellation.
 */
struct ConeCost {
    double delta{0.5};
    CosineKind kind{CosineKind::truncated};
    Eigen::MatrixXd omega;
    Eigen::MatrixXd complement;

    [[nodiscard]] Eigen::Index rows() const { return omega.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return omega.cols(); }
};

namespace detail
{
struct CostEntry {
    double omega;
    double complement;
};

inline CostEntry cone_cost_entry(const Vec3& u, const Vec3& v, double delta,
                                 CosineKind kind)
{
    const double x = angle_between(u, v) / (2.0 * delta);
    if (kind == CosineKind::truncated) {
        return {truncated_cos(x), truncated_cos_complement(x)};
    }
    // cone-metric cosine: angles saturate at pi, so it never turns positive again
    const double c = std::min(x, kPi);
    const double s = std::sin(0.5 * c);
    return {std::cos(c), 2.0 * s * s};
}

inline void require_same_manifold(const DiscreteMeasure& mu,
                                  const DiscreteMeasure& nu)
{
    if (mu.manifold() != nu.manifold()) {
        throw ValidationError(std::string("manifold mismatch: ") +
                              to_string(mu.manifold()) + " vs " +
                              to_string(nu.manifold()));
    }
}

inline void require_delta(double delta)
{
    if (!std::isfinite(delta) || !(delta > 0.0)) {
        throw ValidationError("delta must be positive");
    }
}
}  // namespace detail

inline ConeCost cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            double delta,
                            CosineKind kind = CosineKind::truncated)
{
    detail::require_same_manifold(mu, nu);
    detail::require_delta(delta);
    ConeCost c;
    c.delta = delta;
    c.kind = kind;
    c.omega.resize(static_cast<Eigen::Index>(mu.size()),
                   static_cast<Eigen::Index>(nu.size()));
    c.complement.resizeLike(c.omega);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = 0; j < nu.size(); ++j) {
            const auto e = detail::cone_cost_entry(mu[i].u, nu[j].u, delta, kind);
            c.omega(i, j) = e.omega;
            c.complement(i, j) = e.complement;
        }
    }
    return c;
}

/**
 * @brief Discrete semi-coupling
 *
 * Both matrices are (m+1) x (n+1). Row 0 of A and column 0 of B are zero;
 * A(i,0) is mass destroyed at source atom i, B(0,j) mass created at target j.
 */
struct SemiCoupling {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

struct CouplingDiagnostics {
    bool shape_ok{true};
    std::string shape_message;
    double max_row_violation{0.0};     ///< relative, over sum_j A(i,j) vs a_i
    double max_column_violation{0.0};  ///< relative, over sum_i B(i,j) vs b_j
    std::vector<std::pair<std::size_t, double>> row_deficits;
    std::vector<std::pair<std::size_t, double>> column_deficits;
    std::vector<std::pair<std::size_t, std::size_t>> negative_entries;
    std::vector<std::pair<std::size_t, std::size_t>> nonzero_reserved;

    [[nodiscard]] bool feasible(double tol = 1e-10) const
    {
        return shape_ok && max_row_violation <= tol &&
               max_column_violation <= tol && negative_entries.empty() &&
               nonzero_reserved.empty();
    }
};

/** @brief Report marginal violations, negative entries and shape errors */
inline CouplingDiagnostics validate_coupling(const SemiCoupling& g,
                                             const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             double tol = 1e-10)
{
    CouplingDiagnostics d;
    const auto m = static_cast<Eigen::Index>(a.size());
    const auto n = static_cast<Eigen::Index>(b.size());
    if (g.A.rows() != m + 1 || g.A.cols() != n + 1 || g.B.rows() != m + 1 ||
        g.B.cols() != n + 1) {
        d.shape_ok = false;
        std::ostringstream s;
        s << "expected " << m + 1 << "x" << n + 1 << " matrices, got A "
          << g.A.rows() << "x" << g.A.cols() << " and B " << g.B.rows() << "x"
          << g.B.cols();
        d.shape_message = s.str();
        return d;
    }
    for (Eigen::Index i = 0; i <= m; ++i) {
        for (Eigen::Index j = 0; j <= n; ++j) {
            if (g.A(i, j) < 0.0 || g.B(i, j) < 0.0 || !std::isfinite(g.A(i, j)) ||
                !std::isfinite(g.B(i, j))) {
                d.negative_entries.emplace_back(i, j);
            }
        }
    }
    for (Eigen::Index j = 0; j <= n; ++j) {
        if (g.A(0, j) != 0.0) {
            d.nonzero_reserved.emplace_back(0, j);
        }
    }
    for (Eigen::Index i = 0; i <= m; ++i) {
        if (g.B(i, 0) != 0.0) {
            d.nonzero_reserved.emplace_back(i, 0);
        }
    }
    for (Eigen::Index i = 1; i <= m; ++i) {
        const double target = a[i - 1];
        const double deficit = target - g.A.row(i).sum();
        const double rel = std::abs(deficit) / std::max(target, 1e-300);
        d.max_row_violation = std::max(d.max_row_violation, rel);
        if (rel > tol) {
            d.row_deficits.emplace_back(i, deficit);
        }
    }
    for (Eigen::Index j = 1; j <= n; ++j) {
        const double target = b[j - 1];
        const double deficit = target - g.B.col(j).sum();
        const double rel = std::abs(deficit) / std::max(target, 1e-300);
        d.max_column_violation = std::max(d.max_column_violation, rel);
        if (rel > tol) {
            d.column_deficits.emplace_back(j, deficit);
        }
    }
    return d;
}

namespace detail
{
/**
 * Sum a_i + sum b_j - 2 sum sqrt(A B) omega, rearranged so that exact
 * diagonal couplings evaluate to exactly zero.
 */
inline double j_terms(const SemiCoupling& g, const ConeCost& cost)
{
    const Eigen::Index m = cost.rows();
    const Eigen::Index n = cost.cols();
    double s = 0.0;
    for (Eigen::Index i = 1; i <= m; ++i) {
        s += g.A(i, 0);
    }
    for (Eigen::Index j = 1; j <= n; ++j) {
        s += g.B(0, j);
    }
    for (Eigen::Index i = 1; i <= m; ++i) {
        for (Eigen::Index j = 1; j <= n; ++j) {
            const double x = g.A(i, j);
            const double y = g.B(i, j);
            if (x == 0.0 && y == 0.0) {
                continue;
            }
            const double d = std::sqrt(x) - std::sqrt(y);
            s += d * d + 2.0 * std::sqrt(x * y) * cost.complement(i - 1, j - 1);
        }
    }
    return s;
}
}  // namespace detail

/** @brief Semi-coupling functional 4 delta^2 (sum a + sum b - 2 F) */
inline double evaluate_J(const SemiCoupling& g, const ConeCost& cost,
                         const std::vector<double>& a,
                         const std::vector<double>& b)
{
    if (cost.rows() != static_cast<Eigen::Index>(a.size()) ||
        cost.cols() != static_cast<Eigen::Index>(b.size())) {
        throw ValidationError("cost shape does not match the masses");
    }
    const auto diag = validate_coupling(g, a, b);
    if (!diag.shape_ok) {
        throw ValidationError("coupling shape: " + diag.shape_message);
    }
    if (!diag.feasible()) {
        std::ostringstream s;
        s << "coupling is not a semi-coupling (row violation "
          << diag.max_row_violation << ", column violation "
          << diag.max_column_violation << ", " << diag.negative_entries.size()
          << " negative entries)";
        throw ValidationError(s.str());
    }
    const double t = std::max(0.0, detail::j_terms(g, cost));
    return 4.0 * cost.delta * cost.delta * t;
}

/** @brief Transport objective sum_ij sqrt(A_ij B_ij) omega_ij */
inline double transport_objective(const SemiCoupling& g, const ConeCost& cost)
{
    double f = 0.0;
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
        for (Eigen::Index j = 0; j < cost.cols(); ++j) {
            f += std::sqrt(g.A(i + 1, j + 1) * g.B(i + 1, j + 1)) * cost.omega(i, j);
        }
    }
    return f;
}

struct WfrOptions {
    int max_iters = 10000;
    double rel_tol = 1e-12;
    int restarts = 10;
    std::uint64_t seed = 0;
    CosineKind cosine = CosineKind::truncated;
    /** Worker threads for restarts; 0 picks the hardware concurrency */
    unsigned threads = 1;
    /** Enable support pruning/revival near convergence */
    bool polish = true;
};

struct WfrSolution {
    double distance{0.0};
    double delta{0.5};
    SemiCoupling coupling;
    double objective{0.0};
    int iterations{0};
    int restarts_used{0};
    std::size_t best_restart{0};
    bool converged{false};
    /** Upper bound on the remaining objective gap at the returned coupling */
    double gap_bound{0.0};
    std::vector<double> objective_history;
};

namespace detail
{

/**
 * Block-coordinate ascent on F(A, B) = sum sqrt(A_ij B_ij) omega_ij over the
 * cells with positive omega. Each cell stores its (i, j) and the weight
 * w = omega^2 that drives the closed-form block updates.
 */
class WfrAscent
{
public:
    struct Cell {
        std::uint32_t i;
        std::uint32_t j;
        double w;
        double omega;
        double complement;
    };

    struct Result {
        std::vector<double> P;  // A on cells
        std::vector<double> Q;  // B on cells
        double objective{0.0};
        double terms{0.0};
        double gap{0.0};
        int iterations{0};
        bool converged{false};
        std::vector<double> history;
    };

    WfrAscent(const std::vector<Cell>& cells, const std::vector<double>& a,
              const std::vector<double>& b, const WfrOptions& opts)
        : cells_(cells), a_(a), b_(b), opts_(opts)
    {
    }

    Result run(std::size_t restart) const
    {
        State s(cells_.size(), a_.size(), b_.size());
        initialize(s, restart);
        b_step(s);
        Result r;
        double f = objective(s);
        r.history.push_back(f);
        int since_polish = 0;
        int polishes = 0;
        int it = 0;
        while (it < opts_.max_iters) {
            a_step(s);
            b_step(s);
            ++it;
            const double fn = objective(s);
            const double rel = relative_change(f, fn);
            f = std::max(f, fn);
            r.history.push_back(fn);
            ++since_polish;
            const bool small = rel < opts_.rel_tol;
            const bool trigger = opts_.polish &&
                                 ((rel < 1e-6 && since_polish >= 20) ||
                                  since_polish >= 50 || small);
            if (trigger) {
                since_polish = 0;
                ++polishes;
                const bool changed =
                    polish(s, f, r.history, it, small || polishes % 10 == 0);
                if (small && !changed) {
                    r.converged = true;
                    break;
                }
                if (!changed) {
                    extrapolate(s, f, r.history, it);
                }
            } else if (small) {
                r.converged = true;
                break;
            }
        }
        r.iterations = it;
        r.objective = objective(s);
        r.terms = terms(s);
        r.gap = gap_bound(s);
        r.P = std::move(s.P);
        r.Q = std::move(s.Q);
        return r;
    }

private:
    struct State {
        State(std::size_t cells, std::size_t m, std::size_t n)
            : P(cells, 0.0), Q(cells, 0.0), active(cells, 1), row_den(m),
              col_den(n)
        {
        }
        std::vector<double> P;
        std::vector<double> Q;
        std::vector<char> active;
        std::vector<std::size_t> list;  // active cells in row-major order
        std::vector<double> row_den;
        std::vector<double> col_den;
    };

    static double relative_change(double before, double after)
    {
        const double scale = std::max(std::abs(after), 1e-300);
        return std::abs(after - before) / scale;
    }

    void rebuild(State& s) const
    {
        s.list.clear();
        for (std::size_t e = 0; e < cells_.size(); ++e) {
            if (s.active[e] && cells_[e].w > 0.0) {
                s.list.push_back(e);
            }
        }
    }

    void initialize(State& s, std::size_t restart) const
    {
        rebuild(s);
        const std::size_t m = a_.size();
        std::vector<double> row(m, 0.0);
        if (restart == 0) {
            for (auto e : s.list) {
                const auto& c = cells_[e];
                s.P[e] = a_[c.i] * b_[c.j] * (c.w + 1e-3);
                row[c.i] += s.P[e];
            }
        } else {
            std::seed_seq seq{static_cast<std::uint64_t>(opts_.seed),
                              static_cast<std::uint64_t>(restart)};
            std::mt19937_64 rng(seq);
            std::exponential_distribution<double> expo(1.0);
            for (auto e : s.list) {
                s.P[e] = expo(rng);
                row[cells_[e].i] += s.P[e];
            }
        }
        for (auto e : s.list) {
            const auto i = cells_[e].i;
            s.P[e] = a_[i] * (s.P[e] / row[i]);
        }
    }

    // A given B: A_ij = a_i * B_ij w_ij / sum_k B_ik w_ik
    void a_step(State& s) const
    {
        std::fill(s.row_den.begin(), s.row_den.end(), 0.0);
        for (auto e : s.list) {
            s.row_den[cells_[e].i] += s.Q[e] * cells_[e].w;
        }
        for (auto e : s.list) {
            const auto& c = cells_[e];
            const double den = s.row_den[c.i];
            s.P[e] = den > 0.0 ? a_[c.i] * ((s.Q[e] * c.w) / den) : 0.0;
        }
    }

    // B given A: B_ij = b_j * A_ij w_ij / sum_k A_kj w_kj
    void b_step(State& s) const
    {
        std::fill(s.col_den.begin(), s.col_den.end(), 0.0);
        for (auto e : s.list) {
            s.col_den[cells_[e].j] += s.P[e] * cells_[e].w;
        }
        for (auto e : s.list) {
            const auto& c = cells_[e];
            const double den = s.col_den[c.j];
            s.Q[e] = den > 0.0 ? b_[c.j] * ((s.P[e] * c.w) / den) : 0.0;
        }
    }

    double objective(const State& s) const
    {
        double f = 0.0;
        for (auto e : s.list) {
            f += std::sqrt(s.P[e] * s.Q[e]) * cells_[e].omega;
        }
        return f;
    }

    double terms(const State& s) const
    {
        std::vector<double> rs(a_.size(), 0.0);
        std::vector<double> cs(b_.size(), 0.0);
        double t = 0.0;
        for (auto e : s.list) {
            const auto& c = cells_[e];
            rs[c.i] += s.P[e];
            cs[c.j] += s.Q[e];
            const double d = std::sqrt(s.P[e]) - std::sqrt(s.Q[e]);
            t += d * d + 2.0 * std::sqrt(s.P[e] * s.Q[e]) * c.complement;
        }
        for (std::size_t i = 0; i < a_.size(); ++i) {
            t += std::max(0.0, a_[i] - rs[i]);
        }
        for (std::size_t j = 0; j < b_.size(); ++j) {
            t += std::max(0.0, b_[j] - cs[j]);
        }
        return t;
    }

    // Gradients of the reduced concave objectives.
    //   over B: H(B) = sum_i sqrt(a_i sum_j B_ij w_ij), per unit column share
    //           g_ij = a_i b_j w_ij / (2 sqrt(a_i sum_j B_ij w_ij))
    //   over A: symmetric with rows and columns exchanged.
    struct Gradients {
        std::vector<double> col;   // g_ij on every cell
        std::vector<double> row;   // h_ij on every cell
        std::vector<double> col_max_active;
        std::vector<double> row_max_active;
        std::vector<double> col_max_all;
        double H{0.0};
        double G{0.0};
    };

    Gradients gradients(const State& s) const
    {
        const std::size_t m = a_.size();
        const std::size_t n = b_.size();
        std::vector<double> wr(m, 0.0);
        std::vector<double> vc(n, 0.0);
        for (auto e : s.list) {
            wr[cells_[e].i] += s.Q[e] * cells_[e].w;
            vc[cells_[e].j] += s.P[e] * cells_[e].w;
        }
        Gradients g;
        for (std::size_t i = 0; i < m; ++i) {
            wr[i] = std::sqrt(a_[i] * wr[i]);
            g.H += wr[i];
        }
        for (std::size_t j = 0; j < n; ++j) {
            vc[j] = std::sqrt(b_[j] * vc[j]);
            g.G += vc[j];
        }
        const double inf = std::numeric_limits<double>::infinity();
        g.col.resize(cells_.size());
        g.row.resize(cells_.size());
        g.col_max_active.assign(n, 0.0);
        g.row_max_active.assign(m, 0.0);
        g.col_max_all.assign(n, 0.0);
        for (std::size_t e = 0; e < cells_.size(); ++e) {
            const auto& c = cells_[e];
            if (c.w <= 0.0) {
                g.col[e] = g.row[e] = 0.0;
                continue;
            }
            const double num = a_[c.i] * b_[c.j] * c.w;
            g.col[e] = wr[c.i] > 0.0 ? num / (2.0 * wr[c.i]) : inf;
            g.row[e] = vc[c.j] > 0.0 ? num / (2.0 * vc[c.j]) : inf;
            g.col_max_all[c.j] = std::max(g.col_max_all[c.j], g.col[e]);
            if (s.active[e]) {
                g.col_max_active[c.j] = std::max(g.col_max_active[c.j], g.col[e]);
                g.row_max_active[c.i] = std::max(g.row_max_active[c.i], g.row[e]);
            }
        }
        return g;
    }

    // Concavity of H gives F* <= H(B)/2 + sum_j max_i g_ij.
    double gap_bound(const State& s) const
    {
        const Gradients g = gradients(s);
        double bound = 0.5 * g.H;
        for (double l : g.col_max_all) {
            bound += l;
        }
        return std::max(0.0, bound - objective(s));
    }

    struct ActiveGradients {
        std::vector<double> col;  // aligned with State::list
        std::vector<double> row;
        std::vector<double> col_max;
        std::vector<double> row_max;
    };

    ActiveGradients active_gradients(const State& s) const
    {
        std::vector<double> wr(a_.size(), 0.0);
        std::vector<double> vc(b_.size(), 0.0);
        for (auto e : s.list) {
            wr[cells_[e].i] += s.Q[e] * cells_[e].w;
            vc[cells_[e].j] += s.P[e] * cells_[e].w;
        }
        for (std::size_t i = 0; i < wr.size(); ++i) {
            wr[i] = std::sqrt(a_[i] * wr[i]);
        }
        for (std::size_t j = 0; j < vc.size(); ++j) {
            vc[j] = std::sqrt(b_[j] * vc[j]);
        }
        const double inf = std::numeric_limits<double>::infinity();
        ActiveGradients g;
        g.col.resize(s.list.size());
        g.row.resize(s.list.size());
        g.col_max.assign(b_.size(), 0.0);
        g.row_max.assign(a_.size(), 0.0);
        for (std::size_t k = 0; k < s.list.size(); ++k) {
            const auto& c = cells_[s.list[k]];
            const double num = a_[c.i] * b_[c.j] * c.w;
            g.col[k] = wr[c.i] > 0.0 ? num / (2.0 * wr[c.i]) : inf;
            g.row[k] = vc[c.j] > 0.0 ? num / (2.0 * vc[c.j]) : inf;
            g.col_max[c.j] = std::max(g.col_max[c.j], g.col[k]);
            g.row_max[c.i] = std::max(g.row_max[c.i], g.row[k]);
        }
        return g;
    }

    /**
     * Drop active cells that lose the gradient comparison in their row or
     * column; when `full`, also bring back excluded cells that beat the
     * active ones. Each change is kept only if the objective does not
     * decrease.
     */
    bool polish(State& s, double& f, std::vector<double>& history, int& it,
                bool full) const
    {
        const ActiveGradients g = active_gradients(s);
        // Losers by a clear margin first, then near-ties; each tier tries all
        // losers and then only those carrying little mass.
        for (const double margin : {1e-6, 1e-12}) {
            std::vector<std::size_t> all;
            std::vector<std::size_t> light;
            for (std::size_t k = 0; k < s.list.size(); ++k) {
                const auto e = s.list[k];
                const auto& c = cells_[e];
                const bool col_loser = g.col[k] < (1.0 - margin) * g.col_max[c.j];
                const bool row_loser = g.row[k] < (1.0 - margin) * g.row_max[c.i];
                if (col_loser || row_loser) {
                    all.push_back(e);
                    if ((col_loser && s.Q[e] < 1e-3 * b_[c.j]) ||
                        (row_loser && s.P[e] < 1e-3 * a_[c.i])) {
                        light.push_back(e);
                    }
                }
            }
            if (log_level() >= LogLevel::debug) {
                std::ostringstream msg;
                msg << "polish at sweep " << it << ": F " << f << ", active "
                    << s.list.size() << ", margin " << margin << " losers "
                    << all.size() << " (" << light.size() << " light)";
                log(LogLevel::debug, msg.str());
            }
            if (try_prune(s, all, f, history, it)) {
                return true;
            }
            if (light.size() < all.size() && try_prune(s, light, f, history, it)) {
                return true;
            }
        }
        if (!full || it >= opts_.max_iters) {
            return false;
        }
        const Gradients gf = gradients(s);
        std::vector<std::size_t> revive;
        for (std::size_t e = 0; e < cells_.size(); ++e) {
            const auto& c = cells_[e];
            if (c.w > 0.0 && !s.active[e] &&
                (gf.col[e] > (1.0 + 1e-9) * gf.col_max_active[c.j] ||
                 gf.row[e] > (1.0 + 1e-9) * gf.row_max_active[c.i])) {
                revive.push_back(e);
            }
        }
        return !revive.empty() && try_revive(s, revive, f, history, it);
    }

    /**
     * One sweep, then a jump along the log-ratio of B between the two
     * iterates with doubling step lengths. The best jump is kept only if it
     * raises the objective; the alternating updates alone converge linearly
     * and slowly once the support has settled.
     */
    void extrapolate(State& s, double& f, std::vector<double>& history, int& it) const
    {
        if (it + 2 > opts_.max_iters) {
            return;
        }
        std::vector<double> before(s.list.size());
        for (std::size_t k = 0; k < s.list.size(); ++k) {
            before[k] = s.Q[s.list[k]];
        }
        a_step(s);
        b_step(s);
        ++it;
        f = std::max(f, objective(s));
        history.push_back(f);
        std::vector<double> base_P(s.list.size());
        std::vector<double> base(s.list.size());
        std::vector<double> dir(s.list.size());
        for (std::size_t k = 0; k < s.list.size(); ++k) {
            base_P[k] = s.P[s.list[k]];
            base[k] = s.Q[s.list[k]];
            dir[k] = base[k] > 0.0 && before[k] > 0.0 ? std::log(base[k] / before[k]) : 0.0;
        }
        std::vector<double> best_P;
        std::vector<double> best_Q;
        double best_f = f;
        for (double step = 2.0; step <= 1024.0 && it < opts_.max_iters; step *= 2.0) {
            for (std::size_t k = 0; k < s.list.size(); ++k) {
                s.Q[s.list[k]] = base[k] * std::exp(std::min(step * dir[k], 700.0));
            }
            a_step(s);
            b_step(s);
            ++it;
            const double fn = objective(s);
            if (!(fn > best_f)) {
                break;
            }
            best_f = fn;
            best_P.resize(s.list.size());
            best_Q.resize(s.list.size());
            for (std::size_t k = 0; k < s.list.size(); ++k) {
                best_P[k] = s.P[s.list[k]];
                best_Q[k] = s.Q[s.list[k]];
            }
        }
        if (best_Q.empty()) {
            best_P = std::move(base_P);
            best_Q = std::move(base);
        }
        for (std::size_t k = 0; k < s.list.size(); ++k) {
            s.P[s.list[k]] = best_P[k];
            s.Q[s.list[k]] = best_Q[k];
        }
        if (best_f > f) {
            f = best_f;
            history.push_back(f);
        }
    }

    bool try_prune(State& s, const std::vector<std::size_t>& cells, double& f,
                   std::vector<double>& history, int& it) const
    {
        if (cells.empty() || it >= opts_.max_iters) {
            return false;
        }
        const std::vector<std::size_t> saved_list = s.list;
        std::vector<double> saved_P(saved_list.size());
        std::vector<double> saved_Q(saved_list.size());
        for (std::size_t k = 0; k < saved_list.size(); ++k) {
            saved_P[k] = s.P[saved_list[k]];
            saved_Q[k] = s.Q[saved_list[k]];
        }
        for (auto e : cells) {
            s.active[e] = 0;
            s.P[e] = 0.0;
            s.Q[e] = 0.0;
        }
        s.list.clear();
        for (auto e : saved_list) {
            if (s.active[e]) {
                s.list.push_back(e);
            }
        }
        a_step(s);
        b_step(s);
        ++it;
        const double fn = objective(s);
        if (fn >= f) {
            f = fn;
            history.push_back(fn);
            return true;
        }
        --it;
        for (auto e : cells) {
            s.active[e] = 1;
        }
        s.list = saved_list;
        for (std::size_t k = 0; k < saved_list.size(); ++k) {
            s.P[saved_list[k]] = saved_P[k];
            s.Q[saved_list[k]] = saved_Q[k];
        }
        return false;
    }

    bool try_revive(State& s, const std::vector<std::size_t>& cells, double& f,
                    std::vector<double>& history, int& it) const
    {
        State saved = s;
        double eta = 1e-3;
        for (int attempt = 0; attempt < 8 && it < opts_.max_iters; ++attempt) {
            s = saved;
            for (auto e : cells) {
                s.active[e] = 1;
            }
            rebuild(s);
            // move a share eta of each affected column onto the revived cells
            std::vector<int> count(b_.size(), 0);
            for (auto e : cells) {
                ++count[cells_[e].j];
            }
            for (auto e : s.list) {
                const auto j = cells_[e].j;
                if (count[j] > 0) {
                    s.Q[e] *= (1.0 - eta);
                }
            }
            for (auto e : cells) {
                const auto j = cells_[e].j;
                s.Q[e] += eta * b_[j] / count[j];
            }
            a_step(s);
            b_step(s);
            ++it;
            const double fn = objective(s);
            if (fn > f) {
                f = fn;
                history.push_back(fn);
                return true;
            }
            --it;
            eta *= 0.1;
        }
        s = std::move(saved);
        return false;
    }

    const std::vector<Cell>& cells_;
    const std::vector<double>& a_;
    const std::vector<double>& b_;
    WfrOptions opts_;
};

inline std::vector<WfrAscent::Cell> build_cells(const DiscreteMeasure& mu,
                                                const DiscreteMeasure& nu,
                                                double delta, CosineKind kind)
{
    std::vector<WfrAscent::Cell> cells;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = 0; j < nu.size(); ++j) {
            const auto e = cone_cost_entry(mu[i].u, nu[j].u, delta, kind);
            // Truncated cells with omega == 0 can never carry transport.
            if (e.omega > 0.0 || kind == CosineKind::raw) {
                const double pos = std::max(e.omega, 0.0);
                cells.push_back({static_cast<std::uint32_t>(i),
                                 static_cast<std::uint32_t>(j), pos * pos,
                                 e.omega, e.complement});
            }
        }
    }
    return cells;
}

}  // namespace detail

/**
 * @brief Wasserstein-Fisher-Rao distance between two discrete measures
 *
 * Block-coordinate ascent on the semi-coupling objective with several
 * restarts; the restart with the lowest functional wins, ties going to the
 * lower index. Results do not depend on the thread count.
 */
inline WfrSolution solve_wfr(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             double delta, const WfrOptions& opts = {})
{
    detail::require_same_manifold(mu, nu);
    detail::require_delta(delta);
    if (opts.max_iters < 1) {
        throw ValidationError("max_iters must be positive");
    }
    if (!(opts.rel_tol > 0.0)) {
        throw ValidationError("rel_tol must be positive");
    }
    if (opts.restarts < 1) {
        throw ValidationError("restarts must be at least 1");
    }
    const std::vector<double> a = mu.masses();
    const std::vector<double> b = nu.masses();
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    const auto cells = detail::build_cells(mu, nu, delta, opts.cosine);

    WfrSolution sol;
    sol.delta = delta;
    sol.coupling.A = Eigen::MatrixXd::Zero(m + 1, n + 1);
    sol.coupling.B = Eigen::MatrixXd::Zero(m + 1, n + 1);

    // No transport cell: pure creation and destruction.
    bool any_transport = false;
    for (const auto& c : cells) {
        any_transport = any_transport || c.w > 0.0;
    }
    if (!any_transport) {
        double t = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sol.coupling.A(i + 1, 0) = a[i];
            t += a[i];
        }
        for (std::size_t j = 0; j < n; ++j) {
            sol.coupling.B(0, j + 1) = b[j];
            t += b[j];
        }
        sol.distance = 2.0 * delta * std::sqrt(t);
        sol.converged = true;
        sol.restarts_used = 1;
        sol.objective_history = {0.0};
        return sol;
    }

    detail::WfrAscent ascent(cells, a, b, opts);
    const auto restarts = static_cast<std::size_t>(opts.restarts);
    std::vector<detail::WfrAscent::Result> results(restarts);
    unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : opts.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, restarts));
    if (threads <= 1) {
        for (std::size_t r = 0; r < restarts; ++r) {
            results[r] = ascent.run(r);
        }
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t r = t; r < restarts; r += threads) {
                    results[r] = ascent.run(r);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    std::size_t best = 0;
    int total_iters = 0;
    for (std::size_t r = 0; r < restarts; ++r) {
        total_iters += results[r].iterations;
        if (results[r].terms < results[best].terms) {
            best = r;
        }
    }
    auto& res = results[best];
    std::vector<double> rs(m, 0.0);
    std::vector<double> cs(n, 0.0);
    for (std::size_t e = 0; e < cells.size(); ++e) {
        const auto& c = cells[e];
        sol.coupling.A(c.i + 1, c.j + 1) = res.P[e];
        sol.coupling.B(c.i + 1, c.j + 1) = res.Q[e];
        rs[c.i] += res.P[e];
        cs[c.j] += res.Q[e];
    }
    for (std::size_t i = 0; i < m; ++i) {
        sol.coupling.A(i + 1, 0) = std::max(0.0, a[i] - rs[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        sol.coupling.B(0, j + 1) = std::max(0.0, b[j] - cs[j]);
    }
    sol.objective = res.objective;
    sol.iterations = total_iters;
    sol.restarts_used = opts.restarts;
    sol.best_restart = best;
    sol.converged = res.converged;
    sol.gap_bound = res.gap;
    sol.objective_history = std::move(res.history);
    sol.distance = 2.0 * delta * std::sqrt(std::max(0.0, res.terms));
    if (!sol.converged) {
        log(LogLevel::info, "solve_wfr: iteration limit reached");
    }
    return sol;
}

/** @brief Mass of a measure as seen by WFR against the empty measure */
inline double wfr_to_empty(const DiscreteMeasure& mu, double delta)
{
    detail::require_delta(delta);
    return 2.0 * delta * std::sqrt(total_mass(mu));
}

}  // namespace srnf

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
#include "srnf/mesh.hpp"
#include "srnf/srnf.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <vector>

namespace srnf
{

struct Atom {
    Vec3 u;
    double mass;
};

inline bool lex_less(const Vec3& a, const Vec3& b)
{
    if (a.x() != b.x()) {
        return a.x() < b.x();
    }
    if (a.y() != b.y()) {
        return a.y() < b.y();
    }
    return a.z() < b.z();
}

/**
 * @brief Finitely supported measure on S2 or S1
 *
 * Construction validates points and masses but does not merge; see
 * normalize().
 */
class DiscreteMeasure
{
public:
    DiscreteMeasure() = default;

    DiscreteMeasure(Manifold manifold, std::vector<Atom> atoms)
        : manifold_(manifold), atoms_(std::move(atoms))
    {
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            const std::string where = "atoms[" + std::to_string(i) + "]";
            if (!on_manifold(manifold_, atoms_[i].u)) {
                throw ValidationError(where + ".u", std::string("not on ") +
                                                        to_string(manifold_));
            }
            if (!std::isfinite(atoms_[i].mass) || !(atoms_[i].mass > 0.0)) {
                throw ValidationError(where + ".mass",
                                      "must be finite and positive");
            }
        }
    }

    [[nodiscard]] Manifold manifold() const { return manifold_; }
    [[nodiscard]] const std::vector<Atom>& atoms() const { return atoms_; }
    [[nodiscard]] std::size_t size() const { return atoms_.size(); }
    [[nodiscard]] bool empty() const { return atoms_.empty(); }
    const Atom& operator[](std::size_t i) const { return atoms_[i]; }

    [[nodiscard]] std::vector<double> masses() const
    {
        std::vector<double> m;
        m.reserve(atoms_.size());
        for (const auto& a : atoms_) {
            m.push_back(a.mass);
        }
        return m;
    }

    [[nodiscard]] DiscreteMeasure scaled(double s) const
    {
        auto atoms = atoms_;
        for (auto& a : atoms) {
            a.mass *= s;
        }
        return {manifold_, std::move(atoms)};
    }

    /** @brief Apply a rotation to every point; S1 rotations must fix z */
    [[nodiscard]] DiscreteMeasure rotated(const Mat3& R) const
    {
        auto atoms = atoms_;
        for (auto& a : atoms) {
            a.u = (R * a.u).normalized();
            if (manifold_ == Manifold::S1) {
                a.u.z() = 0.0;
            }
        }
        return {manifold_, std::move(atoms)};
    }

private:
    Manifold manifold_{Manifold::S2};
    std::vector<Atom> atoms_;
};

inline double total_mass(const DiscreteMeasure& mu)
{
    double s = 0.0;
    for (const auto& a : mu.atoms()) {
        s += a.mass;
    }
    return s;
}

inline Vec3 first_moment(const DiscreteMeasure& mu)
{
    Vec3 m = Vec3::Zero();
    for (const auto& a : mu.atoms()) {
        m += a.mass * a.u;
    }
    return m;
}

inline constexpr double kDefaultMergeTolerance = 1e-12;

/**
 * @brief Merge atoms closer than merge_tol (radians) and sort them
 *
 * Atoms are sorted lexicographically, then greedily grouped with the first
 * atom of a group as its seed. A group becomes one atom at the normalized
 * mass-weighted mean direction.
 */
inline DiscreteMeasure normalize(const DiscreteMeasure& mu,
                                 double merge_tol = kDefaultMergeTolerance)
{
    if (!(merge_tol >= 0.0)) {
        throw ValidationError("merge tolerance must be nonnegative");
    }
    std::vector<Atom> sorted = mu.atoms();
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Atom& a, const Atom& b) { return lex_less(a.u, b.u); });

    struct Group {
        Vec3 seed;
        Vec3 weighted;
        double mass;
        bool uniform;
    };
    std::vector<Group> groups;
    // Points within angle t differ by at most t in x, so only groups whose
    // seed x is within t of the current x can match.
    const double window = 2.0 * std::sin(0.5 * std::min(merge_tol, kPi)) + 1e-15;
    std::size_t lo = 0;
    for (const auto& a : sorted) {
        while (lo < groups.size() && groups[lo].seed.x() < a.u.x() - window) {
            ++lo;
        }
        std::size_t hit = groups.size();
        for (std::size_t g = lo; g < groups.size(); ++g) {
            if (angle_between(groups[g].seed, a.u) <= merge_tol) {
                hit = g;
                break;
            }
        }
        if (hit == groups.size()) {
            groups.push_back({a.u, a.mass * a.u, a.mass, true});
        } else {
            groups[hit].weighted += a.mass * a.u;
            groups[hit].mass += a.mass;
            groups[hit].uniform = groups[hit].uniform && a.u == groups[hit].seed;
        }
    }

    std::vector<Atom> out;
    out.reserve(groups.size());
    for (const auto& g : groups) {
        // groups of bitwise-equal directions keep them exactly
        const double len = g.weighted.norm();
        Vec3 u = g.uniform || !(len > 0.0) ? g.seed : Vec3(g.weighted / len);
        if (mu.manifold() == Manifold::S1) {
            u.z() = 0.0;
        }
        out.push_back({u, g.mass});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Atom& a, const Atom& b) { return lex_less(a.u, b.u); });
    return {mu.manifold(), std::move(out)};
}

/** @brief Surface area measure of a field: face areas pushed to normals */
inline DiscreteMeasure area_measure(const SrnfField& q,
                                    double merge_tol = kDefaultMergeTolerance)
{
    std::vector<Atom> atoms;
    atoms.reserve(q.size());
    for (const auto& f : q.faces()) {
        if (!f.at_cone_point()) {
            atoms.push_back({f.n, f.area});
        }
    }
    return normalize(DiscreteMeasure(Manifold::S2, std::move(atoms)), merge_tol);
}

inline DiscreteMeasure area_measure(const TriMesh& mesh,
                                    double merge_tol = kDefaultMergeTolerance)
{
    return area_measure(srnf_transform(mesh), merge_tol);
}

/** @brief Measure induced by a cone field: weight^2 * param area at the base */
inline DiscreteMeasure pushforward(const ConeField& q,
                                   double merge_tol = kDefaultMergeTolerance)
{
    std::vector<Atom> atoms;
    for (const auto& f : q.faces) {
        if (!f.value.is_apex()) {
            atoms.push_back({*f.value.base,
                             f.param_area * f.value.radius * f.value.radius});
        }
    }
    return normalize(DiscreteMeasure(q.manifold, std::move(atoms)), merge_tol);
}

inline DiscreteMeasure area_measure(const ConeField& q,
                                    double merge_tol = kDefaultMergeTolerance)
{
    return pushforward(q, merge_tol);
}

/**
 * @brief Piecewise-constant cone field whose induced measure is mu
 *
 * Face j < atom count carries atom j with weight sqrt(a_j / s_j); the
 * remaining faces sit at the apex.
 */
inline ConeField lift(const DiscreteMeasure& mu,
                      const std::vector<double>& param_areas, double delta)
{
    if (!(delta > 0.0)) {
        throw ValidationError("delta must be positive");
    }
    if (param_areas.size() < mu.size()) {
        throw ValidationError("template too small: " +
                              std::to_string(param_areas.size()) +
                              " faces for " + std::to_string(mu.size()) +
                              " atoms");
    }
    ConeField out;
    out.manifold = mu.manifold();
    out.delta = delta;
    out.faces.reserve(param_areas.size());
    for (std::size_t j = 0; j < param_areas.size(); ++j) {
        const double s = param_areas[j];
        if (!std::isfinite(s) || !(s > 0.0)) {
            throw ValidationError("param_areas[" + std::to_string(j) + "]",
                                  "must be positive");
        }
        ConeFace f;
        f.param_area = s;
        if (j < mu.size()) {
            f.value.base = mu[j].u;
            f.value.radius = std::sqrt(mu[j].mass / s);
        }
        out.faces.push_back(f);
    }
    return out;
}

/** @brief Lift onto a mesh template, using its face areas as parameter areas */
inline ConeField lift(const DiscreteMeasure& mu, const TriMesh& tmpl, double delta)
{
    std::vector<double> s;
    s.reserve(tmpl.face_count());
    for (std::size_t k = 0; k < tmpl.face_count(); ++k) {
        s.push_back(face_geometry(tmpl, k).area);
    }
    return lift(mu, s, delta);
}

struct QuantizeOptions {
    std::uint64_t seed = 0;
    int max_iters = 100;
    /** Allowed first-moment drift as a fraction of total mass */
    double moment_guard = 0.05;
    double merge_tol = kDefaultMergeTolerance;
};

/**
 * @brief Reduce a measure to at most max_atoms atoms by weighted spherical
 * k-means
 *
 * Seeding is k-means++ with a seeded generator; each output atom carries the
 * exact summed mass of its cluster.
 */
inline DiscreteMeasure quantize(const DiscreteMeasure& mu, std::size_t max_atoms,
                                const QuantizeOptions& opts = {})
{
    if (max_atoms < 1) {
        throw ValidationError("max_atoms must be at least 1");
    }
    if (mu.size() <= max_atoms) {
        return mu;
    }
    const auto& atoms = mu.atoms();
    const std::size_t n = atoms.size();
    const std::size_t k = max_atoms;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    auto pick = [&](const std::vector<double>& weight) {
        double total = 0.0;
        for (double w : weight) {
            total += w;
        }
        double r = unif(rng) * total;
        for (std::size_t i = 0; i < n; ++i) {
            r -= weight[i];
            if (r < 0.0 && weight[i] > 0.0) {
                return i;
            }
        }
        for (std::size_t i = n; i-- > 0;) {
            if (weight[i] > 0.0) {
                return i;
            }
        }
        return std::size_t{0};
    };

    std::vector<Vec3> centers;
    centers.reserve(k);
    centers.push_back(atoms[pick(mu.masses())].u);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = (atoms[i].u - centers[0]).squaredNorm();
    }
    while (centers.size() < k) {
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = atoms[i].mass * d2[i];
        }
        const std::size_t c = pick(w);
        centers.push_back(atoms[c].u);
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], (atoms[i].u - centers.back()).squaredNorm());
        }
    }

    std::vector<std::size_t> label(n, 0);
    for (int it = 0; it < opts.max_iters; ++it) {
        bool changed = (it == 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_dot = -2.0;
            for (std::size_t c = 0; c < k; ++c) {
                const double d = atoms[i].u.dot(centers[c]);
                if (d > best_dot) {
                    best_dot = d;
                    best = c;
                }
            }
            if (best != label[i]) {
                label[i] = best;
                changed = true;
            }
        }
        std::vector<Vec3> sum(k, Vec3::Zero());
        for (std::size_t i = 0; i < n; ++i) {
            sum[label[i]] += atoms[i].mass * atoms[i].u;
        }
        for (std::size_t c = 0; c < k; ++c) {
            const double len = sum[c].norm();
            if (len > 0.0) {
                centers[c] = sum[c] / len;
            }
        }
        if (!changed) {
            break;
        }
    }

    std::vector<double> mass(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        mass[label[i]] += atoms[i].mass;
    }
    std::vector<Atom> out;
    for (std::size_t c = 0; c < k; ++c) {
        if (mass[c] > 0.0) {
            Vec3 u = centers[c];
            if (mu.manifold() == Manifold::S1) {
                u.z() = 0.0;
                u.normalize();
            }
            out.push_back({u, mass[c]});
        }
    }
    DiscreteMeasure result =
        normalize(DiscreteMeasure(mu.manifold(), std::move(out)), opts.merge_tol);

    const double drift = (first_moment(result) - first_moment(mu)).norm();
    const double m = total_mass(mu);
    if (drift > opts.moment_guard * m) {
        std::ostringstream msg;
        msg << "quantization moved the first moment by " << drift
            << " (guard " << opts.moment_guard * m << ")";
        throw ValidationError(msg.str());
    }
    return result;
}

}  // namespace srnf

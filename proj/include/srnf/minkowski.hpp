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
#include "srnf/hull.hpp"
#include "srnf/measure.hpp"
#include "srnf/mesh.hpp"
#include "srnf/wfr.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <sstream>
#include <vector>

namespace srnf
{

/**
 * @brief Convex polytope given by support numbers over fixed directions
 *
 * facet_areas is aligned with directions; inactive directions have area 0.
 */
struct ConvexPolytope {
    std::vector<Vec3> directions;
    Eigen::VectorXd support;
    HullMesh hull;
    Eigen::VectorXd facet_areas;
    double volume{0.0};

    /** @brief Surface area measure over the active directions */
    [[nodiscard]] DiscreteMeasure area_measure(
        double merge_tol = kDefaultMergeTolerance) const
    {
        std::vector<Atom> atoms;
        for (std::size_t i = 0; i < directions.size(); ++i) {
            if (facet_areas[static_cast<Eigen::Index>(i)] > 0.0) {
                atoms.push_back({directions[i], facet_areas[static_cast<Eigen::Index>(i)]});
            }
        }
        return normalize(DiscreteMeasure(Manifold::S2, std::move(atoms)), merge_tol);
    }

    /** @brief Area-weighted centroid of the facet centroids */
    [[nodiscard]] Vec3 surface_centroid() const
    {
        Vec3 c = Vec3::Zero();
        double total = 0.0;
        for (std::size_t f = 0; f < hull.facets.size(); ++f) {
            std::vector<Vec3> poly;
            for (auto v : hull.facets[f]) {
                poly.push_back(hull.vertices[v]);
            }
            const auto [area, centroid] =
                polygon_area_centroid(poly, hull.facet_normals[f]);
            c += area * centroid;
            total += area;
        }
        return total > 0.0 ? Vec3(c / total) : c;
    }
};

namespace detail
{

/**
 * Polytope {x : u_i . x <= h_i} read off the hull of the dual points u_i/h_i.
 * Each dual facet region with plane n . y = c is the primal vertex n / c;
 * the facets around dual vertex i form primal facet i.
 */
struct DualPolytope {
    HullTopology topo;
    std::vector<Vec3> vertex;             // primal vertex per dual region
    std::vector<std::vector<std::size_t>> fan;  // dual triangles around i, in order
    std::vector<std::vector<std::size_t>> loop;  // distinct regions around i
    Eigen::VectorXd area;
    std::vector<Vec3> centroid;
};

inline DualPolytope dualize(const std::vector<Vec3>& u, const Eigen::VectorXd& h)
{
    const std::size_t n = u.size();
    std::vector<Vec3> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double hi = h[static_cast<Eigen::Index>(i)];
        if (!std::isfinite(hi) || !(hi > 0.0)) {
            throw ValidationError("support numbers must be positive");
        }
        y[i] = u[i] / hi;
    }
    DualPolytope d;
    d.topo = hull_topology(y);
    const auto& topo = d.topo;
    const std::size_t nr = topo.region_normals.size();
    d.vertex.resize(nr);
    for (std::size_t r = 0; r < nr; ++r) {
        const double c = topo.region_offsets[r];
        if (!(c > 1e-12 * topo.scale)) {
            throw GeometryError(
                "polytope is unbounded: directions lie in a closed halfspace");
        }
        d.vertex[r] = topo.region_normals[r] / c;
    }

    d.fan.assign(n, {});
    d.loop.assign(n, {});
    d.area = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    d.centroid.assign(n, Vec3::Zero());
    std::vector<std::size_t> first(n, std::numeric_limits<std::size_t>::max());
    for (std::size_t t = 0; t < topo.triangles.size(); ++t) {
        for (auto v : topo.triangles[t]) {
            if (first[v] == std::numeric_limits<std::size_t>::max()) {
                first[v] = t;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (first[i] == std::numeric_limits<std::size_t>::max()) {
            continue;
        }
        std::size_t t = first[i];
        do {
            d.fan[i].push_back(t);
            const auto& tri = topo.triangles[t];
            const int k = tri[0] == i ? 0 : (tri[1] == i ? 1 : 2);
            t = topo.neighbors[t][k];
            if (d.fan[i].size() > topo.triangles.size()) {
                throw GeometryError("dual hull fan is not closed");
            }
        } while (t != first[i]);
        for (auto tt : d.fan[i]) {
            const std::size_t r = topo.region[tt];
            if (d.loop[i].empty() || d.loop[i].back() != r) {
                d.loop[i].push_back(r);
            }
        }
        while (d.loop[i].size() > 1 && d.loop[i].front() == d.loop[i].back()) {
            d.loop[i].pop_back();
        }
        if (d.loop[i].size() < 3) {
            d.loop[i].clear();
            continue;
        }
        std::vector<Vec3> poly;
        for (auto r : d.loop[i]) {
            poly.push_back(d.vertex[r]);
        }
        auto [a, c] = polygon_area_centroid(poly, u[i]);
        if (a < 0.0) {
            std::reverse(d.loop[i].begin(), d.loop[i].end());
            a = -a;
        }
        d.area[static_cast<Eigen::Index>(i)] = a;
        d.centroid[i] = c;
    }
    return d;
}

/** Hessian of the volume in the support numbers (sparse, symmetric) */
inline Eigen::SparseMatrix<double> volume_hessian(const std::vector<Vec3>& u,
                                                  const DualPolytope& d)
{
    const std::size_t n = u.size();
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> diag(n, 0.0);
    const auto& topo = d.topo;
    for (std::size_t i = 0; i < n; ++i) {
        for (auto t : d.fan[i]) {
            const auto& tri = topo.triangles[t];
            const int k = tri[0] == i ? 0 : (tri[1] == i ? 1 : 2);
            const std::size_t j = tri[(k + 1) % 3];
            const std::size_t g = topo.neighbors[t][k];
            // the neighbour across edge (i, j) is the fan successor
            const std::size_t rt = topo.region[t];
            const std::size_t rg = topo.region[g];
            if (rt == rg) {
                continue;
            }
            const double len = (d.vertex[rt] - d.vertex[rg]).norm();
            const double sin_t = u[i].cross(u[j]).norm();
            const double cos_t = u[i].dot(u[j]);
            trip.emplace_back(i, j, len / sin_t);
            diag[i] -= len * cos_t / sin_t;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        trip.emplace_back(i, i, diag[i]);
    }
    Eigen::SparseMatrix<double> H(static_cast<Eigen::Index>(n),
                                  static_cast<Eigen::Index>(n));
    H.setFromTriplets(trip.begin(), trip.end());
    return H;
}

inline HullMesh dual_hull_mesh(const std::vector<Vec3>& u, const DualPolytope& d,
                               double volume)
{
    HullMesh mesh;
    const std::size_t nr = d.vertex.size();
    std::vector<std::size_t> index(nr, std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (d.loop[i].empty()) {
            continue;
        }
        std::vector<std::size_t> facet;
        for (auto r : d.loop[i]) {
            if (index[r] == std::numeric_limits<std::size_t>::max()) {
                index[r] = mesh.vertices.size();
                mesh.vertices.push_back(d.vertex[r]);
            }
            facet.push_back(index[r]);
        }
        mesh.facets.push_back(std::move(facet));
        mesh.facet_normals.push_back(u[i]);
        mesh.facet_areas.push_back(d.area[static_cast<Eigen::Index>(i)]);
    }
    mesh.volume = volume;
    return mesh;
}

inline double fan_volume(const HullMesh& mesh)
{
    Vec3 c = Vec3::Zero();
    for (const auto& v : mesh.vertices) {
        c += v;
    }
    c /= static_cast<double>(std::max<std::size_t>(1, mesh.vertices.size()));
    double vol = 0.0;
    for (const auto& t : mesh.triangles()) {
        vol += (mesh.vertices[t[0]] - c)
                   .dot((mesh.vertices[t[1]] - c).cross(mesh.vertices[t[2]] - c));
    }
    return vol / 6.0;
}

}  // namespace detail

/**
 * @brief Polytope {x : u_i . x <= h_i} from directions and support numbers
 */
inline ConvexPolytope polytope_from_support(const std::vector<Vec3>& directions,
                                            const Eigen::VectorXd& h)
{
    if (static_cast<Eigen::Index>(directions.size()) != h.size()) {
        throw ValidationError("directions and support numbers differ in length");
    }
    for (std::size_t i = 0; i < directions.size(); ++i) {
        if (!on_manifold(Manifold::S2, directions[i])) {
            throw ValidationError("directions[" + std::to_string(i) + "]",
                                  "must be a unit vector");
        }
    }
    const auto d = detail::dualize(directions, h);
    ConvexPolytope p;
    p.directions = directions;
    p.support = h;
    p.facet_areas = d.area;
    p.hull = detail::dual_hull_mesh(directions, d, 0.0);
    p.volume = detail::fan_volume(p.hull);
    p.hull.volume = p.volume;
    return p;
}

/** @brief Gradient and Hessian of the volume in the support numbers */
struct VolumeDerivatives {
    double volume{0.0};
    Eigen::VectorXd gradient;  ///< facet areas
    Eigen::SparseMatrix<double> hessian;
};

inline VolumeDerivatives volume_derivatives(const std::vector<Vec3>& directions,
                                            const Eigen::VectorXd& h)
{
    const auto d = detail::dualize(directions, h);
    VolumeDerivatives out;
    out.gradient = d.area;
    out.volume = h.dot(d.area) / 3.0;
    out.hessian = detail::volume_hessian(directions, d);
    return out;
}

struct MinkowskiOptions {
    int max_iters = 500;
    /** Required max relative facet-area error */
    double area_tol = 1e-6;
    /** Allowed |first moment| as a fraction of total mass */
    double moment_tol = 1e-8;
    /** Relative singular-value threshold for the great-circle check */
    double spread_tol = 1e-8;
};

struct MinkowskiResult {
    ConvexPolytope polytope;
    int iterations{0};
    double residual{0.0};
};

namespace detail
{

inline double area_residual(const Eigen::VectorXd& F, const Eigen::VectorXd& a,
                            double* lambda_out = nullptr)
{
    const double lambda = F.dot(a) / a.dot(a);
    if (lambda_out != nullptr) {
        *lambda_out = lambda;
    }
    if (!(lambda > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    double r = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        r = std::max(r, std::abs(F[i] / lambda - a[i]) / a[i]);
    }
    return r;
}

// three well-spread, heavy directions used to fix the translation
inline std::array<std::size_t, 3> pick_pins(const std::vector<Vec3>& u,
                                            const Eigen::VectorXd& a)
{
    const std::size_t n = u.size();
    std::size_t p0 = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (a[static_cast<Eigen::Index>(i)] > a[static_cast<Eigen::Index>(p0)]) {
            p0 = i;
        }
    }
    std::size_t p1 = p0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = a[static_cast<Eigen::Index>(i)] * u[i].cross(u[p0]).norm();
        if (i != p0 && s > best) {
            best = s;
            p1 = i;
        }
    }
    std::size_t p2 = p0;
    best = -1.0;
    const Vec3 nrm = u[p0].cross(u[p1]);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = a[static_cast<Eigen::Index>(i)] * std::abs(nrm.dot(u[i]));
        if (i != p0 && i != p1 && s > best) {
            best = s;
            p2 = i;
        }
    }
    return {p0, p1, p2};
}

}  // namespace detail

/**
 * @brief Convex polytope whose surface area measure is mu
 *
 * Maximizes the cube root of the volume over support numbers on the plane
 * sum a_i h_i = sum a_i with damped Newton steps; at the optimum the facet
 * areas are proportional to the masses and a final rescale matches them.
 * The result is translated so its surface centroid is the origin.
 */
inline MinkowskiResult solve_minkowski(const DiscreteMeasure& mu,
                                       const MinkowskiOptions& opts = {})
{
    if (mu.manifold() != Manifold::S2) {
        throw ValidationError("Minkowski reconstruction needs a measure on S2");
    }
    const std::size_t n = mu.size();
    if (n < 4) {
        throw GeometryError("measure needs at least 4 atoms to bound a polytope");
    }
    const double mass = total_mass(mu);
    const Vec3 moment = first_moment(mu);
    if (moment.norm() > opts.moment_tol * mass) {
        std::ostringstream s;
        s << "first moment " << moment.norm() << " exceeds " << opts.moment_tol
          << " x total mass";
        throw GeometryError(s.str());
    }
    Mat3 spread = Mat3::Zero();
    for (const auto& x : mu.atoms()) {
        spread += x.mass * x.u * x.u.transpose();
    }
    // eigenvalues of sum a u u^T are the squared singular values of the
    // 3 x n matrix with columns sqrt(a) u
    const double smallest =
        std::sqrt(std::max(0.0, Eigen::SelfAdjointEigenSolver<Mat3>(spread)
                                    .eigenvalues()
                                    .minCoeff()));
    if (smallest <= opts.spread_tol * std::sqrt(mass)) {
        throw GeometryError("measure is concentrated on a great circle");
    }

    std::vector<Vec3> u(n);
    Eigen::VectorXd a(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = mu[i].u;
        a[static_cast<Eigen::Index>(i)] = mu[i].mass;
    }
    const double S = a.sum();
    Eigen::VectorXd h = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));

    const auto pins = detail::pick_pins(u, a);
    std::vector<Eigen::Index> free_idx;
    std::vector<Eigen::Index> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (i != pins[0] && i != pins[1] && i != pins[2]) {
            slot[i] = static_cast<Eigen::Index>(free_idx.size());
            free_idx.push_back(static_cast<Eigen::Index>(i));
        }
    }
    const auto nf = static_cast<Eigen::Index>(free_idx.size());

    struct Eval {
        detail::DualPolytope dual;
        double V;
        double residual;
        bool all_active;
    };
    auto evaluate = [&](const Eigen::VectorXd& hh) {
        Eval e{detail::dualize(u, hh), 0.0, 0.0, true};
        e.V = hh.dot(e.dual.area) / 3.0;
        for (Eigen::Index i = 0; i < e.dual.area.size(); ++i) {
            if (!(e.dual.area[i] > 0.0)) {
                e.all_active = false;
            }
        }
        e.residual = detail::area_residual(e.dual.area, a);
        return e;
    };
    auto recenter = [&](Eigen::VectorXd& hh, const detail::DualPolytope& d) {
        Vec3 c = Vec3::Zero();
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ar = d.area[static_cast<Eigen::Index>(i)];
            c += ar * d.centroid[i];
            total += ar;
        }
        c /= total;
        for (std::size_t i = 0; i < n; ++i) {
            hh[static_cast<Eigen::Index>(i)] -= u[i].dot(c);
        }
        hh *= S / a.dot(hh);
    };

    Eval cur = evaluate(h);
    if (!cur.all_active) {
        throw GeometryError("directions are too close to separate at unit support");
    }
    const double inner_tol = std::min(1e-11, 1e-3 * opts.area_tol);
    int it = 0;
    for (; it < opts.max_iters && cur.residual > inner_tol; ++it) {
        const Eigen::VectorXd& F = cur.dual.area;
        const auto H = detail::volume_hessian(u, cur.dual);
        // restrict to the free rows and columns
        std::vector<Eigen::Triplet<double>> trip;
        for (int k = 0; k < H.outerSize(); ++k) {
            for (Eigen::SparseMatrix<double>::InnerIterator itr(H, k); itr; ++itr) {
                const auto r = slot[static_cast<std::size_t>(itr.row())];
                const auto c = slot[static_cast<std::size_t>(itr.col())];
                if (r >= 0 && c >= 0) {
                    trip.emplace_back(r, c, itr.value());
                }
            }
        }
        Eigen::SparseMatrix<double> Hf(nf, nf);
        Hf.setFromTriplets(trip.begin(), trip.end());
        Eigen::VectorXd Ff(nf);
        Eigen::VectorXd af(nf);
        for (Eigen::Index k = 0; k < nf; ++k) {
            Ff[k] = F[free_idx[static_cast<std::size_t>(k)]];
            af[k] = a[free_idx[static_cast<std::size_t>(k)]];
        }
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(Hf);
        Eigen::VectorXd dh = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        bool newton_ok = lu.info() == Eigen::Success;
        if (newton_ok) {
            const Eigen::VectorXd p = lu.solve(Ff);
            const Eigen::VectorXd q = lu.solve(af);
            const double aq = af.dot(q);
            newton_ok = lu.info() == Eigen::Success && p.allFinite() &&
                        q.allFinite() && aq != 0.0;
            if (newton_ok) {
                const double ap = af.dot(p);
                const double beta = Ff.dot(p) - ap * Ff.dot(q) / aq;
                const double c1 = 2.0 / (3.0 * cur.V);
                const double alpha = -1.0 / (1.0 - c1 * beta);
                const double nu = alpha * ap / aq;
                const Eigen::VectorXd step = alpha * p - nu * q;
                for (Eigen::Index k = 0; k < nf; ++k) {
                    dh[free_idx[static_cast<std::size_t>(k)]] = step[k];
                }
                newton_ok = F.dot(dh) > 0.0;
            }
        }
        if (!newton_ok) {
            // projected gradient fallback
            dh = F - (F.dot(a) / a.dot(a)) * a;
            dh *= 0.1 * h.norm() / std::max(dh.norm(), 1e-300);
        }

        const double g0 = std::cbrt(cur.V);
        const double slope = F.dot(dh) / (3.0 * std::pow(cur.V, 2.0 / 3.0));
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
            Eigen::VectorXd trial = h + t * dh;
            if (trial.minCoeff() <= 0.0) {
                continue;
            }
            Eval e;
            try {
                e = evaluate(trial);
            } catch (const GeometryError&) {
                continue;
            }
            if (!e.all_active) {
                continue;
            }
            const double g1 = std::cbrt(e.V);
            // near the optimum the volume test is lost in rounding, so the
            // residual must also shrink
            const bool armijo = g1 >= g0 + 1e-4 * t * slope &&
                                (cur.residual > 1e-2 || e.residual < cur.residual);
            const bool flat = e.residual < cur.residual && g1 >= g0 * (1.0 - 1e-13);
            if (armijo || flat) {
                h = std::move(trial);
                recenter(h, e.dual);
                cur = evaluate(h);
                accepted = true;
                break;
            }
        }
        log(LogLevel::debug, "minkowski iteration " + std::to_string(it) +
                                 " residual " + std::to_string(cur.residual));
        if (!accepted) {
            break;
        }
    }

    double lambda = 0.0;
    const double residual = detail::area_residual(cur.dual.area, a, &lambda);
    if (!(residual <= opts.area_tol)) {
        std::ostringstream s;
        s << "Minkowski solver stopped after " << it
          << " iterations with facet-area residual " << residual;
        throw ConvergenceError(s.str(), residual);
    }
    h /= std::sqrt(lambda);
    MinkowskiResult out;
    out.polytope = polytope_from_support(u, h);
    // exact translation to the surface centroid
    const Vec3 c = out.polytope.surface_centroid();
    for (std::size_t i = 0; i < n; ++i) {
        h[static_cast<Eigen::Index>(i)] -= u[i].dot(c);
    }
    out.polytope = polytope_from_support(u, h);
    out.iterations = it;
    out.residual = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.residual =
            std::max(out.residual, std::abs(out.polytope.facet_areas[i] - a[i]) / a[i]);
    }
    if (!(out.residual <= opts.area_tol)) {
        std::ostringstream s;
        s << "reconstructed facet areas deviate by " << out.residual;
        throw ConvergenceError(s.str(), out.residual);
    }
    return out;
}

/** @brief Symmetric Hausdorff distance between two finite point sets */
inline double hausdorff_distance(const std::vector<Vec3>& x, const std::vector<Vec3>& y)
{
    auto directed = [](const std::vector<Vec3>& p, const std::vector<Vec3>& q) {
        double worst = 0.0;
        for (const auto& a : p) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& b : q) {
                best = std::min(best, (a - b).squaredNorm());
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    if (x.empty() || y.empty()) {
        return std::numeric_limits<double>::infinity();
    }
    return std::sqrt(std::max(directed(x, y), directed(y, x)));
}

/** @brief Area-weighted centroid of a mesh's face centroids */
inline Vec3 surface_centroid(const TriMesh& mesh)
{
    Vec3 c = Vec3::Zero();
    double total = 0.0;
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        const auto& t = mesh.faces()[f];
        const double ar = face_geometry(mesh, f).area;
        c += ar * (mesh.vertices()[t[0]] + mesh.vertices()[t[1]] +
                   mesh.vertices()[t[2]]) /
             3.0;
        total += ar;
    }
    return total > 0.0 ? Vec3(c / total) : c;
}

struct ConvexifyReport {
    double wfr_residual{0.0};
    double hausdorff{0.0};
    double facet_area_max_rel_err{0.0};
    int iterations{0};
    double delta{0.5};
    double total_mass{0.0};
    double diameter{0.0};
    std::size_t atoms{0};
};

struct ConvexifyResult {
    ConvexPolytope polytope;
    ConvexifyReport report;
};

struct ConvexifyOptions {
    double delta = 0.5;
    double merge_tol = kDefaultMergeTolerance;
    MinkowskiOptions minkowski;
    WfrOptions wfr;
};

/**
 * @brief Convex body sharing the surface area measure of a closed mesh
 *
 * The report holds the WFR distance between both measures and the Hausdorff
 * distance between the vertex sets, each centered at its surface centroid.
 */
inline ConvexifyResult convexify(const TriMesh& mesh, const ConvexifyOptions& opts = {})
{
    const auto closed = closedness_report(mesh);
    if (!closed.closed) {
        throw GeometryError("convexify needs a closed mesh (" +
                            std::to_string(closed.issues.size()) +
                            " bad edges)");
    }
    const DiscreteMeasure mu = area_measure(mesh, opts.merge_tol);
    auto mk = solve_minkowski(mu, opts.minkowski);
    ConvexifyResult out;
    out.report.iterations = mk.iterations;
    out.report.facet_area_max_rel_err = mk.residual;
    out.report.delta = opts.delta;
    out.report.total_mass = total_mass(mu);
    out.report.atoms = mu.size();

    // polytope measure on the exact input directions
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < mk.polytope.directions.size(); ++i) {
        const double f = mk.polytope.facet_areas[static_cast<Eigen::Index>(i)];
        if (f > 0.0) {
            atoms.push_back({mk.polytope.directions[i], f});
        }
    }
    const DiscreteMeasure nu(Manifold::S2, std::move(atoms));
    out.report.wfr_residual = solve_wfr(mu, nu, opts.delta, opts.wfr).distance;

    const Vec3 cm = surface_centroid(mesh);
    const Vec3 cp = mk.polytope.surface_centroid();
    std::vector<Vec3> xs;
    std::vector<Vec3> ys;
    for (const auto& v : mesh.vertices()) {
        xs.push_back(v - cm);
    }
    for (const auto& v : mk.polytope.hull.vertices) {
        ys.push_back(v - cp);
    }
    out.report.hausdorff = hausdorff_distance(xs, ys);
    double diam = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            diam = std::max(diam, (xs[i] - xs[j]).squaredNorm());
        }
    }
    out.report.diameter = std::sqrt(diam);
    out.polytope = std::move(mk.polytope);
    return out;
}

}  // namespace srnf

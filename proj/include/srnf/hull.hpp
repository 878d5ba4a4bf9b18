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
#include "srnf/mesh.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

namespace srnf
{

struct HullOptions {
    /** Adjacent triangles whose normals differ by at most this angle are
     * merged into one facet */
    double merge_angle = 1e-9;
    /** Relative (to the bounding-box diagonal) rank tolerance */
    double rank_tolerance = 1e-10;
    /** Relative visibility tolerance for the incremental construction */
    double plane_tolerance = 1e-12;
};

/**
 * @brief Convex hull as planar polygonal facets
 *
 * Facets list vertex indices counterclockwise seen from outside.
 */
struct HullMesh {
    std::vector<Vec3> vertices;
    std::vector<std::vector<std::size_t>> facets;
    std::vector<Vec3> facet_normals;
    std::vector<double> facet_areas;
    double volume{0.0};

    [[nodiscard]] double diameter() const
    {
        double d = 0.0;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            for (std::size_t j = i + 1; j < vertices.size(); ++j) {
                d = std::max(d, (vertices[i] - vertices[j]).squaredNorm());
            }
        }
        return std::sqrt(d);
    }

    /** @brief Facets fan-triangulated (v0, vi, vi+1) */
    [[nodiscard]] std::vector<Face> triangles() const
    {
        std::vector<Face> out;
        for (const auto& f : facets) {
            for (std::size_t i = 1; i + 1 < f.size(); ++i) {
                out.push_back({f[0], f[i], f[i + 1]});
            }
        }
        return out;
    }

    [[nodiscard]] TriMesh to_trimesh() const
    {
        return TriMesh(vertices, triangles());
    }
};

/**
 * @brief Triangle-level hull with adjacency and merged-facet regions
 *
 * Indices in `triangles` and `region_loops` refer to the input points.
 */
struct HullTopology {
    std::vector<std::array<std::size_t, 3>> triangles;
    // neighbors[t][k] is the triangle across edge (v[k], v[k+1])
    std::vector<std::array<std::size_t, 3>> neighbors;
    std::vector<std::size_t> region;
    std::vector<Vec3> region_normals;
    std::vector<double> region_offsets;
    std::vector<std::vector<std::size_t>> region_loops;
    double scale{0.0};
};

namespace detail
{

class Quickhull
{
public:
    Quickhull(std::span<const Vec3> pts, const HullOptions& opts)
        : p_(pts), opts_(opts)
    {
    }

    HullTopology run()
    {
        if (p_.size() < 4) {
            throw GeometryError(
                "convex hull needs at least 4 affinely independent points");
        }
        Vec3 lo = p_[0];
        Vec3 hi = p_[0];
        for (const auto& q : p_) {
            if (!q.allFinite()) {
                throw ValidationError("convex hull input is not finite");
            }
            lo = lo.cwiseMin(q);
            hi = hi.cwiseMax(q);
        }
        scale_ = (hi - lo).norm();
        if (!(scale_ > 0.0)) {
            throw GeometryError("convex hull input is dimensionally degenerate");
        }
        eps_ = opts_.plane_tolerance * scale_;
        initial_simplex();
        expand();
        return collect();
    }

private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    struct Tri {
        std::array<std::size_t, 3> v;
        std::array<std::size_t, 3> nb;
        Vec3 n;
        double d;
        bool alive;
        std::vector<std::size_t> outside;
    };

    [[nodiscard]] double dist(const Tri& t, std::size_t i) const
    {
        return t.n.dot(p_[i]) - t.d;
    }

    std::size_t make_tri(std::size_t a, std::size_t b, std::size_t c)
    {
        Tri t;
        t.v = {a, b, c};
        t.nb = {kNone, kNone, kNone};
        Vec3 n = (p_[b] - p_[a]).cross(p_[c] - p_[a]);
        const double len = n.norm();
        t.n = len > 0.0 ? Vec3(n / len) : Vec3::Zero();
        // offset from the vertex mean reduces cancellation
        t.d = t.n.dot((p_[a] + p_[b] + p_[c]) / 3.0);
        t.alive = true;
        tris_.push_back(std::move(t));
        return tris_.size() - 1;
    }

    void initial_simplex()
    {
        const std::size_t n = p_.size();
        // extreme pair along the axis of largest extent
        std::size_t i0 = 0;
        std::size_t i1 = 0;
        double best_extent = -1.0;
        for (int ax = 0; ax < 3; ++ax) {
            std::size_t lo = 0;
            std::size_t hi = 0;
            for (std::size_t i = 1; i < n; ++i) {
                if (p_[i][ax] < p_[lo][ax]) {
                    lo = i;
                }
                if (p_[i][ax] > p_[hi][ax]) {
                    hi = i;
                }
            }
            const double ext = p_[hi][ax] - p_[lo][ax];
            if (ext > best_extent) {
                best_extent = ext;
                i0 = lo;
                i1 = hi;
            }
        }
        const double rank_tol = opts_.rank_tolerance * scale_;
        if ((p_[i1] - p_[i0]).norm() <= rank_tol) {
            throw GeometryError("convex hull input is dimensionally degenerate");
        }
        const Vec3 dir = (p_[i1] - p_[i0]).normalized();
        std::size_t i2 = kNone;
        double best = rank_tol;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = (p_[i] - p_[i0]).cross(dir).norm();
            if (d > best) {
                best = d;
                i2 = i;
            }
        }
        if (i2 == kNone) {
            throw GeometryError(
                "convex hull input is dimensionally degenerate (collinear)");
        }
        const Vec3 pn = (p_[i1] - p_[i0]).cross(p_[i2] - p_[i0]).normalized();
        std::size_t i3 = kNone;
        best = rank_tol;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = std::abs(pn.dot(p_[i] - p_[i0]));
            if (d > best) {
                best = d;
                i3 = i;
            }
        }
        if (i3 == kNone) {
            throw GeometryError(
                "convex hull input is dimensionally degenerate (coplanar)");
        }
        if (pn.dot(p_[i3] - p_[i0]) > 0.0) {
            std::swap(i1, i2);
        }
        // (i0, i1, i2) now faces away from i3
        const std::size_t a = i0;
        const std::size_t b = i1;
        const std::size_t c = i2;
        const std::size_t d = i3;
        std::array<std::size_t, 4> ids = {make_tri(a, b, c), make_tri(a, d, b),
                                          make_tri(b, d, c), make_tri(c, d, a)};
        link(ids);
        std::vector<bool> used(n, false);
        used[a] = used[b] = used[c] = used[d] = true;
        std::vector<std::size_t> all;
        all.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!used[i]) {
                all.push_back(i);
            }
        }
        assign(all, std::vector<std::size_t>(ids.begin(), ids.end()));
    }

    template <class Ids>
    void link(const Ids& ids)
    {
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge;
        for (auto t : ids) {
            for (int k = 0; k < 3; ++k) {
                edge[{tris_[t].v[k], tris_[t].v[(k + 1) % 3]}] = t;
            }
        }
        for (auto t : ids) {
            for (int k = 0; k < 3; ++k) {
                auto it = edge.find({tris_[t].v[(k + 1) % 3], tris_[t].v[k]});
                tris_[t].nb[k] = it->second;
            }
        }
    }

    void assign(const std::vector<std::size_t>& pts,
                const std::vector<std::size_t>& faces)
    {
        for (auto i : pts) {
            std::size_t best_face = kNone;
            double best = eps_;
            for (auto f : faces) {
                const double dd = dist(tris_[f], i);
                if (dd > best) {
                    best = dd;
                    best_face = f;
                }
            }
            if (best_face != kNone) {
                tris_[best_face].outside.push_back(i);
            }
        }
    }

    void expand()
    {
        std::vector<std::size_t> visible;
        std::vector<std::size_t> stamp;
        std::vector<char> is_visible;
        std::size_t cursor = 0;
        std::size_t iteration = 0;
        while (true) {
            // next face with pending outside points
            std::size_t f = kNone;
            for (; cursor < tris_.size(); ++cursor) {
                if (tris_[cursor].alive && !tris_[cursor].outside.empty()) {
                    f = cursor;
                    break;
                }
            }
            if (f == kNone) {
                // faces before cursor may have been given points again
                bool found = false;
                for (std::size_t t = 0; t < tris_.size(); ++t) {
                    if (tris_[t].alive && !tris_[t].outside.empty()) {
                        cursor = t;
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    return;
                }
                continue;
            }
            ++iteration;
            const auto& out = tris_[f].outside;
            std::size_t apex = out.front();
            double far = dist(tris_[f], apex);
            for (auto i : out) {
                const double dd = dist(tris_[f], i);
                if (dd > far) {
                    far = dd;
                    apex = i;
                }
            }

            stamp.resize(tris_.size(), 0);
            is_visible.resize(tris_.size(), 0);
            visible.clear();
            visible.push_back(f);
            stamp[f] = iteration;
            is_visible[f] = 1;
            struct HorizonEdge {
                std::size_t a, b, outer;
            };
            std::vector<HorizonEdge> horizon;
            for (std::size_t q = 0; q < visible.size(); ++q) {
                const std::size_t t = visible[q];
                for (int k = 0; k < 3; ++k) {
                    const std::size_t g = tris_[t].nb[k];
                    if (stamp[g] != iteration) {
                        stamp[g] = iteration;
                        is_visible[g] = dist(tris_[g], apex) > eps_ ? 1 : 0;
                        if (is_visible[g]) {
                            visible.push_back(g);
                        }
                    }
                }
            }
            for (auto t : visible) {
                for (int k = 0; k < 3; ++k) {
                    const std::size_t g = tris_[t].nb[k];
                    if (!is_visible[g]) {
                        horizon.push_back(
                            {tris_[t].v[k], tris_[t].v[(k + 1) % 3], g});
                    }
                }
            }

            std::unordered_map<std::size_t, std::size_t> by_start;
            std::unordered_map<std::size_t, std::size_t> by_end;
            std::vector<std::size_t> created;
            created.reserve(horizon.size());
            for (const auto& e : horizon) {
                const std::size_t nt = make_tri(e.a, e.b, apex);
                created.push_back(nt);
                if (!by_start.emplace(e.a, nt).second ||
                    !by_end.emplace(e.b, nt).second) {
                    throw GeometryError(
                        "convex hull construction failed (non-simple horizon)");
                }
                tris_[nt].nb[0] = e.outer;
                auto& onb = tris_[e.outer].nb;
                for (int k = 0; k < 3; ++k) {
                    if (tris_[e.outer].v[k] == e.b &&
                        tris_[e.outer].v[(k + 1) % 3] == e.a) {
                        onb[k] = nt;
                    }
                }
            }
            for (auto nt : created) {
                const std::size_t a = tris_[nt].v[0];
                const std::size_t b = tris_[nt].v[1];
                auto s = by_start.find(b);
                auto en = by_end.find(a);
                if (s == by_start.end() || en == by_end.end()) {
                    throw GeometryError(
                        "convex hull construction failed (open horizon)");
                }
                tris_[nt].nb[1] = s->second;
                tris_[nt].nb[2] = en->second;
            }

            std::vector<std::size_t> orphans;
            for (auto t : visible) {
                tris_[t].alive = false;
                for (auto i : tris_[t].outside) {
                    if (i != apex) {
                        orphans.push_back(i);
                    }
                }
                tris_[t].outside.clear();
                tris_[t].outside.shrink_to_fit();
            }
            assign(orphans, created);
            stamp.resize(tris_.size(), 0);
            is_visible.resize(tris_.size(), 0);
            cursor = std::min(cursor, created.front());
        }
    }

    HullTopology collect()
    {
        HullTopology topo;
        topo.scale = scale_;
        std::vector<std::size_t> remap(tris_.size(), kNone);
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (tris_[t].alive) {
                remap[t] = topo.triangles.size();
                topo.triangles.push_back(tris_[t].v);
            }
        }
        topo.neighbors.resize(topo.triangles.size());
        std::vector<Vec3> normals(topo.triangles.size());
        std::vector<double> areas(topo.triangles.size());
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (remap[t] == kNone) {
                continue;
            }
            for (int k = 0; k < 3; ++k) {
                topo.neighbors[remap[t]][k] = remap[tris_[t].nb[k]];
            }
            const auto& v = tris_[t].v;
            const Vec3 c = (p_[v[1]] - p_[v[0]]).cross(p_[v[2]] - p_[v[0]]);
            areas[remap[t]] = 0.5 * c.norm();
            normals[remap[t]] = tris_[t].n;
        }

        // region growing against the seed normal
        const std::size_t nt = topo.triangles.size();
        topo.region.assign(nt, kNone);
        std::vector<std::size_t> queue;
        for (std::size_t s = 0; s < nt; ++s) {
            if (topo.region[s] != kNone) {
                continue;
            }
            const std::size_t r = topo.region_normals.size();
            topo.region[s] = r;
            queue.assign(1, s);
            Vec3 acc = Vec3::Zero();
            for (std::size_t q = 0; q < queue.size(); ++q) {
                const std::size_t t = queue[q];
                acc += areas[t] * normals[t];
                for (int k = 0; k < 3; ++k) {
                    const std::size_t g = topo.neighbors[t][k];
                    if (topo.region[g] == kNone &&
                        angle_between(normals[g], normals[s]) <=
                            opts_.merge_angle) {
                        topo.region[g] = r;
                        queue.push_back(g);
                    }
                }
            }
            const double len = acc.norm();
            const Vec3 n = len > 0.0 ? Vec3(acc / len) : normals[s];
            topo.region_normals.push_back(n);
            topo.region_offsets.push_back(0.0);
            topo.region_loops.emplace_back();
        }

        // boundary loops and mean offsets
        const std::size_t nr = topo.region_normals.size();
        std::vector<std::unordered_map<std::size_t, std::size_t>> next(nr);
        for (std::size_t t = 0; t < nt; ++t) {
            const std::size_t r = topo.region[t];
            for (int k = 0; k < 3; ++k) {
                if (topo.region[topo.neighbors[t][k]] != r) {
                    const std::size_t a = topo.triangles[t][k];
                    const std::size_t b = topo.triangles[t][(k + 1) % 3];
                    if (!next[r].emplace(a, b).second) {
                        throw GeometryError(
                            "convex hull facet merge produced a pinched facet");
                    }
                }
            }
        }
        for (std::size_t r = 0; r < nr; ++r) {
            auto& loop = topo.region_loops[r];
            // deterministic start: smallest point index on the boundary
            std::size_t start = kNone;
            for (const auto& [a, b] : next[r]) {
                start = std::min(start, a);
            }
            std::size_t cur = start;
            do {
                loop.push_back(cur);
                auto it = next[r].find(cur);
                if (it == next[r].end() || loop.size() > next[r].size()) {
                    throw GeometryError(
                        "convex hull facet merge produced a broken loop");
                }
                cur = it->second;
            } while (cur != start);
            if (loop.size() != next[r].size()) {
                throw GeometryError(
                    "convex hull facet merge produced a facet with a hole");
            }
            double off = 0.0;
            for (auto v : loop) {
                off += topo.region_normals[r].dot(p_[v]);
            }
            topo.region_offsets[r] = off / static_cast<double>(loop.size());
        }
        return topo;
    }

    std::span<const Vec3> p_;
    HullOptions opts_;
    std::vector<Tri> tris_;
    double scale_{0.0};
    double eps_{0.0};
};

}  // namespace detail

/** @brief Triangulated hull with adjacency and coplanar-merged regions */
inline HullTopology hull_topology(std::span<const Vec3> points,
                                  const HullOptions& opts = {})
{
    return detail::Quickhull(points, opts).run();
}

/** @brief Area and centroid of a planar polygon with outward normal n */
inline std::pair<double, Vec3> polygon_area_centroid(
    const std::vector<Vec3>& poly, const Vec3& n)
{
    double area = 0.0;
    Vec3 c = Vec3::Zero();
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        const double a =
            0.5 * n.dot((poly[i] - poly[0]).cross(poly[i + 1] - poly[0]));
        area += a;
        c += a * (poly[0] + poly[i] + poly[i + 1]) / 3.0;
    }
    if (area != 0.0) {
        c /= area;
    } else if (!poly.empty()) {
        for (const auto& p : poly) {
            c += p;
        }
        c /= static_cast<double>(poly.size());
    }
    return {area, c};
}

/**
 * @brief Convex hull of a point set in R^3
 *
 * Coplanar triangles are merged into polygonal facets. Throws GeometryError
 * when the points do not span three dimensions.
 */
inline HullMesh convex_hull(std::span<const Vec3> points,
                            const HullOptions& opts = {})
{
    const HullTopology topo = hull_topology(points, opts);
    HullMesh hull;
    std::vector<std::size_t> used;
    for (const auto& loop : topo.region_loops) {
        used.insert(used.end(), loop.begin(), loop.end());
    }
    for (const auto& t : topo.triangles) {
        used.insert(used.end(), t.begin(), t.end());
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::unordered_map<std::size_t, std::size_t> index;
    for (std::size_t i = 0; i < used.size(); ++i) {
        index[used[i]] = i;
        hull.vertices.push_back(points[used[i]]);
    }
    for (std::size_t r = 0; r < topo.region_loops.size(); ++r) {
        std::vector<std::size_t> facet;
        std::vector<Vec3> poly;
        for (auto v : topo.region_loops[r]) {
            facet.push_back(index.at(v));
            poly.push_back(points[v]);
        }
        const Vec3& n = topo.region_normals[r];
        hull.facets.push_back(std::move(facet));
        hull.facet_normals.push_back(n);
        hull.facet_areas.push_back(polygon_area_centroid(poly, n).first);
    }
    Vec3 center = Vec3::Zero();
    for (const auto& v : hull.vertices) {
        center += v;
    }
    center /= static_cast<double>(hull.vertices.size());
    double vol = 0.0;
    for (const auto& t : topo.triangles) {
        vol += (points[t[0]] - center)
                   .dot((points[t[1]] - center).cross(points[t[2]] - center));
    }
    hull.volume = vol / 6.0;
    return hull;
}

inline HullMesh convex_hull(const std::vector<Vec3>& points,
                            const HullOptions& opts = {})
{
    return convex_hull(std::span<const Vec3>(points.data(), points.size()),
                       opts);
}

inline void write_mesh(std::ostream& out, const HullMesh& hull, MeshFormat format)
{
    write_mesh(out, hull.vertices, hull.triangles(), format);
}

}  // namespace srnf

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

#include <functional>
#include <map>
#include <random>
#include <tuple>
#include <vector>

namespace srnf::shapes
{

/** @brief Axis-aligned cube [0, side]^3, two triangles per face */
inline TriMesh cube(double side = 1.0)
{
    std::vector<Vec3> v;
    for (int i = 0; i < 8; ++i) {
        v.emplace_back(side * (i & 1), side * ((i >> 1) & 1), side * ((i >> 2) & 1));
    }
    const std::vector<Face> f = {
        {0, 2, 1}, {1, 2, 3},  // z = 0
        {4, 5, 6}, {5, 7, 6},  // z = 1
        {0, 1, 4}, {1, 5, 4},  // y = 0
        {2, 6, 3}, {3, 6, 7},  // y = 1
        {0, 4, 2}, {2, 4, 6},  // x = 0
        {1, 3, 5}, {3, 7, 5},  // x = 1
    };
    return TriMesh(std::move(v), f);
}

/** @brief Regular tetrahedron with vertices (1,1,1),(1,-1,-1),(-1,1,-1),(-1,-1,1) */
inline TriMesh tetrahedron()
{
    std::vector<Vec3> v = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    const std::vector<Face> f = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
    return TriMesh(std::move(v), f);
}

inline TriMesh icosahedron()
{
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
                           {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
                           {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : v) {
        p.normalize();
    }
    const std::vector<Face> f = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    return TriMesh(std::move(v), f);
}

/**
 * @brief Geodesic sphere: each icosahedron face split into freq^2
 * triangles, vertices projected to radius r (20 freq^2 faces)
 */
inline TriMesh geodesic_sphere(int freq, double r = 1.0)
{
    if (freq < 1) {
        throw ValidationError("geodesic sphere frequency must be positive");
    }
    const TriMesh ico = icosahedron();
    std::vector<Vec3> verts(ico.vertices().begin(), ico.vertices().end());
    std::map<std::tuple<std::size_t, std::size_t, int>, std::size_t> edge_pts;
    auto edge_point = [&](std::size_t a, std::size_t b, int k) -> std::size_t {
        if (k == 0) {
            return a;
        }
        if (k == freq) {
            return b;
        }
        if (a > b) {
            std::swap(a, b);
            k = freq - k;
        }
        auto key = std::make_tuple(a, b, k);
        auto it = edge_pts.find(key);
        if (it != edge_pts.end()) {
            return it->second;
        }
        const double s = static_cast<double>(k) / freq;
        verts.push_back(((1.0 - s) * verts[a] + s * verts[b]).normalized());
        edge_pts.emplace(key, verts.size() - 1);
        return verts.size() - 1;
    };
    std::vector<Face> faces;
    for (const auto& f : ico.faces()) {
        const std::size_t A = f[0];
        const std::size_t B = f[1];
        const std::size_t C = f[2];
        // grid index (i, j): A + i/freq (B - A) + j/freq (C - A)
        std::vector<std::vector<std::size_t>> id(freq + 1);
        for (int i = 0; i <= freq; ++i) {
            id[i].resize(freq + 1 - i);
            for (int j = 0; i + j <= freq; ++j) {
                if (j == 0) {
                    id[i][j] = edge_point(A, B, i);
                } else if (i == 0) {
                    id[i][j] = edge_point(A, C, j);
                } else if (i + j == freq) {
                    id[i][j] = edge_point(B, C, j);
                } else {
                    const Vec3 p = verts[A] + (verts[B] - verts[A]) * i / freq +
                                   (verts[C] - verts[A]) * j / freq;
                    verts.push_back(p.normalized());
                    id[i][j] = verts.size() - 1;
                }
            }
        }
        for (int i = 0; i < freq; ++i) {
            for (int j = 0; i + j < freq; ++j) {
                faces.push_back({id[i][j], id[i + 1][j], id[i][j + 1]});
                if (i + j + 1 < freq) {
                    faces.push_back({id[i + 1][j], id[i + 1][j + 1], id[i][j + 1]});
                }
            }
        }
    }
    for (auto& p : verts) {
        p *= r;
    }
    return TriMesh(std::move(verts), std::move(faces));
}

/** @brief Loop-style icosphere: 20 * 4^level faces */
inline TriMesh icosphere(int level, double r = 1.0)
{
    return geodesic_sphere(1 << level, r);
}

/**
 * @brief Star-shaped nonconvex sphere: radius 1 + amplitude * bump(u)
 * on a geodesic sphere of the given frequency
 */
inline TriMesh bumpy_sphere(int freq = 10, double amplitude = 0.25)
{
    TriMesh base = geodesic_sphere(freq);
    std::vector<Vec3> v(base.vertices().begin(), base.vertices().end());
    for (auto& p : v) {
        const double bump = std::sin(3.0 * p.x()) * std::sin(3.0 * p.y()) *
                                std::sin(3.0 * p.z()) +
                            0.5 * std::cos(4.0 * p.z());
        p *= 1.0 + amplitude * bump;
    }
    return TriMesh(std::move(v), base.faces());
}

/**
 * @brief Open upper hemisphere of radius r, latitude-longitude mesh with
 * `segments` edges on the boundary circle
 */
inline TriMesh hemisphere(int rings = 8, int segments = 32, double r = 1.0)
{
    if (rings < 1 || segments < 3) {
        throw ValidationError("hemisphere needs rings >= 1 and segments >= 3");
    }
    std::vector<Vec3> v = {{0, 0, r}};
    for (int k = 1; k <= rings; ++k) {
        const double th = 0.5 * kPi * k / rings;
        for (int s = 0; s < segments; ++s) {
            const double ph = 2.0 * kPi * s / segments;
            v.emplace_back(r * std::sin(th) * std::cos(ph),
                           r * std::sin(th) * std::sin(ph), r * std::cos(th));
        }
    }
    auto ring = [&](int k, int s) {
        return static_cast<std::size_t>(1 + (k - 1) * segments + (s % segments));
    };
    std::vector<Face> f;
    for (int s = 0; s < segments; ++s) {
        f.push_back({0, ring(1, s), ring(1, s + 1)});
    }
    for (int k = 1; k < rings; ++k) {
        for (int s = 0; s < segments; ++s) {
            f.push_back({ring(k, s), ring(k + 1, s), ring(k + 1, s + 1)});
            f.push_back({ring(k, s), ring(k + 1, s + 1), ring(k, s + 1)});
        }
    }
    return TriMesh(std::move(v), std::move(f));
}

/** @brief Flat disk in the xy-plane, normals +z, fan of `segments` triangles */
inline TriMesh disk(int segments = 64, double r = 1.0)
{
    std::vector<Vec3> v = {{0, 0, 0}};
    for (int s = 0; s < segments; ++s) {
        const double ph = 2.0 * kPi * s / segments;
        v.emplace_back(r * std::cos(ph), r * std::sin(ph), 0.0);
    }
    std::vector<Face> f;
    for (int s = 0; s < segments; ++s) {
        f.push_back({0, static_cast<std::size_t>(1 + s),
                     static_cast<std::size_t>(1 + (s + 1) % segments)});
    }
    return TriMesh(std::move(v), std::move(f));
}

/** @brief Hull of `count` seeded random points in the unit ball */
inline HullMesh random_convex_hull(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Vec3> pts;
    while (pts.size() < count) {
        const Vec3 d = Vec3(g(rng), g(rng), g(rng)).normalized();
        pts.push_back(d * std::cbrt(0.2 + 0.8 * unif(rng)));
    }
    return convex_hull(pts);
}

/** @brief Surface area measure of a hull: one atom per merged facet */
inline DiscreteMeasure hull_measure(const HullMesh& hull,
                                    double merge_tol = kDefaultMergeTolerance)
{
    std::vector<Atom> atoms;
    for (std::size_t f = 0; f < hull.facets.size(); ++f) {
        atoms.push_back({hull.facet_normals[f], hull.facet_areas[f]});
    }
    return normalize(DiscreteMeasure(Manifold::S2, std::move(atoms)), merge_tol);
}

}  // namespace srnf::shapes

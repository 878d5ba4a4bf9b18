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
#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace srnf;

namespace
{

std::vector<Vec3> cube_corners()
{
    std::vector<Vec3> p;
    for (int i = 0; i < 8; ++i) {
        p.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
    }
    return p;
}

// Volume by the divergence formula sum (p0 . n) A / 3 over facets.
double divergence_volume(const HullMesh& h)
{
    double v = 0.0;
    for (std::size_t f = 0; f < h.facets.size(); ++f) {
        v += h.vertices[h.facets[f][0]].dot(h.facet_normals[f]) * h.facet_areas[f] / 3.0;
    }
    return v;
}

}  // namespace

TEST(ConvexHull, UnitCubeHasSixUnitSquares)
{
    const auto h = convex_hull(cube_corners());
    ASSERT_EQ(h.facets.size(), 6u);
    for (std::size_t f = 0; f < 6; ++f) {
        EXPECT_EQ(h.facets[f].size(), 4u);
        EXPECT_NEAR(h.facet_areas[f], 1.0, 1e-14);
    }
    EXPECT_NEAR(h.volume, 1.0, 1e-14);
    EXPECT_EQ(h.vertices.size(), 8u);
}

TEST(ConvexHull, InteriorPointIsIgnored)
{
    auto pts = cube_corners();
    pts.emplace_back(0.5, 0.5, 0.5);
    const auto h = convex_hull(pts);
    EXPECT_EQ(h.facets.size(), 6u);
    EXPECT_EQ(h.vertices.size(), 8u);
    EXPECT_NEAR(h.volume, 1.0, 1e-14);
}

TEST(ConvexHull, RegularTetrahedronVolume)
{
    const auto h = convex_hull(std::vector<Vec3>{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}});
    EXPECT_EQ(h.facets.size(), 4u);
    EXPECT_NEAR(h.volume, 8.0 / 3.0, 1e-14);
    EXPECT_NEAR(divergence_volume(h), 8.0 / 3.0, 1e-14);
}

TEST(ConvexHull, DegenerateInputIsRejected)
{
    EXPECT_THROW(convex_hull(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}),
                 GeometryError);
    EXPECT_THROW(convex_hull(std::vector<Vec3>{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}), GeometryError);
}

TEST(ConvexHull, RandomPointsAgreeWithDivergenceVolumeAndContainAllPoints)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec3> pts;
        for (int k = 0; k < 200; ++k) {
            pts.emplace_back(u(rng), u(rng), u(rng));
        }
        const auto h = convex_hull(pts);
        EXPECT_NEAR(h.volume, divergence_volume(h), 1e-12);
        for (const auto& p : pts) {
            for (std::size_t f = 0; f < h.facets.size(); ++f) {
                const double off = h.vertices[h.facets[f][0]].dot(h.facet_normals[f]);
                EXPECT_LE(p.dot(h.facet_normals[f]), off + 1e-12);
            }
        }
        // the closure condition holds for every closed convex surface
        Vec3 s = Vec3::Zero();
        for (std::size_t f = 0; f < h.facets.size(); ++f) {
            s += h.facet_areas[f] * h.facet_normals[f];
        }
        EXPECT_LT(s.norm(), 1e-12);
        EXPECT_TRUE(is_closed(h.to_trimesh()));
    }
}

TEST(ConvexHull, SpherePointsVolumeBelowBall)
{
    const auto sphere = shapes::geodesic_sphere(8);
    const auto h = convex_hull(sphere.vertices());
    EXPECT_EQ(h.vertices.size(), sphere.vertex_count());
    EXPECT_LT(h.volume, 4.0 / 3.0 * kPi);
    EXPECT_GT(h.volume, 0.97 * 4.0 / 3.0 * kPi);
}

TEST(WriteHull, FacetsAreFanTriangulated)
{
    const auto h = convex_hull(cube_corners());
    std::ostringstream os;
    write_mesh(os, h, MeshFormat::OFF);
    std::istringstream in(os.str());
    const auto m = load_mesh(in, MeshFormat::OFF);
    EXPECT_EQ(m.face_count(), 12u);
    EXPECT_TRUE(is_closed(m));
    EXPECT_NEAR(surface_area(m), 6.0, 1e-14);
}

TEST(PolygonAreaCentroid, UnitSquare)
{
    const auto [a, c] = polygon_area_centroid(
        std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, Vec3(0, 0, 1));
    EXPECT_NEAR(a, 1.0, 1e-15);
    EXPECT_NEAR((c - Vec3(0.5, 0.5, 0)).norm(), 0.0, 1e-15);
}

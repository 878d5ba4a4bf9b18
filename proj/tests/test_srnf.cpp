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

#include <map>

using namespace srnf;

namespace
{

SrnfField one_face(const Vec3& n, double area)
{
    return SrnfField({SrnfFace{n, area, 1.0}});
}

}  // namespace

TEST(SrnfTransform, CubeHasSixDirectionsOfUnitArea)
{
    const auto q = srnf_transform(shapes::cube());
    ASSERT_EQ(q.size(), 12u);
    std::map<std::tuple<long, long, long>, double> per_direction;
    for (const auto& f : q.faces()) {
        per_direction[{std::lround(f.n.x()), std::lround(f.n.y()), std::lround(f.n.z())}] +=
            f.area;
        EXPECT_NEAR(std::abs(f.n.x()) + std::abs(f.n.y()) + std::abs(f.n.z()), 1.0, 1e-15);
    }
    ASSERT_EQ(per_direction.size(), 6u);
    for (const auto& [dir, area] : per_direction) {
        EXPECT_NEAR(area, 1.0, 1e-15);
    }
}

TEST(SrnfTransform, IcosphereAreaWithinOnePercentOfSphere)
{
    const auto mesh = shapes::icosphere(3);
    ASSERT_EQ(mesh.face_count(), 1280u);
    const auto q = srnf_transform(mesh);
    // independent oracle: half cross-product norms summed directly
    double oracle = 0.0;
    for (std::size_t k = 0; k < mesh.face_count(); ++k) {
        oracle += 0.5 * mesh.cross(k).norm();
    }
    EXPECT_NEAR(q.total_area(), oracle, 1e-12);
    EXPECT_NEAR(q.total_area(), 4.0 * kPi, 0.01 * 4.0 * kPi);
}

TEST(SrnfTransform, SingleTriangleValue)
{
    const TriMesh tri({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
    const auto q = srnf_transform(tri);
    EXPECT_NEAR((q[0].value() - std::sqrt(0.5) * Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
}

TEST(SrnfTransform, ParameterAreasScaleTheValue)
{
    const TriMesh tri({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
    const auto q = srnf_transform(tri, std::vector<double>{0.125});
    EXPECT_NEAR(q[0].value().norm(), 2.0, 1e-15);
    EXPECT_THROW(srnf_transform(tri, std::vector<double>{1.0, 2.0}), ValidationError);
    EXPECT_THROW(srnf_transform(tri, std::vector<double>{0.0}), ValidationError);
}

TEST(L2Distance, SelfIsZero)
{
    const auto q = srnf_transform(shapes::bumpy_sphere(4));
    EXPECT_EQ(l2_distance(q, q), 0.0);
}

TEST(L2Distance, OrthogonalUnitFaces)
{
    EXPECT_NEAR(l2_distance(one_face({1, 0, 0}, 1.0), one_face({0, 1, 0}, 1.0)),
                std::sqrt(2.0), 1e-15);
}

TEST(L2Distance, SameDirectionDifferentArea)
{
    EXPECT_NEAR(l2_distance(one_face({1, 0, 0}, 4.0), one_face({1, 0, 0}, 9.0)), 1.0,
                1e-15);
}

TEST(L2Distance, MismatchedTemplateIsRejected)
{
    const SrnfField two({SrnfFace{{1, 0, 0}, 1.0, 1.0}, SrnfFace{{0, 1, 0}, 1.0, 1.0}});
    EXPECT_THROW(l2_distance(one_face({1, 0, 0}, 1.0), two), ValidationError);
    const SrnfField other({SrnfFace{{1, 0, 0}, 1.0, 2.0}});
    EXPECT_THROW(l2_distance(one_face({1, 0, 0}, 1.0), other), ValidationError);
}

TEST(L2Distance, MatchesPointwiseFieldDifference)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    std::vector<SrnfFace> f1;
    std::vector<SrnfFace> f2;
    double oracle = 0.0;
    for (int k = 0; k < 30; ++k) {
        const double s = u(rng);
        f1.push_back({fixtures::random_unit(rng), u(rng), s});
        f2.push_back({fixtures::random_unit(rng), u(rng), s});
        oracle += s * (f1.back().value() - f2.back().value()).squaredNorm();
    }
    EXPECT_NEAR(l2_distance(SrnfField(f1), SrnfField(f2)), std::sqrt(oracle), 1e-12);
}

TEST(ClosureDefect, TetrahedronIsClosed)
{
    EXPECT_LT(closure_defect(srnf_transform(shapes::tetrahedron())).norm(), 1e-12);
}

TEST(ClosureDefect, CubeCancelsExactly)
{
    const auto q = srnf_transform(shapes::cube());
    EXPECT_LE(closure_defect(q).norm(), 1e-15);
    EXPECT_TRUE(satisfies_closure(q));
}

TEST(ClosureDefect, FlatDiskPointsUpWithItsArea)
{
    const auto q = srnf_transform(shapes::disk(256));
    const Vec3 d = closure_defect(q);
    EXPECT_NEAR(d.x(), 0.0, 1e-12);
    EXPECT_NEAR(d.y(), 0.0, 1e-12);
    EXPECT_NEAR(d.z(), kPi, 1e-3);
    EXPECT_FALSE(satisfies_closure(q));
}

TEST(ClosureDefect, ClosedMeshesSatisfyClosure)
{
    for (const auto& mesh : {shapes::icosphere(3), shapes::bumpy_sphere(8)}) {
        const auto q = srnf_transform(mesh);
        EXPECT_LE(closure_defect(q).norm(), 1e-10 * q.total_area());
    }
    EXPECT_FALSE(satisfies_closure(srnf_transform(shapes::hemisphere())));
}

TEST(Refine, CubeOneLevelHasFortyEightFaces)
{
    const auto q = srnf_transform(shapes::cube());
    const auto r = refine(q, 1);
    ASSERT_EQ(r.size(), 48u);
    EXPECT_NEAR(r.total_area(), q.total_area(), 1e-15);
    for (std::size_t k = 0; k < q.size(); ++k) {
        for (std::size_t c = 0; c < 4; ++c) {
            const auto& child = r[4 * k + c];
            EXPECT_EQ(child.n, q[k].n);
            // the field value is unchanged by an even split
            EXPECT_NEAR((child.value() - q[k].value()).norm(), 0.0, 1e-15);
        }
    }
}

TEST(Refine, KeepsL2Distance)
{
    const auto a = srnf_transform(shapes::bumpy_sphere(3));
    const auto b = srnf_transform(shapes::geodesic_sphere(3));
    EXPECT_NEAR(l2_distance(refine(a, 2), refine(b, 2)), l2_distance(a, b), 1e-12);
}

TEST(Refine, RejectsBadLevels)
{
    const auto q = srnf_transform(shapes::cube());
    EXPECT_THROW(refine(q, 0), ValidationError);
    EXPECT_THROW(refine(q, 11), ValidationError);
}

TEST(SrnfField, ValidatesFaces)
{
    EXPECT_THROW(SrnfField({SrnfFace{{1.1, 0, 0}, 1.0, 1.0}}), ValidationError);
    EXPECT_THROW(SrnfField({SrnfFace{{1, 0, 0}, -1.0, 1.0}}), ValidationError);
    EXPECT_THROW(SrnfField({SrnfFace{{1, 0, 0}, 1.0, 0.0}}), ValidationError);
    // a zero-area face sits at the cone point whatever its direction
    const SrnfField z({SrnfFace{{3, 0, 0}, 0.0, 1.0}});
    EXPECT_TRUE(z[0].at_cone_point());
    EXPECT_EQ(z[0].value(), Vec3::Zero());
}

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
using srnf::fixtures::kCubeOff;

namespace
{

TriMesh parse(const std::string& text, MeshFormat format)
{
    std::istringstream in(text);
    return load_mesh(in, format);
}

TriMesh single_triangle(Vec3 a, Vec3 b, Vec3 c)
{
    return TriMesh({a, b, c}, {{0, 1, 2}});
}

}  // namespace

TEST(LoadMesh, CubeOffHasEightVerticesAndTwelveFaces)
{
    const auto m = parse(kCubeOff, MeshFormat::OFF);
    EXPECT_EQ(m.vertex_count(), 8u);
    EXPECT_EQ(m.face_count(), 12u);
}

TEST(LoadMesh, FaceIndexOutOfRangeIsRejected)
{
    const std::string text = "OFF\n8 1 0\n" +
                             std::string("0 0 0\n1 0 0\n0 1 0\n1 1 0\n") +
                             "0 0 1\n1 0 1\n0 1 1\n1 1 1\n3 0 1 99\n";
    try {
        parse(text, MeshFormat::OFF);
        FAIL() << "expected an error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("99"), std::string::npos);
    }
}

TEST(LoadMesh, ObjQuadIsFanTriangulated)
{
    const auto m = parse("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n",
                         MeshFormat::OBJ);
    ASSERT_EQ(m.face_count(), 2u);
    EXPECT_EQ(m.faces()[0], (Face{0, 1, 2}));
    EXPECT_EQ(m.faces()[1], (Face{0, 2, 3}));
}

TEST(LoadMesh, ObjSlashIndicesAndNegativeIndices)
{
    const auto m = parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 -1//1\n",
                         MeshFormat::OBJ);
    ASSERT_EQ(m.face_count(), 1u);
    EXPECT_EQ(m.faces()[0], (Face{0, 1, 2}));
}

TEST(LoadMesh, MalformedInputReportsLine)
{
    try {
        parse("OFF\n3 1 0\n0 0 0\n1 zero 0\n0 1 0\n3 0 1 2\n", MeshFormat::OFF);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
    EXPECT_THROW(parse("", MeshFormat::OFF), ParseError);
    EXPECT_THROW(parse("PLY\n", MeshFormat::OFF), ParseError);
}

TEST(LoadMesh, MissingFileIsIoError)
{
    EXPECT_THROW(load_mesh("/nonexistent/mesh.off"), IoError);
}

TEST(FaceGeometry, RightTriangle)
{
    const auto g = face_geometry(single_triangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}), 0);
    EXPECT_NEAR((g.normal - Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(g.area, 0.5);
}

TEST(FaceGeometry, OrientationFlip)
{
    const auto g = face_geometry(single_triangle({0, 0, 0}, {0, 1, 0}, {1, 0, 0}), 0);
    EXPECT_NEAR((g.normal - Vec3(0, 0, -1)).norm(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(g.area, 0.5);
}

TEST(FaceGeometry, Scaling)
{
    const auto g = face_geometry(single_triangle({0, 0, 0}, {2, 0, 0}, {0, 2, 0}), 0);
    EXPECT_NEAR((g.normal - Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(g.area, 2.0);
}

TEST(FaceGeometry, DegenerateFaceCarriesIndex)
{
    try {
        TriMesh({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}}, {{0, 1, 3}, {0, 1, 2}});
        FAIL() << "expected a degenerate face error";
    } catch (const DegenerateFaceError& e) {
        ASSERT_EQ(e.faces().size(), 1u);
        EXPECT_EQ(e.faces()[0], 1u);
    }
}

TEST(IsClosed, CubeIsClosed)
{
    EXPECT_TRUE(is_closed(parse(kCubeOff, MeshFormat::OFF)));
    EXPECT_TRUE(is_closed(shapes::tetrahedron()));
    EXPECT_TRUE(is_closed(shapes::geodesic_sphere(4)));
}

TEST(IsClosed, SingleTriangleIsOpen)
{
    EXPECT_FALSE(is_closed(single_triangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0})));
}

TEST(IsClosed, CubeMissingAFaceIsOpen)
{
    const auto cube = shapes::cube();
    std::vector<Face> faces(cube.faces().begin() + 1, cube.faces().end());
    const TriMesh holed(cube.vertices(), faces);
    const auto rep = closedness_report(holed);
    EXPECT_FALSE(rep.closed);
    EXPECT_EQ(rep.issues.size(), 3u);
}

TEST(IsClosed, InconsistentOrientationIsOpen)
{
    const auto cube = shapes::cube();
    auto faces = cube.faces();
    std::swap(faces[0][1], faces[0][2]);
    EXPECT_FALSE(is_closed(TriMesh(cube.vertices(), faces)));
}

TEST(WriteMesh, OffRoundtripIsIdentical)
{
    const auto cube = parse(kCubeOff, MeshFormat::OFF);
    for (auto format : {MeshFormat::OFF, MeshFormat::OBJ}) {
        const auto back = parse(write_mesh(cube, format), format);
        EXPECT_EQ(back.vertices(), cube.vertices());
        EXPECT_EQ(back.faces(), cube.faces());
    }
}

TEST(WriteMesh, RoundtripPreservesDoublesExactly)
{
    const auto sphere = shapes::geodesic_sphere(3);
    const auto back = parse(write_mesh(sphere, MeshFormat::OFF), MeshFormat::OFF);
    EXPECT_EQ(back.vertices(), sphere.vertices());
}

TEST(WriteMesh, EmptyMeshIsRejected)
{
    EXPECT_THROW(write_mesh(TriMesh(), MeshFormat::OFF), ValidationError);
}

TEST(SurfaceArea, GeodesicSphereApproachesFourPi)
{
    const double a = surface_area(shapes::geodesic_sphere(16));
    EXPECT_NEAR(a, 4.0 * kPi, 0.01 * 4.0 * kPi);
    EXPECT_LT(a, 4.0 * kPi);
}

TEST(Transformed, RigidMotionKeepsArea)
{
    const auto cube = shapes::cube(2.0);
    const Mat3 R = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
    EXPECT_NEAR(surface_area(cube.transformed(R, Vec3(5, -1, 2))), 24.0, 1e-12);
}

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

#include <optional>
#include <vector>

namespace srnf
{

/**
 * @brief One face of a piecewise-constant square root normal field
 *
 * A face with zero area sits at the cone point; its direction is the zero
 * vector and it contributes nothing to any integral.
 */
struct SrnfFace {
    Vec3 n{Vec3::Zero()};
    double area{0.0};
    double param_area{1.0};

    [[nodiscard]] bool at_cone_point() const { return area == 0.0; }

    /** @brief Field value sqrt(area / param_area) * n */
    [[nodiscard]] Vec3 value() const
    {
        return area == 0.0 ? Vec3::Zero()
                           : Vec3(std::sqrt(area / param_area) * n);
    }
};

class SrnfField
{
public:
    SrnfField() = default;

    explicit SrnfField(std::vector<SrnfFace> faces) : faces_(std::move(faces))
    {
        double total_param = 0.0;
        for (std::size_t k = 0; k < faces_.size(); ++k) {
            auto& f = faces_[k];
            const std::string where = "faces[" + std::to_string(k) + "]";
            if (!std::isfinite(f.area) || f.area < 0.0) {
                throw ValidationError(where + ".area",
                                      "must be finite and nonnegative");
            }
            if (!std::isfinite(f.param_area) || f.param_area <= 0.0) {
                throw ValidationError(where + ".param_area",
                                      "must be finite and positive");
            }
            if (f.area == 0.0) {
                f.n = Vec3::Zero();
            } else if (!on_manifold(Manifold::S2, f.n)) {
                throw ValidationError(where + ".n", "must be a unit vector");
            }
            total_param += f.param_area;
        }
        if (!faces_.empty() && !(total_param > 0.0)) {
            throw ValidationError("parameter areas must have positive sum");
        }
    }

    [[nodiscard]] const std::vector<SrnfFace>& faces() const { return faces_; }
    [[nodiscard]] std::size_t size() const { return faces_.size(); }
    [[nodiscard]] bool empty() const { return faces_.empty(); }
    const SrnfFace& operator[](std::size_t k) const { return faces_[k]; }

    /** @brief Sum of face areas, which is also the squared L2 norm */
    [[nodiscard]] double total_area() const
    {
        double s = 0.0;
        for (const auto& f : faces_) {
            s += f.area;
        }
        return s;
    }

private:
    std::vector<SrnfFace> faces_;
};

/**
 * @brief SRNF of a triangle mesh
 *
 * @param param_areas optional parameter-domain area per face, default 1
 */
inline SrnfField srnf_transform(
    const TriMesh& mesh,
    const std::optional<std::vector<double>>& param_areas = std::nullopt)
{
    if (param_areas && param_areas->size() != mesh.face_count()) {
        throw ValidationError("param_areas has " +
                              std::to_string(param_areas->size()) +
                              " entries for " +
                              std::to_string(mesh.face_count()) + " faces");
    }
    std::vector<SrnfFace> faces;
    faces.reserve(mesh.face_count());
    for (std::size_t k = 0; k < mesh.face_count(); ++k) {
        const auto g = face_geometry(mesh, k);
        faces.push_back({g.normal, g.area, param_areas ? (*param_areas)[k] : 1.0});
    }
    return SrnfField(std::move(faces));
}

namespace detail
{
inline void require_shared_template(const std::vector<double>& s1,
                                    const std::vector<double>& s2)
{
    if (s1.size() != s2.size()) {
        throw ValidationError("template mismatch: " + std::to_string(s1.size()) +
                              " vs " + std::to_string(s2.size()) + " faces");
    }
    for (std::size_t k = 0; k < s1.size(); ++k) {
        if (std::abs(s1[k] - s2[k]) > 1e-12 * std::max(s1[k], s2[k])) {
            throw ValidationError("template mismatch: parameter area of face " +
                                  std::to_string(k) + " differs");
        }
    }
}

inline std::vector<double> param_areas(const SrnfField& q)
{
    std::vector<double> s;
    s.reserve(q.size());
    for (const auto& f : q.faces()) {
        s.push_back(f.param_area);
    }
    return s;
}
}  // namespace detail

/** @brief L2 distance between two fields on a shared template */
inline double l2_distance(const SrnfField& q1, const SrnfField& q2)
{
    detail::require_shared_template(detail::param_areas(q1),
                                    detail::param_areas(q2));
    // s_k * |sqrt(A1/s) n1 - sqrt(A2/s) n2|^2 = |sqrt(A1) n1 - sqrt(A2) n2|^2
    double sum = 0.0;
    for (std::size_t k = 0; k < q1.size(); ++k) {
        const Vec3 d = std::sqrt(q1[k].area) * q1[k].n -
                       std::sqrt(q2[k].area) * q2[k].n;
        sum += d.squaredNorm();
    }
    return std::sqrt(sum);
}

/** @brief Integral of q|q|, i.e. the sum of area-weighted normals */
inline Vec3 closure_defect(const SrnfField& q)
{
    Vec3 d = Vec3::Zero();
    for (const auto& f : q.faces()) {
        d += f.area * f.n;
    }
    return d;
}

inline bool satisfies_closure(const SrnfField& q, double tol = 1e-9)
{
    return closure_defect(q).norm() <= tol * q.total_area();
}

/**
 * @brief Split every face into 4^levels children with equal shares
 *
 * Children of face k are stored contiguously, in place of k.
 */
inline SrnfField refine(const SrnfField& q, int levels)
{
    if (levels < 1) {
        throw ValidationError("refine levels must be positive");
    }
    if (levels > 10) {
        throw ValidationError("refine levels above 10 are not supported");
    }
    const std::size_t split = std::size_t{1} << (2 * levels);
    const double scale = 1.0 / static_cast<double>(split);
    std::vector<SrnfFace> out;
    out.reserve(q.size() * split);
    for (const auto& f : q.faces()) {
        for (std::size_t c = 0; c < split; ++c) {
            out.push_back({f.n, f.area * scale, f.param_area * scale});
        }
    }
    return SrnfField(std::move(out));
}

}  // namespace srnf

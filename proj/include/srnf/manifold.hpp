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
#include "srnf/srnf.hpp"

#include <optional>
#include <vector>

namespace srnf
{

/** @brief Great-circle (S2) or angular (S1) distance */
inline double geodesic_distance(Manifold m, const Vec3& u, const Vec3& v)
{
    if (!on_manifold(m, u) || !on_manifold(m, v)) {
        throw ValidationError(std::string("point is not on ") + to_string(m));
    }
    return angle_between(u, v);
}

/** @brief cos(min(x, pi/2)) */
inline double truncated_cos(double x)
{
    if (!(x >= 0.0)) {
        throw ValidationError("truncated_cos needs a nonnegative argument");
    }
    return x >= kPi / 2 ? 0.0 : std::cos(x);
}

/** @brief 1 - truncated_cos(x), accurate for small x */
inline double truncated_cos_complement(double x)
{
    if (x >= kPi / 2) {
        return 1.0;
    }
    const double s = std::sin(0.5 * x);
    return 2.0 * s * s;
}

/**
 * @brief Point of the cone over the sphere
 *
 * radius 0 is the apex whatever the base point.
 */
struct ConePoint {
    std::optional<Vec3> base;
    double radius{0.0};

    [[nodiscard]] bool is_apex() const { return radius == 0.0 || !base; }
};

inline double cone_distance(const ConePoint& p, const ConePoint& q, double delta)
{
    if (!(delta > 0.0)) {
        throw ValidationError("delta must be positive");
    }
    if (p.radius < 0.0 || q.radius < 0.0) {
        throw ValidationError("cone radius must be nonnegative");
    }
    double complement = 1.0;
    if (!p.is_apex() && !q.is_apex()) {
        complement =
            truncated_cos_complement(angle_between(*p.base, *q.base) / (2 * delta));
    }
    // 4d^2 (r1^2 + r2^2 - 2 r1 r2 cos) written without cancellation
    const double dr = p.radius - q.radius;
    const double sq = dr * dr + 2.0 * p.radius * q.radius * complement;
    return 2.0 * delta * std::sqrt(sq);
}

/** @brief One face of a cone-valued piecewise-constant map */
struct ConeFace {
    ConePoint value;
    double param_area{1.0};
};

/**
 * @brief Cone-valued field; value.radius holds the half-density weight
 *
 * The weight squared times the parameter area is the mass the face pushes
 * to its base point.
 */
struct ConeField {
    std::vector<ConeFace> faces;
    Manifold manifold{Manifold::S2};
    double delta{0.5};

    [[nodiscard]] std::size_t size() const { return faces.size(); }
};

/** @brief SRNF field as a cone field: base n, weight sqrt(A/s) */
inline ConeField to_cone_field(const SrnfField& q)
{
    ConeField out;
    out.faces.reserve(q.size());
    for (const auto& f : q.faces()) {
        ConeFace c;
        c.param_area = f.param_area;
        if (!f.at_cone_point()) {
            c.value.base = f.n;
            c.value.radius = std::sqrt(f.area / f.param_area);
        }
        out.faces.push_back(c);
    }
    return out;
}

/** @brief L2 distance between cone fields on a shared template */
inline double cone_l2_distance(const ConeField& q1, const ConeField& q2,
                               double delta)
{
    std::vector<double> s1;
    std::vector<double> s2;
    for (const auto& f : q1.faces) {
        s1.push_back(f.param_area);
    }
    for (const auto& f : q2.faces) {
        s2.push_back(f.param_area);
    }
    detail::require_shared_template(s1, s2);
    double sum = 0.0;
    for (std::size_t k = 0; k < q1.size(); ++k) {
        const double d = cone_distance(q1.faces[k].value, q2.faces[k].value, delta);
        sum += q1.faces[k].param_area * d * d;
    }
    return std::sqrt(sum);
}

}  // namespace srnf

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

// End-to-end acceptance checks; prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include "../support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace srnf;
using srnf::fixtures::measure;
using srnf::fixtures::random_measure;
using srnf::fixtures::random_unit;

namespace
{

struct Verdict {
    bool pass;
    std::string detail;
};

class Stopwatch
{
public:
    [[nodiscard]] double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_{std::chrono::steady_clock::now()};
};

template <typename... Args>
std::string fmt(const char* f, Args... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, static_cast<double>(args)...);
    return buf;
}

Vec3 at_angle(double d)
{
    return {std::cos(d), std::sin(d), 0.0};
}

Verdict dirac_pairs()
{
    const Stopwatch t;
    double worst = 0.0;
    const double masses[] = {0.5, 1.0, 4.0, 9.0};
    for (double a : masses) {
        for (double b : masses) {
            for (double d : {0.0, kPi / 6, kPi / 3, kPi / 2, 2.0, kPi}) {
                for (double delta : {0.25, 0.5, 1.0}) {
                    const double x = d / (2.0 * delta);
                    const double c = x >= kPi / 2 ? 0.0 : std::cos(x);
                    const double expect =
                        2.0 * delta * std::sqrt(a + b - 2.0 * std::sqrt(a * b) * c);
                    const double got = solve_wfr(measure({{{1, 0, 0}, a}}),
                                                 measure({{at_angle(d), b}}), delta)
                                           .distance;
                    worst = std::max(worst, std::abs(got - expect));
                }
            }
        }
    }
    const double s = t.seconds();
    return {worst <= 1e-9 && s < 1.0,
            fmt("288 cases, max |err| %.2e (tol 1e-9), %.2f s (limit 1 s)", worst, s)};
}

struct SmallInstance {
    DiscreteMeasure mu;
    DiscreteMeasure nu;
    double delta;
};

std::vector<SmallInstance> small_suite()
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(1, 3);
    const double deltas[] = {0.25, 0.5, 1.0};
    std::vector<SmallInstance> suite;
    for (int k = 0; k < 200; ++k) {
        auto mu = random_measure(rng, static_cast<std::size_t>(size(rng)));
        auto nu = random_measure(rng, static_cast<std::size_t>(size(rng)));
        suite.push_back({std::move(mu), std::move(nu), deltas[k % 3]});
    }
    return suite;
}

Verdict oracle_equivalence()
{
    const Stopwatch t;
    double worst = 0.0;
    for (const auto& inst : small_suite()) {
        const double a = solve_wfr(inst.mu, inst.nu, inst.delta).distance;
        const double b = oracle_wfr(inst.mu, inst.nu, inst.delta);
        worst = std::max(worst, std::abs(a - b));
    }
    const double s = t.seconds();
    return {worst <= 1e-6 && s < 120.0,
            fmt("200 instances, max |solver - oracle| %.2e (tol 1e-6), %.1f s (limit 120 s)",
                worst, s)};
}

Verdict self_and_symmetry()
{
    const Stopwatch t;
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> size(1, 20);
    double self = 0.0;
    double asym = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto mu = random_measure(rng, static_cast<std::size_t>(size(rng)));
        const auto nu = random_measure(rng, static_cast<std::size_t>(size(rng)));
        self = std::max(self, solve_wfr(mu, mu, 0.5).distance);
        asym = std::max(asym, std::abs(solve_wfr(mu, nu, 0.5).distance -
                                       solve_wfr(nu, mu, 0.5).distance));
    }
    const double s = t.seconds();
    return {self <= 1e-9 && asym <= 1e-9 && s < 30.0,
            fmt("max self %.2e, max asymmetry %.2e (tol 1e-9), %.1f s (limit 30 s)", self,
                asym, s)};
}

Verdict homogeneity_rotation()
{
    std::mt19937_64 rng(4);
    double rel = 0.0;
    double rot = 0.0;
    for (int k = 0; k < 20; ++k) {
        const auto mu = random_measure(rng, 8);
        const auto nu = random_measure(rng, 12);
        const double d = solve_wfr(mu, nu, 0.5).distance;
        for (double s : {0.1, 2.0, 10.0}) {
            const double ds = solve_wfr(mu.scaled(s), nu.scaled(s), 0.5).distance;
            rel = std::max(rel, std::abs(ds - std::sqrt(s) * d) / (std::sqrt(s) * d));
        }
        const Mat3 R = fixtures::random_rotation(rng);
        rot = std::max(rot, std::abs(solve_wfr(mu.rotated(R), nu.rotated(R), 0.5).distance - d));
    }
    return {rel <= 1e-8 && rot <= 1e-9,
            fmt("max scaling rel err %.2e (tol 1e-8), max rotation change %.2e (tol 1e-9)", rel,
                rot)};
}

Verdict cube_consistency()
{
    const auto cube = shapes::cube();
    const auto mu = area_measure(cube);
    const double translated =
        solve_wfr(mu, area_measure(cube.transformed(Mat3::Identity(), Vec3(2, -3, 5))), 0.5)
            .distance;
    const double doubled = solve_wfr(mu, area_measure(shapes::cube(2.0)), 0.5).distance;
    const Mat3 R = Eigen::AngleAxisd(kPi / 4, Vec3::UnitZ()).toRotationMatrix();
    const auto turned = area_measure(cube.transformed(R, Vec3::Zero()));
    const double solver = solve_wfr(mu, turned, 0.5).distance;
    const double oracle = oracle_wfr(mu, turned, 0.5);
    const bool ok = translated <= 1e-9 && std::abs(doubled - std::sqrt(6.0)) <= 1e-8 &&
                    std::abs(solver - oracle) <= 1e-6;
    return {ok, fmt("translated %.2e, side-2 |d - sqrt 6| %.2e, turned |solver - oracle| "
                    "%.2e (turned d = %.6f)",
                    translated, std::abs(doubled - std::sqrt(6.0)), std::abs(solver - oracle),
                    solver)};
}

Verdict lipschitz_bound()
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> area(0.05, 2.0);
    std::uniform_int_distribution<int> faces(2, 30);
    double slack = -1e300;
    for (int k = 0; k < 100; ++k) {
        const std::size_t nf = static_cast<std::size_t>(faces(rng));
        std::vector<SrnfFace> f1;
        std::vector<SrnfFace> f2;
        for (std::size_t j = 0; j < nf; ++j) {
            const double s = area(rng);
            f1.push_back({random_unit(rng), area(rng), s});
            f2.push_back({random_unit(rng), area(rng), s});
        }
        const SrnfField q1(f1);
        const SrnfField q2(f2);
        for (double delta : {0.5, 1.0}) {
            const double w = solve_wfr(area_measure(q1), area_measure(q2), delta).distance;
            const double l2 = cone_l2_distance(to_cone_field(q1), to_cone_field(q2), delta);
            slack = std::max(slack, w - l2);
        }
    }
    // transport-free pairs: shared direction per face, no cheaper transport
    double gap = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double delta = k % 2 == 0 ? 0.5 : 1.0;
        std::vector<Vec3> dirs;
        if (delta == 0.5) {
            for (int i = 0; i < 3; ++i) {
                dirs.push_back(Vec3::Unit(i));
                dirs.push_back(-Vec3::Unit(i));
            }
        } else {
            dirs = {Vec3::UnitZ(), -Vec3::UnitZ()};
        }
        std::vector<SrnfFace> f1;
        std::vector<SrnfFace> f2;
        for (const auto& u : dirs) {
            const double s = area(rng);
            f1.push_back({u, area(rng), s});
            f2.push_back({u, area(rng), s});
        }
        const SrnfField q1(f1);
        const SrnfField q2(f2);
        const double w = solve_wfr(area_measure(q1), area_measure(q2), delta).distance;
        const double l2 = cone_l2_distance(to_cone_field(q1), to_cone_field(q2), delta);
        gap = std::max(gap, std::abs(w - l2));
    }
    return {slack <= 1e-9 && gap <= 1e-9,
            fmt("max (WFR - L2) %.2e (tol 1e-9), transport-free max |WFR - L2| %.2e (tol 1e-9)",
                slack, gap)};
}

Verdict closure_condition()
{
    double worst = 0.0;
    bool all_closed = true;
    for (const auto& mesh : {shapes::cube(), shapes::tetrahedron(), shapes::icosphere(3),
                             shapes::bumpy_sphere(10)}) {
        const auto q = srnf_transform(mesh);
        worst = std::max(worst, closure_defect(q).norm() / q.total_area());
        all_closed = all_closed && is_closed(mesh);
    }
    const auto hemi = shapes::hemisphere();
    const auto qh = srnf_transform(hemi);
    const double hemi_defect = closure_defect(qh).norm() / qh.total_area();
    const bool hemi_fails = !is_closed(hemi) && hemi_defect > 1e-10;
    return {all_closed && worst <= 1e-10 && hemi_fails,
            fmt("closed meshes max defect/area %.2e (tol 1e-10); hemisphere defect/area %.3f, "
                "rejected %.0f",
                worst, hemi_defect, hemi_fails ? 1.0 : 0.0)};
}

Vec3 hull_surface_centroid(const HullMesh& hull)
{
    Vec3 c = Vec3::Zero();
    double total = 0.0;
    for (std::size_t f = 0; f < hull.facets.size(); ++f) {
        std::vector<Vec3> poly;
        for (auto v : hull.facets[f]) {
            poly.push_back(hull.vertices[v]);
        }
        const auto [a, cc] = polygon_area_centroid(poly, hull.facet_normals[f]);
        c += a * cc;
        total += a;
    }
    return c / total;
}

Verdict minkowski_roundtrip()
{
    const Stopwatch t;
    double area_err = 0.0;
    double haus = 0.0;
    int failures = 0;
    for (int s = 0; s < 25; ++s) {
        const std::size_t count = 10 + static_cast<std::size_t>(s * 40 / 24);
        const auto hull = shapes::random_convex_hull(count, static_cast<std::uint64_t>(s));
        const auto mu = shapes::hull_measure(hull);
        try {
            const auto r = solve_minkowski(mu);
            const auto back = r.polytope.area_measure();
            if (back.size() != mu.size()) {
                ++failures;
                continue;
            }
            for (std::size_t i = 0; i < mu.size(); ++i) {
                if (back[i].u != mu[i].u) {
                    ++failures;
                }
                area_err = std::max(area_err, std::abs(back[i].mass - mu[i].mass) / mu[i].mass);
            }
            const Vec3 c = hull_surface_centroid(hull);
            const Vec3 cp = r.polytope.surface_centroid();
            std::vector<Vec3> xs;
            std::vector<Vec3> ys;
            for (const auto& v : hull.vertices) {
                xs.push_back(v - c);
            }
            for (const auto& v : r.polytope.hull.vertices) {
                ys.push_back(v - cp);
            }
            haus = std::max(haus, hausdorff_distance(xs, ys) / hull.diameter());
        } catch (const Error&) {
            ++failures;
        }
    }
    const double sec = t.seconds();
    return {failures == 0 && area_err <= 1e-5 && haus <= 1e-4 && sec < 120.0,
            fmt("25 hulls, %.0f failures, max facet-area rel err %.2e (tol 1e-5), max "
                "Hausdorff/diameter %.2e (tol 1e-4), %.1f s",
                failures, area_err, haus, sec)};
}

Verdict degeneracy_demo()
{
    const Stopwatch t;
    const auto mesh = shapes::bumpy_sphere(10);
    const auto r = convexify(mesh);
    const double bound = 1e-5 * std::sqrt(r.report.total_mass);
    const bool ok = is_closed(mesh) && r.report.wfr_residual <= bound &&
                    r.report.hausdorff > 0.01 * r.report.diameter;
    return {ok, fmt("%.0f faces, WFR residual %.2e (bound %.2e), Hausdorff/diameter %.3f "
                    "(needs > 0.01), %.1f s",
                    static_cast<double>(mesh.face_count()), r.report.wfr_residual, bound,
                    r.report.hausdorff / r.report.diameter, t.seconds())};
}

Verdict lift_roundtrip()
{
    std::mt19937_64 rng(10);
    std::uniform_int_distribution<int> size(1, 50);
    std::uniform_real_distribution<double> param(0.01, 1.0);
    double worst = 0.0;
    int mismatched = 0;
    for (int k = 0; k < 50; ++k) {
        const auto mu = random_measure(rng, static_cast<std::size_t>(size(rng)));
        std::vector<double> s(mu.size() + 5);
        for (auto& x : s) {
            x = param(rng);
        }
        for (double delta : {0.5, 1.0}) {
            const auto back = area_measure(lift(mu, s, delta));
            if (back.size() != mu.size()) {
                ++mismatched;
                continue;
            }
            for (std::size_t i = 0; i < mu.size(); ++i) {
                if (back[i].u != mu[i].u) {
                    ++mismatched;
                }
                worst = std::max(worst, std::abs(back[i].mass - mu[i].mass) / mu[i].mass);
            }
        }
    }
    return {mismatched == 0 && worst <= 1e-12,
            fmt("100 lifts, %.0f atom mismatches, max mass rel err %.2e (tol 1e-12)",
                mismatched, worst)};
}

Verdict truncation_indifference()
{
    double worst = 0.0;
    WfrOptions raw;
    raw.cosine = CosineKind::raw;
    for (const auto& inst : small_suite()) {
        worst = std::max(worst, std::abs(solve_wfr(inst.mu, inst.nu, inst.delta, raw).distance -
                                         solve_wfr(inst.mu, inst.nu, inst.delta).distance));
    }
    return {worst <= 1e-10, fmt("200 instances, max |raw - truncated| %.2e (tol 1e-10)", worst)};
}

Verdict performance()
{
    const auto a = shapes::bumpy_sphere(16);
    const auto b = shapes::geodesic_sphere(16);
    auto run = [&](unsigned threads) {
        QuantizeOptions q;
        const auto mu = quantize(area_measure(a), 300, q);
        const auto nu = quantize(area_measure(b), 300, q);
        WfrOptions o;
        o.threads = threads;
        return solve_wfr(mu, nu, 0.5, o);
    };
    const Stopwatch t;
    const auto one = run(1);
    const double sec = t.seconds();
    const auto eight = run(8);
    const bool identical = one.distance == eight.distance &&
                           one.coupling.A == eight.coupling.A &&
                           one.coupling.B == eight.coupling.B;
    return {sec < 60.0 && identical && one.converged,
            fmt("%.0f vs %.0f faces, quantized to 300, d = %.6f, %.1f s single-threaded "
                "(limit 60 s)",
                static_cast<double>(a.face_count()), static_cast<double>(b.face_count()),
                one.distance, sec) +
                (identical ? ", bit-identical with 8 threads" : ", DIFFERS with 8 threads")};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"Dirac-pair closed form", dirac_pairs},
        {"oracle equivalence", oracle_equivalence},
        {"self-distance and symmetry", self_and_symmetry},
        {"homogeneity and rotation invariance", homogeneity_rotation},
        {"cube consistency", cube_consistency},
        {"L2 Lipschitz bound", lipschitz_bound},
        {"closure condition", closure_condition},
        {"Minkowski roundtrip", minkowski_roundtrip},
        {"convexification degeneracy", degeneracy_demo},
        {"lift roundtrip", lift_roundtrip},
        {"truncation indifference", truncation_indifference},
        {"performance and determinism", performance},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2zu %-36s %s  %s\n", k + 1, criteria[k].first,
                    v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}

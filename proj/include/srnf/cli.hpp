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
#include "srnf/io.hpp"
#include "srnf/measure.hpp"
#include "srnf/mesh.hpp"
#include "srnf/minkowski.hpp"
#include "srnf/oracle.hpp"
#include "srnf/shapes.hpp"
#include "srnf/srnf.hpp"
#include "srnf/wfr.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace srnf::cli
{

/** @brief Settings shared by all commands */
struct RunConfig {
    double delta = 0.5;
    double rel_tol = 1e-12;
    int max_iters = 10000;
    int restarts = 10;
    std::uint64_t seed = 0;
    double merge_tol = kDefaultMergeTolerance;
    std::optional<std::size_t> quantize;
    bool deterministic = false;
    unsigned threads = 1;
    std::string out;

    void validate() const
    {
        if (!(delta > 0.0) || !std::isfinite(delta)) {
            throw ValidationError("--delta must be positive");
        }
        if (!(rel_tol > 0.0)) {
            throw ValidationError("--tol must be positive");
        }
        if (max_iters < 1) {
            throw ValidationError("--max-iters must be positive");
        }
        if (restarts < 1) {
            throw ValidationError("--restarts must be at least 1");
        }
        if (!(merge_tol >= 0.0)) {
            throw ValidationError("--merge-tol must be nonnegative");
        }
        if (quantize && *quantize < 1) {
            throw ValidationError("--quantize must be at least 1");
        }
    }

    [[nodiscard]] WfrOptions wfr_options() const
    {
        WfrOptions o;
        o.max_iters = max_iters;
        o.rel_tol = rel_tol;
        o.restarts = restarts;
        o.seed = seed;
        o.threads = threads;
        return o;
    }

    [[nodiscard]] io::Json to_json() const
    {
        io::Json j{{"delta", delta},
                   {"rel_tol", rel_tol},
                   {"max_iters", max_iters},
                   {"restarts", restarts},
                   {"seed", seed},
                   {"merge_tol", merge_tol},
                   {"deterministic", deterministic},
                   {"threads", threads}};
        j["quantize"] = quantize ? io::Json(*quantize) : io::Json(nullptr);
        return j;
    }
};

namespace detail
{

class Timer
{
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline void emit(const io::Json& j, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << io::dump(j);
    } else {
        io::write_text(path, io::dump(j));
    }
}

inline DiscreteMeasure maybe_quantize(const DiscreteMeasure& mu, const RunConfig& cfg)
{
    if (!cfg.quantize) {
        return mu;
    }
    QuantizeOptions q;
    q.seed = cfg.seed;
    q.merge_tol = cfg.merge_tol;
    return quantize(mu, *cfg.quantize, q);
}

inline io::Json summary(const DiscreteMeasure& mu)
{
    return io::Json{{"atoms", mu.size()},
                    {"total_mass", total_mass(mu)},
                    {"first_moment", io::detail::to_json(first_moment(mu))}};
}

inline int wfr_exit(const WfrSolution& s, std::ostream& err)
{
    if (!s.converged) {
        err << "warning: solver hit the iteration limit before converging\n";
        return static_cast<int>(ErrorKind::convergence);
    }
    return 0;
}

}  // namespace detail

/**
 * @brief Entry point shared by the srnf executable and the tests
 *
 * Returns the process exit code: 0 success, 2 I/O, 3 parse or validation,
 * 4 geometric precondition, 5 non-convergence.
 */
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"SRNF shape distances as unbalanced optimal transport"};
    app.name("srnf");
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* c) {
        c->add_option("--out", cfg.out, "Output path (default: stdout)");
        c->add_option("--merge-tol", cfg.merge_tol,
                      "Angle (rad) below which atoms are merged")
            ->capture_default_str();
    };
    auto add_solver = [&](CLI::App* c) {
        c->add_option("--delta", cfg.delta, "Length scale delta")->capture_default_str();
        c->add_option("--tol", cfg.rel_tol, "Relative objective tolerance")
            ->capture_default_str();
        c->add_option("--max-iters", cfg.max_iters, "Sweeps per restart")
            ->capture_default_str();
        c->add_option("--restarts", cfg.restarts, "Number of restarts")
            ->capture_default_str();
        c->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
        c->add_option("--threads", cfg.threads, "Worker threads for restarts (0: all)")
            ->capture_default_str();
        c->add_flag("--deterministic", cfg.deterministic,
                    "Omit timing fields so reports are byte-identical");
    };

    // measure
    std::string mesh_a;
    std::string mesh_b;
    auto* c_measure = app.add_subcommand("measure", "Surface area measure of a mesh");
    c_measure->add_option("mesh", mesh_a, "OFF or OBJ mesh")->required();
    add_common(c_measure);

    // distance
    std::size_t quantize_cap = 0;
    auto* c_distance = app.add_subcommand("distance", "Shape distance between two meshes");
    c_distance->add_option("mesh_a", mesh_a)->required();
    c_distance->add_option("mesh_b", mesh_b)->required();
    c_distance->add_option("--quantize", quantize_cap, "Cap on atoms per measure");
    add_common(c_distance);
    add_solver(c_distance);

    // wfr
    std::string meas_a;
    std::string meas_b;
    std::string coupling_path;
    std::vector<double> sweep;
    auto* c_wfr = app.add_subcommand("wfr", "WFR distance between two measure files");
    c_wfr->add_option("measure_a", meas_a)->required();
    c_wfr->add_option("measure_b", meas_b)->required();
    c_wfr->add_option("--quantize", quantize_cap, "Cap on atoms per measure");
    c_wfr->add_option("--coupling", coupling_path, "Write the coupling as JSON");
    c_wfr->add_option("--sweep", sweep, "Also report distances for these deltas")
        ->delimiter(',');
    add_common(c_wfr);
    add_solver(c_wfr);

    // oracle
    auto* c_oracle = app.add_subcommand("oracle", "Brute-force WFR for tiny measures");
    c_oracle->add_option("measure_a", meas_a)->required();
    c_oracle->add_option("measure_b", meas_b)->required();
    c_oracle->add_option("--delta", cfg.delta)->capture_default_str();
    c_oracle->add_option("--out", cfg.out);

    // minkowski
    std::string report_path;
    double area_tol = 1e-6;
    auto* c_mink = app.add_subcommand("minkowski", "Convex polytope with a given area measure");
    c_mink->add_option("measure", meas_a)->required();
    c_mink->add_option("--out", cfg.out, "Polytope mesh (OFF/OBJ)")->required();
    c_mink->add_option("--report", report_path, "Report path (default: stdout)");
    c_mink->add_option("--area-tol", area_tol)->capture_default_str();
    c_mink->add_option("--merge-tol", cfg.merge_tol)->capture_default_str();

    // convexify
    auto* c_conv = app.add_subcommand("convexify", "Convex body with the same area measure");
    c_conv->add_option("mesh", mesh_a)->required();
    c_conv->add_option("--out", cfg.out, "Polytope mesh (OFF/OBJ)")->required();
    c_conv->add_option("--report", report_path, "Report path (default: stdout)");
    c_conv->add_option("--area-tol", area_tol)->capture_default_str();
    c_conv->add_option("--merge-tol", cfg.merge_tol)->capture_default_str();
    c_conv->add_option("--delta", cfg.delta)->capture_default_str();
    c_conv->add_option("--restarts", cfg.restarts)->capture_default_str();
    c_conv->add_option("--seed", cfg.seed)->capture_default_str();

    // check-closed
    double closure_tol = 1e-9;
    auto* c_closed = app.add_subcommand("check-closed", "Closedness and closure defect");
    c_closed->add_option("mesh", mesh_a)->required();
    c_closed->add_option("--tol", closure_tol, "Relative defect tolerance")
        ->capture_default_str();
    c_closed->add_option("--out", cfg.out);

    // lift
    std::string template_path;
    auto* c_lift = app.add_subcommand("lift", "Piecewise-constant field realizing a measure");
    c_lift->add_option("measure", meas_a)->required();
    c_lift->add_option("template", template_path, "Template mesh")->required();
    c_lift->add_option("--delta", cfg.delta)->capture_default_str();
    c_lift->add_option("--out", cfg.out);

    // generate
    std::string shape;
    int freq = 10;
    std::size_t points = 30;
    auto* c_gen = app.add_subcommand("generate", "Write a built-in test mesh");
    c_gen->add_option("shape", shape,
                      "cube | tetrahedron | sphere | bumpy | hemisphere | disk | hull")
        ->required();
    c_gen->add_option("--freq", freq, "Sphere subdivision frequency")->capture_default_str();
    c_gen->add_option("--points", points, "Points for a random hull")->capture_default_str();
    c_gen->add_option("--seed", cfg.seed)->capture_default_str();
    c_gen->add_option("--out", cfg.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ErrorKind::validation);
    }

    try {
        if (quantize_cap > 0) {
            cfg.quantize = quantize_cap;
        }
        cfg.validate();
        const detail::Timer timer;
        auto stamp = [&](io::Json& j) {
            if (!cfg.deterministic) {
                j["elapsed_seconds"] = timer.seconds();
            }
        };
        MeshOptions mopts;

        if (*c_measure) {
            const auto mu = area_measure(load_mesh(mesh_a, mopts), cfg.merge_tol);
            if (cfg.out.empty()) {
                out << io::write_measure(mu);
                const Vec3 m = first_moment(mu);
                err << "atoms " << mu.size() << ", total mass " << total_mass(mu)
                    << ", first moment (" << m.x() << ", " << m.y() << ", " << m.z()
                    << ")\n";
            } else {
                io::write_text(cfg.out, io::write_measure(mu));
                out << io::dump(detail::summary(mu));
            }
            return 0;
        }

        if (*c_distance) {
            const auto mu = area_measure(load_mesh(mesh_a, mopts), cfg.merge_tol);
            const auto nu = area_measure(load_mesh(mesh_b, mopts), cfg.merge_tol);
            const auto qa = detail::maybe_quantize(mu, cfg);
            const auto qb = detail::maybe_quantize(nu, cfg);
            const auto sol = solve_wfr(qa, qb, cfg.delta, cfg.wfr_options());
            io::Json rep = io::wfr_report(sol);
            rep["config"] = cfg.to_json();
            rep["inputs"] = io::Json{{"mesh_a", mesh_a},
                                     {"mesh_b", mesh_b},
                                     {"atoms_a", qa.size()},
                                     {"atoms_b", qb.size()}};
            stamp(rep);
            detail::emit(rep, cfg.out, out);
            return detail::wfr_exit(sol, err);
        }

        if (*c_wfr) {
            const auto mu = normalize(io::load_measure(meas_a), cfg.merge_tol);
            const auto nu = normalize(io::load_measure(meas_b), cfg.merge_tol);
            const auto qa = detail::maybe_quantize(mu, cfg);
            const auto qb = detail::maybe_quantize(nu, cfg);
            const auto sol = solve_wfr(qa, qb, cfg.delta, cfg.wfr_options());
            io::Json rep = io::wfr_report(sol);
            rep["config"] = cfg.to_json();
            int code = detail::wfr_exit(sol, err);
            if (!sweep.empty()) {
                io::Json table = io::Json::array();
                for (double d : sweep) {
                    const auto s = solve_wfr(qa, qb, d, cfg.wfr_options());
                    table.push_back(io::Json{{"delta", d},
                                             {"distance", s.distance},
                                             {"converged", s.converged}});
                    if (!s.converged) {
                        code = static_cast<int>(ErrorKind::convergence);
                    }
                }
                rep["sweep"] = std::move(table);
            }
            stamp(rep);
            if (!coupling_path.empty()) {
                io::write_text(coupling_path, io::dump(io::coupling_to_json(sol, qa, qb)));
            }
            detail::emit(rep, cfg.out, out);
            return code;
        }

        if (*c_oracle) {
            const auto mu = normalize(io::load_measure(meas_a));
            const auto nu = normalize(io::load_measure(meas_b));
            io::Json rep{{"distance", oracle_wfr(mu, nu, cfg.delta)},
                         {"delta", cfg.delta},
                         {"method", "grid+pairwise line search"}};
            detail::emit(rep, cfg.out, out);
            return 0;
        }

        if (*c_mink) {
            const auto mu = normalize(io::load_measure(meas_a), cfg.merge_tol);
            MinkowskiOptions mo;
            mo.area_tol = area_tol;
            const auto res = solve_minkowski(mu, mo);
            save_mesh(cfg.out, res.polytope.hull.to_trimesh());
            io::Json rep{{"facet_area_max_rel_err", res.residual},
                         {"iterations", res.iterations},
                         {"volume", res.polytope.volume},
                         {"facets", res.polytope.hull.facets.size()},
                         {"vertices", res.polytope.hull.vertices.size()},
                         {"config", cfg.to_json()}};
            detail::emit(rep, report_path, out);
            return 0;
        }

        if (*c_conv) {
            ConvexifyOptions co;
            co.delta = cfg.delta;
            co.merge_tol = cfg.merge_tol;
            co.minkowski.area_tol = area_tol;
            co.wfr = cfg.wfr_options();
            const auto res = convexify(load_mesh(mesh_a, mopts), co);
            save_mesh(cfg.out, res.polytope.hull.to_trimesh());
            io::Json rep = io::convexify_report(res.report);
            rep["config"] = cfg.to_json();
            detail::emit(rep, report_path, out);
            return 0;
        }

        if (*c_closed) {
            const auto mesh = load_mesh(mesh_a, mopts);
            const auto rep_edges = closedness_report(mesh);
            const auto q = srnf_transform(mesh);
            const Vec3 defect = closure_defect(q);
            const double area = q.total_area();
            const bool ok = rep_edges.closed && defect.norm() <= closure_tol * area;
            io::Json bad = io::Json::array();
            for (std::size_t k = 0; k < std::min<std::size_t>(rep_edges.issues.size(), 50); ++k) {
                const auto& e = rep_edges.issues[k];
                bad.push_back(io::Json{{"edge", {e.a, e.b}},
                                       {"forward", e.forward},
                                       {"backward", e.backward}});
            }
            io::Json rep{{"closed", rep_edges.closed},
                         {"bad_edge_count", rep_edges.issues.size()},
                         {"bad_edges", std::move(bad)},
                         {"closure_defect", io::detail::to_json(defect)},
                         {"closure_defect_norm", defect.norm()},
                         {"total_area", area},
                         {"tol", closure_tol},
                         {"passes", ok}};
            detail::emit(rep, cfg.out, out);
            return ok ? 0 : static_cast<int>(ErrorKind::geometry);
        }

        if (*c_lift) {
            const auto mu = io::load_measure(meas_a);
            const auto tmpl = load_mesh(template_path, mopts);
            const auto field = lift(mu, tmpl, cfg.delta);
            detail::emit(io::cone_field_to_json(field), cfg.out, out);
            return 0;
        }

        if (*c_gen) {
            TriMesh mesh;
            if (shape == "cube") {
                mesh = shapes::cube();
            } else if (shape == "tetrahedron") {
                mesh = shapes::tetrahedron();
            } else if (shape == "sphere") {
                mesh = shapes::geodesic_sphere(freq);
            } else if (shape == "bumpy") {
                mesh = shapes::bumpy_sphere(freq);
            } else if (shape == "hemisphere") {
                mesh = shapes::hemisphere();
            } else if (shape == "disk") {
                mesh = shapes::disk();
            } else if (shape == "hull") {
                mesh = shapes::random_convex_hull(points, cfg.seed).to_trimesh();
            } else {
                throw ValidationError("unknown shape '" + shape + "'");
            }
            if (cfg.out.empty()) {
                write_mesh(out, mesh, MeshFormat::OFF);
            } else {
                save_mesh(cfg.out, mesh);
            }
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return 1;
    }
    return 0;
}

}  // namespace srnf::cli

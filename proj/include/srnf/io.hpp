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
#include "srnf/manifold.hpp"
#include "srnf/measure.hpp"
#include "srnf/minkowski.hpp"
#include "srnf/srnf.hpp"
#include "srnf/wfr.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace srnf::io
{

using Json = nlohmann::ordered_json;

namespace detail
{

inline const Json& member(const Json& j, const std::string& key,
                          const std::string& path)
{
    if (!j.is_object()) {
        throw ValidationError(path, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw ValidationError(path + "." + key, "missing");
    }
    return *it;
}

inline double number(const Json& j, const std::string& path)
{
    if (!j.is_number()) {
        throw ValidationError(path, "expected a number");
    }
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
        throw ValidationError(path, "expected a finite number");
    }
    return x;
}

inline Vec3 vec3(const Json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 3) {
        throw ValidationError(path, "expected an array of 3 numbers");
    }
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]"),
            number(j[2], path + "[2]")};
}

inline Json to_json(const Vec3& v)
{
    return Json::array({v.x(), v.y(), v.z()});
}

inline Json parse_text(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError("$", std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace detail

inline std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << text;
    if (!out) {
        throw IoError("failed writing " + path);
    }
}

namespace detail
{
// Two-space indentation, but arrays of scalars stay on one line.
inline void pretty(const Json& j, int depth, std::string& out)
{
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    if (j.is_object() && !j.empty()) {
        out += "{\n";
        std::size_t k = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++k) {
            out += pad + Json(it.key()).dump() + ": ";
            pretty(it.value(), depth + 1, out);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += close + "}";
        return;
    }
    if (j.is_array() && !j.empty()) {
        const bool flat = std::none_of(j.begin(), j.end(), [](const Json& x) {
            return x.is_structured();
        });
        if (flat) {
            out += j.dump(-1, ' ', false, Json::error_handler_t::strict);
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            out += pad;
            pretty(j[k], depth + 1, out);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += close + "]";
        return;
    }
    out += j.dump();
}
}  // namespace detail

inline std::string dump(const Json& j)
{
    std::string out;
    detail::pretty(j, 0, out);
    return out + "\n";
}

// ---- measures ------------------------------------------------------------

inline Json measure_to_json(const DiscreteMeasure& mu)
{
    std::vector<Atom> atoms = mu.atoms();
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return lex_less(a.u, b.u); });
    Json arr = Json::array();
    for (const auto& a : atoms) {
        arr.push_back(Json{{"u", detail::to_json(a.u)}, {"mass", a.mass}});
    }
    return Json{{"manifold", to_string(mu.manifold())}, {"atoms", std::move(arr)}};
}

inline DiscreteMeasure measure_from_json(const Json& j)
{
    const auto& man = detail::member(j, "manifold", "$");
    if (!man.is_string() || (man != "S2" && man != "S1")) {
        throw ValidationError("$.manifold", "expected \"S2\" or \"S1\"");
    }
    const Manifold m = man == "S2" ? Manifold::S2 : Manifold::S1;
    const auto& arr = detail::member(j, "atoms", "$");
    if (!arr.is_array()) {
        throw ValidationError("$.atoms", "expected an array");
    }
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = "$.atoms[" + std::to_string(i) + "]";
        const Vec3 u = detail::vec3(detail::member(arr[i], "u", p), p + ".u");
        const double mass = detail::number(detail::member(arr[i], "mass", p), p + ".mass");
        if (!on_manifold(m, u)) {
            throw ValidationError(p + ".u", std::string("not on ") + to_string(m));
        }
        if (!(mass > 0.0)) {
            throw ValidationError(p + ".mass", "must be positive");
        }
        atoms.push_back({u, mass});
    }
    return {m, std::move(atoms)};
}

inline std::string write_measure(const DiscreteMeasure& mu)
{
    return dump(measure_to_json(mu));
}

inline DiscreteMeasure read_measure(const std::string& text)
{
    return measure_from_json(detail::parse_text(text));
}

inline DiscreteMeasure load_measure(const std::string& path)
{
    return read_measure(read_text(path));
}

// ---- SRNF fields ---------------------------------------------------------

inline Json field_to_json(const SrnfField& q)
{
    Json arr = Json::array();
    for (const auto& f : q.faces()) {
        arr.push_back(Json{{"n", detail::to_json(f.n)},
                           {"area", f.area},
                           {"param_area", f.param_area}});
    }
    return Json{{"faces", std::move(arr)}};
}

inline SrnfField field_from_json(const Json& j)
{
    const auto& arr = detail::member(j, "faces", "$");
    if (!arr.is_array()) {
        throw ValidationError("$.faces", "expected an array");
    }
    std::vector<SrnfFace> faces;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string p = "$.faces[" + std::to_string(k) + "]";
        SrnfFace f;
        f.n = detail::vec3(detail::member(arr[k], "n", p), p + ".n");
        f.area = detail::number(detail::member(arr[k], "area", p), p + ".area");
        f.param_area = arr[k].contains("param_area")
                           ? detail::number(arr[k]["param_area"], p + ".param_area")
                           : 1.0;
        faces.push_back(f);
    }
    try {
        return SrnfField(std::move(faces));
    } catch (const ValidationError& e) {
        if (e.path().empty()) {
            throw;
        }
        const std::string what = e.what();
        throw ValidationError("$." + e.path(), what.substr(e.path().size() + 2));
    }
}

// ---- cone fields (lift output) -------------------------------------------

inline Json cone_field_to_json(const ConeField& q)
{
    Json arr = Json::array();
    for (const auto& f : q.faces) {
        Json face;
        if (f.value.is_apex()) {
            face["base"] = nullptr;
            face["q_hat"] = 0.0;
        } else {
            face["base"] = detail::to_json(*f.value.base);
            face["q_hat"] = f.value.radius;
        }
        face["param_area"] = f.param_area;
        arr.push_back(std::move(face));
    }
    return Json{{"manifold", to_string(q.manifold)},
                {"delta", q.delta},
                {"faces", std::move(arr)}};
}

// ---- solver reports ------------------------------------------------------

inline Json wfr_report(const WfrSolution& s)
{
    return Json{{"distance", s.distance},     {"delta", s.delta},
                {"objective", s.objective},   {"iterations", s.iterations},
                {"restarts", s.restarts_used}, {"converged", s.converged},
                {"gap_bound", s.gap_bound}};
}

inline Json coupling_to_json(const WfrSolution& s, const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu)
{
    auto matrix = [](const Eigen::MatrixXd& M) {
        Json rows = Json::array();
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            Json row = Json::array();
            for (Eigen::Index j = 0; j < M.cols(); ++j) {
                row.push_back(M(i, j));
            }
            rows.push_back(std::move(row));
        }
        return rows;
    };
    auto atoms = [](const DiscreteMeasure& m) {
        Json arr = Json::array();
        for (const auto& a : m.atoms()) {
            arr.push_back(Json{{"u", detail::to_json(a.u)}, {"mass", a.mass}});
        }
        return arr;
    };
    return Json{{"note", "row 0 / column 0 are creation / destruction slots"},
                {"rows", atoms(mu)},
                {"columns", atoms(nu)},
                {"A", matrix(s.coupling.A)},
                {"B", matrix(s.coupling.B)}};
}

inline Json convexify_report(const ConvexifyReport& r)
{
    return Json{{"wfr_residual", r.wfr_residual},
                {"hausdorff", r.hausdorff},
                {"facet_area_max_rel_err", r.facet_area_max_rel_err},
                {"iterations", r.iterations},
                {"delta", r.delta},
                {"total_mass", r.total_mass},
                {"diameter", r.diameter},
                {"atoms", r.atoms}};
}

}  // namespace srnf::io

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

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <cctype>
#include <vector>

namespace srnf
{

using Face = std::array<std::size_t, 3>;

struct MeshOptions {
    /** Faces with |(p1-p0)x(p2-p0)| below factor * bbox_diagonal^2 are
     * rejected */
    double degeneracy_factor = 1e-12;
};

/**
 * @brief Indexed triangle surface, faces counterclockwise seen from outside
 *
 * Immutable after construction. The constructor validates indices and
 * rejects degenerate faces.
 */
class TriMesh
{
public:
    TriMesh() = default;

    TriMesh(std::vector<Vec3> vertices,
            std::vector<Face> faces,
            const MeshOptions& opts = {})
        : vertices_(std::move(vertices)), faces_(std::move(faces))
    {
        for (std::size_t v = 0; v < vertices_.size(); ++v) {
            if (!vertices_[v].allFinite()) {
                throw ValidationError(
                    "vertex " + std::to_string(v) + " is not finite");
            }
        }
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            for (auto idx : faces_[f]) {
                if (idx >= vertices_.size()) {
                    throw ValidationError(
                        "face " + std::to_string(f) + " references vertex " +
                        std::to_string(idx) + " but the mesh has " +
                        std::to_string(vertices_.size()) + " vertices");
                }
            }
        }
        const double diag = bbox_diagonal();
        eps_deg_ = opts.degeneracy_factor * diag * diag;
        std::vector<std::size_t> bad;
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            if (cross(f).norm() < eps_deg_ || faces_[f][0] == faces_[f][1] ||
                faces_[f][1] == faces_[f][2] || faces_[f][0] == faces_[f][2]) {
                bad.push_back(f);
            }
        }
        if (!bad.empty()) {
            throw DegenerateFaceError(std::move(bad));
        }
    }

    [[nodiscard]] const std::vector<Vec3>& vertices() const noexcept
    {
        return vertices_;
    }
    [[nodiscard]] const std::vector<Face>& faces() const noexcept
    {
        return faces_;
    }
    [[nodiscard]] std::size_t vertex_count() const noexcept
    {
        return vertices_.size();
    }
    [[nodiscard]] std::size_t face_count() const noexcept
    {
        return faces_.size();
    }
    [[nodiscard]] bool empty() const noexcept { return faces_.empty(); }

    /** @brief Degeneracy threshold on the face cross-product norm */
    [[nodiscard]] double degeneracy_threshold() const noexcept
    {
        return eps_deg_;
    }

    [[nodiscard]] double bbox_diagonal() const
    {
        if (vertices_.empty()) {
            return 0.0;
        }
        Vec3 lo = vertices_.front();
        Vec3 hi = vertices_.front();
        for (const auto& p : vertices_) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        return (hi - lo).norm();
    }

    /** @brief Unnormalized face normal (p1-p0)x(p2-p0) */
    [[nodiscard]] Vec3 cross(std::size_t f) const
    {
        const auto& t = faces_[f];
        const Vec3& p0 = vertices_[t[0]];
        return (vertices_[t[1]] - p0).cross(vertices_[t[2]] - p0);
    }

    /** @brief Copy with every vertex mapped to R*x + t */
    [[nodiscard]] TriMesh transformed(const Mat3& rotation,
                                      const Vec3& translation) const
    {
        std::vector<Vec3> v;
        v.reserve(vertices_.size());
        for (const auto& p : vertices_) {
            v.push_back(rotation * p + translation);
        }
        return TriMesh(std::move(v), faces_);
    }

private:
    std::vector<Vec3> vertices_;
    std::vector<Face> faces_;
    double eps_deg_{0.0};
};

struct FaceGeometry {
    Vec3 normal;
    double area;
};

/** @brief Outward unit normal and area of one face */
inline FaceGeometry face_geometry(const TriMesh& mesh, std::size_t face)
{
    if (face >= mesh.face_count()) {
        throw ValidationError("face index " + std::to_string(face) +
                              " out of range");
    }
    const Vec3 c = mesh.cross(face);
    const double len = c.norm();
    if (len < mesh.degeneracy_threshold() || len == 0.0) {
        throw DegenerateFaceError({face});
    }
    return {c / len, 0.5 * len};
}

/** @brief Total surface area of the mesh */
inline double surface_area(const TriMesh& mesh)
{
    double a = 0.0;
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        a += 0.5 * mesh.cross(f).norm();
    }
    return a;
}

/** @brief Offending undirected edge found by the closedness check */
struct EdgeIssue {
    std::size_t a;
    std::size_t b;
    std::size_t forward;   // occurrences as a->b
    std::size_t backward;  // occurrences as b->a
};

struct ClosednessReport {
    bool closed{true};
    std::vector<EdgeIssue> issues;
};

/** @brief Lists every edge that is not shared by exactly two opposite faces */
inline ClosednessReport closedness_report(const TriMesh& mesh)
{
    // key (min, max) -> (count min->max, count max->min)
    std::map<std::pair<std::size_t, std::size_t>,
             std::pair<std::size_t, std::size_t>>
        edges;
    for (const auto& f : mesh.faces()) {
        for (int k = 0; k < 3; ++k) {
            const std::size_t u = f[k];
            const std::size_t v = f[(k + 1) % 3];
            auto& e = edges[{std::min(u, v), std::max(u, v)}];
            if (u < v) {
                ++e.first;
            } else {
                ++e.second;
            }
        }
    }
    ClosednessReport report;
    report.closed = !mesh.empty();
    for (const auto& [key, count] : edges) {
        if (count.first != 1 || count.second != 1) {
            report.closed = false;
            report.issues.push_back(
                {key.first, key.second, count.first, count.second});
        }
    }
    return report;
}

inline bool is_closed(const TriMesh& mesh)
{
    return closedness_report(mesh).closed;
}

enum class MeshFormat { OFF, OBJ };

/** @brief Format from a file extension (.off / .obj, case-insensitive) */
inline MeshFormat mesh_format_from_path(const std::string& path)
{
    const auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == "off") {
        return MeshFormat::OFF;
    }
    if (ext == "obj") {
        return MeshFormat::OBJ;
    }
    throw ValidationError("unsupported mesh extension in '" + path +
                          "' (expected .off or .obj)");
}

namespace detail
{

inline std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

inline double parse_double(std::string_view tok, std::size_t line)
{
    double v = 0.0;
    const char* first = tok.data();
    if (!tok.empty() && tok.front() == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("invalid number '" + std::string(tok) + "'", line);
    }
    return v;
}

inline long long parse_int(std::string_view tok, std::size_t line)
{
    long long v = 0;
    const char* first = tok.data();
    if (!tok.empty() && tok.front() == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("invalid integer '" + std::string(tok) + "'", line);
    }
    return v;
}

inline std::string_view strip_comment(std::string_view line)
{
    const auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

// Fan rule: polygon (v0, v1, ..., vk) -> (v0, vi, vi+1).
inline void fan(const std::vector<std::size_t>& poly, std::vector<Face>& out)
{
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        out.push_back({poly[0], poly[i], poly[i + 1]});
    }
}

inline TriMesh parse_off(std::istream& in, const MeshOptions& opts)
{
    std::string raw;
    std::size_t lineno = 0;

    // Returns the next non-empty, comment-stripped token list.
    auto next_tokens = [&](std::vector<std::string_view>& toks) -> bool {
        while (std::getline(in, raw)) {
            ++lineno;
            toks = split_ws(strip_comment(raw));
            if (!toks.empty()) {
                return true;
            }
        }
        return false;
    };

    std::vector<std::string_view> toks;
    if (!next_tokens(toks)) {
        throw ParseError("empty OFF input", lineno);
    }
    if (toks[0] != "OFF") {
        throw ParseError("expected 'OFF' header", lineno);
    }
    std::vector<std::string_view> counts(toks.begin() + 1, toks.end());
    if (counts.empty()) {
        if (!next_tokens(toks)) {
            throw ParseError("missing counts line", lineno);
        }
        counts = toks;
    }
    if (counts.size() < 2 || counts.size() > 3) {
        throw ParseError("counts line must be 'V F E'", lineno);
    }
    const long long nv = parse_int(counts[0], lineno);
    const long long nf = parse_int(counts[1], lineno);
    if (nv < 0 || nf < 0) {
        throw ParseError("negative element count", lineno);
    }
    std::vector<Vec3> vertices;
    vertices.reserve(static_cast<std::size_t>(nv));
    for (long long v = 0; v < nv; ++v) {
        if (!next_tokens(toks)) {
            throw ParseError("unexpected end of input in vertex list", lineno);
        }
        if (toks.size() < 3) {
            throw ParseError("vertex line needs 3 coordinates", lineno);
        }
        vertices.emplace_back(parse_double(toks[0], lineno),
                              parse_double(toks[1], lineno),
                              parse_double(toks[2], lineno));
    }
    std::vector<Face> faces;
    faces.reserve(static_cast<std::size_t>(nf));
    std::vector<std::size_t> poly;
    for (long long f = 0; f < nf; ++f) {
        if (!next_tokens(toks)) {
            throw ParseError("unexpected end of input in face list", lineno);
        }
        const long long k = parse_int(toks[0], lineno);
        if (k < 3 || static_cast<std::size_t>(k) + 1 > toks.size()) {
            throw ParseError("face line must be 'n i j k ...' with n >= 3",
                             lineno);
        }
        poly.clear();
        for (long long i = 1; i <= k; ++i) {
            const long long idx = parse_int(toks[static_cast<std::size_t>(i)], lineno);
            if (idx < 0 || idx >= nv) {
                throw ValidationError(
                    "line " + std::to_string(lineno) + ": face index " +
                    std::to_string(idx) + " out of range for " +
                    std::to_string(nv) + " vertices");
            }
            poly.push_back(static_cast<std::size_t>(idx));
        }
        fan(poly, faces);
    }
    return TriMesh(std::move(vertices), std::move(faces), opts);
}

inline TriMesh parse_obj(std::istream& in, const MeshOptions& opts)
{
    std::string raw;
    std::size_t lineno = 0;
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    std::vector<std::size_t> poly;
    while (std::getline(in, raw)) {
        ++lineno;
        auto toks = split_ws(strip_comment(raw));
        if (toks.empty()) {
            continue;
        }
        if (toks[0] == "v") {
            if (toks.size() < 4) {
                throw ParseError("vertex line needs 3 coordinates", lineno);
            }
            vertices.emplace_back(parse_double(toks[1], lineno),
                                  parse_double(toks[2], lineno),
                                  parse_double(toks[3], lineno));
        } else if (toks[0] == "f") {
            if (toks.size() < 4) {
                throw ParseError("face needs at least 3 vertices", lineno);
            }
            poly.clear();
            for (std::size_t i = 1; i < toks.size(); ++i) {
                // "i", "i/t", "i//n", "i/t/n"
                auto tok = toks[i];
                tok = tok.substr(0, tok.find('/'));
                long long idx = parse_int(tok, lineno);
                const auto n = static_cast<long long>(vertices.size());
                if (idx < 0) {
                    idx = n + idx + 1;
                }
                if (idx < 1 || idx > n) {
                    throw ValidationError(
                        "line " + std::to_string(lineno) + ": face index " +
                        std::string(toks[i]) + " out of range for " +
                        std::to_string(n) + " vertices");
                }
                poly.push_back(static_cast<std::size_t>(idx - 1));
            }
            fan(poly, faces);
        }
        // other records (vn, vt, g, o, s, usemtl, ...) carry nothing we use
    }
    return TriMesh(std::move(vertices), std::move(faces), opts);
}

/** @brief Shortest decimal representation that round-trips */
inline std::string format_double(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace detail

inline TriMesh load_mesh(std::istream& in,
                         MeshFormat format,
                         const MeshOptions& opts = {})
{
    return format == MeshFormat::OFF ? detail::parse_off(in, opts)
                                     : detail::parse_obj(in, opts);
}

inline TriMesh load_mesh(const std::string& path, const MeshOptions& opts = {})
{
    const MeshFormat format = mesh_format_from_path(path);
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open mesh file '" + path + "'");
    }
    return load_mesh(in, format, opts);
}

/** @brief Raw vertex/face data to write, independent of the mesh kind */
inline void write_mesh(std::ostream& out,
                       const std::vector<Vec3>& vertices,
                       const std::vector<Face>& faces,
                       MeshFormat format)
{
    if (faces.empty()) {
        throw ValidationError("cannot write an empty mesh");
    }
    if (format == MeshFormat::OFF) {
        out << "OFF\n"
            << vertices.size() << ' ' << faces.size() << " 0\n";
        for (const auto& p : vertices) {
            out << detail::format_double(p.x()) << ' '
                << detail::format_double(p.y()) << ' '
                << detail::format_double(p.z()) << '\n';
        }
        for (const auto& f : faces) {
            out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
        }
    } else {
        for (const auto& p : vertices) {
            out << "v " << detail::format_double(p.x()) << ' '
                << detail::format_double(p.y()) << ' '
                << detail::format_double(p.z()) << '\n';
        }
        for (const auto& f : faces) {
            out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1
                << '\n';
        }
    }
}

inline void write_mesh(std::ostream& out, const TriMesh& mesh, MeshFormat format)
{
    write_mesh(out, mesh.vertices(), mesh.faces(), format);
}

inline std::string write_mesh(const TriMesh& mesh, MeshFormat format)
{
    std::ostringstream os;
    write_mesh(os, mesh, format);
    return os.str();
}

inline void save_mesh(const std::string& path,
                      const std::vector<Vec3>& vertices,
                      const std::vector<Face>& faces)
{
    const MeshFormat format = mesh_format_from_path(path);
    std::ostringstream os;
    write_mesh(os, vertices, faces, format);
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write mesh file '" + path + "'");
    }
    out << os.str();
    if (!out) {
        throw IoError("failed writing mesh file '" + path + "'");
    }
}

inline void save_mesh(const std::string& path, const TriMesh& mesh)
{
    save_mesh(path, mesh.vertices(), mesh.faces());
}

}  // namespace srnf

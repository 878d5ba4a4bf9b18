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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace srnf
{

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

/** @brief Error categories; the numeric values are the CLI exit codes */
enum class ErrorKind {
    io = 2,
    validation = 3,
    geometry = 4,
    convergence = 5
};

/** @brief Base exception for every failure raised by the library */
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind)
    {
    }
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] int exit_code() const noexcept
    {
        return static_cast<int>(kind_);
    }

private:
    ErrorKind kind_;
};

/** @brief File could not be opened, read or written */
class IoError : public Error
{
public:
    explicit IoError(const std::string& msg) : Error(ErrorKind::io, msg) {}
};

/** @brief Malformed text input; carries the 1-based line number */
class ParseError : public Error
{
public:
    ParseError(const std::string& msg, std::size_t line)
        : Error(ErrorKind::validation,
                "line " + std::to_string(line) + ": " + msg),
          line_(line)
    {
    }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/** @brief Contract violation on otherwise well-formed data */
class ValidationError : public Error
{
public:
    explicit ValidationError(const std::string& msg)
        : Error(ErrorKind::validation, msg)
    {
    }
    ValidationError(const std::string& path, const std::string& msg)
        : Error(ErrorKind::validation, path + ": " + msg), path_(path)
    {
    }
    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/** @brief Geometric precondition failure (degeneracy, open mesh, ...) */
class GeometryError : public Error
{
public:
    explicit GeometryError(const std::string& msg)
        : Error(ErrorKind::geometry, msg)
    {
    }
};

/** @brief One or more faces have (near) zero area */
class DegenerateFaceError : public GeometryError
{
public:
    explicit DegenerateFaceError(std::vector<std::size_t> faces)
        : GeometryError(describe(faces)), faces_(std::move(faces))
    {
    }
    [[nodiscard]] const std::vector<std::size_t>& faces() const noexcept
    {
        return faces_;
    }

private:
    static std::string describe(const std::vector<std::size_t>& faces)
    {
        std::string msg = "degenerate face(s):";
        const std::size_t shown = std::min<std::size_t>(faces.size(), 20);
        for (std::size_t i = 0; i < shown; ++i) {
            msg += " " + std::to_string(faces[i]);
        }
        if (shown < faces.size()) {
            msg += " ... (" + std::to_string(faces.size()) + " total)";
        }
        return msg;
    }
    std::vector<std::size_t> faces_;
};

/** @brief An iterative solver stopped before reaching its tolerance */
class ConvergenceError : public Error
{
public:
    ConvergenceError(const std::string& msg, double residual)
        : Error(ErrorKind::convergence, msg), residual_(residual)
    {
    }
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/** @brief Manifolds on which measures may live */
enum class Manifold { S2, S1 };

inline const char* to_string(Manifold m)
{
    return m == Manifold::S2 ? "S2" : "S1";
}

/** @brief Angle between two vectors in [0, pi], accurate near 0 and pi */
inline double angle_between(const Vec3& u, const Vec3& v)
{
    return std::atan2(u.cross(v).norm(), u.dot(v));
}

/** @brief Unit tolerance used for manifold membership checks */
inline constexpr double kUnitTolerance = 1e-12;

inline bool on_manifold(Manifold m, const Vec3& u)
{
    if (!u.allFinite()) {
        return false;
    }
    if (m == Manifold::S1 && std::abs(u.z()) > kUnitTolerance) {
        return false;
    }
    return std::abs(u.norm() - 1.0) <= kUnitTolerance;
}

// Minimal stderr logging controlled by SRNF_LOG={error,info,debug}.
enum class LogLevel { error = 0, info = 1, debug = 2 };

inline LogLevel log_level()
{
    static const LogLevel level = [] {
        const char* env = std::getenv("SRNF_LOG");
        if (env == nullptr) {
            return LogLevel::error;
        }
        const std::string s(env);
        if (s == "debug") {
            return LogLevel::debug;
        }
        if (s == "info") {
            return LogLevel::info;
        }
        return LogLevel::error;
    }();
    return level;
}

inline void log(LogLevel level, const std::string& msg)
{
    if (static_cast<int>(level) <= static_cast<int>(log_level())) {
        static const char* names[] = {"error", "info", "debug"};
        std::cerr << "[srnf:" << names[static_cast<int>(level)] << "] " << msg
                  << '\n';
    }
}

}  // namespace srnf

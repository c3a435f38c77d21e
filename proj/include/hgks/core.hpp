#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hgks {

using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat5 = Eigen::Matrix<double, 5, 5>;
/// Cartesian gradient of the five conserved variables; row = direction.
using Grad5 = Eigen::Matrix<double, 3, 5>;

inline constexpr int kNumVars = 5;

/// Raised for states with non-positive density, internal energy or temperature.
class UnphysicalState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, long step = -1, long cell = -1)
        : std::runtime_error(decorate(what, step, cell)), step_(step), cell_(cell) {}

    long step() const noexcept { return step_; }
    long cell() const noexcept { return cell_; }

private:
    static std::string decorate(const std::string& what, long step, long cell) {
        std::string s = what;
        if (step >= 0) s += " (step " + std::to_string(step) + ")";
        if (cell >= 0) s += " (cell " + std::to_string(cell) + ")";
        return s;
    }
    long step_;
    long cell_;
};

/// Perfect gas with ratio of specific heats gamma. The internal degrees of
/// freedom N = (5 - 3 gamma) / (gamma - 1) need not be an integer.
struct Gas {
    double gamma = 1.4;

    constexpr double internal_dof() const { return (5.0 - 3.0 * gamma) / (gamma - 1.0); }
    /// N + 3: total number of quadratic degrees of freedom of a particle.
    constexpr double total_dof() const { return internal_dof() + 3.0; }
};

/// Orthonormal face frame; `n` is the face normal (owner to neighbour).
struct Frame {
    Vec3 n = Vec3::UnitX();
    Vec3 t1 = Vec3::UnitY();
    Vec3 t2 = Vec3::UnitZ();

    Mat3 rows() const {
        Mat3 r;
        r.row(0) = n.transpose();
        r.row(1) = t1.transpose();
        r.row(2) = t2.transpose();
        return r;
    }

    /// Frame whose first axis is `normal`. The second axis is the projection
    /// of the global axis least aligned with the normal.
    static Frame from_normal(const Vec3& normal) {
        Frame f;
        f.n = normal.normalized();
        Eigen::Index k = 0;
        f.n.cwiseAbs().minCoeff(&k);
        Vec3 axis = Vec3::Zero();
        axis[k] = 1.0;
        f.t1 = (axis - axis.dot(f.n) * f.n).normalized();
        f.t2 = f.n.cross(f.t1);
        return f;
    }
};

inline bool all_finite(const Vec5& v) { return v.allFinite(); }

}  // namespace hgks

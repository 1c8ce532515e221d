#pragma once

#include <cmath>
#include <array>
#include <stdexcept>

#include "bellsim/rng.hpp"

namespace bellsim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kUnitTol = 1e-12;

// sgn(x) = +1 if x >= 0, -1 if x < 0. Note sgn(0) = +1; several protocol
// identities depend on this exact convention.
inline int sgn(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("sgn: non-finite input");
    return x >= 0.0 ? +1 : -1;
}

struct UnitVector3 {
    double x{0.0}, y{0.0}, z{1.0};

    UnitVector3() = default;
    UnitVector3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    double norm() const { return std::sqrt(x * x + y * y + z * z); }

    bool is_unit(double tol = kUnitTol) const {
        return std::abs(x * x + y * y + z * z - 1.0) <= tol;
    }

    UnitVector3 operator-() const { return {-x, -y, -z}; }

    static UnitVector3 normalized(double x, double y, double z) {
        const double n = std::sqrt(x * x + y * y + z * z);
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::invalid_argument("UnitVector3: cannot normalize zero or non-finite vector");
        return {x / n, y / n, z / n};
    }

    // Axis in the x-z plane at polar angle theta (radians) from +z.
    static UnitVector3 polar(double theta) {
        return {std::sin(theta), 0.0, std::cos(theta)};
    }
};

inline double dot(const UnitVector3& u, const UnitVector3& v) {
    return u.x * v.x + u.y * v.y + u.z * v.z;
}

// Proper rotation in SO(3), row-major 3x3 matrix.
struct Rotation3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    UnitVector3 apply(const UnitVector3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    double determinant() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7])
             - m[1] * (m[3] * m[8] - m[5] * m[6])
             + m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    // Max deviation of R^T R from the identity, entrywise.
    double orthogonality_defect() const {
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m[3 * k + i] * m[3 * k + j];
                worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
            }
        }
        return worst;
    }

    bool is_special_orthogonal(double tol = kUnitTol) const {
        return orthogonality_defect() <= tol && std::abs(determinant() - 1.0) <= tol;
    }
};

// Uniform draw on the unit sphere: inverse-CDF on the polar cosine.
// Consumes exactly two uniforms.
inline UnitVector3 sample_unit_vector(RngStream& rng) {
    const double z = 2.0 * rng.next_double() - 1.0;
    const double phi = 2.0 * kPi * rng.next_double();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

// Haar-uniform draw on SO(3) via a uniform unit quaternion (Shoemake's
// subgroup construction). Consumes exactly three uniforms.
inline Rotation3 sample_rotation(RngStream& rng) {
    const double u1 = rng.next_double();
    const double u2 = rng.next_double();
    const double u3 = rng.next_double();
    const double s1 = std::sqrt(1.0 - u1), s2 = std::sqrt(u1);
    const double w = s1 * std::sin(2.0 * kPi * u2);
    const double x = s1 * std::cos(2.0 * kPi * u2);
    const double y = s2 * std::sin(2.0 * kPi * u3);
    const double z = s2 * std::cos(2.0 * kPi * u3);

    Rotation3 r;
    r.m = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
           2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
           2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y)};
    return r;
}

}  // namespace bellsim

#pragma once

// Exact coordinate transforms between equirectangular pixels, spherical
// angles and unit vectors. All angles are radians, all math is double.
//
// Conventions:
//   longitude phi in [-pi, pi), latitude theta in [-pi/2, pi/2]
//   pixel (u,v): u grows with phi, v grows downward (north pole at v=0)
//   unit sphere: x = cos(theta) sin(phi), y = sin(theta), z = cos(theta) cos(phi)
// so (phi=0, theta=0) is the forward axis +z and +y points up.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace equi {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

/// Wraps x into [lo, lo + period).
inline double wrap_into(double x, double lo, double period) {
    double y = std::fmod(x - lo, period);
    if (y < 0.0) y += period;
    return y + lo;
}

struct ImageGeometry {
    int width = 0;
    int height = 0;

    ImageGeometry() = default;
    ImageGeometry(int w, int h, bool allow_non_panoramic = false) : width(w), height(h) {
        if (w < 2 || h < 2)
            throw std::invalid_argument("ImageGeometry: width and height must be >= 2");
        if (!allow_non_panoramic && w != 2 * h)
            throw std::invalid_argument("ImageGeometry: full panoramas require width == 2*height (got " +
                                        std::to_string(w) + "x" + std::to_string(h) + ")");
    }

    bool operator==(const ImageGeometry&) const = default;
};

/// Canonical spherical direction. Construction normalizes any (phi, theta)
/// pair onto the sphere: latitudes past a pole re-enter on the opposite
/// meridian, longitudes wrap.
struct SphericalAngles {
    double phi = 0.0;    // longitude, [-pi, pi)
    double theta = 0.0;  // latitude, [-pi/2, pi/2]

    SphericalAngles() = default;
    SphericalAngles(double phi_raw, double theta_raw) {
        double t = wrap_into(theta_raw, -kPi, kTwoPi);
        double p = phi_raw;
        if (t > kHalfPi) {
            t = kPi - t;
            p += kPi;
        } else if (t < -kHalfPi) {
            t = -kPi - t;
            p += kPi;
        }
        phi = wrap_into(p, -kPi, kTwoPi);
        theta = t;
    }
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 normalized() const {
        const double n = norm();
        if (n == 0.0) throw std::invalid_argument("Vec3: cannot normalize zero vector");
        return {x / n, y / n, z / n};
    }
};

/// Unit-norm direction; construction checks |p|^2 - 1 within 1e-12.
struct UnitVector : Vec3 {
    UnitVector() : Vec3{0.0, 0.0, 1.0} {}
    UnitVector(double x_, double y_, double z_) : Vec3{x_, y_, z_} {
        if (std::abs(x * x + y * y + z * z - 1.0) > 1e-12)
            throw std::invalid_argument("UnitVector: norm deviates from 1 by more than 1e-12");
    }
    static UnitVector normalize(const Vec3& v) {
        const Vec3 n = v.normalized();
        return UnitVector(n.x, n.y, n.z);
    }
};

/// Row-major 3x3 matrix, just enough for the rotations used here.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return {}; }

    // Right-handed rotations about the coordinate axes.
    static Mat3 rotation_x(double a) {
        const double c = std::cos(a), s = std::sin(a);
        return {{1, 0, 0, 0, c, -s, 0, s, c}};
    }
    static Mat3 rotation_y(double a) {
        const double c = std::cos(a), s = std::sin(a);
        return {{c, 0, s, 0, 1, 0, -s, 0, c}};
    }

    Vec3 apply(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m[3 * i + k] * o.m[3 * k + j];
                r.m[3 * i + j] = s;
            }
        return r;
    }
    Mat3 transposed() const {
        return {{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
    }
};

/// phi = (u - W/2) * 2pi/W, theta = -(v - H/2) * pi/H. Inputs may lie
/// outside the raster; the result is canonicalized.
inline SphericalAngles pixel_to_angles(const ImageGeometry& g, double u, double v) {
    const double phi = (u - g.width / 2.0) * (kTwoPi / g.width);
    const double theta = -(v - g.height / 2.0) * (kPi / g.height);
    return SphericalAngles(phi, theta);
}

/// u = (phi/2pi + 1/2) W, v = (-theta/pi + 1/2) H. Exact inverse of
/// pixel_to_angles for canonical angles.
inline std::array<double, 2> angles_to_pixel(const ImageGeometry& g, const SphericalAngles& a) {
    const double u = (a.phi / kTwoPi + 0.5) * g.width;
    const double v = (-a.theta / kPi + 0.5) * g.height;
    return {u, v};
}

inline UnitVector angles_to_unit_vector(const SphericalAngles& a) {
    const double ct = std::cos(a.theta);
    return UnitVector(ct * std::sin(a.phi), std::sin(a.theta), ct * std::cos(a.phi));
}

/// phi = atan2(x, z), theta = asin(y). The two-argument arctangent covers
/// the rear hemisphere; at the poles longitude is defined as 0.
inline SphericalAngles unit_vector_to_angles(const Vec3& p) {
    const double y = std::clamp(p.y, -1.0, 1.0);
    if (p.x == 0.0 && p.z == 0.0) return SphericalAngles(0.0, y >= 0.0 ? kHalfPi : -kHalfPi);
    return SphericalAngles(std::atan2(p.x, p.z), std::asin(y));
}

/// Rotation taking the kernel axis (0,0,1) to the direction of `center`:
/// R_y(phi) * R_x(-theta). The sign of the x rotation is fixed by
/// requiring rotate_align((0,0,1), c) == angles_to_unit_vector(c).
inline Mat3 align_rotation(const SphericalAngles& center) {
    return Mat3::rotation_y(center.phi) * Mat3::rotation_x(-center.theta);
}

inline UnitVector rotate_align(const UnitVector& p, const SphericalAngles& center) {
    const Vec3 r = align_rotation(center).apply(p);
    // rotations are isometries; renormalization is not applied
    return UnitVector(r.x, r.y, r.z);
}

}  // namespace equi

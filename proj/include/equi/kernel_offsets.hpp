#pragma once

// Distortion-aware kernel sample positions for equirectangular images.
//
// A kernel is a flat r x r grid tangent to the unit sphere at distance
// d = r / (2 tan(alpha/2)), projected onto the sphere, rotated so its
// center lands on the point where the convolution is applied, and
// back-projected to pixel coordinates. The resulting sample pattern
// depends only on the image row, so a full field stores H rows of r^2
// positions for a kernel centered at column 0.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "equi/geometry.hpp"

namespace equi {

struct KernelSpec {
    int resolution = 3;  // samples per side, odd
    double fov = 0.0;    // angular size alpha, radians, (0, pi)

    KernelSpec() = default;
    KernelSpec(int r, double alpha) : resolution(r), fov(alpha) {
        if (r < 1 || r % 2 == 0)
            throw std::invalid_argument("KernelSpec: resolution must be odd and >= 1");
        if (!(alpha > 0.0) || !(alpha < kPi))
            throw std::invalid_argument("KernelSpec: fov must lie in (0, pi)");
    }

    /// Distance from the sphere center to the tangent kernel plane.
    double plane_distance() const { return resolution / (2.0 * std::tan(0.5 * fov)); }
};

/// Field of view that makes an r x r kernel span r image columns, the
/// sizing used when mirroring a standard kernel on a W-wide panorama.
inline double auto_fov(int resolution, const ImageGeometry& g, double image_fov = kTwoPi) {
    return resolution * image_fov / g.width;
}

/// Unit directions of the kernel samples for a kernel centered on the
/// forward axis (0,0,1). Row-major: index a*r+b maps to grid offsets
/// i = b - (r-1)/2 (horizontal) and j = (r-1)/2 - a (vertical, j up),
/// so sample 0 is the top-left tap, matching weight layout [o][i][a][b].
inline std::vector<UnitVector> kernel_grid(const KernelSpec& spec) {
    const int r = spec.resolution;
    const double d = spec.plane_distance();
    const double c = 0.5 * (r - 1);
    std::vector<UnitVector> grid;
    grid.reserve(static_cast<std::size_t>(r) * r);
    for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
            const double i = b - c;
            const double j = c - a;
            grid.push_back(UnitVector::normalize(Vec3{i, j, d}));
        }
    }
    return grid;
}

/// Absolute continuous sample coordinates of the kernel applied at pixel
/// (u0, v0). u components are wrapped into [0, W); samples that cross a
/// pole re-enter on the opposite meridian through the sphere math itself.
inline std::vector<std::array<double, 2>> sample_positions(const ImageGeometry& g,
                                                           const KernelSpec& spec,
                                                           double u0, double v0) {
    const SphericalAngles center = pixel_to_angles(g, u0, v0);
    const Mat3 rot = align_rotation(center);
    std::vector<std::array<double, 2>> out;
    out.reserve(static_cast<std::size_t>(spec.resolution) * spec.resolution);
    for (const UnitVector& p : kernel_grid(spec)) {
        const SphericalAngles a = unit_vector_to_angles(rot.apply(p));
        auto [u, v] = angles_to_pixel(g, a);
        out.push_back({wrap_into(u, 0.0, static_cast<double>(g.width)), v});
    }
    return out;
}

/// Precomputed sample positions for every image row, kernel centered at
/// column 0. Positions for center (u0, v) are the row's positions shifted
/// by u0 modulo W. Immutable once built.
class OffsetField {
  public:
    OffsetField(const ImageGeometry& g, const KernelSpec& spec) : geom_(g), spec_(spec) {
        const std::size_t taps = static_cast<std::size_t>(spec.resolution) * spec.resolution;
        data_.resize(static_cast<std::size_t>(g.height) * taps * 2);
        for (int v = 0; v < g.height; ++v) {
            const auto pos = sample_positions(g, spec, 0.0, static_cast<double>(v));
            double* row = data_.data() + static_cast<std::size_t>(v) * taps * 2;
            for (std::size_t k = 0; k < taps; ++k) {
                row[2 * k] = pos[k][0];
                row[2 * k + 1] = pos[k][1];
            }
        }
    }

    const ImageGeometry& geometry() const { return geom_; }
    const KernelSpec& spec() const { return spec_; }
    int taps() const { return spec_.resolution * spec_.resolution; }

    /// Interleaved (u, v) pairs for row v, center at column 0.
    std::span<const double> row(int v) const {
        const std::size_t taps2 = static_cast<std::size_t>(taps()) * 2;
        return {data_.data() + static_cast<std::size_t>(v) * taps2, taps2};
    }

    /// Sample position of tap k for a kernel centered at (u0, v0).
    std::array<double, 2> position(int u0, int v0, int k) const {
        const double* p = row(v0).data() + 2 * k;
        double u = p[0] + u0;
        const double w = geom_.width;
        if (u >= w) u -= w;  // row positions are already in [0, W)
        if (u >= w) u = std::fmod(u, w);
        return {u, p[1]};
    }

    /// Flat [H, r^2, 2] view of the field, for export.
    const std::vector<double>& raw() const { return data_; }

  private:
    ImageGeometry geom_;
    KernelSpec spec_;
    std::vector<double> data_;
};

inline OffsetField offset_field(const ImageGeometry& g, const KernelSpec& spec) {
    return OffsetField(g, spec);
}

}  // namespace equi

#pragma once

// Dense row-major double tensor plus the sampling utilities the reference
// convolution engine needs. Image tensors are CHW; probability maps are HW.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace equi {

struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> s, double fill = 0.0) : shape(std::move(s)) {
        data.assign(numel(shape), fill);
    }
    Tensor(std::initializer_list<std::size_t> s, double fill = 0.0)
        : Tensor(std::vector<std::size_t>(s), fill) {}

    static std::size_t numel(const std::vector<std::size_t>& s) {
        std::size_t n = 1;
        for (std::size_t e : s) {
            if (e == 0) throw std::invalid_argument("Tensor: zero extent");
            n *= e;
        }
        return n;
    }

    std::size_t size() const { return data.size(); }
    int ndim() const { return static_cast<int>(shape.size()); }

    std::size_t extent(int d) const { return shape.at(static_cast<std::size_t>(d)); }

    // Unchecked fast paths for the hot loops.
    double& at2(std::size_t y, std::size_t x) { return data[y * shape[1] + x]; }
    double at2(std::size_t y, std::size_t x) const { return data[y * shape[1] + x]; }
    double& at3(std::size_t c, std::size_t y, std::size_t x) {
        return data[(c * shape[1] + y) * shape[2] + x];
    }
    double at3(std::size_t c, std::size_t y, std::size_t x) const {
        return data[(c * shape[1] + y) * shape[2] + x];
    }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    bool all_finite() const {
        return std::all_of(data.begin(), data.end(), [](double v) { return std::isfinite(v); });
    }

    double min() const { return *std::min_element(data.begin(), data.end()); }
    double max() const { return *std::max_element(data.begin(), data.end()); }

    Tensor& operator+=(const Tensor& o) {
        require_same_shape(o, "+=");
        for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
        return *this;
    }
    Tensor& operator*=(double s) {
        for (double& v : data) v *= s;
        return *this;
    }

    void require_same_shape(const Tensor& o, const char* what) const {
        if (!same_shape(o))
            throw std::invalid_argument(std::string("Tensor: shape mismatch in ") + what);
    }
};

/// Bilinear lookup on a CHW tensor at continuous (u, v), one value per
/// channel written to `out`. With horizontal_wrap the u axis is periodic
/// (panorama seam); otherwise u must lie in [0, W-1]. v outside [0, H-1]
/// is clamped to the edge row and `clamped`, when given, is set.
inline void bilinear_sample(const Tensor& t, double u, double v, bool horizontal_wrap,
                            std::span<double> out, bool* clamped = nullptr) {
    if (t.ndim() != 3) throw std::invalid_argument("bilinear_sample: expected CHW tensor");
    const std::size_t C = t.shape[0], H = t.shape[1], W = t.shape[2];
    if (out.size() != C) throw std::invalid_argument("bilinear_sample: bad output span");

    if (horizontal_wrap) {
        u = std::fmod(u, static_cast<double>(W));
        if (u < 0.0) u += static_cast<double>(W);
    } else if (u < 0.0 || u > static_cast<double>(W - 1)) {
        throw std::out_of_range("bilinear_sample: u outside raster with wrap disabled");
    }
    if (v < 0.0) {
        v = 0.0;
        if (clamped) *clamped = true;
    } else if (v > static_cast<double>(H - 1)) {
        v = static_cast<double>(H - 1);
        if (clamped) *clamped = true;
    }

    const std::size_t u0 = static_cast<std::size_t>(u);  // u >= 0
    const double fu = u - static_cast<double>(u0);
    std::size_t u1 = u0 + 1;
    if (u1 >= W) u1 = horizontal_wrap ? 0 : W - 1;

    const std::size_t v0 = static_cast<std::size_t>(v);
    const double fv = v - static_cast<double>(v0);
    const std::size_t v1 = std::min(v0 + 1, H - 1);

    const double w00 = (1.0 - fu) * (1.0 - fv);
    const double w10 = fu * (1.0 - fv);
    const double w01 = (1.0 - fu) * fv;
    const double w11 = fu * fv;
    for (std::size_t c = 0; c < C; ++c) {
        out[c] = w00 * t.at3(c, v0, u0) + w10 * t.at3(c, v0, u1) +
                 w01 * t.at3(c, v1, u0) + w11 * t.at3(c, v1, u1);
    }
}

/// Single-channel convenience wrapper over an HW map.
inline double bilinear_sample_map(const Tensor& map, double u, double v, bool horizontal_wrap,
                                  bool* clamped = nullptr) {
    if (map.ndim() != 2) throw std::invalid_argument("bilinear_sample_map: expected HW tensor");
    const std::size_t H = map.shape[0], W = map.shape[1];
    double uu = u, vv = v;
    if (horizontal_wrap) {
        uu = std::fmod(uu, static_cast<double>(W));
        if (uu < 0.0) uu += static_cast<double>(W);
    } else if (uu < 0.0 || uu > static_cast<double>(W - 1)) {
        throw std::out_of_range("bilinear_sample_map: u outside raster with wrap disabled");
    }
    if (vv < 0.0) {
        vv = 0.0;
        if (clamped) *clamped = true;
    } else if (vv > static_cast<double>(H - 1)) {
        vv = static_cast<double>(H - 1);
        if (clamped) *clamped = true;
    }
    const std::size_t u0 = static_cast<std::size_t>(uu);
    const double fu = uu - static_cast<double>(u0);
    std::size_t u1 = u0 + 1;
    if (u1 >= W) u1 = horizontal_wrap ? 0 : W - 1;
    const std::size_t v0 = static_cast<std::size_t>(vv);
    const double fv = vv - static_cast<double>(v0);
    const std::size_t v1 = std::min(v0 + 1, H - 1);
    return (1.0 - fu) * (1.0 - fv) * map.at2(v0, u0) + fu * (1.0 - fv) * map.at2(v0, u1) +
           (1.0 - fu) * fv * map.at2(v1, u0) + fu * fv * map.at2(v1, u1);
}

/// Circular shift of a CHW tensor along the column axis (positive du moves
/// content toward larger u, as a horizontal camera rotation does).
inline Tensor roll_columns(const Tensor& t, long du) {
    if (t.ndim() != 3 && t.ndim() != 2) throw std::invalid_argument("roll_columns: CHW or HW");
    const std::size_t W = t.shape.back();
    long mod = du % static_cast<long>(W);
    if (mod < 0) mod += static_cast<long>(W);
    Tensor out(t.shape);
    const std::size_t rows = t.size() / W;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* src = t.data.data() + r * W;
        double* dst = out.data.data() + r * W;
        for (std::size_t x = 0; x < W; ++x) dst[(x + static_cast<std::size_t>(mod)) % W] = src[x];
    }
    return out;
}

/// Column reversal (pixel u -> W-1-u) of a CHW or HW tensor.
inline Tensor mirror_columns(const Tensor& t) {
    if (t.ndim() != 3 && t.ndim() != 2) throw std::invalid_argument("mirror_columns: CHW or HW");
    const std::size_t W = t.shape.back();
    Tensor out(t.shape);
    const std::size_t rows = t.size() / W;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* src = t.data.data() + r * W;
        double* dst = out.data.data() + r * W;
        for (std::size_t x = 0; x < W; ++x) dst[W - 1 - x] = src[x];
    }
    return out;
}

/// Nearest-neighbor upsample of a CHW tensor by an integer factor.
inline Tensor upsample_nearest(const Tensor& t, int factor) {
    if (t.ndim() != 3) throw std::invalid_argument("upsample_nearest: expected CHW tensor");
    if (factor < 1) throw std::invalid_argument("upsample_nearest: factor must be >= 1");
    const std::size_t C = t.shape[0], H = t.shape[1], W = t.shape[2];
    const std::size_t f = static_cast<std::size_t>(factor);
    Tensor out({C, H * f, W * f});
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t y = 0; y < H * f; ++y)
            for (std::size_t x = 0; x < W * f; ++x)
                out.at3(c, y, x) = t.at3(c, y / f, x / f);
    return out;
}

/// Bilinear resize of a CHW image; the u axis wraps (panorama topology),
/// rows are sampled proportionally.
inline Tensor resize_bilinear(const Tensor& t, std::size_t out_h, std::size_t out_w,
                              bool horizontal_wrap = true) {
    if (t.ndim() != 3) throw std::invalid_argument("resize_bilinear: expected CHW tensor");
    const std::size_t C = t.shape[0], H = t.shape[1], W = t.shape[2];
    Tensor out({C, out_h, out_w});
    std::vector<double> px(C);
    const double sy = static_cast<double>(H) / static_cast<double>(out_h);
    const double sx = static_cast<double>(W) / static_cast<double>(out_w);
    for (std::size_t y = 0; y < out_h; ++y) {
        const double v = (y + 0.5) * sy - 0.5;
        for (std::size_t x = 0; x < out_w; ++x) {
            double u = (x + 0.5) * sx - 0.5;
            if (!horizontal_wrap) u = std::clamp(u, 0.0, static_cast<double>(W - 1));
            const double vc = std::clamp(v, 0.0, static_cast<double>(H - 1));
            bilinear_sample(t, u, vc, horizontal_wrap, px);
            for (std::size_t c = 0; c < C; ++c) out.at3(c, y, x) = px[c];
        }
    }
    return out;
}

}  // namespace equi

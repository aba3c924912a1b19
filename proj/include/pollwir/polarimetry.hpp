#pragma once

/**
 * @file polarimetry.hpp
 * @brief Division-of-focal-plane mosaic handling and Stokes / polarisation
 *        conversions.
 *
 * The pipeline is: RawMosaicFrame -> demosaic -> QuadFrame -> compute_stokes
 * -> StokesFrame -> compute_polar -> PolarFrame, with compose_channels /
 * render_pseudocolor producing 8-bit exports. synthesize_quad is the exact
 * algebraic inverse of compute_stokes and doubles as the round-trip oracle
 * in the test suite. All pipeline math is double precision; quantisation to
 * 8 bits happens only at export.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pollwir/errors.hpp"
#include "pollwir/plane.hpp"

namespace pollwir {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Assigns a polariser angle (degrees, one of 0/45/90/135) to each of the
/// four offsets of a 2x2 mosaic cell. The sensor datasheet never fixes this,
/// so it is overridable via sidecar metadata; the default below is the
/// toolkit-wide convention.
struct MosaicLayout {
    int tl = 0;
    int tr = 45;
    int bl = 135;
    int br = 90;

    static MosaicLayout standard() { return {}; }

    void validate() const {
        const std::array<int, 4> angles = {tl, tr, bl, br};
        int seen = 0;
        for (int a : angles) {
            switch (a) {
                case 0: seen |= 1; break;
                case 45: seen |= 2; break;
                case 90: seen |= 4; break;
                case 135: seen |= 8; break;
                default:
                    throw ValidationError("mosaic layout angle must be one of 0/45/90/135, got " +
                                          std::to_string(a));
            }
        }
        if (seen != 0xF) {
            throw ValidationError("mosaic layout must map the four cell offsets to the four "
                                  "angles bijectively");
        }
    }

    friend bool operator==(const MosaicLayout&, const MosaicLayout&) = default;
};

/// One interleaved 2Wx2H intensity plane as read from the sensor.
struct RawMosaicFrame {
    PlaneF plane;
    MosaicLayout layout;

    RawMosaicFrame(PlaneF p, MosaicLayout l = MosaicLayout::standard())
        : plane(std::move(p)), layout(l) {
        if (plane.width() % 2 != 0 || plane.height() % 2 != 0) {
            throw DimensionError("mosaic dimensions must be even, got " +
                                 std::to_string(plane.width()) + "x" +
                                 std::to_string(plane.height()));
        }
        layout.validate();
        require_finite_nonnegative(plane, "mosaic");
    }

    int width() const { return plane.width(); }
    int height() const { return plane.height(); }
};

/// Four co-registered per-angle intensity planes.
struct QuadFrame {
    PlaneF i0, i45, i90, i135;

    QuadFrame(PlaneF a0, PlaneF a45, PlaneF a90, PlaneF a135)
        : i0(std::move(a0)), i45(std::move(a45)), i90(std::move(a90)), i135(std::move(a135)) {
        if (!i0.same_shape(i45) || !i0.same_shape(i90) || !i0.same_shape(i135)) {
            throw DimensionError("quad planes must share dimensions");
        }
        require_finite_nonnegative(i0, "i0");
        require_finite_nonnegative(i45, "i45");
        require_finite_nonnegative(i90, "i90");
        require_finite_nonnegative(i135, "i135");
    }

    int width() const { return i0.width(); }
    int height() const { return i0.height(); }
};

/// Measured linear Stokes components. V is unmeasurable with a four-angle
/// linear mosaic and deliberately absent. Note |Q| <= I is not enforced:
/// it only holds for quads satisfying the ideal-sensor consistency
/// i0+i90 = i45+i135, which real (noisy) data violates.
struct StokesFrame {
    PlaneF I, Q, U;

    StokesFrame(PlaneF i, PlaneF q, PlaneF u)
        : I(std::move(i)), Q(std::move(q)), U(std::move(u)) {
        if (!I.same_shape(Q) || !I.same_shape(U)) {
            throw DimensionError("stokes planes must share dimensions");
        }
        require_finite_nonnegative(I, "I");
        require_finite(Q, "Q");
        require_finite(U, "U");
    }

    int width() const { return I.width(); }
    int height() const { return I.height(); }
};

/// Degree (P) and angle (phi) of linear polarisation plus a validity mask.
/// At invalid pixels P = 0 and phi = 0 by convention. p_overflow_count is
/// the number of valid pixels whose raw sqrt(Q^2+U^2)/I exceeded 1 before
/// clamping (sensor noise can produce these).
struct PolarFrame {
    PlaneF P;
    PlaneF phi;
    Plane<std::uint8_t> valid;
    long p_overflow_count = 0;

    PolarFrame(PlaneF p, PlaneF ph, Plane<std::uint8_t> v, long overflow = 0)
        : P(std::move(p)), phi(std::move(ph)), valid(std::move(v)), p_overflow_count(overflow) {
        if (!P.same_shape(phi) || P.width() != valid.width() || P.height() != valid.height()) {
            throw DimensionError("polar planes must share dimensions");
        }
    }

    int width() const { return P.width(); }
    int height() const { return P.height(); }
};

enum class ChannelConfig { INTENSITY, IQU, IPPHI };

inline std::string to_string(ChannelConfig c) {
    switch (c) {
        case ChannelConfig::INTENSITY: return "INTENSITY";
        case ChannelConfig::IQU: return "IQU";
        case ChannelConfig::IPPHI: return "IPPHI";
    }
    return "?";
}

/// Per-plane affine mapping actually applied during 8-bit export:
/// [lo, hi] -> [0, 255] with clipping. Sufficient to invert the mapping
/// (up to clipping) for audit.
struct PlaneNormalization {
    std::string plane;
    double lo = 0.0;
    double hi = 1.0;
};

/// Three 8-bit planes ready for export to a three-channel consumer.
struct ChannelStack {
    ChannelConfig config;
    std::array<PlaneU8, 3> planes;
    std::array<PlaneNormalization, 3> normalization;

    int width() const { return planes[0].width(); }
    int height() const { return planes[0].height(); }
};

/// Interleaved 8-bit RGB image.
struct Rgb8Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // 3 * width * height, row-major

    std::uint8_t& at(int x, int y, int c) {
        return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
};

enum class DemosaicStrategy { SUPERPIXEL_BIN, NEAREST };

// ---------------------------------------------------------------------------
// Export helpers (shared by compose_channels and render_pseudocolor)
// ---------------------------------------------------------------------------

namespace detail {

/// Round-half-up to an 8-bit value; x is expected in [0, 255].
inline std::uint8_t round_u8(double x) {
    const double r = std::floor(x + 0.5);
    return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

/// Percentile with linear interpolation between order statistics:
/// rank = q/100 * (n-1), interpolated on the sorted samples.
inline double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw ArgumentError("percentile of empty set");
    std::sort(values.begin(), values.end());
    const double rank = q / 100.0 * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(rank));
    if (lo == hi) return values[lo];
    const double frac = rank - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

/// Affine [lo, hi] -> [0, 1] with clipping; degenerate ranges map to 0.
inline double unit_scale(double v, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
}

/// Robust intensity range: 1st..99th percentile of the frame.
inline PlaneNormalization intensity_range(const PlaneF& plane) {
    const double lo = percentile({plane.begin(), plane.end()}, 1.0);
    const double hi = percentile({plane.begin(), plane.end()}, 99.0);
    return {"I", lo, hi};
}

/// Symmetric signed range [-M, M], M = 99th percentile of |v|, so that zero
/// always maps to the 8-bit midpoint. M = 0 degenerates to midpoint 128.
inline PlaneNormalization signed_range(const PlaneF& plane, const std::string& name) {
    std::vector<double> mag(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) mag[i] = std::abs(plane[i]);
    const double m = percentile(std::move(mag), 99.0);
    return {name, -m, m};
}

/// degenerate_t is the unit value used when hi <= lo: 0 for one-sided
/// ranges, 0.5 for signed ranges (keeps the zero -> 128 convention when a
/// plane is identically zero).
inline PlaneU8 quantize(const PlaneF& plane, const PlaneNormalization& n,
                        double degenerate_t = 0.0) {
    PlaneU8 out(plane.width(), plane.height());
    const bool degenerate = !(n.hi > n.lo);
    for (std::size_t i = 0; i < plane.size(); ++i) {
        const double t = degenerate ? degenerate_t : unit_scale(plane[i], n.lo, n.hi);
        out[i] = round_u8(255.0 * t);
    }
    return out;
}

/// Standard HSV (h in degrees [0,360), s,v in [0,1]) to RGB in [0,1].
inline std::array<double, 3> hsv_to_rgb(double h, double s, double v) {
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0.0, g = 0.0, b = 0.0;
    if (hp < 1.0) { r = c; g = x; }
    else if (hp < 2.0) { r = x; g = c; }
    else if (hp < 3.0) { g = c; b = x; }
    else if (hp < 4.0) { g = x; b = c; }
    else if (hp < 5.0) { r = x; b = c; }
    else { r = c; b = x; }
    const double m = v - c;
    return {r + m, g + m, b + m};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Splits the interleaved mosaic into four (W/2)x(H/2) per-angle planes.
/// SUPERPIXEL_BIN assigns each output pixel the four samples of its 2x2
/// cell; NEAREST is identical for this cell-aligned layout and exists as an
/// extension point for shifted layouts.
inline QuadFrame demosaic(const RawMosaicFrame& frame,
                          DemosaicStrategy strategy = DemosaicStrategy::SUPERPIXEL_BIN) {
    (void)strategy;  // both strategies coincide for cell-aligned mosaics
    const int w = frame.width() / 2;
    const int h = frame.height() / 2;
    PlaneF p0(w, h), p45(w, h), p90(w, h), p135(w, h);
    auto plane_for = [&](int angle) -> PlaneF& {
        switch (angle) {
            case 0: return p0;
            case 45: return p45;
            case 90: return p90;
            default: return p135;
        }
    };
    PlaneF& tl = plane_for(frame.layout.tl);
    PlaneF& tr = plane_for(frame.layout.tr);
    PlaneF& bl = plane_for(frame.layout.bl);
    PlaneF& br = plane_for(frame.layout.br);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            tl(x, y) = frame.plane(2 * x, 2 * y);
            tr(x, y) = frame.plane(2 * x + 1, 2 * y);
            bl(x, y) = frame.plane(2 * x, 2 * y + 1);
            br(x, y) = frame.plane(2 * x + 1, 2 * y + 1);
        }
    }
    return {std::move(p0), std::move(p45), std::move(p90), std::move(p135)};
}

/// Inverse of demosaic: interleaves a QuadFrame back into a 2Wx2H mosaic
/// under the given layout. Used to synthesise sensor-format fixtures.
inline RawMosaicFrame interleave_quad(const QuadFrame& quad,
                                      MosaicLayout layout = MosaicLayout::standard()) {
    layout.validate();
    PlaneF mosaic(quad.width() * 2, quad.height() * 2);
    auto plane_for = [&](int angle) -> const PlaneF& {
        switch (angle) {
            case 0: return quad.i0;
            case 45: return quad.i45;
            case 90: return quad.i90;
            default: return quad.i135;
        }
    };
    const PlaneF& tl = plane_for(layout.tl);
    const PlaneF& tr = plane_for(layout.tr);
    const PlaneF& bl = plane_for(layout.bl);
    const PlaneF& br = plane_for(layout.br);
    for (int y = 0; y < quad.height(); ++y) {
        for (int x = 0; x < quad.width(); ++x) {
            mosaic(2 * x, 2 * y) = tl(x, y);
            mosaic(2 * x + 1, 2 * y) = tr(x, y);
            mosaic(2 * x, 2 * y + 1) = bl(x, y);
            mosaic(2 * x + 1, 2 * y + 1) = br(x, y);
        }
    }
    return {std::move(mosaic), layout};
}

/// I = (i0 + i45 + i90 + i135) / 2,  Q = i0 - i90,  U = i45 - i135.
inline StokesFrame compute_stokes(const QuadFrame& quad) {
    const int w = quad.width(), h = quad.height();
    PlaneF I(w, h), Q(w, h), U(w, h);
    for (std::size_t i = 0; i < I.size(); ++i) {
        I[i] = 0.5 * (quad.i0[i] + quad.i45[i] + quad.i90[i] + quad.i135[i]);
        Q[i] = quad.i0[i] - quad.i90[i];
        U[i] = quad.i45[i] - quad.i135[i];
    }
    return {std::move(I), std::move(Q), std::move(U)};
}

/// Exact algebraic inverse of compute_stokes:
///   i0 = (I+Q)/2, i45 = (I+U)/2, i90 = (I-Q)/2, i135 = (I-U)/2.
/// Requires |Q| <= I and |U| <= I pointwise so all intensities are
/// non-negative; the error names the first offending pixel.
inline QuadFrame synthesize_quad(const StokesFrame& s) {
    const int w = s.width(), h = s.height();
    for (std::size_t i = 0; i < s.I.size(); ++i) {
        if (std::abs(s.Q[i]) > s.I[i] || std::abs(s.U[i]) > s.I[i]) {
            throw PhysicalityError(
                "stokes pixel (" + std::to_string(i % static_cast<std::size_t>(w)) + "," +
                std::to_string(i / static_cast<std::size_t>(w)) + ") violates |Q|,|U| <= I: I=" +
                std::to_string(s.I[i]) + " Q=" + std::to_string(s.Q[i]) + " U=" +
                std::to_string(s.U[i]));
        }
    }
    PlaneF i0(w, h), i45(w, h), i90(w, h), i135(w, h);
    for (std::size_t i = 0; i < s.I.size(); ++i) {
        i0[i] = 0.5 * (s.I[i] + s.Q[i]);
        i45[i] = 0.5 * (s.I[i] + s.U[i]);
        i90[i] = 0.5 * (s.I[i] - s.Q[i]);
        i135[i] = 0.5 * (s.I[i] - s.U[i]);
    }
    return {std::move(i0), std::move(i45), std::move(i90), std::move(i135)};
}

/// P = min(1, sqrt(Q^2+U^2)/I), phi = atan2(U, Q)/2 folded into
/// (-pi/2, pi/2]. Pixels with I <= eps_I, or with both |Q| and |U| below
/// eps_QU, are masked invalid (P = phi = 0) instead of dividing by noise.
inline PolarFrame compute_polar(const StokesFrame& s, double eps_I = 1e-6,
                                double eps_QU = 1e-6) {
    if (!(eps_I > 0.0) || !(eps_QU > 0.0)) {
        throw ArgumentError("degeneracy thresholds must be positive");
    }
    const int w = s.width(), h = s.height();
    PlaneF P(w, h), phi(w, h);
    Plane<std::uint8_t> valid(w, h);
    long overflow = 0;
    for (std::size_t i = 0; i < s.I.size(); ++i) {
        const double I = s.I[i], Q = s.Q[i], U = s.U[i];
        if (I <= eps_I || (std::abs(Q) <= eps_QU && std::abs(U) <= eps_QU)) {
            P[i] = 0.0;
            phi[i] = 0.0;
            valid[i] = 0;
            continue;
        }
        valid[i] = 1;
        const double raw = std::sqrt(Q * Q + U * U) / I;
        if (raw > 1.0) ++overflow;
        P[i] = std::min(1.0, raw);
        double a = 0.5 * std::atan2(U, Q);  // (-pi/2, pi/2] except atan2 = -pi edge
        if (a <= -kHalfPi) a += kPi;
        phi[i] = a;
    }
    return {std::move(P), std::move(phi), std::move(valid), overflow};
}

/// Builds the three-plane 8-bit stack for one of the supported channel
/// configurations. Normalisation: I maps its 1st..99th percentile to
/// [0,255]; Q and U map [-M, M] with M the 99th percentile of their
/// magnitude (zero -> 128); P maps fixed [0,1]; phi maps fixed
/// (-pi/2, pi/2]. Rounding is half-up.
inline ChannelStack compose_channels(const StokesFrame& stokes, const PolarFrame* polar,
                                     ChannelConfig config) {
    using detail::quantize;
    const PlaneNormalization ni = detail::intensity_range(stokes.I);
    ChannelStack stack;
    stack.config = config;
    switch (config) {
        case ChannelConfig::INTENSITY: {
            PlaneU8 i8 = quantize(stokes.I, ni);
            stack.planes = {i8, i8, i8};
            stack.normalization = {ni, ni, ni};
            break;
        }
        case ChannelConfig::IQU: {
            const PlaneNormalization nq = detail::signed_range(stokes.Q, "Q");
            const PlaneNormalization nu = detail::signed_range(stokes.U, "U");
            stack.planes = {quantize(stokes.I, ni), quantize(stokes.Q, nq, 0.5),
                            quantize(stokes.U, nu, 0.5)};
            stack.normalization = {ni, nq, nu};
            break;
        }
        case ChannelConfig::IPPHI: {
            if (polar == nullptr) {
                throw ArgumentError("IPPHI configuration requires a polar frame");
            }
            if (polar->width() != stokes.width() || polar->height() != stokes.height()) {
                throw DimensionError("polar frame dimensions do not match stokes frame");
            }
            const PlaneNormalization np = {"P", 0.0, 1.0};
            const PlaneNormalization nphi = {"phi", -kHalfPi, kHalfPi};
            stack.planes = {quantize(stokes.I, ni), quantize(polar->P, np),
                            quantize(polar->phi, nphi)};
            stack.normalization = {ni, np, nphi};
            break;
        }
    }
    return stack;
}

/// Draws one-pixel rectangle outlines (clamped to the image) onto an
/// existing render. Used to overlay detections or ground truth on the
/// pseudo-colour display.
inline void draw_box(Rgb8Image& img, double x_min, double y_min, double x_max, double y_max,
                     std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int x0 = std::clamp(static_cast<int>(std::floor(x_min)), 0, img.width - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor(y_min)), 0, img.height - 1);
    const int x1 = std::clamp(static_cast<int>(std::ceil(x_max)) - 1, 0, img.width - 1);
    const int y1 = std::clamp(static_cast<int>(std::ceil(y_max)) - 1, 0, img.height - 1);
    auto paint = [&](int x, int y) {
        img.at(x, y, 0) = r;
        img.at(x, y, 1) = g;
        img.at(x, y, 2) = b;
    };
    for (int x = x0; x <= x1; ++x) {
        paint(x, y0);
        paint(x, y1);
    }
    for (int y = y0; y <= y1; ++y) {
        paint(x0, y);
        paint(x1, y);
    }
}

/// False-colour render: hue = (phi + pi/2)/pi * 360, saturation = P,
/// value = percentile-normalised I. Invalid pixels render grey
/// (saturation 0).
inline Rgb8Image render_pseudocolor(const StokesFrame& stokes, const PolarFrame& polar) {
    if (polar.width() != stokes.width() || polar.height() != stokes.height()) {
        throw DimensionError("polar frame dimensions do not match stokes frame");
    }
    const PlaneNormalization ni = detail::intensity_range(stokes.I);
    Rgb8Image img;
    img.width = stokes.width();
    img.height = stokes.height();
    img.rgb.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    for (std::size_t i = 0; i < stokes.I.size(); ++i) {
        double hue = (polar.phi[i] + kHalfPi) / kPi * 360.0;
        if (hue >= 360.0) hue -= 360.0;
        const double sat = polar.valid[i] ? std::clamp(polar.P[i], 0.0, 1.0) : 0.0;
        const double val = detail::unit_scale(stokes.I[i], ni.lo, ni.hi);
        const auto rgb = detail::hsv_to_rgb(hue, sat, val);
        for (int c = 0; c < 3; ++c) img.rgb[i * 3 + c] = detail::round_u8(255.0 * rgb[c]);
    }
    return img;
}

}  // namespace pollwir

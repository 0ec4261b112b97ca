#include "weedseg/registration.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <optional>
#include <stdexcept>

#include <json.hpp>

namespace weedseg {

namespace {

using cplx = std::complex<double>;

double image_variance(const BandImage& img) {
    double mean = 0.0;
    for (float v : img.data()) mean += v;
    mean /= double(img.size());
    double var = 0.0;
    for (float v : img.data()) var += (v - mean) * (v - mean);
    return var / double(img.size());
}

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative radix-2 FFT. n must be a power of two.
void fft_inplace(std::vector<cplx>& a, size_t offset, size_t stride, size_t n, bool inverse) {
    // bit-reversal permutation
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[offset + i * stride], a[offset + j * stride]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / double(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (size_t j = 0; j < len / 2; ++j) {
                cplx u = a[offset + (i + j) * stride];
                cplx v = a[offset + (i + j + len / 2) * stride] * w;
                a[offset + (i + j) * stride] = u + v;
                a[offset + (i + j + len / 2) * stride] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (size_t i = 0; i < n; ++i) a[offset + i * stride] /= double(n);
    }
}

void fft2d(std::vector<cplx>& a, size_t w, size_t h, bool inverse) {
    for (size_t y = 0; y < h; ++y) fft_inplace(a, y * w, 1, w, inverse);
    for (size_t x = 0; x < w; ++x) fft_inplace(a, x, w, h, inverse);
}

// Pearson correlation of ref(x, y) against mov(x + dx, y + dy) over the
// overlapping region.
double ncc_at(const BandImage& ref, const BandImage& mov, int dx, int dy) {
    const int w = int(ref.width()), h = int(ref.height());
    const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
    const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
    if (x1 - x0 < 2 || y1 - y0 < 2) return 0.0;
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    const long n = long(x1 - x0) * (y1 - y0);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            double a = ref.at(uint32_t(x), uint32_t(y));
            double b = mov.at(uint32_t(x + dx), uint32_t(y + dy));
            sa += a; sb += b; saa += a * a; sbb += b * b; sab += a * b;
        }
    }
    double cov = sab - sa * sb / double(n);
    double va = saa - sa * sa / double(n);
    double vb = sbb - sb * sb / double(n);
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return cov / std::sqrt(va * vb);
}

double parabolic_offset(double cm, double c0, double cp) {
    double denom = cm - 2.0 * c0 + cp;
    if (denom >= 0.0) return 0.0;  // not a local max, skip refinement
    double d = 0.5 * (cm - cp) / denom;
    return std::clamp(d, -0.5, 0.5);
}

struct PeakResult {
    int dx = 0, dy = 0;
    double sub_dx = 0.0, sub_dy = 0.0;
};

PeakResult phase_correlate(const BandImage& ref, const BandImage& mov, int radius) {
    const size_t w = ref.width(), h = ref.height();
    const size_t fw = next_pow2(w), fh = next_pow2(h);
    std::vector<cplx> A(fw * fh), B(fw * fh);
    double mean_a = 0, mean_b = 0;
    for (float v : ref.data()) mean_a += v;
    for (float v : mov.data()) mean_b += v;
    mean_a /= double(ref.size());
    mean_b /= double(mov.size());
    // Hann window keeps the zero-padded borders from dominating the
    // cross-power spectrum.
    std::vector<double> wx(w), wy(h);
    for (size_t x = 0; x < w; ++x)
        wx[x] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(x) / double(w - 1));
    for (size_t y = 0; y < h; ++y)
        wy[y] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(y) / double(h - 1));
    for (size_t y = 0; y < h; ++y) {
        for (size_t x = 0; x < w; ++x) {
            const double win = wx[x] * wy[y];
            A[y * fw + x] = (ref.data()[y * w + x] - mean_a) * win;
            B[y * fw + x] = (mov.data()[y * w + x] - mean_b) * win;
        }
    }
    fft2d(A, fw, fh, false);
    fft2d(B, fw, fh, false);
    constexpr double eps = 1e-12;
    for (size_t i = 0; i < A.size(); ++i) {
        cplx c = std::conj(A[i]) * B[i];
        double mag = std::abs(c);
        A[i] = mag > eps ? c / mag : cplx(0.0);
    }
    fft2d(A, fw, fh, true);

    auto surf = [&](int dx, int dy) {
        size_t ix = size_t((dx % int(fw) + int(fw)) % int(fw));
        size_t iy = size_t((dy % int(fh) + int(fh)) % int(fh));
        return A[iy * fw + ix].real();
    };
    PeakResult best;
    double best_v = -1e300;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            double v = surf(dx, dy);
            if (v > best_v) {
                best_v = v;
                best.dx = dx;
                best.dy = dy;
            }
        }
    }
    best.sub_dx = parabolic_offset(surf(best.dx - 1, best.dy), best_v, surf(best.dx + 1, best.dy));
    best.sub_dy = parabolic_offset(surf(best.dx, best.dy - 1), best_v, surf(best.dx, best.dy + 1));
    return best;
}

PeakResult ncc_exhaustive(const BandImage& ref, const BandImage& mov, int radius) {
    PeakResult best;
    double best_v = -1e300;
    std::vector<double> scores(size_t(2 * radius + 1) * (2 * radius + 1));
    auto score_at = [&](int dx, int dy) -> double& {
        return scores[size_t(dy + radius) * (2 * radius + 1) + size_t(dx + radius)];
    };
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            double v = ncc_at(ref, mov, dx, dy);
            score_at(dx, dy) = v;
            if (v > best_v) {
                best_v = v;
                best.dx = dx;
                best.dy = dy;
            }
        }
    }
    auto get = [&](int dx, int dy) {
        if (std::abs(dx) > radius || std::abs(dy) > radius) return ncc_at(ref, mov, dx, dy);
        return score_at(dx, dy);
    };
    best.sub_dx = parabolic_offset(get(best.dx - 1, best.dy), best_v, get(best.dx + 1, best.dy));
    best.sub_dy = parabolic_offset(get(best.dx, best.dy - 1), best_v, get(best.dx, best.dy + 1));
    return best;
}

}  // namespace

void CameraIntrinsics::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0))
        throw std::invalid_argument("CameraIntrinsics: focal lengths must be positive");
}

float sample_bilinear(const BandImage& img, double x, double y) {
    const int w = int(img.width()), h = int(img.height());
    if (x < 0.0 || y < 0.0 || x > w - 1 || y > h - 1) return 0.0f;
    int x0 = int(std::floor(x)), y0 = int(std::floor(y));
    int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
    double fx = x - x0, fy = y - y0;
    double v00 = img.at(uint32_t(x0), uint32_t(y0));
    double v10 = img.at(uint32_t(x1), uint32_t(y0));
    double v01 = img.at(uint32_t(x0), uint32_t(y1));
    double v11 = img.at(uint32_t(x1), uint32_t(y1));
    return float((v00 * (1 - fx) + v10 * fx) * (1 - fy) + (v01 * (1 - fx) + v11 * fx) * fy);
}

BandImage undistort(const BandImage& img, const CameraIntrinsics& k) {
    k.validate();
    if (k.k1 == 0.0 && k.k2 == 0.0) return img;
    BandImage out(img.width(), img.height(), img.band());
    for (uint32_t y = 0; y < img.height(); ++y) {
        for (uint32_t x = 0; x < img.width(); ++x) {
            double xn = (double(x) - k.cx) / k.fx;
            double yn = (double(y) - k.cy) / k.fy;
            double r2 = xn * xn + yn * yn;
            double scale = 1.0 + k.k1 * r2 + k.k2 * r2 * r2;
            double sx = xn * scale * k.fx + k.cx;
            double sy = yn * scale * k.fy + k.cy;
            out.at(x, y) = sample_bilinear(img, sx, sy);
        }
    }
    return out;
}

BandImage rotate_about_center(const BandImage& img, double theta) {
    if (theta == 0.0) return img;
    BandImage out(img.width(), img.height(), img.band());
    const double cx = (img.width() - 1) * 0.5, cy = (img.height() - 1) * 0.5;
    const double c = std::cos(theta), s = std::sin(theta);
    for (uint32_t y = 0; y < img.height(); ++y) {
        for (uint32_t x = 0; x < img.width(); ++x) {
            // inverse rotation of the output point
            double dx = double(x) - cx, dy = double(y) - cy;
            double sx = cx + c * dx + s * dy;
            double sy = cy - s * dx + c * dy;
            out.at(x, y) = sample_bilinear(img, sx, sy);
        }
    }
    return out;
}

BandImage shift_image(const BandImage& img, double tx, double ty) {
    if (tx == 0.0 && ty == 0.0) return img;
    BandImage out(img.width(), img.height(), img.band());
    for (uint32_t y = 0; y < img.height(); ++y)
        for (uint32_t x = 0; x < img.width(); ++x)
            out.at(x, y) = sample_bilinear(img, double(x) - tx, double(y) - ty);
    return out;
}

TranslationEstimate estimate_translation(const BandImage& ref, const BandImage& mov,
                                         const RegistrationOptions& opts) {
    if (ref.width() != mov.width() || ref.height() != mov.height())
        throw std::invalid_argument("estimate_translation: dimension mismatch");
    if (image_variance(ref) <= 0.0 || image_variance(mov) <= 0.0)
        throw std::runtime_error("estimate_translation: constant image (zero variance)");

    const bool small = std::min(ref.width(), ref.height()) < opts.ncc_fallback_side;
    PeakResult peak = small ? ncc_exhaustive(ref, mov, opts.search_radius)
                            : phase_correlate(ref, mov, opts.search_radius);

    TranslationEstimate est;
    est.confidence = ncc_at(ref, mov, peak.dx, peak.dy);
    if (est.confidence < opts.confidence_threshold)
        throw std::runtime_error("estimate_translation: no similarity (correlation peak " +
                                 std::to_string(est.confidence) + " below threshold)");
    est.transform.tx = peak.dx + peak.sub_dx;
    est.transform.ty = peak.dy + peak.sub_dy;
    est.transform.theta = 0.0;
    return est;
}

TranslationEstimate estimate_rigid(const BandImage& ref, const BandImage& mov,
                                   const RegistrationOptions& opts) {
    if (opts.angle_min_deg > opts.angle_max_deg || opts.angle_step_deg <= 0.0)
        return estimate_translation(ref, mov, opts);

    // Rotation zero-fills corner wedges; crop a margin before comparing
    // so those pixels cannot skew the correlation. Cropping both images
    // identically leaves the translation between them unchanged.
    const double max_angle =
        std::max(std::abs(opts.angle_min_deg), std::abs(opts.angle_max_deg)) *
        std::numbers::pi / 180.0;
    const double diag = std::hypot(double(ref.width()), double(ref.height()));
    uint32_t margin = uint32_t(std::ceil(0.5 * diag * std::sin(max_angle))) + 2;
    margin = std::min({margin, ref.width() / 4, ref.height() / 4});
    auto crop_center = [margin](const BandImage& img) {
        const uint32_t w = img.width() - 2 * margin, h = img.height() - 2 * margin;
        BandImage out(w, h, img.band());
        for (uint32_t y = 0; y < h; ++y)
            for (uint32_t x = 0; x < w; ++x) out.at(x, y) = img.at(x + margin, y + margin);
        return out;
    };
    const BandImage ref_c = crop_center(ref);

    RegistrationOptions inner = opts;
    inner.confidence_threshold = 0.0;  // gate once on the winner
    auto estimate_at = [&](double deg) -> std::optional<TranslationEstimate> {
        const double theta = deg * std::numbers::pi / 180.0;
        BandImage cand = crop_center(rotate_about_center(mov, -theta));
        try {
            TranslationEstimate e = estimate_translation(ref_c, cand, inner);
            // estimate_translation saw the un-rotated image, so its shift is
            // expressed in un-rotated coordinates; rotate it back.
            const double c = std::cos(theta), s = std::sin(theta);
            e.transform = {c * e.transform.tx - s * e.transform.ty,
                           s * e.transform.tx + c * e.transform.ty, theta};
            return e;
        } catch (const std::runtime_error&) {
            return std::nullopt;
        }
    };

    std::vector<std::pair<double, TranslationEstimate>> grid;
    for (double deg = opts.angle_min_deg; deg <= opts.angle_max_deg + 1e-9;
         deg += opts.angle_step_deg)
        if (auto e = estimate_at(deg)) grid.emplace_back(deg, *e);
    if (grid.empty())
        throw std::runtime_error("estimate_rigid: no angle candidate produced a correlation");

    size_t bi = 0;
    for (size_t i = 1; i < grid.size(); ++i)
        if (grid[i].second.confidence > grid[bi].second.confidence) bi = i;
    TranslationEstimate best = grid[bi].second;

    // Parabolic refinement over the confidence curve resolves the angle
    // below the grid step when the peak is interior.
    if (bi > 0 && bi + 1 < grid.size()) {
        const double cm = grid[bi - 1].second.confidence;
        const double c0 = grid[bi].second.confidence;
        const double cp = grid[bi + 1].second.confidence;
        const double denom = cm - 2.0 * c0 + cp;
        if (denom < 0.0) {
            double offset = 0.5 * (cm - cp) / denom;
            offset = std::clamp(offset, -0.5, 0.5);
            if (auto refined = estimate_at(grid[bi].first + offset * opts.angle_step_deg);
                refined && refined->confidence >= best.confidence)
                best = *refined;
        }
    }
    if (best.confidence < opts.confidence_threshold)
        throw std::runtime_error("estimate_rigid: no similarity (correlation peak " +
                                 std::to_string(best.confidence) + " below threshold)");
    return best;
}

MultispectralFrame warp_and_crop(const MultispectralFrame& frame,
                                 const std::map<std::string, Transform2D>& transforms,
                                 uint32_t margin) {
    const int w = int(frame.width()), h = int(frame.height());
    const double cx = (w - 1) * 0.5, cy = (h - 1) * 0.5;

    // Aligned value at x comes from mov at c + R(theta)(x - c) + t.
    // The valid destination region per band is the inverse image of the
    // source rect; we take its inscribed axis-aligned rectangle.
    double left = 0, top = 0, right = w - 1, bottom = h - 1;
    for (const auto& [name, t] : transforms) {
        const double c = std::cos(t.theta), s = std::sin(t.theta);
        auto inv = [&](double sx, double sy, double& ox, double& oy) {
            double dx = sx - t.tx - cx, dy = sy - t.ty - cy;
            ox = cx + c * dx + s * dy;
            oy = cy - s * dx + c * dy;
        };
        double x00, y00, x10, y10, x01, y01, x11, y11;
        inv(0, 0, x00, y00);
        inv(w - 1, 0, x10, y10);
        inv(0, h - 1, x01, y01);
        inv(w - 1, h - 1, x11, y11);
        left = std::max(left, std::max(x00, x01));
        right = std::min(right, std::min(x10, x11));
        top = std::max(top, std::max(y00, y10));
        bottom = std::min(bottom, std::min(y01, y11));
    }
    int lx = int(std::ceil(left)) + int(margin);
    int rx = int(std::floor(right)) - int(margin);
    int ty = int(std::ceil(top)) + int(margin);
    int by = int(std::floor(bottom)) - int(margin);
    if (lx > rx || ty > by)
        throw std::runtime_error("warp_and_crop: empty valid intersection");

    const uint32_t ow = uint32_t(rx - lx + 1), oh = uint32_t(by - ty + 1);
    std::vector<BandImage> out_bands;
    for (const auto& band : frame.bands()) {
        auto it = transforms.find(band.band().name);
        BandImage out(ow, oh, band.band());
        if (it == transforms.end() || it->second.is_identity()) {
            for (uint32_t y = 0; y < oh; ++y)
                for (uint32_t x = 0; x < ow; ++x)
                    out.at(x, y) = band.at(uint32_t(lx) + x, uint32_t(ty) + y);
        } else {
            const Transform2D& t = it->second;
            const double c = std::cos(t.theta), s = std::sin(t.theta);
            for (uint32_t y = 0; y < oh; ++y) {
                for (uint32_t x = 0; x < ow; ++x) {
                    double dx = double(lx) + x - cx, dy = double(ty) + y - cy;
                    double sx = cx + c * dx - s * dy + t.tx;
                    double sy = cy + s * dx + c * dy + t.ty;
                    out.at(x, y) = sample_bilinear(band, sx, sy);
                }
            }
        }
        out_bands.push_back(std::move(out));
    }
    return MultispectralFrame(frame.frame_id(), std::move(out_bands));
}

void save_calibration(const RigCalibration& cal, const std::string& path) {
    nlohmann::json j;
    for (const auto& [name, t] : cal.band_transforms)
        j["bands"][name] = {{"tx", t.tx}, {"ty", t.ty}, {"theta", t.theta}};
    j["intrinsics"] = {{"fx", cal.intrinsics.fx}, {"fy", cal.intrinsics.fy},
                       {"cx", cal.intrinsics.cx}, {"cy", cal.intrinsics.cy},
                       {"k1", cal.intrinsics.k1}, {"k2", cal.intrinsics.k2}};
    j["search"] = {{"radius", cal.options.search_radius},
                   {"confidence_threshold", cal.options.confidence_threshold},
                   {"angle_min_deg", cal.options.angle_min_deg},
                   {"angle_max_deg", cal.options.angle_max_deg},
                   {"angle_step_deg", cal.options.angle_step_deg}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    out << j.dump(2) << "\n";
}

RigCalibration load_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    nlohmann::json j = nlohmann::json::parse(in);
    RigCalibration cal;
    if (j.contains("bands"))
        for (auto& [name, t] : j["bands"].items())
            cal.band_transforms[name] = {t["tx"], t["ty"], t["theta"]};
    if (j.contains("intrinsics")) {
        auto& k = j["intrinsics"];
        cal.intrinsics = {k["fx"], k["fy"], k["cx"], k["cy"], k["k1"], k["k2"]};
    }
    if (j.contains("search")) {
        auto& s = j["search"];
        cal.options.search_radius = s["radius"];
        cal.options.confidence_threshold = s["confidence_threshold"];
        cal.options.angle_min_deg = s["angle_min_deg"];
        cal.options.angle_max_deg = s["angle_max_deg"];
        cal.options.angle_step_deg = s["angle_step_deg"];
    }
    return cal;
}

}  // namespace weedseg

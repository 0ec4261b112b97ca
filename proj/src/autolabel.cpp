#include "weedseg/autolabel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace weedseg {

void AutolabelConfig::validate() const {
    if (!(blur_sigma > 0.0)) throw std::invalid_argument("AutolabelConfig: blur_sigma must be > 0");
    if (min_blob_pixels < 1) throw std::invalid_argument("AutolabelConfig: min_blob_pixels must be >= 1");
    if (vegetation_class != kCrop && vegetation_class != kWeed)
        throw std::invalid_argument("AutolabelConfig: vegetation_class must be 1 (crop) or 2 (weed)");
    if (otsu_bins < 2) throw std::invalid_argument("AutolabelConfig: otsu_bins must be >= 2");
}

namespace {

// Symmetric reflection: ...2,1,0 | 0,1,2... (edge sample repeated).
int reflect_index(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - i - 1;
    }
    return i;
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = int(std::ceil(3.0 * sigma));
    std::vector<double> k(size_t(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double v = std::exp(-0.5 * double(i) * i / (sigma * sigma));
        k[size_t(i + radius)] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;
    return k;
}

}  // namespace

BandImage gaussian_blur(const BandImage& img, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_blur: sigma must be > 0");
    const auto kernel = gaussian_kernel(sigma);
    const int radius = int(kernel.size() / 2);
    const int w = int(img.width()), h = int(img.height());

    // horizontal pass
    std::vector<double> tmp(size_t(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[size_t(i + radius)] * img.at(uint32_t(reflect_index(x + i, w)), uint32_t(y));
            tmp[size_t(y) * w + x] = acc;
        }
    }
    // vertical pass
    BandImage out(img.width(), img.height(), img.band());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[size_t(i + radius)] * tmp[size_t(reflect_index(y + i, h)) * w + x];
            out.at(uint32_t(x), uint32_t(y)) = float(acc);
        }
    }
    return out;
}

BandImage unsharp_sharpen(const BandImage& img, const BandImage& blurred, double amount) {
    if (img.width() != blurred.width() || img.height() != blurred.height())
        throw std::invalid_argument("unsharp_sharpen: dimension mismatch");
    BandImage out(img.width(), img.height(), img.band());
    for (size_t i = 0; i < img.size(); ++i) {
        double v = img.data()[i] + amount * (double(img.data()[i]) - blurred.data()[i]);
        out.data()[i] = float(std::clamp(v, -1.0, 1.0));
    }
    return out;
}

double otsu_threshold(const BandImage& img, int num_bins) {
    const auto& data = img.data();
    float lo = data[0], hi = data[0];
    for (float v : data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) throw std::runtime_error("otsu_threshold: degenerate histogram (constant image)");

    std::vector<long> hist(size_t(num_bins), 0);
    const double range = double(hi) - lo;
    for (float v : data) {
        int bin = int((double(v) - lo) / range * num_bins);
        bin = std::clamp(bin, 0, num_bins - 1);
        hist[size_t(bin)]++;
    }

    const double total = double(data.size());
    double total_mean = 0.0;
    for (int b = 0; b < num_bins; ++b) total_mean += double(b) * double(hist[size_t(b)]);
    total_mean /= total;

    // split after bin t: class 0 = bins [0..t], class 1 = bins [t+1..]
    int best_t = 0;
    double best_var = -1.0;
    double w0 = 0.0, sum0 = 0.0;
    for (int t = 0; t < num_bins - 1; ++t) {
        w0 += double(hist[size_t(t)]);
        sum0 += double(t) * double(hist[size_t(t)]);
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (total_mean * total - sum0) / w1;
        const double var = (w0 / total) * (w1 / total) * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {  // strict: ties keep the lowest threshold
            best_var = var;
            best_t = t;
        }
    }
    return double(lo) + (double(best_t) + 1.0) / num_bins * range;
}

std::vector<std::vector<size_t>> connected_components(const BinaryRaster& mask, int connectivity) {
    if (connectivity != 4 && connectivity != 8)
        throw std::invalid_argument("connected_components: connectivity must be 4 or 8");
    const int w = int(mask.width), h = int(mask.height);
    std::vector<std::vector<size_t>> components;
    std::vector<uint8_t> visited(mask.fg.size(), 0);

    static constexpr int dx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int dy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const int ndirs = connectivity == 4 ? 4 : 8;

    std::vector<size_t> stack;
    for (size_t start = 0; start < mask.fg.size(); ++start) {
        if (!mask.fg[start] || visited[start]) continue;
        std::vector<size_t> comp;
        stack.clear();
        stack.push_back(start);
        visited[start] = 1;
        while (!stack.empty()) {
            size_t idx = stack.back();
            stack.pop_back();
            comp.push_back(idx);
            const int x = int(idx % size_t(w)), y = int(idx / size_t(w));
            for (int d = 0; d < ndirs; ++d) {
                const int nx = x + dx8[d], ny = y + dy8[d];
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const size_t nidx = size_t(ny) * size_t(w) + size_t(nx);
                if (mask.fg[nidx] && !visited[nidx]) {
                    visited[nidx] = 1;
                    stack.push_back(nidx);
                }
            }
        }
        components.push_back(std::move(comp));
    }
    return components;
}

LabelMask generate_mask(const BandImage& ndvi, const AutolabelConfig& cfg) {
    cfg.validate();
    BandImage blurred = gaussian_blur(ndvi, cfg.blur_sigma);
    BandImage sharpened = unsharp_sharpen(ndvi, blurred, cfg.sharpen_amount);
    const double thresh = otsu_threshold(sharpened, cfg.otsu_bins);

    BinaryRaster fg;
    fg.width = ndvi.width();
    fg.height = ndvi.height();
    fg.fg.resize(ndvi.size());
    for (size_t i = 0; i < fg.fg.size(); ++i)
        fg.fg[i] = sharpened.data()[i] > thresh ? 1 : 0;

    LabelMask out(ndvi.width(), ndvi.height(), kBackground);
    for (const auto& comp : connected_components(fg, 4)) {
        if (int(comp.size()) < cfg.min_blob_pixels) continue;
        for (size_t idx : comp) out.labels()[idx] = cfg.vegetation_class;
    }
    return out;
}

}  // namespace weedseg

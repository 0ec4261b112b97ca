#include "weedseg/image.hpp"

#include <cmath>
#include <stdexcept>

namespace weedseg {

Band Band::from_name(const std::string& n) {
    if (n == "NIR") return nir();
    if (n == "Red") return red();
    if (n == "NDVI") return ndvi();
    return other(n);
}

BandImage::BandImage(uint32_t w, uint32_t h, Band band, float fill)
    : width_(w), height_(h), band_(std::move(band)), data_(size_t(w) * h, fill) {
    if (w < 1 || h < 1) throw std::invalid_argument("BandImage: width and height must be >= 1");
}

BandImage::BandImage(uint32_t w, uint32_t h, Band band, std::vector<float> data)
    : width_(w), height_(h), band_(std::move(band)), data_(std::move(data)) {
    if (w < 1 || h < 1) throw std::invalid_argument("BandImage: width and height must be >= 1");
    if (data_.size() != size_t(w) * h)
        throw std::invalid_argument("BandImage: data length does not match dimensions");
}

void BandImage::validate() const {
    if (data_.size() != size_t(width_) * height_)
        throw std::runtime_error("BandImage: data length does not match dimensions");
    for (float v : data_)
        if (!std::isfinite(v)) throw std::runtime_error("BandImage: non-finite sample");
}

MultispectralFrame::MultispectralFrame(std::string frame_id, std::vector<BandImage> bands)
    : frame_id_(std::move(frame_id)) {
    if (bands.empty()) throw std::invalid_argument("MultispectralFrame: at least one band required");
    for (auto& b : bands) add(std::move(b));
}

const BandImage* MultispectralFrame::find(const Band& b) const {
    for (const auto& img : bands_)
        if (img.band() == b) return &img;
    return nullptr;
}

const BandImage& MultispectralFrame::get(const Band& b) const {
    const BandImage* img = find(b);
    if (!img) throw std::runtime_error("MultispectralFrame: band not present: " + b.name);
    return *img;
}

void MultispectralFrame::add(BandImage img) {
    if (!bands_.empty() &&
        (img.width() != bands_.front().width() || img.height() != bands_.front().height()))
        throw std::invalid_argument("MultispectralFrame: band dimensions differ");
    if (find(img.band()))
        throw std::invalid_argument("MultispectralFrame: duplicate band " + img.band().name);
    bands_.push_back(std::move(img));
}

LabelMask::LabelMask(uint32_t w, uint32_t h, uint8_t fill)
    : width_(w), height_(h), labels_(size_t(w) * h, fill) {
    if (fill > 2) throw std::invalid_argument("LabelMask: label out of range");
}

LabelMask::LabelMask(uint32_t w, uint32_t h, std::vector<uint8_t> labels)
    : width_(w), height_(h), labels_(std::move(labels)) {
    if (labels_.size() != size_t(w) * h)
        throw std::invalid_argument("LabelMask: label count does not match dimensions");
    for (uint8_t v : labels_)
        if (v > 2) throw std::invalid_argument("LabelMask: label out of range");
}

ProbabilityMap::ProbabilityMap(uint32_t w, uint32_t h, int num_classes)
    : width_(w), height_(h), num_classes_(num_classes),
      probs_(size_t(w) * h * num_classes, 0.0f) {
    if (num_classes < 1) throw std::invalid_argument("ProbabilityMap: num_classes must be >= 1");
}

void ProbabilityMap::validate(float tol) const {
    const size_t n = size_t(width_) * height_;
    for (size_t p = 0; p < n; ++p) {
        double sum = 0.0;
        for (int c = 0; c < num_classes_; ++c) {
            float v = probs_[p * num_classes_ + c];
            if (!(v >= 0.0f)) throw std::runtime_error("ProbabilityMap: negative probability");
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol)
            throw std::runtime_error("ProbabilityMap: probabilities do not sum to 1");
    }
}

BandImage compute_ndvi(const BandImage& nir, const BandImage& red) {
    if (nir.width() != red.width() || nir.height() != red.height())
        throw std::invalid_argument("compute_ndvi: dimension mismatch");
    if (nir.band().kind != Band::NIR) throw std::invalid_argument("compute_ndvi: first image must be NIR");
    if (red.band().kind != Band::Red) throw std::invalid_argument("compute_ndvi: second image must be Red");
    BandImage out(nir.width(), nir.height(), Band::ndvi());
    const auto& a = nir.data();
    const auto& b = red.data();
    auto& o = out.data();
    for (size_t i = 0; i < o.size(); ++i) {
        float denom = a[i] + b[i];
        o[i] = denom == 0.0f ? 0.0f : (a[i] - b[i]) / denom;
    }
    return out;
}

RgbImage render_mask(const LabelMask& mask) {
    RgbImage out(mask.width(), mask.height());
    static constexpr uint8_t palette[3][3] = {
        {0, 0, 255},   // background: blue
        {255, 0, 0},   // crop: red
        {0, 255, 0},   // weed: green
    };
    const auto& labels = mask.labels();
    for (size_t i = 0; i < labels.size(); ++i) {
        const uint8_t* c = palette[labels[i]];
        out.data[i * 3 + 0] = c[0];
        out.data[i * 3 + 1] = c[1];
        out.data[i * 3 + 2] = c[2];
    }
    return out;
}

namespace {
uint8_t quantize255(float p) {
    // round half up, clamped
    float v = p * 255.0f;
    if (v <= 0.0f) return 0;
    if (v >= 255.0f) return 255;
    return uint8_t(std::floor(v + 0.5f));
}
}  // namespace

RgbImage render_probability(const ProbabilityMap& pm) {
    if (pm.num_classes() != 3)
        throw std::invalid_argument("render_probability: requires exactly 3 classes");
    RgbImage out(pm.width(), pm.height());
    const size_t n = size_t(pm.width()) * pm.height();
    const auto& probs = pm.data();
    for (size_t i = 0; i < n; ++i) {
        out.data[i * 3 + 0] = quantize255(probs[i * 3 + kCrop]);
        out.data[i * 3 + 1] = quantize255(probs[i * 3 + kWeed]);
        out.data[i * 3 + 2] = quantize255(probs[i * 3 + kBackground]);
    }
    return out;
}

LabelMask argmax_labels(const ProbabilityMap& pm) {
    LabelMask out(pm.width(), pm.height());
    const size_t n = size_t(pm.width()) * pm.height();
    const int k = pm.num_classes();
    const auto& probs = pm.data();
    for (size_t i = 0; i < n; ++i) {
        int best = 0;
        float best_p = probs[i * k];
        for (int c = 1; c < k; ++c) {
            if (probs[i * k + c] > best_p) {
                best_p = probs[i * k + c];
                best = c;
            }
        }
        out.labels()[i] = uint8_t(best);
    }
    return out;
}

}  // namespace weedseg

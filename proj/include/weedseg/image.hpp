#ifndef WEEDSEG_IMAGE_HPP
#define WEEDSEG_IMAGE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace weedseg {

// Spectral band identity of a single-channel raster.
struct Band {
    enum Kind { NIR, Red, NDVI, Other };
    Kind kind = Other;
    std::string name;  // set for Other, canonical name otherwise

    static Band nir() { return {NIR, "NIR"}; }
    static Band red() { return {Red, "Red"}; }
    static Band ndvi() { return {NDVI, "NDVI"}; }
    static Band other(std::string n) { return {Other, std::move(n)}; }
    static Band from_name(const std::string& n);

    bool operator==(const Band& o) const { return kind == o.kind && name == o.name; }
};

// Single-band float raster, row-major. Reflectance bands live in [0,1],
// NDVI in [-1,1]. All samples must stay finite.
class BandImage {
public:
    BandImage() = default;
    BandImage(uint32_t w, uint32_t h, Band band, float fill = 0.0f);
    BandImage(uint32_t w, uint32_t h, Band band, std::vector<float> data);

    uint32_t width() const { return width_; }
    uint32_t height() const { return height_; }
    const Band& band() const { return band_; }
    size_t size() const { return data_.size(); }

    float at(uint32_t x, uint32_t y) const { return data_[size_t(y) * width_ + x]; }
    float& at(uint32_t x, uint32_t y) { return data_[size_t(y) * width_ + x]; }
    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    // Throws if samples are non-finite or size mismatches dimensions.
    void validate() const;

private:
    uint32_t width_ = 0, height_ = 0;
    Band band_;
    std::vector<float> data_;
};

// Aligned stack of named bands sharing dimensions.
class MultispectralFrame {
public:
    MultispectralFrame() = default;
    MultispectralFrame(std::string frame_id, std::vector<BandImage> bands);

    const std::string& frame_id() const { return frame_id_; }
    const std::vector<BandImage>& bands() const { return bands_; }
    uint32_t width() const { return bands_.front().width(); }
    uint32_t height() const { return bands_.front().height(); }

    const BandImage* find(const Band& b) const;
    const BandImage& get(const Band& b) const;  // throws if absent
    void add(BandImage img);                    // throws on dim/name clash

private:
    std::string frame_id_;
    std::vector<BandImage> bands_;
};

// Class ids: 0 = background, 1 = crop, 2 = weed.
inline constexpr uint8_t kBackground = 0;
inline constexpr uint8_t kCrop = 1;
inline constexpr uint8_t kWeed = 2;
inline constexpr int kNumClasses = 3;

class LabelMask {
public:
    LabelMask() = default;
    LabelMask(uint32_t w, uint32_t h, uint8_t fill = 0);
    LabelMask(uint32_t w, uint32_t h, std::vector<uint8_t> labels);

    uint32_t width() const { return width_; }
    uint32_t height() const { return height_; }
    size_t size() const { return labels_.size(); }
    uint8_t at(uint32_t x, uint32_t y) const { return labels_[size_t(y) * width_ + x]; }
    uint8_t& at(uint32_t x, uint32_t y) { return labels_[size_t(y) * width_ + x]; }
    const std::vector<uint8_t>& labels() const { return labels_; }
    std::vector<uint8_t>& labels() { return labels_; }

    bool operator==(const LabelMask& o) const {
        return width_ == o.width_ && height_ == o.height_ && labels_ == o.labels_;
    }

private:
    uint32_t width_ = 0, height_ = 0;
    std::vector<uint8_t> labels_;
};

// Per-pixel class probabilities, layout [pixel][class].
class ProbabilityMap {
public:
    ProbabilityMap() = default;
    ProbabilityMap(uint32_t w, uint32_t h, int num_classes);

    uint32_t width() const { return width_; }
    uint32_t height() const { return height_; }
    int num_classes() const { return num_classes_; }
    float prob(uint32_t x, uint32_t y, int c) const {
        return probs_[(size_t(y) * width_ + x) * num_classes_ + c];
    }
    float& prob(uint32_t x, uint32_t y, int c) {
        return probs_[(size_t(y) * width_ + x) * num_classes_ + c];
    }
    const std::vector<float>& data() const { return probs_; }
    std::vector<float>& data() { return probs_; }

    // Each pixel's probabilities must be >= 0 and sum to 1 within tol.
    void validate(float tol = 1e-5f) const;

private:
    uint32_t width_ = 0, height_ = 0;
    int num_classes_ = 0;
    std::vector<float> probs_;
};

// Interleaved 8-bit RGB image, the render target.
struct RgbImage {
    uint32_t width = 0, height = 0;
    std::vector<uint8_t> data;  // 3 * width * height, RGB order

    RgbImage() = default;
    RgbImage(uint32_t w, uint32_t h) : width(w), height(h), data(size_t(3) * w * h, 0) {}
    uint8_t* px(uint32_t x, uint32_t y) { return &data[(size_t(y) * width + x) * 3]; }
    const uint8_t* px(uint32_t x, uint32_t y) const { return &data[(size_t(y) * width + x) * 3]; }
};

// NDVI = (NIR - Red) / (NIR + Red), 0 where the denominator is 0.
BandImage compute_ndvi(const BandImage& nir, const BandImage& red);

// bg -> blue, crop -> red, weed -> green.
RgbImage render_mask(const LabelMask& mask);

// R = P(crop), G = P(weed), B = P(bg), scaled to [0,255], round half up.
RgbImage render_probability(const ProbabilityMap& pm);

// Per-pixel argmax, ties broken by lowest class id.
LabelMask argmax_labels(const ProbabilityMap& pm);

}  // namespace weedseg

#endif

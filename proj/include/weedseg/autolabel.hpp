#ifndef WEEDSEG_AUTOLABEL_HPP
#define WEEDSEG_AUTOLABEL_HPP

#include <vector>

#include "weedseg/image.hpp"

namespace weedseg {

struct AutolabelConfig {
    double blur_sigma = 1.2;       // Gaussian sigma, pixels
    double sharpen_amount = 1.0;   // unsharp masking strength
    int min_blob_pixels = 300;     // smallest surviving component
    uint8_t vegetation_class = kCrop;  // 1 (crop) or 2 (weed)
    int otsu_bins = 256;

    void validate() const;
};

// Separable Gaussian, kernel radius ceil(3*sigma), normalized to sum 1,
// symmetric-reflection edge handling.
BandImage gaussian_blur(const BandImage& img, double sigma);

// out = clamp(img + amount * (img - blurred), -1, 1)
BandImage unsharp_sharpen(const BandImage& img, const BandImage& blurred, double amount);

// Histogram threshold maximizing between-class variance over num_bins
// bins spanning [min, max] of the image. Ties take the lowest threshold.
// Throws on a constant image ("degenerate histogram").
double otsu_threshold(const BandImage& img, int num_bins = 256);

struct BinaryRaster {
    uint32_t width = 0, height = 0;
    std::vector<uint8_t> fg;  // 0 or 1, row-major
};

// Maximal connected sets of foreground pixels; each component is a list
// of row-major pixel indices.
std::vector<std::vector<size_t>> connected_components(const BinaryRaster& mask,
                                                      int connectivity = 4);

// Full pipeline: blur, sharpen, Otsu on the result, keep above-threshold
// components of at least min_blob_pixels, label them vegetation_class.
LabelMask generate_mask(const BandImage& ndvi, const AutolabelConfig& cfg);

}  // namespace weedseg

#endif

#ifndef WEEDSEG_IMAGE_IO_HPP
#define WEEDSEG_IMAGE_IO_HPP

#include <string>

#include "weedseg/image.hpp"

namespace weedseg {

// Grayscale raster as read from disk, before normalization.
struct GrayImage {
    uint32_t width = 0, height = 0;
    int bit_depth = 8;  // 8 or 16
    std::vector<uint16_t> samples;
};

GrayImage read_pgm(const std::string& path);
void write_pgm(const GrayImage& img, const std::string& path);

GrayImage read_gray_png(const std::string& path);
void write_gray_png(const GrayImage& img, const std::string& path);  // 8-bit only
void write_rgb_png(const RgbImage& img, const std::string& path);

// Reads an 8/16-bit grayscale PGM or PNG (by file magic) and normalizes
// integer samples to [0,1] by the format's max value. NDVI bands are then
// remapped from storage range [0,1] back to [-1,1].
BandImage read_band_image(const std::string& path, const Band& band);

// Quantizes to the requested depth and writes PGM (.pgm) or 8-bit gray
// PNG (.png) by extension. NDVI samples are remapped [-1,1] -> [0,1]
// before quantization; other bands must already be in [0,1].
void write_band_image(const BandImage& img, const std::string& path, int bit_depth = 16);

// Masks are stored as 8-bit grayscale PNG with raw class ids {0,1,2}.
LabelMask read_mask_png(const std::string& path);
void write_mask_png(const LabelMask& mask, const std::string& path);

}  // namespace weedseg

#endif

#ifndef WEEDSEG_BALANCE_HPP
#define WEEDSEG_BALANCE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "weedseg/image.hpp"

namespace weedseg {

// Pixel-count aggregates over a training set of masks.
struct DatasetStats {
    std::array<uint64_t, kNumClasses> total_pixels{};          // pixels of class c
    std::array<uint64_t, kNumClasses> present_image_pixels{};  // size of all images containing c
    uint64_t image_count = 0;

    // Elementwise merge of parallel shards.
    DatasetStats& operator+=(const DatasetStats& o);
};

// Median-frequency class weights: w[c] = median(foa) / foa[c].
struct ClassWeights {
    std::array<double, kNumClasses> w{1.0, 1.0, 1.0};
    std::array<double, kNumClasses> foa{};
    double median_foa = 0.0;
};

DatasetStats accumulate_stats(const std::vector<LabelMask>& masks);

// Throws if any class is absent from every mask, naming the class.
ClassWeights compute_class_weights(const DatasetStats& stats);

void save_weights(const DatasetStats& stats, const ClassWeights& weights, const std::string& path);
ClassWeights load_weights(const std::string& path);

}  // namespace weedseg

#endif

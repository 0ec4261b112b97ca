#include "weedseg/balance.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace weedseg {

DatasetStats& DatasetStats::operator+=(const DatasetStats& o) {
    for (int c = 0; c < kNumClasses; ++c) {
        total_pixels[size_t(c)] += o.total_pixels[size_t(c)];
        present_image_pixels[size_t(c)] += o.present_image_pixels[size_t(c)];
    }
    image_count += o.image_count;
    return *this;
}

DatasetStats accumulate_stats(const std::vector<LabelMask>& masks) {
    if (masks.empty()) throw std::invalid_argument("accumulate_stats: empty mask sequence");
    DatasetStats stats;
    for (const auto& mask : masks) {
        std::array<uint64_t, kNumClasses> counts{};
        for (uint8_t label : mask.labels()) counts[label]++;
        const uint64_t area = uint64_t(mask.width()) * mask.height();
        for (int c = 0; c < kNumClasses; ++c) {
            stats.total_pixels[size_t(c)] += counts[size_t(c)];
            if (counts[size_t(c)] > 0) stats.present_image_pixels[size_t(c)] += area;
        }
        stats.image_count++;
    }
    return stats;
}

ClassWeights compute_class_weights(const DatasetStats& stats) {
    static const char* class_names[kNumClasses] = {"background", "crop", "weed"};
    ClassWeights cw;
    for (int c = 0; c < kNumClasses; ++c) {
        if (stats.present_image_pixels[size_t(c)] == 0)
            throw std::runtime_error(std::string("compute_class_weights: class never present: ") +
                                     class_names[c]);
        cw.foa[size_t(c)] = double(stats.total_pixels[size_t(c)]) /
                            double(stats.present_image_pixels[size_t(c)]);
    }
    std::array<double, kNumClasses> sorted = cw.foa;
    std::sort(sorted.begin(), sorted.end());
    cw.median_foa = sorted[kNumClasses / 2];  // middle of 3
    for (int c = 0; c < kNumClasses; ++c) cw.w[size_t(c)] = cw.median_foa / cw.foa[size_t(c)];
    return cw;
}

void save_weights(const DatasetStats& stats, const ClassWeights& weights, const std::string& path) {
    nlohmann::json j;
    j["stats"] = {{"total_pixels", stats.total_pixels},
                  {"present_image_pixels", stats.present_image_pixels},
                  {"image_count", stats.image_count}};
    j["weights"] = {{"w", weights.w}, {"foa", weights.foa}, {"median_foa", weights.median_foa}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    out << j.dump(2) << "\n";
}

ClassWeights load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    nlohmann::json j = nlohmann::json::parse(in);
    ClassWeights cw;
    auto& w = j.at("weights");
    for (int c = 0; c < kNumClasses; ++c) {
        cw.w[size_t(c)] = w.at("w")[size_t(c)];
        cw.foa[size_t(c)] = w.at("foa")[size_t(c)];
    }
    cw.median_foa = w.at("median_foa");
    return cw;
}

}  // namespace weedseg

#ifndef WEEDSEG_METRICS_HPP
#define WEEDSEG_METRICS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "weedseg/image.hpp"

namespace weedseg {

struct ConfusionMatrix {
    // counts[true][pred]
    std::array<std::array<uint64_t, kNumClasses>, kNumClasses> counts{};

    uint64_t total() const;
    uint64_t tp(int c) const { return counts[size_t(c)][size_t(c)]; }
    uint64_t fp(int c) const;  // predicted c, truth differs
    uint64_t fn(int c) const;  // truth c, predicted differently
    uint64_t tn(int c) const;

    ConfusionMatrix& operator+=(const ConfusionMatrix& o);
};

struct ClassScores {
    std::array<double, kNumClasses> precision{};
    std::array<double, kNumClasses> recall{};
    std::array<double, kNumClasses> f1{};
};

struct RocCurve {
    struct Point {
        double fpr, tpr;
    };
    std::vector<Point> points;  // from (0,0) to (1,1), threshold descending
    double auc = 0.0;
};

ConfusionMatrix confusion(const LabelMask& pred, const LabelMask& truth);

// precision = TP/(TP+FP), recall = TP/(TP+FN); 0 on zero denominators.
ClassScores scores(const ConfusionMatrix& cm);

// One-vs-rest ROC on P(cls); AUC by the Mann-Whitney statistic with ties
// at half credit. Throws if either side of the split is empty.
RocCurve roc_auc(const std::vector<double>& scores_list, const std::vector<uint8_t>& positives);
RocCurve roc_auc(const ProbabilityMap& probs, const LabelMask& truth, int cls);

struct EvalReport {
    ConfusionMatrix aggregate;
    ClassScores class_scores;
    // One-vs-rest AUC per class, absent when a class has no positive or
    // no negative pixels in the pooled set.
    std::array<std::optional<double>, kNumClasses> auc{};
    std::array<RocCurve, kNumClasses> roc{};
    uint64_t frame_count = 0;
};

// Micro-averaged over frames: confusion matrices summed before scoring,
// AUC over pixels pooled across all frames. Probability maps are
// optional; without them AUC is skipped.
EvalReport evaluate_dataset(const std::vector<LabelMask>& preds,
                            const std::vector<LabelMask>& truths,
                            const std::vector<ProbabilityMap>* probs = nullptr);

std::string report_to_json(const EvalReport& report);
std::string report_to_table(const EvalReport& report);
std::string roc_to_csv(const RocCurve& roc);

}  // namespace weedseg

#endif

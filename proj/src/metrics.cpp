#include "weedseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace weedseg {

uint64_t ConfusionMatrix::total() const {
    uint64_t t = 0;
    for (const auto& row : counts)
        for (uint64_t v : row) t += v;
    return t;
}

uint64_t ConfusionMatrix::fp(int c) const {
    uint64_t v = 0;
    for (int t = 0; t < kNumClasses; ++t)
        if (t != c) v += counts[size_t(t)][size_t(c)];
    return v;
}

uint64_t ConfusionMatrix::fn(int c) const {
    uint64_t v = 0;
    for (int p = 0; p < kNumClasses; ++p)
        if (p != c) v += counts[size_t(c)][size_t(p)];
    return v;
}

uint64_t ConfusionMatrix::tn(int c) const { return total() - tp(c) - fp(c) - fn(c); }

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
    for (int t = 0; t < kNumClasses; ++t)
        for (int p = 0; p < kNumClasses; ++p) counts[size_t(t)][size_t(p)] += o.counts[size_t(t)][size_t(p)];
    return *this;
}

ConfusionMatrix confusion(const LabelMask& pred, const LabelMask& truth) {
    if (pred.width() != truth.width() || pred.height() != truth.height())
        throw std::invalid_argument("confusion: dimension mismatch");
    ConfusionMatrix cm;
    for (size_t i = 0; i < pred.size(); ++i)
        cm.counts[truth.labels()[i]][pred.labels()[i]]++;
    return cm;
}

ClassScores scores(const ConfusionMatrix& cm) {
    ClassScores s;
    for (int c = 0; c < kNumClasses; ++c) {
        const double tp = double(cm.tp(c));
        const double denom_p = tp + double(cm.fp(c));
        const double denom_r = tp + double(cm.fn(c));
        const double p = denom_p > 0.0 ? tp / denom_p : 0.0;
        const double r = denom_r > 0.0 ? tp / denom_r : 0.0;
        s.precision[size_t(c)] = p;
        s.recall[size_t(c)] = r;
        s.f1[size_t(c)] = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    }
    return s;
}

RocCurve roc_auc(const std::vector<double>& scores_list, const std::vector<uint8_t>& positives) {
    if (scores_list.size() != positives.size())
        throw std::invalid_argument("roc_auc: score/label length mismatch");
    const size_t n = scores_list.size();
    uint64_t n_pos = 0;
    for (uint8_t p : positives) n_pos += p ? 1 : 0;
    const uint64_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::runtime_error("roc_auc: needs both positive and negative samples");

    // Mann-Whitney via midranks
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores_list[a] < scores_list[b]; });
    double rank_sum_pos = 0.0;
    for (size_t i = 0; i < n;) {
        size_t j = i;
        while (j < n && scores_list[order[j]] == scores_list[order[i]]) ++j;
        const double midrank = 0.5 * (double(i + 1) + double(j));  // ranks are 1-based
        for (size_t k = i; k < j; ++k)
            if (positives[order[k]]) rank_sum_pos += midrank;
        i = j;
    }
    RocCurve roc;
    roc.auc = (rank_sum_pos - double(n_pos) * (double(n_pos) + 1.0) / 2.0) /
              (double(n_pos) * double(n_neg));

    // ROC by sweeping distinct scores as thresholds, descending;
    // a sample is predicted positive when score >= threshold.
    roc.points.push_back({0.0, 0.0});
    uint64_t tp = 0, fp = 0;
    for (size_t i = n; i > 0;) {
        size_t j = i;
        while (j > 0 && scores_list[order[j - 1]] == scores_list[order[i - 1]]) --j;
        for (size_t k = j; k < i; ++k) {
            if (positives[order[k]]) ++tp;
            else ++fp;
        }
        roc.points.push_back({double(fp) / double(n_neg), double(tp) / double(n_pos)});
        i = j;
    }
    return roc;
}

RocCurve roc_auc(const ProbabilityMap& probs, const LabelMask& truth, int cls) {
    if (probs.width() != truth.width() || probs.height() != truth.height())
        throw std::invalid_argument("roc_auc: dimension mismatch");
    const size_t n = size_t(probs.width()) * probs.height();
    std::vector<double> s(n);
    std::vector<uint8_t> pos(n);
    for (size_t i = 0; i < n; ++i) {
        s[i] = probs.data()[i * size_t(probs.num_classes()) + size_t(cls)];
        pos[i] = truth.labels()[i] == cls ? 1 : 0;
    }
    return roc_auc(s, pos);
}

EvalReport evaluate_dataset(const std::vector<LabelMask>& preds,
                            const std::vector<LabelMask>& truths,
                            const std::vector<ProbabilityMap>* probs) {
    if (preds.size() != truths.size() || preds.empty())
        throw std::invalid_argument("evaluate_dataset: prediction/truth sequence mismatch");
    if (probs && probs->size() != preds.size())
        throw std::invalid_argument("evaluate_dataset: probability sequence length mismatch");

    EvalReport report;
    report.frame_count = preds.size();
    for (size_t i = 0; i < preds.size(); ++i) report.aggregate += confusion(preds[i], truths[i]);
    report.class_scores = scores(report.aggregate);

    if (probs) {
        for (int c = 0; c < kNumClasses; ++c) {
            std::vector<double> pooled_scores;
            std::vector<uint8_t> pooled_pos;
            for (size_t i = 0; i < preds.size(); ++i) {
                const auto& pm = (*probs)[i];
                const size_t n = size_t(pm.width()) * pm.height();
                for (size_t p = 0; p < n; ++p) {
                    pooled_scores.push_back(pm.data()[p * size_t(pm.num_classes()) + size_t(c)]);
                    pooled_pos.push_back(truths[i].labels()[p] == c ? 1 : 0);
                }
            }
            try {
                report.roc[size_t(c)] = roc_auc(pooled_scores, pooled_pos);
                report.auc[size_t(c)] = report.roc[size_t(c)].auc;
            } catch (const std::runtime_error&) {
                // class entirely absent (or omnipresent) in the pooled truth
            }
        }
    }
    return report;
}

namespace {
const char* kClassNames[kNumClasses] = {"background", "crop", "weed"};
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["averaging"] = "micro (confusion summed across frames before scoring; AUC pixel-pooled)";
    j["frame_count"] = report.frame_count;
    for (int t = 0; t < kNumClasses; ++t)
        j["confusion"].push_back(report.aggregate.counts[size_t(t)]);
    for (int c = 0; c < kNumClasses; ++c) {
        nlohmann::json cj = {{"precision", report.class_scores.precision[size_t(c)]},
                             {"recall", report.class_scores.recall[size_t(c)]},
                             {"f1", report.class_scores.f1[size_t(c)]}};
        if (report.auc[size_t(c)]) cj["auc"] = *report.auc[size_t(c)];
        j["classes"][kClassNames[c]] = cj;
    }
    return j.dump(2) + "\n";
}

std::string report_to_table(const EvalReport& report) {
    std::ostringstream os;
    os << "class        precision   recall       f1      auc\n";
    char line[128];
    for (int c = 0; c < kNumClasses; ++c) {
        if (report.auc[size_t(c)]) {
            std::snprintf(line, sizeof line, "%-12s %9.4f %8.4f %8.4f %8.4f\n", kClassNames[c],
                          report.class_scores.precision[size_t(c)], report.class_scores.recall[size_t(c)],
                          report.class_scores.f1[size_t(c)], *report.auc[size_t(c)]);
        } else {
            std::snprintf(line, sizeof line, "%-12s %9.4f %8.4f %8.4f %8s\n", kClassNames[c],
                          report.class_scores.precision[size_t(c)], report.class_scores.recall[size_t(c)],
                          report.class_scores.f1[size_t(c)], "-");
        }
        os << line;
    }
    return os.str();
}

std::string roc_to_csv(const RocCurve& roc) {
    std::ostringstream os;
    os << "fpr,tpr\n";
    os.precision(17);
    for (const auto& p : roc.points) os << p.fpr << "," << p.tpr << "\n";
    return os.str();
}

}  // namespace weedseg

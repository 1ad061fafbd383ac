#include "hiact/evaluation.hpp"

#include <algorithm>
#include <tuple>

#include "hiact/core/error.hpp"

namespace hiact {

double accuracy(const std::map<std::string, int>& predictions, const std::map<std::string, int>& truths) {
    if (truths.empty()) return 1.0;
    std::size_t hit = 0;
    for (const auto& [id, y] : truths) {
        const auto it = predictions.find(id);
        if (it != predictions.end() && it->second == y) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(truths.size());
}

double temporal_iou(const ActionInterval& a, const ActionInterval& b) {
    const int inter = std::min(a.t_end, b.t_end) - std::max(a.t_start, b.t_start) + 1;
    if (inter <= 0) return 0.0;
    const int uni = a.length() + b.length() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

bool detection_hit(const ActionInterval& pred, const ActionInterval& truth, const DetectionCriterion& criterion) {
    if (pred.action != truth.action) return false;
    if (criterion.match_region && pred.region != truth.region) return false;
    if (temporal_iou(pred, truth) > criterion.min_overlap) return true;
    return criterion.containment_counts && pred.t_start >= truth.t_start && pred.t_end <= truth.t_end;
}

namespace {

void finish(PrecisionRecall& pr) {
    pr.precision = pr.predicted ? static_cast<double>(pr.true_positives) / static_cast<double>(pr.predicted)
                                : (pr.truth ? 0.0 : 1.0);
    pr.recall = pr.truth ? static_cast<double>(pr.true_positives) / static_cast<double>(pr.truth)
                         : (pr.predicted ? 0.0 : 1.0);
}

std::size_t match_count(const std::vector<ActionInterval>& predicted, const std::vector<ActionInterval>& truth,
                        const DetectionCriterion& criterion) {
    if (!(criterion.min_overlap > 0.0 && criterion.min_overlap <= 1.0)) throw DomainError("min_overlap must be in (0, 1]");
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t j = 0; j < truth.size(); ++j)
        for (std::size_t i = 0; i < predicted.size(); ++i)
            if (detection_hit(predicted[i], truth[j], criterion))
                pairs.emplace_back(temporal_iou(predicted[i], truth[j]), j, i);
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
    });
    std::vector<char> pred_used(predicted.size(), 0), truth_used(truth.size(), 0);
    std::size_t tp = 0;
    for (const auto& [iou, j, i] : pairs) {
        if (pred_used[i] || truth_used[j]) continue;
        pred_used[i] = truth_used[j] = 1;
        ++tp;
    }
    return tp;
}

}  // namespace

PrecisionRecall detection_pr(const std::vector<ActionInterval>& predicted, const std::vector<ActionInterval>& truth,
                             DetectionCriterion criterion) {
    PrecisionRecall pr;
    pr.predicted = predicted.size();
    pr.truth = truth.size();
    pr.true_positives = match_count(predicted, truth, criterion);
    finish(pr);
    return pr;
}

PrecisionRecall spatiotemporal_pr(const std::vector<ActionInterval>& predicted,
                                  const std::vector<ActionInterval>& truth, DetectionCriterion criterion) {
    criterion.match_region = true;
    return detection_pr(predicted, truth, criterion);
}

PrecisionRecall detection_pr(const AnnotationMap& predicted, const AnnotationMap& truth, DetectionCriterion criterion) {
    PrecisionRecall pr;
    static const std::vector<ActionInterval> none;
    for (const auto& [id, list] : predicted) pr.predicted += list.size();
    for (const auto& [id, list] : truth) {
        pr.truth += list.size();
        const auto it = predicted.find(id);
        pr.true_positives += match_count(it == predicted.end() ? none : it->second, list, criterion);
    }
    finish(pr);
    return pr;
}

std::vector<ActionInterval> extract_intervals(const Labeling& labeling, const ActionletDictionary& dictionary,
                                              int min_length) {
    std::vector<ActionInterval> out;
    for (std::size_t r = 0; r < labeling.v.size(); ++r) {
        const auto& v = labeling.v[r];
        for (std::size_t t = 0; t < v.size();) {
            const int u = dictionary.u_of_v.at(v[t]);
            std::size_t e = t + 1;
            while (e < v.size() && dictionary.u_of_v.at(v[e]) == u) ++e;
            if (static_cast<int>(e - t) >= min_length)
                out.push_back({u, static_cast<int>(t), static_cast<int>(e) - 1, static_cast<int>(r)});
            t = e;
        }
    }
    return out;
}

double frame_action_accuracy(const Labeling& labeling, const ActionletDictionary& dictionary,
                             const std::vector<std::vector<int>>& truth_actions) {
    if (truth_actions.size() != labeling.v.size()) throw DimensionError("truth regions differ from the labeling");
    std::size_t n = 0, hit = 0;
    for (std::size_t r = 0; r < truth_actions.size(); ++r) {
        if (truth_actions[r].size() != labeling.v[r].size()) throw DimensionError("truth length differs from the labeling");
        for (std::size_t t = 0; t < truth_actions[r].size(); ++t) {
            if (truth_actions[r][t] < 0) continue;
            ++n;
            hit += dictionary.u_of_v.at(labeling.v[r][t]) == truth_actions[r][t];
        }
    }
    return n ? static_cast<double>(hit) / static_cast<double>(n) : 1.0;
}

}  // namespace hiact

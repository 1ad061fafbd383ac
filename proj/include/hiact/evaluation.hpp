#pragma once

// Classification accuracy, interval detection and spatio-temporal
// annotation precision/recall.

#include <map>
#include <string>
#include <vector>

#include "hiact/energy.hpp"
#include "hiact/skeleton_io.hpp"

namespace hiact {

/// Fraction of ids whose predicted label equals the truth; ids missing from
/// `predictions` count as wrong. Empty truth gives 1.
double accuracy(const std::map<std::string, int>& predictions, const std::map<std::string, int>& truths);

struct DetectionCriterion {
    double min_overlap = 0.60;       // intersection over union must exceed this
    bool containment_counts = true;  // a prediction inside the truth is a hit
    bool match_region = false;       // spatio-temporal variant
};

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
    std::size_t true_positives = 0;
    std::size_t predicted = 0;
    std::size_t truth = 0;
};

double temporal_iou(const ActionInterval& a, const ActionInterval& b);
bool detection_hit(const ActionInterval& pred, const ActionInterval& truth, const DetectionCriterion& criterion);

/// One-to-one greedy matching by decreasing overlap (ties: earlier truth,
/// then earlier prediction). With no predictions, precision is 1 when there
/// is no truth either and 0 otherwise; recall follows the same rule.
PrecisionRecall detection_pr(const std::vector<ActionInterval>& predicted, const std::vector<ActionInterval>& truth,
                             DetectionCriterion criterion = {});
PrecisionRecall spatiotemporal_pr(const std::vector<ActionInterval>& predicted,
                                  const std::vector<ActionInterval>& truth, DetectionCriterion criterion = {});

/// Pooled over videos: matching never crosses video boundaries.
PrecisionRecall detection_pr(const AnnotationMap& predicted, const AnnotationMap& truth, DetectionCriterion criterion = {});

/// Runs of equal atomic action u(v[r][t]) per region, shorter runs dropped.
std::vector<ActionInterval> extract_intervals(const Labeling& labeling, const ActionletDictionary& dictionary,
                                              int min_length = 3);

/// Fraction of (region, frame) cells whose atomic action matches; truth cells < 0 are skipped.
double frame_action_accuracy(const Labeling& labeling, const ActionletDictionary& dictionary,
                             const std::vector<std::vector<int>>& truth_actions);

}  // namespace hiact

#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "hiact/evaluation.hpp"

using namespace hiact;

namespace {

ActionInterval iv(int action, int t0, int t1, int region = -1) { return {action, t0, t1, region}; }

std::vector<ActionInterval> random_intervals(std::mt19937_64& rng, int n, int regions) {
    std::uniform_int_distribution<int> start(0, 40), len(0, 12), act(0, 2), reg(0, regions - 1);
    std::vector<ActionInterval> out;
    for (int i = 0; i < n; ++i) {
        const int t0 = start(rng);
        out.push_back(iv(act(rng), t0, t0 + len(rng), reg(rng)));
    }
    return out;
}

}  // namespace

TEST_CASE("accuracy counts") {
    const std::map<std::string, int> truth{{"a", 0}, {"b", 1}, {"c", 2}, {"d", 0}};
    CHECK(accuracy(truth, truth) == 1.0);
    CHECK(accuracy({{"a", 1}, {"b", 0}, {"c", 0}, {"d", 2}}, truth) == 0.0);
    CHECK(accuracy({{"a", 0}, {"b", 1}, {"c", 2}, {"d", 1}}, truth) == doctest::Approx(0.75));
    CHECK(accuracy({{"a", 0}}, truth) == doctest::Approx(0.25));
    CHECK(accuracy({}, {}) == 1.0);
}

TEST_CASE("overlap of one half is a false positive") {
    const auto pr = detection_pr({iv(0, 0, 9)}, {iv(0, 0, 4)});
    CHECK(temporal_iou(iv(0, 0, 9), iv(0, 0, 4)) == doctest::Approx(0.5));
    CHECK(pr.true_positives == 0);
    CHECK(pr.precision == 0.0);
    CHECK(pr.recall == 0.0);
}

TEST_CASE("a prediction inside the truth is a hit") {
    const auto pr = detection_pr({iv(0, 1, 3)}, {iv(0, 0, 9)});
    CHECK(pr.true_positives == 1);
    CHECK(pr.precision == 1.0);
    CHECK(pr.recall == 1.0);
    DetectionCriterion strict;
    strict.containment_counts = false;
    CHECK(detection_pr({iv(0, 1, 3)}, {iv(0, 0, 9)}, strict).true_positives == 0);
}

TEST_CASE("hits need the same action and more than the overlap threshold") {
    CHECK_FALSE(detection_hit(iv(1, 1, 3), iv(0, 0, 9), {}));
    CHECK(detection_hit(iv(0, 0, 6), iv(0, 0, 9), {}));  // 7 / 10
    CHECK_FALSE(detection_hit(iv(0, 0, 5), iv(0, 0, 9), {.min_overlap = 0.6, .containment_counts = false}));  // 0.6 is not above
    CHECK(temporal_iou(iv(0, 0, 3), iv(0, 5, 9)) == 0.0);
}

TEST_CASE("identical sets and empty conventions") {
    const std::vector<ActionInterval> s{iv(0, 0, 5), iv(1, 6, 12), iv(2, 20, 30)};
    const auto pr = detection_pr(s, s);
    CHECK(pr.precision == 1.0);
    CHECK(pr.recall == 1.0);
    const std::vector<ActionInterval> empty;
    const auto none = detection_pr(empty, empty);
    CHECK(none.precision == 1.0);
    CHECK(none.recall == 1.0);
    const auto miss = detection_pr(empty, s);
    CHECK(miss.precision == 0.0);
    CHECK(miss.recall == 0.0);
    const auto spurious = detection_pr(s, empty);
    CHECK(spurious.precision == 0.0);
}

TEST_CASE("matching is one to one") {
    // two predictions on one truth: only one can match
    const auto pr = detection_pr({iv(0, 0, 9), iv(0, 1, 8)}, {iv(0, 0, 9)});
    CHECK(pr.true_positives == 1);
    CHECK(pr.precision == doctest::Approx(0.5));
    CHECK(pr.recall == 1.0);
}

TEST_CASE("spatio-temporal matching requires the region") {
    CHECK(spatiotemporal_pr({iv(0, 0, 9, 1)}, {iv(0, 0, 9, 0)}).true_positives == 0);
    const std::vector<ActionInterval> truth{iv(0, 0, 9, 0), iv(1, 10, 19, 1), iv(2, 20, 29, 0)};
    CHECK(spatiotemporal_pr(truth, truth).precision == 1.0);
    // mixed case: region right twice, wrong once
    const std::vector<ActionInterval> pred{iv(0, 0, 9, 0), iv(1, 10, 19, 0), iv(2, 20, 29, 0)};
    const auto pr = spatiotemporal_pr(pred, truth);
    CHECK(pr.true_positives == 2);
    CHECK(pr.precision == doctest::Approx(2.0 / 3.0));
    CHECK(pr.recall == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("precision and recall swap when the sets swap") {
    // the containment clause is asymmetric, so the swap holds for overlap alone
    DetectionCriterion c;
    c.containment_counts = false;
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 200; ++rep) {
        const auto a = random_intervals(rng, 1 + rep % 6, 1), b = random_intervals(rng, 1 + rep % 5, 1);
        const auto ab = detection_pr(a, b, c), ba = detection_pr(b, a, c);
        CHECK(ab.precision == doctest::Approx(ba.recall));
        CHECK(ab.recall == doctest::Approx(ba.precision));
    }
}

TEST_CASE("metrics ignore input order") {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 100; ++rep) {
        auto a = random_intervals(rng, 6, 2), b = random_intervals(rng, 5, 2);
        const auto before = spatiotemporal_pr(a, b), before_t = detection_pr(a, b);
        std::shuffle(a.begin(), a.end(), rng);
        std::shuffle(b.begin(), b.end(), rng);
        CHECK(spatiotemporal_pr(a, b).true_positives == before.true_positives);
        CHECK(detection_pr(a, b).true_positives == before_t.true_positives);
    }
}

TEST_CASE("pooled detection never matches across videos") {
    AnnotationMap truth{{"a", {iv(0, 0, 9)}}, {"b", {iv(1, 0, 9)}}};
    AnnotationMap pred{{"a", {iv(1, 0, 9)}}, {"b", {iv(1, 0, 9)}}};
    const auto pr = detection_pr(pred, truth);
    CHECK(pr.true_positives == 1);
    CHECK(pr.predicted == 2);
    CHECK(pr.truth == 2);
}

TEST_CASE("interval extraction merges runs of one atomic action") {
    ActionletDictionary dict;
    dict.S = 2;
    dict.G = {2, 1};
    dict.u_of_v = {0, 0, 1};
    auto L = Labeling::filled(10, 1, 0, 0, 0);
    L.v[0] = {0, 1, 0, 1, 2, 2, 0, 0, 0, 0};  // u: 0 0 0 0 1 1 0 0 0 0
    const auto out = extract_intervals(L, dict, 3);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == iv(0, 0, 3, 0));
    CHECK(out[1] == iv(0, 6, 9, 0));
    CHECK(extract_intervals(L, dict, 1).size() == 3);
    CHECK(frame_action_accuracy(L, dict, {{0, 0, 0, 0, 1, 1, 0, 0, -1, -1}}) == 1.0);
    CHECK(frame_action_accuracy(L, dict, {{1, 1, 0, 0, 1, 1, 0, 0, 0, 0}}) == doctest::Approx(0.8));
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hiact/core/error.hpp"
#include "hiact/inference.hpp"
#include "hiact/learning.hpp"
#include "hiact/synthetic.hpp"

using namespace hiact;

namespace {

SyntheticSpec small_spec() {
    SyntheticSpec s;
    s.Y = 2;
    s.S = 3;
    s.u_of_v = {0, 1, 2};
    s.K = 4;
    s.R = 2;
    s.D = 8;
    s.T_min = 20;
    s.T_max = 30;
    s.videos_per_class = 6;
    s.min_segment = 6;
    return s;
}

InitConfig small_init(int K) {
    InitConfig c;
    c.K = K;
    c.kmeans_restarts = 2;
    return c;
}

bool in_list(const std::vector<int>& list, int v) { return std::find(list.begin(), list.end(), v) != list.end(); }

}  // namespace

TEST_CASE("supervision names round trip") {
    for (auto s : {Supervision::Full, Supervision::Temporal, Supervision::Video})
        CHECK(supervision_from_string(to_string(s)) == s);
    CHECK_THROWS(supervision_from_string("spatial"));
}

TEST_CASE("frame candidates cover annotated frames") {
    ActionletDictionary dict;
    dict.S = 2;
    dict.G = {2, 1};
    dict.u_of_v = {0, 0, 1};
    const std::vector<ActionInterval> iv{{0, 0, 3, -1}, {1, 2, 5, -1}};
    const auto c = frame_candidates(iv, 8, dict);
    CHECK(c[0] == std::vector<int>{0, 1});
    CHECK(c[2] == std::vector<int>{0, 1, 2});
    CHECK(c[5] == std::vector<int>{2});
    CHECK(c[7].empty());
}

TEST_CASE("initialisation under each supervision level") {
    const auto spec = small_spec();
    const auto data = plant_synthetic(spec, 1);
    for (auto sup : {Supervision::Full, Supervision::Temporal, Supervision::Video}) {
        CAPTURE(to_string(sup));
        const auto videos = training_view(data, sup);
        const auto init = initialize(videos, spec.S, spec.Y, sup, small_init(spec.K));
        const auto& d = init.dims;
        CHECK(d.R == spec.R);
        CHECK(d.K == spec.K);
        CHECK(d.D == spec.D);
        CHECK(d.Y == spec.Y);
        CHECK(d.S == (sup == Supervision::Video ? spec.Y : spec.S));
        CHECK(d.A == init.dictionary.A());
        CHECK(std::is_sorted(init.dictionary.u_of_v.begin(), init.dictionary.u_of_v.end()));
        for (int s = 0; s < d.S; ++s) CHECK(in_list(init.dictionary.u_of_v, s));
        REQUIRE(init.initial.size() == videos.size());
        REQUIRE(init.constraints.size() == videos.size());
        // garbage initialisation: ceil(0.2 N) frames per region carry label K
        std::size_t total = 0;
        for (const auto& v : videos) total += v.x.length();
        for (int r = 0; r < d.R; ++r) {
            std::size_t gc = 0;
            for (const auto& L : init.initial) gc += std::count(L.z[r].begin(), L.z[r].end(), d.K);
            CHECK(std::abs(static_cast<double>(gc) - std::ceil(0.2 * static_cast<double>(total))) <= 1.0);
        }
        for (std::size_t m = 0; m < videos.size(); ++m) {
            CHECK(init.initial[m].y == videos[m].y);
            CHECK(assignment_feasible(
                [&] {
                    P1Video pv;
                    for (const auto& iv : init.intervals[m]) pv.push_back({iv, {}});
                    return pv;
                }(),
                init.regions[m]));
        }
        if (sup == Supervision::Full) {
            // claimed regions come straight from the annotations
            for (std::size_t m = 0; m < videos.size(); ++m)
                for (std::size_t q = 0; q < videos[m].intervals.size(); ++q)
                    for (int r = 0; r < d.R; ++r)
                        CHECK(init.regions[m][q][r] == (videos[m].intervals[q].region == r ? 1 : 0));
        }
        if (sup == Supervision::Video) CHECK(init.constraints.front().empty());
    }
}

TEST_CASE("imputation honours the supervision") {
    const auto spec = small_spec();
    const auto data = plant_synthetic(spec, 1);
    for (auto sup : {Supervision::Full, Supervision::Temporal}) {
        const auto videos = training_view(data, sup);
        const auto init = initialize(videos, spec.S, spec.Y, sup, small_init(spec.K));
        const auto zero = ModelParams::zeros(init.dims, init.dictionary);
        const auto lat = impute_latents(videos, zero, init, {});
        for (std::size_t m = 0; m < videos.size(); ++m) {
            CHECK(lat[m].y == videos[m].y);
            const auto& c = init.constraints[m];
            for (int r = 0; r < init.dims.R; ++r)
                for (std::size_t t = 0; t < videos[m].x.length(); ++t) {
                    const auto& allowed = c.at(t, r).actionlets;
                    if (!allowed.empty()) CHECK(in_list(allowed, lat[m].v[r][t]));
                }
        }
        if (sup == Supervision::Full) {
            const auto& c = init.constraints.front();
            for (int r = 0; r < init.dims.R; ++r)
                for (std::size_t t = 0; t < videos.front().x.length(); ++t)
                    if (c.at(t, r).actionlets.size() == 1) CHECK(lat.front().v[r][t] == c.at(t, r).actionlets.front());
        }
    }
}

TEST_CASE("imputed energy beats random feasible labelings") {
    const auto spec = small_spec();
    const auto data = plant_synthetic(spec, 3);
    const auto videos = training_view(data, Supervision::Temporal);
    const auto init = initialize(videos, spec.S, spec.Y, Supervision::Temporal, small_init(spec.K));
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n;
    auto params = ModelParams::zeros(init.dims, init.dictionary);
    for (int rep = 0; rep < 50; ++rep) {
        for (auto& w : params.weights) w = n(rng);
        const std::size_t m = static_cast<std::size_t>(rep) % videos.size();
        const auto lat = impute_latents({videos[m]}, params,
                                        [&] {
                                            InitArtifacts one = init;
                                            one.constraints = {init.constraints[m]};
                                            one.targets = {init.targets[m]};
                                            one.initial = {init.initial[m]};
                                            one.intervals = {init.intervals[m]};
                                            one.regions = {init.regions[m]};
                                            return one;
                                        }(),
                                        {});
        const double imputed = energy_total(videos[m].x, lat.front(), params);
        const auto& c = init.constraints[m];
        const std::size_t T = videos[m].x.length();
        auto L = Labeling::filled(T, init.dims.R, 0, 0, videos[m].y);
        std::uniform_int_distribution<int> z(0, init.dims.K), v(0, init.dims.A - 1);
        for (int r = 0; r < init.dims.R; ++r)
            for (std::size_t t = 0; t < T; ++t) {
                L.z[r][t] = z(rng);
                const auto& allowed = c.at(t, r).actionlets;
                L.v[r][t] = allowed.empty() ? v(rng) : allowed[rng() % allowed.size()];
            }
        CHECK(imputed >= energy_total(videos[m].x, L, params) - 1e-9);
    }
}

TEST_CASE("zero outer iterations return zero weights") {
    const auto spec = small_spec();
    const auto videos = training_view(plant_synthetic(spec, 1), Supervision::Temporal);
    const auto init = initialize(videos, spec.S, spec.Y, Supervision::Temporal, small_init(spec.K));
    TrainConfig cfg;
    cfg.max_outer = 0;
    const auto res = train(videos, init, cfg);
    for (double w : res.params.weights) CHECK(w == 0.0);
    REQUIRE(res.objective_trace.size() == 1);
    CHECK(res.objective_trace.front() == doctest::Approx(training_objective(videos, res.params, init, cfg)));
}

TEST_CASE("objective at zero weights is C times the largest loss") {
    const auto spec = small_spec();
    const auto videos = training_view(plant_synthetic(spec, 1), Supervision::Full);
    const auto init = initialize(videos, spec.S, spec.Y, Supervision::Full, small_init(spec.K));
    TrainConfig cfg;
    const auto zero = ModelParams::zeros(init.dims, init.dictionary);
    // with W = 0 the loss-augmented maximum is lambda_y plus lambda_v times the
    // fraction of frames whose actionlet can be wrong, which is all known frames
    double expected = 0.0;
    for (std::size_t m = 0; m < videos.size(); ++m) {
        const auto& tg = init.targets[m];
        double frames = 0.0;
        for (std::size_t t = 0; t < tg.T; ++t) {
            double known = 0.0;
            for (std::size_t r = 0; r < tg.R; ++r) known += tg.is_known(t, r) ? 1.0 : 0.0;
            frames += known / static_cast<double>(tg.R);
        }
        expected += cfg.lambda_y + cfg.lambda_v * frames / static_cast<double>(tg.T);
    }
    expected *= cfg.C / static_cast<double>(videos.size());
    CHECK(training_objective(videos, zero, init, cfg) == doctest::Approx(expected));
}

TEST_CASE("training fits a small planted set and the objective descends") {
    const auto spec = small_spec();
    const auto videos = training_view(plant_synthetic(spec, 1), Supervision::Temporal);
    const auto init = initialize(videos, spec.S, spec.Y, Supervision::Temporal, small_init(spec.K));
    TrainConfig cfg;
    cfg.max_outer = 4;
    const auto res = train(videos, init, cfg);
    int correct = 0;
    for (const auto& v : videos) correct += infer(v.x, res.params).labeling.y == v.y;
    CHECK(correct >= static_cast<int>(0.9 * static_cast<double>(videos.size())));
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
        CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-9);
    CHECK(res.objective_trace.size() >= 2);
    for (const auto& trace : res.dual_traces)
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1] - 1e-10);
    for (const auto& entry : res.log) CHECK(entry.violation <= cfg.eps_rel * (cfg.lambda_y + cfg.lambda_v) + 1e-9);
}

TEST_CASE("violator switches class exactly when another class is within the margin") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> n;
    ModelDims dims{.R = 1, .K = 1, .D = 2, .A = 2, .S = 2, .Y = 3};
    for (int rep = 0; rep < 50; ++rep) {
        auto p = ModelParams::zeros(dims, ActionletDictionary::identity(2));
        for (auto& w : p.weights) w = 3.0 * n(rng);
        VideoFeatures x{"v", {Matrix(3, 2)}, {}};
        for (auto& v : x.regions[0].values()) v = n(rng);
        const int y_true = rep % 3;
        LossSpec spec{y_true, 2.0, 0.0, LossTarget::none(3, 1, 2)};
        const auto res = loss_augmented_infer(x, p, spec);
        double truth = complete_latent(x, p, y_true, nullptr).energy, rival = -INFINITY;
        for (int y = 0; y < 3; ++y)
            if (y != y_true) rival = std::max(rival, complete_latent(x, p, y, nullptr).energy);
        if (std::abs(rival + spec.lambda_y - truth) > 1e-9) CHECK((res.labeling.y != y_true) == (rival + spec.lambda_y > truth));
    }
}

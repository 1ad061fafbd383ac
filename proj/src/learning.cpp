#include "hiact/learning.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "hiact/core/error.hpp"
#include "hiact/core/parallel.hpp"
#include "hiact/kernels/kernels.hpp"

namespace hiact {

Supervision supervision_from_string(std::string_view name) {
    if (name == "full") return Supervision::Full;
    if (name == "temporal") return Supervision::Temporal;
    if (name == "video") return Supervision::Video;
    throw DomainError("unknown supervision level '" + std::string(name) + "' (full, temporal, video)");
}

std::string_view to_string(Supervision s) {
    switch (s) {
        case Supervision::Full: return "full";
        case Supervision::Temporal: return "temporal";
        case Supervision::Video: return "video";
    }
    return "temporal";
}

std::vector<std::vector<int>> frame_candidates(const std::vector<ActionInterval>& intervals, std::size_t T,
                                               const ActionletDictionary& dictionary) {
    std::vector<std::vector<int>> out(T);
    for (const auto& q : intervals) {
        const auto ids = dictionary.actionlets_of(q.action);
        for (int t = std::max(0, q.t_start); t <= q.t_end && t < static_cast<int>(T); ++t)
            out[t].insert(out[t].end(), ids.begin(), ids.end());
    }
    for (auto& l : out) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    return out;
}

namespace {

std::vector<int> slice(const std::vector<int>& labels, int from, int to) {
    from = std::max(from, 0);
    to = std::min(to, static_cast<int>(labels.size()) - 1);
    if (to < from) return {};
    return {labels.begin() + from, labels.begin() + to + 1};
}

int nearest_actionlet(const std::vector<double>& h, const std::vector<int>& allowed, const ActionletDictionary& dict) {
    int best = allowed.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (int a : allowed) {
        const double d = dict.centroids.empty() ? 0.0 : chi2(h, dict.centroids.row(a));
        if (d < best_d) {
            best_d = d;
            best = a;
        }
    }
    return best;
}

}  // namespace

InitArtifacts initialize(const std::vector<TrainVideo>& videos, int S, int Y, Supervision supervision,
                         const InitConfig& config) {
    if (videos.empty()) throw DimensionError("no training videos");
    const std::size_t M = videos.size(), R = videos.front().x.region_count(), D = videos.front().x.dim();
    const int K = config.K;
    for (const auto& v : videos) {
        if (v.x.region_count() != R || v.x.dim() != D) throw DimensionError("videos disagree on R or D");
        if (v.y < 0 || v.y >= Y) throw DimensionError("complex action out of range");
    }
    InitArtifacts out;
    out.supervision = supervision;
    if (supervision == Supervision::Video) S = Y;

    // motion poselets: k-means over every frame of a region, then garbage relabelling
    std::vector<std::vector<std::vector<int>>> z0(M, std::vector<std::vector<int>>(R));
    out.poselet_centroids.resize(R);
    std::size_t total = 0;
    for (const auto& v : videos) total += v.x.length();
    if (total < static_cast<std::size_t>(K)) throw DimensionError("fewer frames than motion poselets");
    for (std::size_t r = 0; r < R; ++r) {
        Matrix pts(total, D);
        std::size_t row = 0;
        for (const auto& v : videos)
            for (std::size_t t = 0; t < v.x.length(); ++t, ++row)
                std::copy(v.x.regions[r].row(t).begin(), v.x.regions[r].row(t).end(), pts.row(row).begin());
        KMeansOptions ko;
        ko.k = static_cast<std::size_t>(K);
        ko.seed = config.seed + 0x9e3779b97f4a7c15ull * (r + 1);
        ko.max_iter = config.kmeans_max_iter;
        ko.restarts = config.kmeans_restarts;
        auto km = kmeans(pts, ko);
        const auto labels = gc_init(km.labels, km.distances, config.gc_fraction, K);
        out.poselet_centroids[r] = std::move(km.centroids);
        row = 0;
        for (std::size_t m = 0; m < M; ++m) {
            const std::size_t T = videos[m].x.length();
            z0[m][r].assign(labels.begin() + static_cast<std::ptrdiff_t>(row),
                            labels.begin() + static_cast<std::ptrdiff_t>(row + T));
            row += T;
        }
    }

    // intervals and their regions
    out.intervals.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
        if (supervision == Supervision::Video) {
            out.intervals[m] = {ActionInterval{videos[m].y, 0, static_cast<int>(videos[m].x.length()) - 1, -1}};
        } else {
            out.intervals[m] = videos[m].intervals;
            for (const auto& q : out.intervals[m])
                if (q.action < 0 || q.action >= S) throw DimensionError("atomic action out of range");
        }
    }
    std::vector<std::vector<std::vector<std::vector<double>>>> hist(M);  // [m][q][r]
    for (std::size_t m = 0; m < M; ++m) {
        hist[m].resize(out.intervals[m].size());
        for (std::size_t q = 0; q < out.intervals[m].size(); ++q)
            for (std::size_t r = 0; r < R; ++r) {
                const auto& iv = out.intervals[m][q];
                hist[m][q].push_back(label_histogram(slice(z0[m][r], iv.t_start, iv.t_end), K));
            }
    }
    out.regions.resize(M);
    if (supervision == Supervision::Full) {
        for (std::size_t m = 0; m < M; ++m)
            for (const auto& q : out.intervals[m]) {
                if (q.region < 0 || q.region >= static_cast<int>(R))
                    throw DomainError("full supervision needs a region on every interval (video " + videos[m].x.video_id + ")");
                std::vector<std::uint8_t> b(R, 0);
                b[q.region] = 1;
                out.regions[m].push_back(std::move(b));
            }
    } else {
        std::vector<P1Video> problems(M);
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t q = 0; q < out.intervals[m].size(); ++q)
                problems[m].push_back({out.intervals[m][q], hist[m][q]});
        auto p1 = config.p1;
        p1.jobs = config.jobs;
        auto res = solve_p1(problems, R, static_cast<std::size_t>(S), p1);
        out.regions = std::move(res.assignments);
        out.p1_infeasible = std::move(res.infeasible);
        out.p1_trace = std::move(res.trace);
    }

    // actionlets from the claimed (interval, region) histograms
    std::vector<IntervalHistogram> samples;
    struct Owner {
        std::size_t m, q, r;
    };
    std::vector<Owner> owners;
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t q = 0; q < out.intervals[m].size(); ++q)
            for (std::size_t r = 0; r < R; ++r)
                if (out.regions[m][q][r]) {
                    samples.push_back({hist[m][q][r], out.intervals[m][q].action});
                    owners.push_back({m, q, r});
                }
    auto aopts = config.actionlets;
    aopts.seed = config.seed ^ aopts.seed;
    auto actionlets = build_actionlets(samples, S, aopts);
    out.dictionary = std::move(actionlets.dictionary);
    out.spectra = std::move(actionlets.spectra);
    const int A = out.dictionary.A();

    out.dims.R = static_cast<int>(R);
    out.dims.K = K;
    out.dims.D = static_cast<int>(D);
    out.dims.A = A;
    out.dims.S = S;
    out.dims.Y = Y;
    out.dims.validate();

    // initial actionlet labels: claimed cells take their sample's actionlet,
    // the rest the nearest centroid among the frame's admissible actionlets
    std::vector<std::vector<std::vector<int>>> claimed(M);
    for (std::size_t m = 0; m < M; ++m)
        claimed[m].assign(R, std::vector<int>(videos[m].x.length(), -1));
    for (std::size_t i = 0; i < owners.size(); ++i) {
        const auto& o = owners[i];
        const auto& iv = out.intervals[o.m][o.q];
        for (int t = std::max(0, iv.t_start); t <= iv.t_end && t < static_cast<int>(videos[o.m].x.length()); ++t)
            if (claimed[o.m][o.r][t] < 0) claimed[o.m][o.r][t] = actionlets.assignment[i];
    }
    std::vector<int> every(static_cast<std::size_t>(A));
    std::iota(every.begin(), every.end(), 0);
    out.initial.resize(M);
    out.constraints.resize(M);
    out.targets.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
        const std::size_t T = videos[m].x.length();
        const auto cand = frame_candidates(out.intervals[m], T, out.dictionary);
        Labeling& L = out.initial[m];
        L.y = videos[m].y;
        L.z = z0[m];
        L.v = claimed[m];
        for (std::size_t r = 0; r < R; ++r) {
            for (std::size_t t = 0; t < T;) {
                if (L.v[r][t] >= 0) {
                    ++t;
                    continue;
                }
                std::size_t e = t;
                while (e < T && L.v[r][e] < 0) ++e;
                const auto h = label_histogram(slice(z0[m][r], static_cast<int>(t), static_cast<int>(e) - 1), K);
                for (std::size_t f = t; f < e; ++f)
                    L.v[r][f] = nearest_actionlet(h, cand[f].empty() ? every : cand[f], out.dictionary);
                t = e;
            }
        }
        switch (supervision) {
            case Supervision::Full:
                out.constraints[m] = FrameConstraints::fixed_actionlets(claimed[m]);
                out.targets[m] = LossTarget::from_fixed(claimed[m], A, LossAggregation::RegionAverage);
                break;
            case Supervision::Temporal:
                out.constraints[m] = FrameConstraints::candidate_actionlets(cand, R);
                out.targets[m] = LossTarget::from_candidates(cand, R, A, LossAggregation::AnyRegion);
                break;
            case Supervision::Video:
                out.targets[m] = LossTarget::none(T, R, A);
                break;
        }
    }
    return out;
}

std::vector<Labeling> impute_latents(const std::vector<TrainVideo>& videos, const ModelParams& params,
                                     const InitArtifacts& init, const InferenceOptions& options) {
    std::vector<Labeling> out(videos.size());
    InferenceOptions inner = options;
    inner.jobs = 1;
    parallel_for(videos.size(), options.jobs, [&](std::size_t m) {
        const auto* c = init.constraints[m].empty() ? nullptr : &init.constraints[m];
        out[m] = complete_latent(videos[m].x, params, videos[m].y, c, inner).labeling;
    });
    return out;
}

namespace {

LossSpec loss_for(const TrainVideo& v, const InitArtifacts& init, std::size_t m, const TrainConfig& config) {
    LossSpec s;
    s.y_true = v.y;
    s.lambda_y = config.lambda_y;
    s.lambda_v = config.lambda_v;
    s.target = init.targets[m];
    if (config.aggregation) s.target.aggregation = *config.aggregation;
    return s;
}

double norm2(const std::vector<double>& w) { return kernels::active().dot(w.data(), w.data(), w.size()); }

// Sum over videos of the loss-augmented maximum minus the best completion.
double slack_sum(const std::vector<TrainVideo>& videos, const ModelParams& params, const InitArtifacts& init,
                 const TrainConfig& config) {
    std::vector<double> per(videos.size());
    InferenceOptions inner = config.inference;
    inner.jobs = 1;
    parallel_for(videos.size(), config.inference.jobs, [&](std::size_t m) {
        const auto aug = loss_augmented_infer(videos[m].x, params, loss_for(videos[m], init, m, config), nullptr, inner);
        const auto* c = init.constraints[m].empty() ? nullptr : &init.constraints[m];
        const double truth = complete_latent(videos[m].x, params, videos[m].y, c, inner).energy;
        per[m] = std::max(0.0, aug.score - truth);
    });
    double s = 0.0;
    for (double v : per) s += v;
    return s;
}

}  // namespace

double training_objective(const std::vector<TrainVideo>& videos, const ModelParams& params, const InitArtifacts& init,
                          const TrainConfig& config) {
    const double M = static_cast<double>(videos.size());
    return 0.5 * norm2(params.weights) + config.C / M * slack_sum(videos, params, init, config);
}

TrainResult train(const std::vector<TrainVideo>& videos, const InitArtifacts& init, const TrainConfig& config) {
    using clock = std::chrono::steady_clock;
    const std::size_t M = videos.size();
    if (M == 0) throw DimensionError("no training videos");
    TrainResult res;
    res.params = ModelParams::zeros(init.dims, init.dictionary);
    const std::size_t dim = res.params.weights.size();
    double current = training_objective(videos, res.params, init, config);
    res.objective_trace.push_back(current);

    InferenceOptions inner = config.inference;
    inner.jobs = 1;
    CuttingPlaneOptions cp;
    cp.C = config.C;
    cp.epsilon = config.eps_rel * (config.lambda_y + config.lambda_v);
    cp.max_iterations = config.max_cp_iterations;

    for (int outer = 0; outer < config.max_outer; ++outer) {
        const auto start = clock::now();
        const auto latents = outer == 0 ? init.initial : impute_latents(videos, res.params, init, config.inference);

        // psi of the imputed truths is fixed for the whole inner solve
        std::vector<double> truth_mean(dim, 0.0);
        for (std::size_t m = 0; m < M; ++m)
            accumulate_feature_map(videos[m].x, latents[m], init.dims, init.dictionary, 1.0 / static_cast<double>(M),
                                   truth_mean);
        ModelParams probe = res.params;
        auto separate = [&](const std::vector<double>& W) {
            probe.weights = W;
            std::vector<Labeling> viol(M);
            std::vector<double> loss(M);
            parallel_for(M, config.inference.jobs, [&](std::size_t m) {
                auto r = loss_augmented_infer(videos[m].x, probe, loss_for(videos[m], init, m, config), nullptr, inner);
                viol[m] = std::move(r.labeling);
                loss[m] = r.loss;
            });
            Cut cut{truth_mean, 0.0};
            for (std::size_t m = 0; m < M; ++m) {
                accumulate_feature_map(videos[m].x, viol[m], init.dims, init.dictionary, -1.0 / static_cast<double>(M),
                                       cut.g);
                cut.delta += loss[m] / static_cast<double>(M);
            }
            return cut;
        };
        const auto solved = cutting_plane(dim, separate, cp);
        res.dual_traces.push_back(solved.dual_trace);
        res.cp_warning = res.cp_warning || solved.hit_iteration_cap;

        ModelParams next = res.params;
        next.weights = solved.W;
        const double value = training_objective(videos, next, init, config);
        OuterLog entry;
        entry.iteration = outer + 1;
        entry.objective = value;
        entry.violation = solved.final_violation - solved.xi;
        entry.cp_iterations = solved.iterations;
        entry.cp_hit_cap = solved.hit_iteration_cap;
        entry.accepted = value <= current;
        entry.seconds = std::chrono::duration<double>(clock::now() - start).count();
        res.log.push_back(entry);
        if (!entry.accepted) {
            ++res.rejected_steps;
            break;
        }
        const double drop = current - value;
        res.params = std::move(next);
        res.objective_trace.push_back(value);
        current = value;
        if (drop <= config.cccp_tol * std::max(std::abs(current), 1e-12)) break;
    }
    return res;
}

}  // namespace hiact

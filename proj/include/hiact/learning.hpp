#pragma once

// Initialisation (poselet k-means, garbage relabelling, region assignment,
// actionlet discovery) and CCCP training with the 1-slack cutting plane.

#include <optional>
#include <string_view>
#include <vector>

#include "hiact/cutting_plane.hpp"
#include "hiact/dictionaries.hpp"
#include "hiact/inference.hpp"
#include "hiact/p1.hpp"
#include "hiact/skeleton_io.hpp"

namespace hiact {

struct TrainVideo {
    VideoFeatures x;
    int y = 0;
    std::vector<ActionInterval> intervals;  // 0-based actions; region -1 when unknown
};

enum class Supervision {
    Full,      // intervals carry their region
    Temporal,  // intervals without regions
    Video,     // complex-action label only
};

Supervision supervision_from_string(std::string_view name);
std::string_view to_string(Supervision s);

struct InitConfig {
    int K = 8;
    double gc_fraction = 0.20;
    std::uint64_t seed = 0x5eed;
    int kmeans_restarts = 4;
    int kmeans_max_iter = 100;
    ActionletOptions actionlets;
    P1Options p1;
    unsigned jobs = 1;
};

struct InitArtifacts {
    Supervision supervision = Supervision::Temporal;
    ModelDims dims;
    ActionletDictionary dictionary;
    std::vector<Matrix> poselet_centroids;                 // [r] K x D
    std::vector<std::vector<ActionInterval>> intervals;    // [m] intervals used for assignment
    std::vector<Assignment> regions;                       // [m][q][r]
    std::vector<P1Infeasible> p1_infeasible;
    std::vector<P1TraceEntry> p1_trace;
    std::vector<std::vector<double>> spectra;              // per atomic action
    std::vector<Labeling> initial;                         // [m] z0 and v0
    std::vector<FrameConstraints> constraints;             // [m] used for latent completion
    std::vector<LossTarget> targets;                       // [m] actionlet part of the task loss
};

/// Candidate actionlet lists A_t: actionlets of every atomic action whose interval covers t.
std::vector<std::vector<int>> frame_candidates(const std::vector<ActionInterval>& intervals, std::size_t T,
                                               const ActionletDictionary& dictionary);

/// S is the number of atomic actions (ignored for video-level supervision, where S = Y).
InitArtifacts initialize(const std::vector<TrainVideo>& videos, int S, int Y, Supervision supervision,
                         const InitConfig& config);

struct TrainConfig {
    double C = 10.0;
    double lambda_y = 100.0;
    double lambda_v = 25.0;
    double eps_rel = 1e-3;  // cutting-plane tolerance relative to lambda_y + lambda_v
    int max_outer = 10;
    int max_cp_iterations = 500;
    double cccp_tol = 1e-4;
    InferenceOptions inference;
    std::optional<LossAggregation> aggregation;  // overrides the target's own mode
};

struct OuterLog {
    int iteration = 0;
    double objective = 0.0;  // value of the non-convex objective at the new W
    double violation = 0.0;  // last cut violation minus slack
    int cp_iterations = 0;
    bool cp_hit_cap = false;
    bool accepted = true;
    double seconds = 0.0;
};

struct TrainResult {
    ModelParams params;
    std::vector<double> objective_trace;  // entry 0 is W = 0, then every accepted step
    std::vector<OuterLog> log;
    std::vector<std::vector<double>> dual_traces;  // per outer iteration
    int rejected_steps = 0;
    bool cp_warning = false;
};

std::vector<Labeling> impute_latents(const std::vector<TrainVideo>& videos, const ModelParams& params,
                                     const InitArtifacts& init, const InferenceOptions& options);

/// 1/2 |W|^2 + C/M sum_i [max_L (E + loss) - max_h E(y_i, h)].
double training_objective(const std::vector<TrainVideo>& videos, const ModelParams& params,
                          const InitArtifacts& init, const TrainConfig& config);

TrainResult train(const std::vector<TrainVideo>& videos, const InitArtifacts& init, const TrainConfig& config);

}  // namespace hiact

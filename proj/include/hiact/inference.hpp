#pragma once

// Energy maximisation over (y, v, z).
//
// For a fixed complex action y the regions decouple, and each region is a
// chain over joint states (k, a), k in [0, K] (K = garbage), a in [0, A).
// State index is k * A + a, so "lowest index" means lexicographically smallest
// (k, a). The chain is solved backwards and decoded forwards, which makes the
// returned path the lexicographically smallest optimum (earliest frame most
// significant). brute_force() enumerates in that same order, so both agree
// exactly, not just up to ties.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hiact/energy.hpp"

namespace hiact {

inline constexpr std::size_t kExactBeam = 0;
inline constexpr std::size_t kDefaultBeam = 400;

/// Admissible labels of one (frame, region) cell; an empty list means "any".
struct AllowedSets {
    std::vector<int> actionlets;
    std::vector<int> poselets;
};

class FrameConstraints {
public:
    FrameConstraints() = default;
    FrameConstraints(std::size_t T, std::size_t R) : T_(T), R_(R), cells_(T * R) {}

    /// v[r][t] >= 0 pins the actionlet, -1 leaves it free.
    static FrameConstraints fixed_actionlets(const std::vector<std::vector<int>>& v);
    /// The same candidate actionlet list A_t for every region; empty lists leave frames free.
    static FrameConstraints candidate_actionlets(const std::vector<std::vector<int>>& per_frame, std::size_t R);

    bool empty() const noexcept { return cells_.empty(); }
    std::size_t length() const noexcept { return T_; }
    std::size_t region_count() const noexcept { return R_; }
    AllowedSets& at(std::size_t t, std::size_t r) { return cells_[t * R_ + r]; }
    const AllowedSets& at(std::size_t t, std::size_t r) const { return cells_[t * R_ + r]; }

private:
    std::size_t T_ = 0;
    std::size_t R_ = 0;
    std::vector<AllowedSets> cells_;
};

struct InferenceOptions {
    std::size_t beam = kExactBeam;  // keep the B best (k, a) states per frame by unary score
    bool allow_gc = true;           // garbage label K admissible
    unsigned jobs = 1;
};

struct RegionPath {
    std::vector<int> z;
    std::vector<int> v;
    double score = 0.0;           // energy of the region plus the chosen loss addends
    std::vector<double> margins;  // best minus runner-up unary score per frame
};

/// Exact (beam = 0 or >= (K+1)A) or beam-filtered dynamic program for region r.
/// `loss_addend` is T x A (row-major) or empty. Throws InfeasibleError when a
/// frame has no admissible state.
RegionPath dp_region(const Matrix& x, int y, const ModelParams& params, int r,
                     const FrameConstraints* constraints, std::span<const double> loss_addend,
                     const InferenceOptions& options);

struct InferenceResult {
    Labeling labeling;
    double energy = 0.0;          // energy_total of `labeling`
    double loss = 0.0;            // task loss, loss-augmented calls only
    double score = 0.0;           // energy + loss
    std::vector<double> margins;  // [r * T + t]
};

InferenceResult infer(const VideoFeatures& x, const ModelParams& params, const FrameConstraints* constraints = nullptr,
                      const InferenceOptions& options = {});

/// Best labeling with y fixed and actionlets restricted by `constraints`.
InferenceResult complete_latent(const VideoFeatures& x, const ModelParams& params, int y,
                                const FrameConstraints* constraints, const InferenceOptions& options = {});

/// How per-(frame, region) actionlet mismatches turn into a per-frame loss.
enum class LossAggregation {
    RegionAverage,  // mean mismatch over regions
    Designated,     // mismatch in one region
    AnyRegion,      // frame counts only if no region carries a correct actionlet
};

struct LossTarget {
    std::size_t T = 0, R = 0, A = 0;
    std::vector<std::uint8_t> known;    // T x R
    std::vector<std::uint8_t> correct;  // T x R x A
    LossAggregation aggregation = LossAggregation::RegionAverage;
    int designated_region = 0;

    /// Per-region ground-truth actionlets v[r][t]; -1 means unknown.
    static LossTarget from_fixed(const std::vector<std::vector<int>>& v, std::size_t A, LossAggregation aggregation);
    /// Candidate lists A_t shared by all regions; empty lists mean unknown.
    static LossTarget from_candidates(const std::vector<std::vector<int>>& per_frame, std::size_t R, std::size_t A,
                                      LossAggregation aggregation);
    /// No actionlet supervision (video-level labels only).
    static LossTarget none(std::size_t T, std::size_t R, std::size_t A);

    bool is_known(std::size_t t, std::size_t r) const { return known[t * R + r] != 0; }
    bool mismatch(std::size_t t, std::size_t r, int a) const {
        return known[t * R + r] && !correct[(t * R + r) * A + static_cast<std::size_t>(a)];
    }
    /// Per-frame loss in [0, 1] of the actionlets in `labeling`.
    double frame_loss(std::size_t t, const Labeling& labeling) const;
};

struct LossSpec {
    int y_true = 0;
    double lambda_y = 100.0;
    double lambda_v = 25.0;
    LossTarget target;
};

/// lambda_y [y != y_true] + lambda_v / T * sum_t frame_loss(t).
double task_loss(const Labeling& labeling, const LossSpec& loss);

/// argmax over labelings of energy + task loss. Exact for RegionAverage,
/// Designated, and AnyRegion with one region; AnyRegion with several regions
/// uses block-coordinate ascent over regions, which never lowers the score.
InferenceResult loss_augmented_infer(const VideoFeatures& x, const ModelParams& params, const LossSpec& loss,
                                     const FrameConstraints* constraints = nullptr,
                                     const InferenceOptions& options = {});

/// Exhaustive maximisation; throws GuardError when ((K+1)A)^T * Y exceeds `guard`.
InferenceResult brute_force(const VideoFeatures& x, const ModelParams& params,
                            const FrameConstraints* constraints = nullptr, const InferenceOptions& options = {},
                            double guard = 1e7);

}  // namespace hiact

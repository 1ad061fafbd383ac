#pragma once

// Region-action assignment initialiser. Each annotated interval q of video m
// claims a set of body regions b[q][r]; every interval needs at least one
// region, and temporally overlapping intervals may not share a region.
// Cost of a claim is chi2(h[q][r], mu[r][action]) - 1/lambda, so a small
// 1/lambda keeps claims minimal and a larger one lets actions spread.

#include <cstdint>
#include <vector>

#include "hiact/skeleton_io.hpp"

namespace hiact {

struct P1Interval {
    ActionInterval interval;                      // region field ignored
    std::vector<std::vector<double>> histograms;  // [r] -> K bins
};

using P1Video = std::vector<P1Interval>;
using Assignment = std::vector<std::vector<std::uint8_t>>;  // [q][r]

struct SelfPaceSchedule {
    double lambda0 = 50.0;  // first round uses 1/lambda = 0.02
    double decay = 0.5;     // lambda multiplied by this between rounds
    int rounds = 5;
    int max_alternations = 20;
};

struct P1Options {
    SelfPaceSchedule schedule;
    std::size_t exact_limit = 20;  // enumerate exactly when Q * R <= this
    unsigned jobs = 1;
};

struct P1TraceEntry {
    int round = 0;
    int step = 0;
    double inv_lambda = 0.0;
    double after_means = 0.0;
    double after_assign = 0.0;
};

struct P1Infeasible {
    std::size_t video = 0;
    std::size_t interval = 0;
};

struct P1Result {
    std::vector<Assignment> assignments;           // [m]
    std::vector<std::vector<std::vector<double>>> means;  // [r][action] -> K bins
    std::vector<P1TraceEntry> trace;
    std::vector<P1Infeasible> infeasible;
};

/// Per-bin minimiser of sum_i chi2(h_i, mu); the chi2 analogue of the mean.
std::vector<double> chi2_centroid(const std::vector<const std::vector<double>*>& histograms);

/// Cost of assignment b for one video under the given claim costs [q][r].
double assignment_cost(const Assignment& b, const std::vector<std::vector<double>>& cost);

/// True if every interval has a region and no overlapping pair shares one.
bool assignment_feasible(const P1Video& video, const Assignment& b);

struct AssignStep {
    Assignment b;
    std::vector<std::size_t> infeasible;  // intervals that could not be placed without conflict
};

/// Minimises the assignment cost of one video: exact search for small
/// videos, LP relaxation with rounding and repair otherwise.
AssignStep assign_regions(const P1Video& video, const std::vector<std::vector<double>>& cost, std::size_t exact_limit);

/// LP relaxation, rounding at 0.5, then greedy repair.
AssignStep assign_regions_relaxed(const P1Video& video, const std::vector<std::vector<double>>& cost);

P1Result solve_p1(const std::vector<P1Video>& videos, std::size_t R, std::size_t S, const P1Options& options = {});

}  // namespace hiact

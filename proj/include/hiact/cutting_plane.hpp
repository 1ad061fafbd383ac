#pragma once

// 1-slack structural SVM solver:
//   min_W 1/2 |W|^2 + C xi   s.t.  <W, g_j> >= delta_j - xi  for every cut j
// Cuts come from a separation oracle that returns the averaged most violated
// constraint at the current W. The dual over the working set is solved by
// pairwise coordinate ascent, warm started across cuts.

#include <functional>
#include <vector>

namespace hiact {

struct Cut {
    std::vector<double> g;  // mean of psi(truth) - psi(violator)
    double delta = 0.0;     // mean task loss of the violators
};

using SeparationOracle = std::function<Cut(const std::vector<double>& W)>;

struct CuttingPlaneOptions {
    double C = 10.0;
    double epsilon = 0.125;  // absolute tolerance on the violation
    int max_iterations = 500;
    int max_qp_steps = 100000;
    double qp_tolerance = 1e-10;
};

struct CuttingPlaneResult {
    std::vector<double> W;
    double xi = 0.0;
    double final_violation = 0.0;     // delta - <W, g> of the last cut found
    double primal = 0.0;              // 1/2 |W|^2 + C xi over the working set
    std::vector<double> dual_trace;   // dual objective after each QP pass
    std::vector<double> alpha;        // dual weights, alpha[0] is the trivial cut
    std::vector<Cut> working_set;     // index 0 is the trivial cut (0, 0)
    int iterations = 0;               // oracle calls
    bool hit_iteration_cap = false;
};

CuttingPlaneResult cutting_plane(std::size_t dim, const SeparationOracle& separate, const CuttingPlaneOptions& options);

/// Solves the working-set dual in place, keeping sum(alpha) fixed; gram is row-major n x n.
/// Returns the dual objective after every pairwise step when `steps` is non-null.
double solve_working_set_dual(const std::vector<double>& gram, const std::vector<double>& delta,
                              std::vector<double>& alpha, int max_steps, double tolerance,
                              std::vector<double>* steps = nullptr);

}  // namespace hiact

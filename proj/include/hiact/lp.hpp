#pragma once

// Small dense linear programs: minimise c.x subject to rows of A x {<=,>=,=} b
// and x >= 0. Two-phase tableau simplex with Bland's rule, so it never cycles.
// Meant for the per-video assignment relaxations (tens of variables).

#include <vector>

namespace hiact::lp {

enum class Sense { LessEqual, GreaterEqual, Equal };
enum class Status { Optimal, Infeasible, Unbounded };

struct Constraint {
    std::vector<double> coefficients;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

struct Problem {
    std::vector<double> objective;
    std::vector<Constraint> constraints;
};

struct Solution {
    Status status = Status::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

Solution minimize(const Problem& problem, double tolerance = 1e-9);

}  // namespace hiact::lp

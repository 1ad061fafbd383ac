#include "hiact/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hiact::lp {

namespace {

struct Tableau {
    std::size_t rows = 0, cols = 0;  // cols excludes the rhs column
    std::vector<double> cells;       // rows x (cols + 1)
    std::vector<std::size_t> basis;

    double& at(std::size_t i, std::size_t j) { return cells[i * (cols + 1) + j]; }
    double& rhs(std::size_t i) { return at(i, cols); }

    void pivot(std::size_t pr, std::size_t pc) {
        const double p = at(pr, pc);
        for (std::size_t j = 0; j <= cols; ++j) at(pr, j) /= p;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == pr) continue;
            const double f = at(i, pc);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) at(i, j) -= f * at(pr, j);
            at(i, pc) = 0.0;
        }
        basis[pr] = pc;
    }
};

// Reduced costs for objective `cost` (length cols) given the current basis.
std::vector<double> reduced_costs(Tableau& tb, const std::vector<double>& cost) {
    std::vector<double> d(cost);
    for (std::size_t i = 0; i < tb.rows; ++i) {
        const double cb = cost[tb.basis[i]];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j < tb.cols; ++j) d[j] -= cb * tb.at(i, j);
    }
    return d;
}

// Runs simplex iterations over columns where allowed[j]; false if unbounded.
bool optimise(Tableau& tb, const std::vector<double>& cost, const std::vector<char>& allowed, double tol) {
    for (std::size_t iter = 0; iter < 100000; ++iter) {
        const auto d = reduced_costs(tb, cost);
        std::size_t enter = tb.cols;
        for (std::size_t j = 0; j < tb.cols; ++j)
            if (allowed[j] && d[j] < -tol) {
                enter = j;
                break;
            }
        if (enter == tb.cols) return true;
        std::size_t leave = tb.rows;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < tb.rows; ++i) {
            const double a = tb.at(i, enter);
            if (a <= tol) continue;
            const double ratio = tb.rhs(i) / a;
            if (ratio < best - tol || (std::abs(ratio - best) <= tol && leave < tb.rows && tb.basis[i] < tb.basis[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave == tb.rows) return false;
        tb.pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit");
}

}  // namespace

Solution minimize(const Problem& problem, double tol) {
    const std::size_t n = problem.objective.size(), m = problem.constraints.size();
    std::size_t slack = 0, artificial = 0;
    for (const auto& c : problem.constraints) {
        if (c.coefficients.size() != n) throw std::invalid_argument("constraint width differs from objective");
        const bool flip = c.rhs < 0.0;
        Sense s = c.sense;
        if (flip && s != Sense::Equal) s = s == Sense::LessEqual ? Sense::GreaterEqual : Sense::LessEqual;
        if (s != Sense::Equal) ++slack;
        if (s != Sense::LessEqual) ++artificial;
    }

    Tableau tb;
    tb.rows = m;
    tb.cols = n + slack + artificial;
    tb.cells.assign(m * (tb.cols + 1), 0.0);
    tb.basis.assign(m, 0);
    std::vector<char> is_artificial(tb.cols, 0);
    std::size_t next_slack = n, next_art = n + slack;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = problem.constraints[i];
        const double sign = c.rhs < 0.0 ? -1.0 : 1.0;
        Sense s = c.sense;
        if (sign < 0 && s != Sense::Equal) s = s == Sense::LessEqual ? Sense::GreaterEqual : Sense::LessEqual;
        for (std::size_t j = 0; j < n; ++j) tb.at(i, j) = sign * c.coefficients[j];
        tb.rhs(i) = sign * c.rhs;
        if (s == Sense::LessEqual) {
            tb.at(i, next_slack) = 1.0;
            tb.basis[i] = next_slack++;
        } else {
            if (s == Sense::GreaterEqual) tb.at(i, next_slack++) = -1.0;
            tb.at(i, next_art) = 1.0;
            is_artificial[next_art] = 1;
            tb.basis[i] = next_art++;
        }
    }

    std::vector<char> all(tb.cols, 1);
    if (artificial > 0) {
        std::vector<double> phase1(tb.cols, 0.0);
        for (std::size_t j = 0; j < tb.cols; ++j) phase1[j] = is_artificial[j] ? 1.0 : 0.0;
        optimise(tb, phase1, all, tol);
        double infeas = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (is_artificial[tb.basis[i]]) infeas += tb.rhs(i);
        if (infeas > 1e-7) return {};
        // drive remaining (zero-valued) artificials out of the basis
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_artificial[tb.basis[i]]) continue;
            for (std::size_t j = 0; j < tb.cols; ++j)
                if (!is_artificial[j] && std::abs(tb.at(i, j)) > tol) {
                    tb.pivot(i, j);
                    break;
                }
        }
    }

    std::vector<double> cost(tb.cols, 0.0);
    std::copy(problem.objective.begin(), problem.objective.end(), cost.begin());
    std::vector<char> allowed(tb.cols, 1);
    for (std::size_t j = 0; j < tb.cols; ++j) allowed[j] = !is_artificial[j];
    Solution sol;
    if (!optimise(tb, cost, allowed, tol)) {
        sol.status = Status::Unbounded;
        return sol;
    }
    sol.status = Status::Optimal;
    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (tb.basis[i] < n) sol.x[tb.basis[i]] = tb.rhs(i);
    for (std::size_t j = 0; j < n; ++j) sol.objective += problem.objective[j] * sol.x[j];
    return sol;
}

}  // namespace hiact::lp

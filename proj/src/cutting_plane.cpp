#include "hiact/cutting_plane.hpp"

#include <algorithm>
#include <cmath>

#include "hiact/core/error.hpp"
#include "hiact/kernels/kernels.hpp"

namespace hiact {

namespace {

double dual_value(const std::vector<double>& gram, const std::vector<double>& delta, const std::vector<double>& alpha) {
    const std::size_t n = alpha.size();
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        lin += alpha[i] * delta[i];
        quad += alpha[i] * kernels::active().dot(gram.data() + i * n, alpha.data(), n);
    }
    return lin - 0.5 * quad;
}

}  // namespace

double solve_working_set_dual(const std::vector<double>& gram, const std::vector<double>& delta,
                              std::vector<double>& alpha, int max_steps, double tolerance,
                              std::vector<double>* steps) {
    const std::size_t n = delta.size();
    if (alpha.size() != n || gram.size() != n * n) throw DimensionError("dual shapes disagree");
    // grad_j = delta_j - (G alpha)_j
    std::vector<double> grad(n);
    for (std::size_t j = 0; j < n; ++j) grad[j] = delta[j] - kernels::active().dot(gram.data() + j * n, alpha.data(), n);
    double value = dual_value(gram, delta, alpha);
    for (int step = 0; step < max_steps; ++step) {
        std::size_t up = 0, down = n;
        for (std::size_t j = 1; j < n; ++j)
            if (grad[j] > grad[up]) up = j;
        for (std::size_t j = 0; j < n; ++j)
            if (alpha[j] > 0.0 && (down == n || grad[j] < grad[down])) down = j;
        if (down == n || up == down) break;
        const double gap = grad[up] - grad[down];
        if (gap <= tolerance * std::max(1.0, std::abs(value))) break;
        const double curv = gram[up * n + up] + gram[down * n + down] - 2.0 * gram[up * n + down];
        double t = curv > 0.0 ? gap / curv : alpha[down];
        t = std::min(t, alpha[down]);
        if (t <= 0.0) break;
        alpha[up] += t;
        alpha[down] -= t;
        if (alpha[down] < 1e-300) alpha[down] = 0.0;
        for (std::size_t k = 0; k < n; ++k) grad[k] -= t * (gram[k * n + up] - gram[k * n + down]);
        value += t * gap - 0.5 * t * t * curv;
        if (steps) steps->push_back(value);
    }
    return dual_value(gram, delta, alpha);
}

CuttingPlaneResult cutting_plane(std::size_t dim, const SeparationOracle& separate, const CuttingPlaneOptions& options) {
    if (!(options.C > 0.0) || !(options.epsilon > 0.0)) throw DomainError("C and epsilon must be positive");
    CuttingPlaneResult res;
    res.W.assign(dim, 0.0);
    res.working_set.push_back({std::vector<double>(dim, 0.0), 0.0});
    res.alpha = {options.C};
    std::vector<double> gram{0.0}, delta{0.0};

    auto rebuild_w = [&] {
        std::fill(res.W.begin(), res.W.end(), 0.0);
        for (std::size_t j = 0; j < res.alpha.size(); ++j)
            if (res.alpha[j] != 0.0) kernels::active().axpy(res.alpha[j], res.working_set[j].g.data(), res.W.data(), dim);
    };
    auto slack = [&] {
        double xi = 0.0;
        for (const auto& c : res.working_set)
            xi = std::max(xi, c.delta - kernels::active().dot(res.W.data(), c.g.data(), dim));
        return xi;
    };

    for (;;) {
        Cut cut = separate(res.W);
        ++res.iterations;
        if (cut.g.size() != dim) throw DimensionError("cut has the wrong dimension");
        res.final_violation = cut.delta - kernels::active().dot(res.W.data(), cut.g.data(), dim);
        res.xi = slack();
        if (res.final_violation <= res.xi + options.epsilon) break;
        if (res.iterations >= options.max_iterations) {
            res.hit_iteration_cap = true;
            break;
        }

        const std::size_t n = res.working_set.size();
        std::vector<double> grown((n + 1) * (n + 1));
        for (std::size_t i = 0; i < n; ++i)
            std::copy(gram.begin() + i * n, gram.begin() + (i + 1) * n, grown.begin() + i * (n + 1));
        for (std::size_t i = 0; i < n; ++i)
            grown[i * (n + 1) + n] = grown[n * (n + 1) + i] =
                kernels::active().dot(res.working_set[i].g.data(), cut.g.data(), dim);
        grown[n * (n + 1) + n] = kernels::active().dot(cut.g.data(), cut.g.data(), dim);
        gram = std::move(grown);
        delta.push_back(cut.delta);
        res.alpha.push_back(0.0);
        res.working_set.push_back(std::move(cut));

        res.dual_trace.push_back(
            solve_working_set_dual(gram, delta, res.alpha, options.max_qp_steps, options.qp_tolerance));
        rebuild_w();
    }
    double norm2 = kernels::active().dot(res.W.data(), res.W.data(), dim);
    res.primal = 0.5 * norm2 + options.C * res.xi;
    return res;
}

}  // namespace hiact

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "hiact/cutting_plane.hpp"

using namespace hiact;

namespace {

// Multiclass linear SVM on points: psi(x, y) puts x into block y, the loss is
// [y != y_i]. The oracle returns the averaged most violated constraint.
struct Toy {
    int classes = 3;
    int dim = 2;
    std::vector<std::vector<double>> x;
    std::vector<int> y;

    double score(const std::vector<double>& W, std::size_t i, int c) const {
        double s = 0.0;
        for (int j = 0; j < dim; ++j) s += W[c * dim + j] * x[i][j];
        return s;
    }
    int predict(const std::vector<double>& W, std::size_t i) const {
        int best = 0;
        for (int c = 1; c < classes; ++c)
            if (score(W, i, c) > score(W, i, best)) best = c;
        return best;
    }
    Cut separate(const std::vector<double>& W) const {
        Cut cut{std::vector<double>(static_cast<std::size_t>(classes * dim), 0.0), 0.0};
        const double m = static_cast<double>(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            int worst = y[i];
            double best = score(W, i, y[i]);
            for (int c = 0; c < classes; ++c) {
                const double v = (c != y[i] ? 1.0 : 0.0) + score(W, i, c);
                if (v > best) {
                    best = v;
                    worst = c;
                }
            }
            if (worst == y[i]) continue;
            cut.delta += 1.0 / m;
            for (int j = 0; j < dim; ++j) {
                cut.g[y[i] * dim + j] += x[i][j] / m;
                cut.g[worst * dim + j] -= x[i][j] / m;
            }
        }
        return cut;
    }
};

Toy planted_toy(std::uint64_t seed, double spread) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, spread);
    Toy toy;
    const double centers[3][2] = {{3, 0}, {-1.5, 2.6}, {-1.5, -2.6}};
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 15; ++i) {
            toy.x.push_back({centers[c][0] + n(rng), centers[c][1] + n(rng)});
            toy.y.push_back(c);
        }
    return toy;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

TEST_CASE("an oracle without violations stops at once with zero weights") {
    const auto res = cutting_plane(4, [](const std::vector<double>&) { return Cut{std::vector<double>(4, 0.0), 0.0}; },
                                   {});
    CHECK(res.iterations == 1);
    CHECK(res.xi == 0.0);
    for (double w : res.W) CHECK(w == 0.0);
    CHECK_FALSE(res.hit_iteration_cap);
}

TEST_CASE("separable toy set is fitted with zero training error") {
    const auto toy = planted_toy(1, 0.3);
    CuttingPlaneOptions opt;
    opt.C = 100.0;
    opt.epsilon = 1e-3;
    const auto res = cutting_plane(6, [&](const std::vector<double>& W) { return toy.separate(W); }, opt);
    CHECK_FALSE(res.hit_iteration_cap);
    for (std::size_t i = 0; i < toy.x.size(); ++i) CHECK(toy.predict(res.W, i) == toy.y[i]);
    // every working-set constraint holds within the tolerance
    for (const auto& cut : res.working_set) CHECK(dot(res.W, cut.g) >= cut.delta - res.xi - opt.epsilon - 1e-9);
    CHECK(res.final_violation <= res.xi + opt.epsilon + 1e-12);
}

TEST_CASE("termination rule and monotone dual on noisy data") {
    for (std::uint64_t seed = 2; seed < 7; ++seed) {
        const auto toy = planted_toy(seed, 2.0);
        CuttingPlaneOptions opt;
        opt.C = 5.0;
        opt.epsilon = 1e-3;
        const auto res = cutting_plane(6, [&](const std::vector<double>& W) { return toy.separate(W); }, opt);
        CHECK_FALSE(res.hit_iteration_cap);
        CHECK(res.final_violation <= res.xi + opt.epsilon + 1e-12);
        for (std::size_t i = 1; i < res.dual_trace.size(); ++i)
            CHECK(res.dual_trace[i] >= res.dual_trace[i - 1] - 1e-10);
        const double alpha_sum = std::accumulate(res.alpha.begin(), res.alpha.end(), 0.0);
        CHECK(alpha_sum == doctest::Approx(opt.C));
        for (double a : res.alpha) CHECK(a >= 0.0);
        // W is the alpha-weighted sum of the cut directions
        std::vector<double> w(6, 0.0);
        for (std::size_t j = 0; j < res.working_set.size(); ++j)
            for (std::size_t d = 0; d < 6; ++d) w[d] += res.alpha[j] * res.working_set[j].g[d];
        for (std::size_t d = 0; d < 6; ++d) CHECK(w[d] == doctest::Approx(res.W[d]).epsilon(1e-9));
        CHECK(res.primal >= res.dual_trace.back() - 1e-9);
    }
}

TEST_CASE("iteration cap is reported") {
    const auto toy = planted_toy(3, 2.0);
    CuttingPlaneOptions opt;
    opt.epsilon = 1e-9;
    opt.max_iterations = 3;
    const auto res = cutting_plane(6, [&](const std::vector<double>& W) { return toy.separate(W); }, opt);
    CHECK(res.hit_iteration_cap);
    CHECK(res.iterations == 3);
}

TEST_CASE("working-set dual reaches the analytic optimum of a two-cut problem") {
    // maximise sum a_j delta_j - 1/2 a'Ga with a_0 + a_1 = C: one-dimensional
    const double C = 2.0;
    const std::vector<double> gram{1.0, 0.2, 0.2, 0.5}, delta{0.3, 1.0};
    std::vector<double> alpha{C, 0.0};
    std::vector<double> steps;
    solve_working_set_dual(gram, delta, alpha, 1000, 1e-14, &steps);
    // f(t) with a = (C - t, t): derivative zero at t* = (d1 - d0 + C (G00 - G01)) / (G00 - 2 G01 + G11)
    const double t = (delta[1] - delta[0] + C * (gram[0] - gram[1])) / (gram[0] - 2 * gram[1] + gram[3]);
    CHECK(alpha[1] == doctest::Approx(std::clamp(t, 0.0, C)));
    CHECK(alpha[0] + alpha[1] == doctest::Approx(C));
    for (std::size_t i = 1; i < steps.size(); ++i) CHECK(steps[i] >= steps[i - 1] - 1e-12);
}

TEST_CASE("working-set dual ascends on random problems") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t k = 2 + rep % 6, d = 4;
        std::vector<std::vector<double>> g(k, std::vector<double>(d));
        for (auto& row : g)
            for (auto& v : row) v = n(rng);
        std::vector<double> gram(k * k), delta(k);
        for (std::size_t i = 0; i < k; ++i) {
            delta[i] = std::abs(n(rng));
            for (std::size_t j = 0; j < k; ++j) gram[i * k + j] = dot(g[i], g[j]);
        }
        std::vector<double> alpha(k, 0.0);
        alpha[0] = 3.0;
        std::vector<double> steps;
        solve_working_set_dual(gram, delta, alpha, 10000, 1e-12, &steps);
        for (std::size_t i = 1; i < steps.size(); ++i) CHECK(steps[i] >= steps[i - 1] - 1e-10);
        // optimality: no pairwise move improves the objective
        std::vector<double> grad(k);
        for (std::size_t i = 0; i < k; ++i) {
            grad[i] = delta[i];
            for (std::size_t j = 0; j < k; ++j) grad[i] -= gram[i * k + j] * alpha[j];
        }
        double up = -INFINITY, down = INFINITY;
        for (std::size_t i = 0; i < k; ++i) {
            up = std::max(up, grad[i]);
            if (alpha[i] > 1e-12) down = std::min(down, grad[i]);
        }
        CHECK(up - down <= 1e-6);
    }
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "hiact/core/error.hpp"
#include "hiact/dictionaries.hpp"

using namespace hiact;

namespace {

Matrix points_from(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

std::vector<double> random_histogram(std::mt19937_64& rng, const std::vector<double>& center, double spread) {
    std::uniform_real_distribution<double> u(0.0, spread);
    std::vector<double> h(center);
    double sum = 0.0;
    for (auto& x : h) {
        x += u(rng);
        sum += x;
    }
    for (auto& x : h) x /= sum;
    return h;
}

}  // namespace

TEST_CASE("kmeans with k equal to n reproduces the points") {
    const Matrix pts = points_from({{0, 0}, {1, 0}, {5, 5}, {-2, 3}});
    const auto res = kmeans(pts, {.k = 4, .seed = 3});
    CHECK(res.inertia == doctest::Approx(0.0));
    std::vector<int> labels = res.labels;
    std::sort(labels.begin(), labels.end());
    CHECK(labels == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("kmeans with one cluster returns the mean") {
    const Matrix pts = points_from({{0, 0}, {2, 0}, {4, 6}});
    const auto res = kmeans(pts, {.k = 1});
    CHECK(res.centroids(0, 0) == doctest::Approx(2.0));
    CHECK(res.centroids(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("kmeans separates two planted blobs and inertia never rises") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0.0, 0.1);
    Matrix pts(40, 2);
    for (std::size_t i = 0; i < 40; ++i) {
        const double c = i < 20 ? -3.0 : 3.0;
        pts(i, 0) = c + n(rng);
        pts(i, 1) = n(rng);
    }
    const auto res = kmeans(pts, {.k = 2, .seed = 5, .restarts = 2});
    for (std::size_t i = 1; i < 20; ++i) CHECK(res.labels[i] == res.labels[0]);
    for (std::size_t i = 21; i < 40; ++i) CHECK(res.labels[i] == res.labels[20]);
    CHECK(res.labels[0] != res.labels[20]);
    for (std::size_t i = 1; i < res.inertia_trace.size(); ++i)
        CHECK(res.inertia_trace[i] <= res.inertia_trace[i - 1] + 1e-12);
}

TEST_CASE("kmeans is deterministic for a seed") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n;
    Matrix pts(30, 3);
    for (auto& v : pts.values()) v = n(rng);
    const auto a = kmeans(pts, {.k = 4, .seed = 9});
    const auto b = kmeans(pts, {.k = 4, .seed = 9});
    CHECK(a.labels == b.labels);
    CHECK(a.inertia == b.inertia);
}

TEST_CASE("gc_init relabels the largest distances") {
    const std::vector<int> labels{0, 1, 2, 0, 1, 2, 0, 1, 2, 0};
    const std::vector<double> d{0.1, 0.9, 0.3, 0.4, 0.95, 0.2, 0.5, 0.6, 0.7, 0.05};
    CHECK(gc_init(labels, d, 0.0, 3) == labels);
    const auto out = gc_init(labels, d, 0.2, 3);
    // sort oracle: the two largest distances sit at indices 4 and 1
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return d[i] > d[j]; });
    for (std::size_t i = 0; i < d.size(); ++i) {
        const bool top = i == order[0] || i == order[1];
        CHECK(out[i] == (top ? 3 : labels[i]));
    }
    CHECK(std::count(out.begin(), out.end(), 3) == 2);
}

TEST_CASE("gc_init ties at the boundary go to the lower index") {
    const std::vector<int> labels(5, 0);
    const std::vector<double> d{1.0, 2.0, 2.0, 2.0, 0.0};
    const auto out = gc_init(labels, d, 0.4, 7);
    CHECK(out == std::vector<int>{0, 7, 7, 0, 0});
}

TEST_CASE("chi2 hand values and errors") {
    const std::vector<double> a{1, 0}, b{0, 1};
    CHECK(chi2(a, a) == 0.0);
    CHECK(chi2(a, b) == doctest::Approx(2.0));
    const std::vector<double> c{0.5, 0.5}, d{0.25, 0.75};
    CHECK(chi2(c, d) == doctest::Approx(0.0625 / 0.75 + 0.0625 / 1.25));
    CHECK(chi2(c, d) == doctest::Approx(0.133333).epsilon(1e-5));
    const std::vector<double> neg{-0.1, 1.1};
    CHECK_THROWS_AS(chi2(neg, c), DomainError);
    const std::vector<double> three{1, 0, 0};
    CHECK_THROWS_AS(chi2(three, c), DimensionError);
}

TEST_CASE("chi2 is symmetric and zero only on equal histograms") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const auto h1 = random_histogram(rng, std::vector<double>(6, 0.0), 1.0);
        const auto h2 = random_histogram(rng, std::vector<double>(6, 0.0), 1.0);
        CHECK(chi2(h1, h2) == doctest::Approx(chi2(h2, h1)));
        CHECK(chi2(h1, h2) > 0.0);
        CHECK(chi2(h1, h1) == 0.0);
    }
}

TEST_CASE("scree worked example") {
    const std::vector<double> lambda{9, 3, 1, 0.1, 0.01};
    const auto s = scree_scores(lambda);
    REQUIRE(s.size() == 4);
    CHECK(s[0] == doctest::Approx(1.002));
    CHECK(s[1] == doctest::Approx(0.0873).epsilon(1e-3));
    CHECK(s[2] == doctest::Approx(0.00677).epsilon(1e-3));
    CHECK(s[3] == doctest::Approx(0.00801).epsilon(1e-3));
    CHECK(scree_count(lambda) == 3);
    CHECK(scree_count(std::vector<double>{1, 0}) == 1);
    CHECK(scree_count(std::vector<double>{0, 0, 0}) == 1);
    CHECK(scree_count(std::vector<double>{4}) == 1);
}

TEST_CASE("scree on normalised spectra is scale invariant") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0), g(0.01, 100.0);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> lambda(2 + i % 7);
        for (auto& l : lambda) l = u(rng) * u(rng);
        const double gamma = g(rng);
        std::vector<double> scaled(lambda);
        for (auto& l : scaled) l *= gamma;
        CHECK(scree_count(normalize_spectrum(lambda)) == scree_count(normalize_spectrum(scaled)));
    }
}

TEST_CASE("symmetric eigenvalues are descending") {
    Matrix m(2, 2);
    m(0, 0) = 2;
    m(0, 1) = m(1, 0) = 1;
    m(1, 1) = 2;
    const auto e = symmetric_eigenvalues(m);
    CHECK(e[0] == doctest::Approx(3.0));
    CHECK(e[1] == doctest::Approx(1.0));
}

TEST_CASE("build_actionlets with identical histograms gives one actionlet") {
    std::vector<IntervalHistogram> in(5, {{0.2, 0.3, 0.5}, 0});
    const auto res = build_actionlets(in, 1, {});
    CHECK(res.dictionary.G == std::vector<int>{1});
    CHECK(res.dictionary.A() == 1);
}

TEST_CASE("build_actionlets recovers planted bimodal clusters") {
    std::mt19937_64 rng(21);
    const std::vector<std::vector<double>> centers{
        {1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}, {0, 0, 0, 0, 1, 1}};
    std::vector<IntervalHistogram> in;
    std::vector<int> planted;
    for (int s = 0; s < 2; ++s)
        for (int mode = 0; mode < 2; ++mode)
            for (int i = 0; i < 12; ++i) {
                in.push_back({random_histogram(rng, centers[2 * s + mode], 0.05), s});
                planted.push_back(2 * s + mode);
            }
    const auto res = build_actionlets(in, 2, {});
    CHECK(res.dictionary.G == std::vector<int>{2, 2});
    CHECK(res.dictionary.u_of_v == std::vector<int>{0, 0, 1, 1});
    // purity: every planted mode maps to a single actionlet of its own action
    std::map<int, int> seen;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const int v = res.assignment[i];
        CHECK(res.dictionary.u_of_v[v] == in[i].action);
        auto [it, fresh] = seen.emplace(planted[i], v);
        CHECK(it->second == v);
    }
    CHECK(seen.size() == 4);
}

TEST_CASE("build_actionlets keeps u_of_v non-decreasing and surjective") {
    std::mt19937_64 rng(5);
    std::vector<IntervalHistogram> in;
    for (int s = 0; s < 4; ++s)
        for (int i = 0; i < 6; ++i) in.push_back({random_histogram(rng, std::vector<double>(5, 0.0), 1.0), s});
    std::shuffle(in.begin(), in.end(), rng);
    const auto res = build_actionlets(in, 4, {});
    const auto& u = res.dictionary.u_of_v;
    CHECK(std::is_sorted(u.begin(), u.end()));
    for (int s = 0; s < 4; ++s) CHECK(std::count(u.begin(), u.end(), s) == res.dictionary.G[s]);
    CHECK(std::accumulate(res.dictionary.G.begin(), res.dictionary.G.end(), 0) == res.dictionary.A());
    for (int g : res.dictionary.G) CHECK(g >= 1);
}

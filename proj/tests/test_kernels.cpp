#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "hiact/kernels/kernels.hpp"

using namespace hiact::kernels;

namespace {

std::vector<double> randv(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar kernels on hand values") {
    const auto& s = scalar_table();
    const double a[] = {1, 2, 3}, b[] = {4, -5, 6};
    CHECK(s.dot(a, b, 3) == doctest::Approx(12.0));
    CHECK(s.squared_distance(a, b, 3) == doctest::Approx(9 + 49 + 9));
    const double h1[] = {0.5, 0.5, 0.0}, h2[] = {0.25, 0.75, 0.0};
    CHECK(s.chi2(h1, h2, 3) == doctest::Approx(0.0625 / 0.75 + 0.0625 / 1.25));
    const double g[] = {1, 5, 2}, v[] = {3, -1, 2};
    const auto m = s.max_plus(g, v, 3);  // 4, 4, 4 -> first index
    CHECK(m.value == 4.0);
    CHECK(m.index == 0);
    CHECK(s.max_plus(g, v, 0).value == -std::numeric_limits<double>::infinity());
    double y[] = {1, 1, 1};
    s.axpy(2.0, a, y, 3);
    CHECK(y[2] == 7.0);
    const double mat[] = {1, 0, 0, 1, 1, 1};
    double out[2];
    s.gemv(mat, 2, 3, a, out);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 6.0);
}

TEST_CASE("avx2 kernels agree with scalar") {
    const auto* v = avx2_table();
    if (!v || !cpu_supports_avx2()) {
        MESSAGE("AVX2 variant unavailable; skipped");
        return;
    }
    const auto& s = scalar_table();
    std::mt19937_64 rng(11);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 31u, 64u, 100u, 257u}) {
        CAPTURE(n);
        const auto a = randv(rng, n), b = randv(rng, n);
        CHECK(v->dot(a.data(), b.data(), n) == doctest::Approx(s.dot(a.data(), b.data(), n)).epsilon(1e-12));
        CHECK(v->squared_distance(a.data(), b.data(), n) ==
              doctest::Approx(s.squared_distance(a.data(), b.data(), n)).epsilon(1e-12));
        auto h1 = randv(rng, n, 0.0, 1.0), h2 = randv(rng, n, 0.0, 1.0);
        for (std::size_t i = 0; i < n; i += 3) h1[i] = h2[i] = 0.0;  // empty bins
        CHECK(v->chi2(h1.data(), h2.data(), n) == doctest::Approx(s.chi2(h1.data(), h2.data(), n)).epsilon(1e-12));

        // max_plus is exact: identical value and index, including ties and -inf
        auto g = randv(rng, n), x = randv(rng, n);
        for (std::size_t i = 0; i < n; i += 4) x[i] = -std::numeric_limits<double>::infinity();
        if (n > 6) {
            g[2] = g[5] = 10.0;
            x[2] = x[5] = 1.0;
        }
        const auto ms = s.max_plus(g.data(), x.data(), n), mv = v->max_plus(g.data(), x.data(), n);
        CHECK(ms.value == mv.value);
        CHECK(ms.index == mv.index);

        auto ys = randv(rng, n), yv = ys;
        s.axpy(0.7, a.data(), ys.data(), n);
        v->axpy(0.7, a.data(), yv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(ys[i] == doctest::Approx(yv[i]).epsilon(1e-15));

        const std::size_t rows = 5;
        const auto m = randv(rng, rows * n);
        std::vector<double> os(rows), ov(rows);
        s.gemv(m.data(), rows, n, a.data(), os.data());
        v->gemv(m.data(), rows, n, a.data(), ov.data());
        for (std::size_t i = 0; i < rows; ++i) CHECK(os[i] == doctest::Approx(ov[i]).epsilon(1e-12));
    }
}

TEST_CASE("max_plus_product by hand") {
    // [1 2] (x) [[0 5], [4 -1]] = [max(1, 6) max(6, 1)] = [6 6]
    const double a[] = {1, 2}, b[] = {0, 5, 4, -1};
    double out[2];
    int arg[2];
    scalar_table().max_plus_product(a, b, 1, 2, 2, out, arg);
    CHECK(out[0] == 6.0);
    CHECK(arg[0] == 1);
    CHECK(out[1] == 6.0);
    CHECK(arg[1] == 0);
}

TEST_CASE("max_plus_product agrees across backends") {
    const auto* v = avx2_table();
    if (!v || !cpu_supports_avx2()) {
        MESSAGE("AVX2 variant unavailable; skipped");
        return;
    }
    const auto& s = scalar_table();
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> coarse(-2, 2);
    const double ninf = -std::numeric_limits<double>::infinity();
    for (std::size_t m : {1u, 3u, 9u})
        for (std::size_t p : {1u, 4u, 12u})
            for (std::size_t n : {1u, 3u, 4u, 5u, 12u, 13u}) {
                CAPTURE(m);
                CAPTURE(p);
                CAPTURE(n);
                // small integers force ties, -inf rows mimic pruned states
                std::vector<double> a(m * p), b(p * n);
                for (auto& x : a) x = coarse(rng);
                for (auto& x : b) x = coarse(rng);
                for (std::size_t j = 0; j < n; ++j) b[j] = ninf;
                std::vector<double> os(m * n), ov(m * n);
                std::vector<int> gs(m * n), gv(m * n);
                s.max_plus_product(a.data(), b.data(), m, p, n, os.data(), gs.data());
                v->max_plus_product(a.data(), b.data(), m, p, n, ov.data(), gv.data());
                CHECK(os == ov);
                CHECK(gs == gv);
            }
}

TEST_CASE("all -inf max_plus keeps index 0 on both backends") {
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> g(9, 0.0), x(9, ninf);
    const auto ms = scalar_table().max_plus(g.data(), x.data(), 9);
    CHECK(ms.index == 0);
    CHECK(ms.value == ninf);
    if (const auto* v = avx2_table(); v && cpu_supports_avx2()) {
        const auto mv = v->max_plus(g.data(), x.data(), 9);
        CHECK(mv.index == 0);
        CHECK(mv.value == ninf);
    }
}

TEST_CASE("backend switching") {
    const auto before = active_backend();
    set_backend(Backend::Scalar);
    CHECK(active_backend() == Backend::Scalar);
    CHECK(backend_name(Backend::Scalar) == "scalar");
    if (avx2_table() && cpu_supports_avx2()) {
        set_backend(Backend::Avx2);
        CHECK(active().backend == Backend::Avx2);
    } else {
        CHECK_THROWS(set_backend(Backend::Avx2));
    }
    set_backend(before);
}

#pragma once

// Data-parallel inner loops used by inference, clustering and the QP.
//
// Every kernel has a scalar reference implementation; an AVX2 variant is
// compiled on x86-64 and picked at runtime when the CPU supports it. The
// environment variable HIACT_KERNELS=scalar|avx2 forces a backend.
//
// max_plus and max_plus_product are bit-identical across backends (one add per element, exact
// compares). Reductions (dot, distances, chi2) reassociate the sum and agree
// only to rounding.

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>

namespace hiact::kernels {

enum class Backend { Scalar, Avx2 };

struct ArgMax {
    double value = -std::numeric_limits<double>::infinity();
    std::size_t index = 0;
};

struct KernelTable {
    Backend backend;
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    // sum (a-b)^2/(a+b), bins with a+b == 0 skipped
    double (*chi2)(const double* a, const double* b, std::size_t n);
    // max_i a[i]+b[i], lowest index on ties; n == 0 gives {-inf, 0}
    ArgMax (*max_plus)(const double* a, const double* b, std::size_t n);
    // out[i][j] = max_l a[i][l] + b[l][j], arg[i][j] = the lowest maximising l;
    // a is m x p, b is p x n, both row-major
    void (*max_plus_product)(const double* a, const double* b, std::size_t m, std::size_t p, std::size_t n,
                             double* out, int* arg);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // out[i] = <m.row(i), x> for a row-major rows x cols matrix
    void (*gemv)(const double* m, std::size_t rows, std::size_t cols, const double* x, double* out);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant is not compiled in.
const KernelTable* avx2_table();
bool cpu_supports_avx2();

const KernelTable& active();
Backend active_backend();
/// Throws std::runtime_error if the backend is unavailable on this machine.
void set_backend(Backend backend);
std::string_view backend_name(Backend backend);

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    return active().squared_distance(a.data(), b.data(), a.size());
}
inline ArgMax max_plus(std::span<const double> a, std::span<const double> b) {
    return active().max_plus(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace hiact::kernels

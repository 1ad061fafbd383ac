#include "hiact/kernels/kernels.hpp"

namespace hiact::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double chi2_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double den = a[i] + b[i];
        if (den == 0.0) continue;
        const double d = a[i] - b[i];
        s += d * d / den;
    }
    return s;
}

ArgMax max_plus_scalar(const double* a, const double* b, std::size_t n) {
    ArgMax best;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = a[i] + b[i];
        if (v > best.value) {
            best.value = v;
            best.index = i;
        }
    }
    return best;
}

void max_plus_product_scalar(const double* a, const double* b, std::size_t m, std::size_t p, std::size_t n,
                             double* out, int* arg) {
    for (std::size_t i = 0; i < m; ++i) {
        double* o = out + i * n;
        int* g = arg + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            o[j] = -std::numeric_limits<double>::infinity();
            g[j] = 0;
        }
        for (std::size_t l = 0; l < p; ++l) {
            const double x = a[i * p + l];
            const double* row = b + l * n;
            for (std::size_t j = 0; j < n; ++j) {
                const double v = x + row[j];
                if (v > o[j]) {
                    o[j] = v;
                    g[j] = static_cast<int>(l);
                }
            }
        }
    }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_scalar(const double* m, std::size_t rows, std::size_t cols, const double* x, double* out) {
    for (std::size_t r = 0; r < rows; ++r) out[r] = dot_scalar(m + r * cols, x, cols);
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{Backend::Scalar,          dot_scalar, squared_distance_scalar, chi2_scalar,
                                   max_plus_scalar,          max_plus_product_scalar,
                                   axpy_scalar,              gemv_scalar};
    return table;
}

}  // namespace hiact::kernels

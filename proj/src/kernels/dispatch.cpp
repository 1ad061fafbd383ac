#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "hiact/kernels/kernels.hpp"

namespace hiact::kernels {

#ifndef HIACT_HAVE_AVX2_KERNELS
const KernelTable* avx2_table() { return nullptr; }
#endif

bool cpu_supports_avx2() {
#if defined(HIACT_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const KernelTable* pick_default() {
    if (const char* env = std::getenv("HIACT_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") return &scalar_table();
        if (want == "avx2" && avx2_table() && cpu_supports_avx2()) return avx2_table();
    }
    if (avx2_table() && cpu_supports_avx2()) return avx2_table();
    return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
    static std::atomic<const KernelTable*> table{pick_default()};
    return table;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

Backend active_backend() { return active().backend; }

void set_backend(Backend backend) {
    if (backend == Backend::Scalar) {
        slot().store(&scalar_table());
        return;
    }
    if (!avx2_table() || !cpu_supports_avx2())
        throw std::runtime_error("AVX2 kernels are not available on this machine");
    slot().store(avx2_table());
}

std::string_view backend_name(Backend backend) {
    return backend == Backend::Avx2 ? "avx2" : "scalar";
}

}  // namespace hiact::kernels

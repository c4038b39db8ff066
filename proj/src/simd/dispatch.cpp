#include "negspec/simd/dispatch.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "negspec/errors.hpp"

namespace negspec::simd {

namespace {

std::atomic<int> g_active{-1};

} // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(NEGSPEC_HAVE_AVX2)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

Isa default_isa() {
    if (const char* env = std::getenv("NEGSPEC_SIMD")) {
        const std::string v(env);
        if (v == "scalar")
            return Isa::scalar;
        if (v == "avx2" && isa_supported(Isa::avx2))
            return Isa::avx2;
    }
    return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

Isa active_isa() {
    int v = g_active.load(std::memory_order_relaxed);
    if (v < 0) {
        v = static_cast<int>(default_isa());
        g_active.store(v, std::memory_order_relaxed);
    }
    return static_cast<Isa>(v);
}

void set_active_isa(Isa isa) {
    if (!isa_supported(isa))
        throw DomainError(std::string("set_active_isa: ") + isa_name(isa) +
                          " is not supported on this machine");
    g_active.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void mode_terms(Isa isa, const double* nx, const double* ny, const double* nz, std::size_t count,
                const ModeTermParams& p, double* out) {
#if defined(NEGSPEC_HAVE_AVX2)
    if (isa == Isa::avx2) {
        detail::mode_terms_avx2(nx, ny, nz, count, p, out);
        return;
    }
#else
    (void)isa;
#endif
    detail::mode_terms_scalar(nx, ny, nz, count, p, out);
}

void mode_terms(const double* nx, const double* ny, const double* nz, std::size_t count,
                const ModeTermParams& p, double* out) {
    mode_terms(active_isa(), nx, ny, nz, count, p, out);
}

void image_terms(Isa isa, double r, double beta, std::int64_t n_first, std::size_t count,
                 double* out) {
#if defined(NEGSPEC_HAVE_AVX2)
    if (isa == Isa::avx2) {
        detail::image_terms_avx2(r, beta, n_first, count, out);
        return;
    }
#else
    (void)isa;
#endif
    detail::image_terms_scalar(r, beta, n_first, count, out);
}

void image_terms(double r, double beta, std::int64_t n_first, std::size_t count, double* out) {
    image_terms(active_isa(), r, beta, n_first, count, out);
}

} // namespace negspec::simd

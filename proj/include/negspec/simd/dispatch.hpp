#pragma once

#include <cstddef>
#include <cstdint>

namespace negspec::simd {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);

// Best supported ISA, unless NEGSPEC_SIMD=scalar|avx2 says otherwise.
Isa default_isa();
Isa active_isa();
void set_active_isa(Isa isa);

struct ModeTermParams {
    double spacing = 1.0; // 2 pi / L
    double kx = 0.0, ky = 0.0, kz = 0.0; // external mode as lattice index
    double tau = 0.0;
    double alpha = 0.0;
    double phase_sign = 1.0; // +1: cos((w1 + w) tau), -1: cos((w1 - w) tau)
};

// out[i] = cos(phase) exp(-alpha w) / (w w1) for lattice index n_i, zero where w or w1 vanishes
void mode_terms(const double* nx, const double* ny, const double* nz, std::size_t count,
                const ModeTermParams& p, double* out);
void mode_terms(Isa isa, const double* nx, const double* ny, const double* nz, std::size_t count,
                const ModeTermParams& p, double* out);

// out[i] = (3r^2 - m^2)(r^2 - 3m^2) / (r^2 + m^2)^6 with m = (n_first + i) beta
void image_terms(double r, double beta, std::int64_t n_first, std::size_t count, double* out);
void image_terms(Isa isa, double r, double beta, std::int64_t n_first, std::size_t count,
                 double* out);

namespace detail {
void mode_terms_scalar(const double* nx, const double* ny, const double* nz, std::size_t count,
                       const ModeTermParams& p, double* out);
void image_terms_scalar(double r, double beta, std::int64_t n_first, std::size_t count,
                        double* out);
#if defined(NEGSPEC_HAVE_AVX2)
void mode_terms_avx2(const double* nx, const double* ny, const double* nz, std::size_t count,
                     const ModeTermParams& p, double* out);
void image_terms_avx2(double r, double beta, std::int64_t n_first, std::size_t count,
                      double* out);
#endif
} // namespace detail

} // namespace negspec::simd

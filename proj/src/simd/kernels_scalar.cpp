#include <cmath>

#include "negspec/simd/dispatch.hpp"

namespace negspec::simd::detail {

void mode_terms_scalar(const double* nx, const double* ny, const double* nz, std::size_t count,
                       const ModeTermParams& p, double* out) {
    for (std::size_t i = 0; i < count; ++i) {
        const double ax = nx[i], ay = ny[i], az = nz[i];
        const double bx = ax + p.kx, by = ay + p.ky, bz = az + p.kz;
        const double n2 = ax * ax + ay * ay + az * az;
        const double m2 = bx * bx + by * by + bz * bz;
        if (n2 == 0.0 || m2 == 0.0) {
            out[i] = 0.0;
            continue;
        }
        const double w = p.spacing * std::sqrt(n2);
        const double w1 = p.spacing * std::sqrt(m2);
        const double phase = (w1 + p.phase_sign * w) * p.tau;
        out[i] = std::cos(phase) * std::exp(-p.alpha * w) / (w * w1);
    }
}

void image_terms_scalar(double r, double beta, std::int64_t n_first, std::size_t count,
                        double* out) {
    const double r2 = r * r;
    for (std::size_t i = 0; i < count; ++i) {
        const double m = static_cast<double>(n_first + static_cast<std::int64_t>(i)) * beta;
        const double m2 = m * m;
        const double d = r2 + m2;
        const double d3 = d * d * d;
        out[i] = (3.0 * r2 - m2) * (r2 - 3.0 * m2) / (d3 * d3);
    }
}

} // namespace negspec::simd::detail

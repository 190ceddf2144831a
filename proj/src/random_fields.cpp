#include "kdv5/random_fields.hpp"

#include <random>

#include "kdv5/error.hpp"
#include "kdv5/spectral.hpp"

namespace kdv5 {

Field random_band_limited(const Grid& grid, std::uint64_t seed, const RandomFieldOptions& opts) {
    const int n = grid.size();
    const int band = opts.max_mode > 0 ? opts.max_mode : n / 4 - 1;
    if (band < 1 || 2 * band >= n) throw ValidationError("random field: max_mode must lie in [1, N/2)");
    if (!(opts.h_minus1_norm >= 0.0)) throw ValidationError("random field: target norm must be >= 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Spectrum coeffs(n, 0.0);
    if (opts.with_mean) coeffs[0] = normal(rng);
    for (int m = 1; m <= band; ++m) {
        const Complex c(normal(rng), normal(rng));
        coeffs[m] = c;
        coeffs[n - m] = std::conj(c);
    }
    const Field raw = Field::from_spectrum(grid, coeffs);
    const double norm = sobolev_norm(raw, -1.0, opts.norm_kappa);
    if (norm == 0.0) return raw;
    return raw * (opts.h_minus1_norm / norm);
}

}  // namespace kdv5

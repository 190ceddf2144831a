#pragma once

#include <cstdint>

#include "kdv5/grid.hpp"

namespace kdv5 {

struct RandomFieldOptions {
    /// Largest |wavenumber| with nonzero content; 0 selects N/4 - 1, which keeps
    /// collocation products of two such fields free of aliasing.
    int max_mode = 0;
    /// Target norm in H^{-1}_kappa.
    double h_minus1_norm = 0.05;
    double norm_kappa = 1.0;
    /// Include the zero mode (a nonzero mean).
    bool with_mean = true;
};

/// Real band-limited field with independent Gaussian Fourier coefficients,
/// rescaled to the target norm. The same seed gives the same field.
Field random_band_limited(const Grid& grid, std::uint64_t seed, const RandomFieldOptions& opts = {});

}  // namespace kdv5

#pragma once

// Shared test fixtures: the sin pair on Z = {0, 1/2} and random zero-defect
// differences.

#include <numbers>
#include <random>

#include "foldvol/bm_structures.hpp"
#include "foldvol/invariants.hpp"

namespace foldvol::fixtures {

inline SpectralField2D sin_x() { return SpectralField2D::sine(1, 0, 1.0); }

inline SpectralField2D modulated_sin() {
  return sin_x() + 0.3 * multiply(sin_x(), SpectralField2D::cosine(0, 1, 1.0));
}

inline CriticalSet two_circles() { return CriticalSet({0.0, 0.5}); }

inline SpectralField2D random_bandlimited(std::uint64_t seed, int modes, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpectralField2D f(kDefaultBandwidth);
  for (int kx = 0; kx <= modes; ++kx) {
    for (int ky = -modes; ky <= modes; ++ky) {
      if (kx == 0 && ky <= 0) continue;
      f = f + SpectralField2D::cosine(kx, ky, scale * u(rng)) +
          SpectralField2D::sine(kx, ky, scale * u(rng));
    }
  }
  return f;
}

// sin(2 pi x) g - a sin(2 pi x) - b sin^2(2 pi x) with a, b chosen so both
// regional integrals over Z = {0, 1/2} vanish. Vanishes on Z like a
// difference of two folded forms does.
inline SpectralField2D random_zero_defect(std::uint64_t seed) {
  const SpectralField2D s = sin_x();
  const SpectralField2D raw = multiply(s, random_bandlimited(seed, 2, 0.3));
  const double a0 = integrate_strip(raw, 0.0, 0.5), a1 = integrate_strip(raw, 0.5, 1.0);
  const double b = 2.0 * (a0 + a1);
  const double a = std::numbers::pi * (a0 - a1) / 2.0;
  return raw - a * s - b * multiply(s, s);
}

}  // namespace foldvol::fixtures

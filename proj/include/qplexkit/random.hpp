#pragma once

#include <cstdint>
#include <random>

#include "qplexkit/types.hpp"

namespace qplexkit {

/// splitmix64 finalizer; decorrelates (seed, stream) pairs so every restart
/// or sweep item gets an independent generator.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64{seed};
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64{mix_seed(seed, stream)};
}

inline CVector gaussian_complex_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<Real> gauss(0.0, 1.0);
  CVector v(dim);
  for (int i = 0; i < dim; ++i) {
    const Real re = gauss(rng);
    const Real im = gauss(rng);
    v(i) = Cplx(re, im);
  }
  return v;
}

inline CMatrix gaussian_complex_matrix(int rows, int cols,
                                       std::mt19937_64& rng) {
  std::normal_distribution<Real> gauss(0.0, 1.0);
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const Real re = gauss(rng);
      const Real im = gauss(rng);
      m(i, j) = Cplx(re, im);
    }
  }
  return m;
}

}  // namespace qplexkit

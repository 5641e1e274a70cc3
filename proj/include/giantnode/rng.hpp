#pragma once

// Small deterministic RNG used wherever reproducibility matters (Haar-random
// state sets, sampled measurement branches).  splitmix64 keeps the byte
// streams identical across platforms and standard-library versions, which the
// golden-file tests rely on; std:: distributions are implementation-defined.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace giantnode {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller (always consumes two uniforms)
  double gaussian() {
    double u1 = uniform();
    const double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // fork an independent stream (splittable seeding for parallel shots)
  SplitMix64 split() { return SplitMix64(next_u64() ^ 0xa5a5a5a55a5a5a5aULL); }
};

// Haar-random single-qubit state: two complex gaussians, normalized.
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, 2, 1> haar_qubit(SplitMix64& rng) {
  using Complex = std::complex<Scalar>;
  Eigen::Matrix<Complex, 2, 1> v;
  v[0] = Complex(Scalar(rng.gaussian()), Scalar(rng.gaussian()));
  v[1] = Complex(Scalar(rng.gaussian()), Scalar(rng.gaussian()));
  const Scalar n = v.norm();
  if (n == Scalar(0)) {
    v << Complex(1, 0), Complex(0, 0);
    return v;
  }
  return v / n;
}

}  // namespace giantnode

#pragma once

#include <cstdint>
#include <random>

#include "irsbeam/types.hpp"

namespace irsbeam {

// Deterministic random stream. Uniform doubles are produced from the raw
// 64-bit output of std::mt19937_64 and normals via Box-Muller, so sequences
// are identical across standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  // Derives an independent stream from (master_seed, stream_id) by mixing
  // both through SplitMix64.
  static RngStream derive(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t s = splitmix64(master_seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1));
    return RngStream(splitmix64(s));
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() { return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; generates pairs, caches the second value.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform_pos();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly-symmetric complex normal CN(0, 1): E|z|^2 = 1.
  Complex cgaussian() {
    double re = gaussian();
    double im = gaussian();
    return Complex(re, im) * 0.7071067811865476;
  }

  VecC cgaussian_vec(int n) {
    VecC v(n);
    for (int i = 0; i < n; ++i) v(i) = cgaussian();
    return v;
  }

  MatC cgaussian_mat(int rows, int cols) {
    MatC m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = cgaussian();
    return m;
  }

  // m phases uniform on [0, 2*pi).
  VecR phases(int m) {
    VecR v(m);
    for (int i = 0; i < m; ++i) v(i) = uniform(0.0, 2.0 * kPi);
    return v;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace irsbeam

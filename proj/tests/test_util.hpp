#pragma once

#include "irsbeam/rng.hpp"
#include "irsbeam/types.hpp"

namespace testutil {

using irsbeam::Complex;
using irsbeam::MatC;
using irsbeam::RngStream;
using irsbeam::VecC;

inline MatC random_hermitian(RngStream& rng, int n, double scale = 1.0) {
  MatC A = rng.cgaussian_mat(n, n);
  return scale * 0.5 * (A + A.adjoint()).eval();
}

inline MatC random_psd(RngStream& rng, int n, double scale = 1.0) {
  MatC A = rng.cgaussian_mat(n, n);
  return scale * (A * A.adjoint()).eval();
}

inline VecC random_unit_vector(RngStream& rng, int n) {
  VecC v = rng.cgaussian_vec(n);
  v.normalize();
  return v;
}

// Unit-modulus vector (random phases).
inline VecC random_unimodular(RngStream& rng, int n) {
  VecC v(n);
  for (int i = 0; i < n; ++i) v(i) = std::polar(1.0, rng.uniform(0.0, 2.0 * irsbeam::kPi));
  return v;
}

}  // namespace testutil

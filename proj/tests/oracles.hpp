#pragma once

// Independent verification oracles used only by tests. They share no code
// with the solver paths they check.

#include <vector>

#include "irsbeam/types.hpp"

namespace oracles {

using irsbeam::MatC;
using irsbeam::VecC;
using irsbeam::VecR;

struct DualityResult {
  double total_power = 0.0;
  std::vector<VecC> w;
  bool converged = false;
};

// Classical uplink-downlink duality fixed point for SINR-constrained power
// minimization: iterate dual uplink powers against MMSE receivers, then map
// back to downlink beamformers through a K x K linear system.
inline DualityResult duality_min_power(const std::vector<VecC>& a,
                                       const std::vector<double>& gamma,
                                       const std::vector<double>& sigma2, int max_iters = 2000,
                                       double tol = 1e-13) {
  const int K = static_cast<int>(a.size());
  const int nt = static_cast<int>(a[0].size());
  // Noise-normalized channels: unit noise for every user.
  std::vector<VecC> an(K);
  for (int k = 0; k < K; ++k) an[k] = a[k] / std::sqrt(sigma2[k]);

  DualityResult out;
  VecR q = VecR::Ones(K);
  for (int it = 0; it < max_iters; ++it) {
    VecR qn(K);
    for (int k = 0; k < K; ++k) {
      MatC Rk = MatC::Identity(nt, nt);
      for (int j = 0; j < K; ++j)
        if (j != k) Rk += q(j) * (an[j] * an[j].adjoint());
      double quad = (an[k].adjoint() * Rk.inverse() * an[k])(0, 0).real();
      qn(k) = gamma[k] / quad;
    }
    double delta = (qn - q).cwiseAbs().maxCoeff() / std::max(1.0, qn.cwiseAbs().maxCoeff());
    q = qn;
    if (delta < tol) {
      out.converged = true;
      break;
    }
  }

  // MMSE directions at the fixed point.
  MatC R = MatC::Identity(nt, nt);
  for (int j = 0; j < K; ++j) R += q(j) * (an[j] * an[j].adjoint());
  MatC Rinv = R.inverse();
  std::vector<VecC> u(K);
  for (int k = 0; k < K; ++k) {
    u[k] = Rinv * an[k];
    u[k].normalize();
  }
  // Downlink power allocation: SINR_k = gamma_k with unit noise.
  MatC M = MatC::Zero(K, K);
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < K; ++j) {
      double cross = std::norm(an[k].dot(u[j]));
      M(k, j) = (j == k) ? cross / gamma[k] : -cross;
    }
  VecC ones = VecC::Ones(K);
  VecC p = M.partialPivLu().solve(ones);
  out.w.resize(K);
  out.total_power = 0.0;
  for (int k = 0; k < K; ++k) {
    out.w[k] = std::sqrt(std::max(0.0, p(k).real())) * u[k];
    out.total_power += out.w[k].squaredNorm();
  }
  return out;
}

}  // namespace oracles

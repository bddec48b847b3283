#include "irsbeam/beamformer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "irsbeam/metrics.hpp"

namespace irsbeam::beamform {

VecC effective_channel(const PhaseConfig& phases, const channel::ChannelSet& cs, int k) {
  return metrics::composite_channel(phases.theta, cs, k);
}

EffectiveChannels make_effective_channels(const PhaseConfig& phases,
                                          const channel::ChannelSet& cs,
                                          const std::vector<double>& gamma,
                                          const std::vector<double>& sigma2) {
  EffectiveChannels ec;
  for (int k = 0; k < cs.k(); ++k) ec.a.push_back(effective_channel(phases, cs, k));
  ec.gamma = gamma;
  ec.sigma2 = sigma2;
  return ec;
}

EffectiveChannels make_direct_channels(const channel::ChannelSet& cs,
                                       const std::vector<double>& gamma,
                                       const std::vector<double>& sigma2) {
  EffectiveChannels ec;
  ec.a.assign(cs.g.begin(), cs.g.end());
  ec.gamma = gamma;
  ec.sigma2 = sigma2;
  return ec;
}

BeamformSolution solve_min_power(const EffectiveChannels& ec,
                                 const conic::SolverSettings& settings) {
  const int K = static_cast<int>(ec.a.size());
  if (K < 1) throw std::invalid_argument("solve_min_power: need at least one user");
  if (ec.gamma.size() != static_cast<size_t>(K) || ec.sigma2.size() != static_cast<size_t>(K))
    throw std::invalid_argument("solve_min_power: gamma/sigma2 size mismatch");
  const int nt = static_cast<int>(ec.a[0].size());
  for (int k = 0; k < K; ++k) {
    if (ec.gamma[k] <= 0.0 || ec.sigma2[k] <= 0.0)
      throw std::invalid_argument("solve_min_power: gamma and sigma2 must be positive");
    if (ec.a[k].size() != nt) throw std::invalid_argument("solve_min_power: channel dims");
  }

  // Noise normalization a_k/sigma_k makes every user's noise power 1; the
  // additional common scale chat keeps the solver data invariant under a
  // joint rescaling of all noise powers, so the returned beamformers scale
  // exactly.
  std::vector<VecC> abar(K);
  double chat = 0.0;
  for (int k = 0; k < K; ++k) {
    abar[k] = ec.a[k] / std::sqrt(ec.sigma2[k]);
    chat = std::max(chat, abar[k].norm());
  }
  if (chat <= 0.0) {
    BeamformSolution out;
    out.status = conic::SolveStatus::infeasible;
    out.message = "all channels are zero";
    return out;
  }
  for (int k = 0; k < K; ++k) abar[k] /= chat;

  // Variables: wtilde (2 nt K real coords) and the power epigraph t.
  conic::Problem p;
  int wbase = p.num_coords();
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < nt; ++i) {
      p.add_scalar("wr" + std::to_string(k) + "_" + std::to_string(i));
      p.add_scalar("wi" + std::to_string(k) + "_" + std::to_string(i));
    }
  auto t = p.add_scalar("t");
  auto wre = [&](int k, int i) { return wbase + 2 * (k * nt + i); };
  auto wim = [&](int k, int i) { return wbase + 2 * (k * nt + i) + 1; };

  // Re/Im of abar_k^H w_j as affine expressions.
  auto re_dot = [&](int k, int j) {
    conic::AffExpr e;
    for (int i = 0; i < nt; ++i) {
      e.add(wre(j, i), abar[k](i).real());
      e.add(wim(j, i), abar[k](i).imag());
    }
    return e;
  };
  auto im_dot = [&](int k, int j) {
    conic::AffExpr e;
    for (int i = 0; i < nt; ++i) {
      e.add(wim(j, i), abar[k](i).real());
      e.add(wre(j, i), -abar[k](i).imag());
    }
    return e;
  };

  for (int k = 0; k < K; ++k) {
    // Phase rotation: abar_k^H w_k real and nonnegative.
    p.add_eq(im_dot(k, k), 0.0);
    // sqrt(gamma) ||[abar_k^H w_j (j != k), 1]|| <= Re(abar_k^H w_k)
    conic::AffExpr head = re_dot(k, k);
    head *= 1.0 / std::sqrt(ec.gamma[k]);
    std::vector<conic::AffExpr> tail;
    for (int j = 0; j < K; ++j) {
      if (j == k) continue;
      tail.push_back(re_dot(k, j));
      tail.push_back(im_dot(k, j));
    }
    tail.push_back(conic::AffExpr(1.0));  // unit noise after normalization
    p.add_soc(head, tail);
  }

  // t >= sum ||w||^2
  std::vector<conic::AffExpr> stack;
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < nt; ++i) {
      conic::AffExpr er, eim;
      er.add(wre(k, i), 1.0);
      eim.add(wim(k, i), 1.0);
      stack.push_back(er);
      stack.push_back(eim);
    }
  p.add_rsoc(conic::AffExpr::of(t), conic::AffExpr(0.5), stack);
  p.set_objective(conic::AffExpr::of(t));

  auto res = p.solve(settings);

  BeamformSolution out;
  out.status = res.status;
  out.iterations = res.iterations;
  out.message = res.message;
  if (res.status != conic::SolveStatus::optimal) return out;

  out.w.resize(K);
  for (int k = 0; k < K; ++k) {
    VecC wk(nt);
    for (int i = 0; i < nt; ++i) wk(i) = Complex(res.x(wre(k, i)), res.x(wim(k, i)));
    out.w[k] = wk / chat;  // undo the channel normalization
  }
  out.total_power = 0.0;
  for (const auto& wk : out.w) out.total_power += wk.squaredNorm();
  for (int k = 0; k < K; ++k)
    out.per_user_sinr.push_back(metrics::sinr_from_channels(out.w, ec.a, k, ec.sigma2[k]));
  if (out.total_power > 1e4) {
    out.suspect_near_infeasible = true;
    std::fprintf(stderr, "solve_min_power: suspect near-infeasible instance (%.3e W)\n",
                 out.total_power);
  }
  return out;
}

}  // namespace irsbeam::beamform

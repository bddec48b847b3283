#pragma once

#include <vector>

#include "irsbeam/channel.hpp"
#include "irsbeam/conic.hpp"
#include "irsbeam/phase.hpp"

// Fixed-phase transmit power minimization: globally optimal downlink
// beamformers under per-user SINR constraints, as a second-order cone
// program.
namespace irsbeam::beamform {

struct EffectiveChannels {
  std::vector<VecC> a;          // composite channel a_k (conjugate of a_k^H)
  std::vector<double> gamma;    // linear SINR targets, > 0
  std::vector<double> sigma2;   // noise powers in watts, > 0
};

struct BeamformSolution {
  std::vector<VecC> w;
  double total_power = 0.0;            // sum ||w_k||^2, watts
  std::vector<double> per_user_sinr;   // re-evaluated from the channels
  conic::SolveStatus status = conic::SolveStatus::numerical_failure;
  bool suspect_near_infeasible = false;
  int iterations = 0;
  std::string message;
};

// a_k = (h_k^H Phi F + g_k^H)^H for the given phases.
VecC effective_channel(const PhaseConfig& phases, const channel::ChannelSet& cs, int k);

EffectiveChannels make_effective_channels(const PhaseConfig& phases,
                                          const channel::ChannelSet& cs,
                                          const std::vector<double>& gamma,
                                          const std::vector<double>& sigma2);

// Direct links only (no IRS deployed).
EffectiveChannels make_direct_channels(const channel::ChannelSet& cs,
                                       const std::vector<double>& gamma,
                                       const std::vector<double>& sigma2);

BeamformSolution solve_min_power(const EffectiveChannels& ec,
                                 const conic::SolverSettings& settings = {});

}  // namespace irsbeam::beamform

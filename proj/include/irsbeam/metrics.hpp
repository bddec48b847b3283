#pragma once

#include <vector>

#include "irsbeam/channel.hpp"
#include "irsbeam/types.hpp"

// Ground-truth evaluation of SINR, rate, and energy efficiency, plus the
// dB/linear conversions used at the interfaces. Everything internal works in
// linear watts.
namespace irsbeam::metrics {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

struct EEParams {
  double mu = 0.32;    // power amplifier efficiency, in (0, 1]
  double ps = 0.054;   // static power (W)
  double pt = 0.1;     // per-antenna circuit power (W)
};

// Composite downlink channel a_k with a_k^H = h_k^H diag(e^{j theta}) F + g_k^H.
VecC composite_channel(const VecR& theta, const channel::ChannelSet& cs, int k);

// Received SINR of user k for beamformers w and IRS phases theta.
double sinr(const std::vector<VecC>& w, const VecR& theta, const channel::ChannelSet& cs, int k,
            double sigma2_k);

// SINR without an IRS (direct links only).
double sinr_no_irs(const std::vector<VecC>& w, const channel::ChannelSet& cs, int k,
                   double sigma2_k);

// SINR for explicitly given composite channels.
double sinr_from_channels(const std::vector<VecC>& w, const std::vector<VecC>& a, int k,
                          double sigma2_k);

// eta = sum log2(1 + SINR_k) / (P_tx / mu + P_s + Nt * P_t), in bit/s/Hz/W.
double energy_efficiency(const std::vector<double>& sinrs, double total_tx_power_w, int nt,
                         const EEParams& ee);

}  // namespace irsbeam::metrics

#include "irsbeam/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace irsbeam::metrics {

VecC composite_channel(const VecR& theta, const channel::ChannelSet& cs, int k) {
  if (k < 0 || k >= cs.k()) throw std::invalid_argument("composite_channel: bad user index");
  if (theta.size() != cs.m()) throw std::invalid_argument("composite_channel: theta size");
  // a_k = (h_k^H Phi F + g_k^H)^H = F^H Phi^H h_k + g_k
  VecC phased(cs.m());
  for (int i = 0; i < cs.m(); ++i) phased(i) = std::polar(1.0, -theta(i)) * cs.h[k](i);
  return cs.F.adjoint() * phased + cs.g[k];
}

double sinr_from_channels(const std::vector<VecC>& w, const std::vector<VecC>& a, int k,
                          double sigma2_k) {
  const int kk = static_cast<int>(w.size());
  if (k < 0 || k >= kk) throw std::invalid_argument("sinr: bad user index");
  double sig = std::norm(a[k].dot(w[k]));  // |a_k^H w_k|^2
  double interference = 0.0;
  for (int j = 0; j < kk; ++j) {
    if (j != k) interference += std::norm(a[k].dot(w[j]));
  }
  return sig / (interference + sigma2_k);
}

double sinr(const std::vector<VecC>& w, const VecR& theta, const channel::ChannelSet& cs, int k,
            double sigma2_k) {
  std::vector<VecC> a(cs.k());
  for (int j = 0; j < cs.k(); ++j) a[j] = composite_channel(theta, cs, j);
  return sinr_from_channels(w, a, k, sigma2_k);
}

double sinr_no_irs(const std::vector<VecC>& w, const channel::ChannelSet& cs, int k,
                   double sigma2_k) {
  std::vector<VecC> a(cs.g.begin(), cs.g.end());
  return sinr_from_channels(w, a, k, sigma2_k);
}

double energy_efficiency(const std::vector<double>& sinrs, double total_tx_power_w, int nt,
                         const EEParams& ee) {
  if (ee.mu <= 0.0 || ee.mu > 1.0) throw std::invalid_argument("energy_efficiency: mu in (0,1]");
  if (ee.ps < 0.0 || ee.pt < 0.0 || total_tx_power_w < 0.0)
    throw std::invalid_argument("energy_efficiency: negative power");
  double rate = 0.0;
  for (double s : sinrs) rate += std::log2(1.0 + s);
  double denom = total_tx_power_w / ee.mu + ee.ps + nt * ee.pt;
  return rate / denom;
}

}  // namespace irsbeam::metrics

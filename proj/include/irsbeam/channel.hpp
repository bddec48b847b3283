#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "irsbeam/rng.hpp"
#include "irsbeam/types.hpp"

// Channel generation: Ricean AP-IRS and IRS-user links, Rayleigh direct
// links, geometric user placement and distance-based pathloss, all
// reproducible from a seed.
namespace irsbeam::channel {

struct SystemGeometry {
  double cell_radius = 100.0;               // meters
  Eigen::Vector2d ap_position{0.0, 0.0};
  Eigen::Vector2d irs_position{100.0, 0.0};  // on the sector boundary
  double sector_angle = 2.0 * kPi / 3.0;     // 120-degree sector
  std::vector<Eigen::Vector2d> user_positions;
};

struct ChannelParams {
  double carrier_freq_hz = 2.4e9;
  double noise_power_w = 1e-12;  // -90 dBm
  double ricean_beta = 1.0;
  double pathloss_exp_los = 2.0;
  double pathloss_exp_nlos = 4.0;
  double ref_gain_l0 = 0.0;  // (lambda_c / 4 pi)^2, derived from the carrier

  static ChannelParams from_carrier(double freq_hz);
};

// How LoS arrival/departure angles are chosen: drawn uniformly on [0, 2pi)
// or derived from the node positions.
enum class AnglePolicy { independent, geometric };

struct ScenarioConfig {
  int nt = 4;  // AP antennas
  int m = 20;  // IRS elements
  int k = 4;   // users
  double cell_radius = 100.0;
  double ap_irs_distance = 50.0;  // pathloss distance of the AP-IRS link
  ChannelParams params = ChannelParams::from_carrier(2.4e9);
  AnglePolicy angle_policy = AnglePolicy::independent;
};

struct ChannelSet {
  MatC F;                  // M x Nt AP->IRS
  std::vector<VecC> h;     // K vectors of length M (IRS->user)
  std::vector<VecC> g;     // K vectors of length Nt (AP->user)
  SystemGeometry geometry;
  std::uint64_t seed = 0;

  int nt() const { return static_cast<int>(F.cols()); }
  int m() const { return static_cast<int>(F.rows()); }
  int k() const { return static_cast<int>(h.size()); }
};

// Uniform linear array response, element i = exp(j pi i sin(angle)).
VecC array_response(int n, double angle);

// L0 * d^-alpha; throws std::invalid_argument for d <= 0.
double pathloss_gain(double l0, double d, double alpha);

// Eq-style Ricean matrix: sqrt(L0 d^-alpha) (sqrt(b/(1+b)) LoS + sqrt(1/(1+b)) NLoS)
MatC gen_ricean_matrix(const ChannelParams& params, double d, double alpha, double beta,
                       double rx_angle, double tx_angle, int rows, int cols, RngStream& rng);

ChannelSet gen_scenario(const ScenarioConfig& config, std::uint64_t seed);

// JSON schema: {"nt","m","k","seed","params":{...},"geometry":{...},
// "F":[[ [re,im], ...]], "h":[[...]], "g":[[...]]}. Entries are [re, im].
void save_json(const ChannelSet& cs, std::ostream& os);
ChannelSet load_json(std::istream& is);

}  // namespace irsbeam::channel

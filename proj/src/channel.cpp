#include "irsbeam/channel.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace irsbeam::channel {

ChannelParams ChannelParams::from_carrier(double freq_hz) {
  ChannelParams p;
  p.carrier_freq_hz = freq_hz;
  double lambda_c = kSpeedOfLight / freq_hz;
  p.ref_gain_l0 = (lambda_c / (4.0 * kPi)) * (lambda_c / (4.0 * kPi));
  return p;
}

VecC array_response(int n, double angle) {
  if (n < 1) throw std::invalid_argument("array_response: n must be >= 1");
  VecC a(n);
  double s = std::sin(angle);
  for (int i = 0; i < n; ++i) a(i) = std::polar(1.0, kPi * i * s);
  return a;
}

double pathloss_gain(double l0, double d, double alpha) {
  if (d <= 0.0) throw std::invalid_argument("pathloss_gain: distance must be positive");
  return l0 * std::pow(d, -alpha);
}

MatC gen_ricean_matrix(const ChannelParams& params, double d, double alpha, double beta,
                       double rx_angle, double tx_angle, int rows, int cols, RngStream& rng) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("gen_ricean_matrix: bad dims");
  double gain = std::sqrt(pathloss_gain(params.ref_gain_l0, d, alpha));
  MatC out = MatC::Zero(rows, cols);
  if (beta > 0.0) {
    VecC rx = array_response(rows, rx_angle);
    VecC tx = array_response(cols, tx_angle);
    out += std::sqrt(beta / (1.0 + beta)) * (rx * tx.adjoint());
  }
  out += std::sqrt(1.0 / (1.0 + beta)) * rng.cgaussian_mat(rows, cols);
  return gain * out;
}

namespace {
double bearing(const Eigen::Vector2d& from, const Eigen::Vector2d& to) {
  return std::atan2(to.y() - from.y(), to.x() - from.x());
}
}  // namespace

ChannelSet gen_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  if (config.nt < 1 || config.m < 1 || config.k < 1)
    throw std::invalid_argument("gen_scenario: Nt, M, K must be >= 1");
  RngStream rng(seed);
  ChannelSet cs;
  cs.seed = seed;
  cs.geometry.cell_radius = config.cell_radius;
  cs.geometry.ap_position = {0.0, 0.0};
  cs.geometry.irs_position = {config.cell_radius, 0.0};
  cs.geometry.sector_angle = 2.0 * kPi / 3.0;

  // Users uniform over the sector (bisector along +x).
  cs.geometry.user_positions.resize(config.k);
  for (int u = 0; u < config.k; ++u) {
    double r = config.cell_radius * std::sqrt(rng.uniform());
    double phi = rng.uniform(-0.5 * cs.geometry.sector_angle, 0.5 * cs.geometry.sector_angle);
    cs.geometry.user_positions[u] = {r * std::cos(phi), r * std::sin(phi)};
  }

  const bool geo = config.angle_policy == AnglePolicy::geometric;
  auto draw_angle = [&rng]() { return rng.uniform(0.0, 2.0 * kPi); };

  // AP->IRS link: LoS with the configured pathloss distance.
  {
    double rx_angle, tx_angle;
    if (geo) {
      rx_angle = bearing(cs.geometry.irs_position, cs.geometry.ap_position);
      tx_angle = bearing(cs.geometry.ap_position, cs.geometry.irs_position);
    } else {
      rx_angle = draw_angle();
      tx_angle = draw_angle();
    }
    cs.F = gen_ricean_matrix(config.params, config.ap_irs_distance, config.params.pathloss_exp_los,
                             config.params.ricean_beta, rx_angle, tx_angle, config.m, config.nt,
                             rng);
  }

  cs.h.resize(config.k);
  cs.g.resize(config.k);
  for (int u = 0; u < config.k; ++u) {
    const auto& pos = cs.geometry.user_positions[u];
    double d_irs = (pos - cs.geometry.irs_position).norm();
    double tx_angle = geo ? bearing(cs.geometry.irs_position, pos) : draw_angle();
    cs.h[u] = gen_ricean_matrix(config.params, d_irs, config.params.pathloss_exp_los,
                                config.params.ricean_beta, tx_angle, 0.0, config.m, 1, rng)
                  .col(0);
    double d_ap = std::max(pos.norm(), 1e-6);
    cs.g[u] = gen_ricean_matrix(config.params, d_ap, config.params.pathloss_exp_nlos, 0.0, 0.0,
                                0.0, config.nt, 1, rng)
                  .col(0);
  }
  return cs;
}

namespace {
nlohmann::json cvec_json(const VecC& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
  return arr;
}

VecC cvec_from_json(const nlohmann::json& arr) {
  VecC v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) v(i) = Complex(arr[i][0], arr[i][1]);
  return v;
}
}  // namespace

void save_json(const ChannelSet& cs, std::ostream& os) {
  nlohmann::json j;
  j["schema"] = "irsbeam-channelset-v1";
  j["nt"] = cs.nt();
  j["m"] = cs.m();
  j["k"] = cs.k();
  j["seed"] = cs.seed;
  j["geometry"] = {
      {"cell_radius", cs.geometry.cell_radius},
      {"ap_position", {cs.geometry.ap_position.x(), cs.geometry.ap_position.y()}},
      {"irs_position", {cs.geometry.irs_position.x(), cs.geometry.irs_position.y()}},
      {"sector_angle", cs.geometry.sector_angle},
  };
  nlohmann::json users = nlohmann::json::array();
  for (const auto& u : cs.geometry.user_positions) users.push_back({u.x(), u.y()});
  j["geometry"]["user_positions"] = users;
  nlohmann::json F = nlohmann::json::array();
  for (int r = 0; r < cs.m(); ++r) F.push_back(cvec_json(cs.F.row(r).transpose()));
  j["F"] = F;
  nlohmann::json h = nlohmann::json::array(), g = nlohmann::json::array();
  for (const auto& v : cs.h) h.push_back(cvec_json(v));
  for (const auto& v : cs.g) g.push_back(cvec_json(v));
  j["h"] = h;
  j["g"] = g;
  os << j.dump(2) << "\n";
}

ChannelSet load_json(std::istream& is) {
  nlohmann::json j;
  is >> j;
  if (j.value("schema", "") != "irsbeam-channelset-v1")
    throw std::invalid_argument("load_json: unknown channel schema");
  ChannelSet cs;
  int m = j["m"], nt = j["nt"], k = j["k"];
  cs.seed = j["seed"];
  cs.geometry.cell_radius = j["geometry"]["cell_radius"];
  cs.geometry.ap_position =
      Eigen::Vector2d(j["geometry"]["ap_position"][0], j["geometry"]["ap_position"][1]);
  cs.geometry.irs_position =
      Eigen::Vector2d(j["geometry"]["irs_position"][0], j["geometry"]["irs_position"][1]);
  cs.geometry.sector_angle = j["geometry"]["sector_angle"];
  for (const auto& u : j["geometry"]["user_positions"])
    cs.geometry.user_positions.push_back(Eigen::Vector2d(u[0], u[1]));
  cs.F.resize(m, nt);
  for (int r = 0; r < m; ++r) cs.F.row(r) = cvec_from_json(j["F"][r]).transpose();
  for (int u = 0; u < k; ++u) {
    cs.h.push_back(cvec_from_json(j["h"][u]));
    cs.g.push_back(cvec_from_json(j["g"][u]));
  }
  return cs;
}

}  // namespace irsbeam::channel

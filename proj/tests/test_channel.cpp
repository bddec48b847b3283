#include <doctest.h>

#include <sstream>

#include "irsbeam/channel.hpp"

using namespace irsbeam;
using namespace irsbeam::channel;

TEST_CASE("array_response: broadside, endfire, and 30-degree cases") {
  VecC a0 = array_response(4, 0.0);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(a0(i) - Complex(1, 0)) < 1e-15);

  VecC a1 = array_response(2, kPi / 2.0);
  CHECK(std::abs(a1(0) - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(a1(1) - Complex(-1, 0)) < 1e-12);

  // sin(pi/6) = 1/2: elements 1, j, -1, -j
  VecC a2 = array_response(4, kPi / 6.0);
  CHECK(std::abs(a2(0) - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(a2(1) - Complex(0, 1)) < 1e-12);
  CHECK(std::abs(a2(2) - Complex(-1, 0)) < 1e-12);
  CHECK(std::abs(a2(3) - Complex(0, -1)) < 1e-12);

  for (int i = 0; i < 4; ++i) CHECK(std::abs(std::abs(a2(i)) - 1.0) < 1e-15);
  CHECK(a2.norm() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("pathloss_gain: reference gain and power law") {
  auto params = ChannelParams::from_carrier(2.4e9);
  // lambda = 0.125 m -> L0 = (lambda/4pi)^2 ~ 9.894e-5
  CHECK(params.ref_gain_l0 == doctest::Approx(9.894e-5).epsilon(1e-3));
  CHECK(pathloss_gain(params.ref_gain_l0, 1.0, 3.7) == params.ref_gain_l0);
  CHECK(pathloss_gain(2.0, 100.0, 4.0) == doctest::Approx(2.0e-8).epsilon(1e-12));
  CHECK_THROWS_AS(pathloss_gain(1.0, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(pathloss_gain(1.0, -5.0, 2.0), std::invalid_argument);
}

TEST_CASE("gen_ricean_matrix: beta limits") {
  auto params = ChannelParams::from_carrier(2.4e9);
  double d = 40.0;
  {
    // beta = 0 reduces to the scaled Rayleigh part drawn from the same stream
    RngStream rng1(3), rng2(3);
    MatC a = gen_ricean_matrix(params, d, 2.0, 0.0, 0.3, 0.7, 5, 3, rng1);
    MatC b = std::sqrt(pathloss_gain(params.ref_gain_l0, d, 2.0)) * rng2.cgaussian_mat(5, 3);
    CHECK((a - b).norm() < 1e-15 * b.norm());
  }
  {
    // huge beta: pure LoS, every entry has the deterministic modulus
    RngStream rng(4);
    MatC a = gen_ricean_matrix(params, d, 2.0, 1e12, 0.3, 0.7, 5, 3, rng);
    double expect = std::sqrt(pathloss_gain(params.ref_gain_l0, d, 2.0));
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j)
        CHECK(std::abs(a(i, j)) == doctest::Approx(expect).epsilon(1e-5));
  }
}

TEST_CASE("gen_ricean_matrix: Frobenius power matches pathloss (MC)") {
  auto params = ChannelParams::from_carrier(2.4e9);
  double d = 30.0;
  RngStream rng(71);
  double acc = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    MatC a = gen_ricean_matrix(params, d, 2.0, 1.0, 0.3, 1.1, 4, 2, rng);
    acc += a.squaredNorm();
  }
  double expect = pathloss_gain(params.ref_gain_l0, d, 2.0) * 4 * 2;
  CHECK(acc / trials == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("gen_ricean_matrix: alpha=4 distance decay ratio (MC)") {
  auto params = ChannelParams::from_carrier(2.4e9);
  RngStream rng(72);
  double g50 = 0.0, g100 = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    g50 += gen_ricean_matrix(params, 50.0, 4.0, 0.0, 0.0, 0.0, 4, 1, rng).squaredNorm();
    g100 += gen_ricean_matrix(params, 100.0, 4.0, 0.0, 0.0, 0.0, 4, 1, rng).squaredNorm();
  }
  CHECK(g50 / g100 == doctest::Approx(16.0).epsilon(0.10));
}

TEST_CASE("gen_scenario: dimensions, determinism, geometry invariants") {
  ScenarioConfig cfg;
  cfg.nt = 4;
  cfg.m = 20;
  cfg.k = 4;
  cfg.cell_radius = 100.0;
  ChannelSet a = gen_scenario(cfg, 1234);
  CHECK(a.F.rows() == 20);
  CHECK(a.F.cols() == 4);
  REQUIRE(a.h.size() == 4);
  REQUIRE(a.g.size() == 4);
  for (int u = 0; u < 4; ++u) {
    CHECK(a.h[u].size() == 20);
    CHECK(a.g[u].size() == 4);
  }
  // bit-identical regeneration
  ChannelSet b = gen_scenario(cfg, 1234);
  CHECK(a.F == b.F);
  for (int u = 0; u < 4; ++u) {
    CHECK(a.h[u] == b.h[u]);
    CHECK(a.g[u] == b.g[u]);
  }
  ChannelSet c = gen_scenario(cfg, 1235);
  CHECK(a.F != c.F);
  // users inside the sector, IRS on the boundary
  for (const auto& u : a.geometry.user_positions) {
    CHECK(u.norm() <= cfg.cell_radius + 1e-9);
    CHECK(std::abs(std::atan2(u.y(), u.x())) <= a.geometry.sector_angle / 2 + 1e-9);
  }
  CHECK(a.geometry.irs_position.norm() == doctest::Approx(cfg.cell_radius));
}

TEST_CASE("gen_scenario: geometric angle policy is also deterministic") {
  ScenarioConfig cfg;
  cfg.nt = 2;
  cfg.m = 6;
  cfg.k = 2;
  cfg.angle_policy = AnglePolicy::geometric;
  ChannelSet a = gen_scenario(cfg, 99);
  ChannelSet b = gen_scenario(cfg, 99);
  CHECK(a.F == b.F);
}

TEST_CASE("ricean scaling: doubling distance scales power by 2^-alpha exactly") {
  auto params = ChannelParams::from_carrier(2.4e9);
  for (double alpha : {2.0, 4.0}) {
    RngStream r1(5), r2(5);
    MatC a = gen_ricean_matrix(params, 25.0, alpha, 1.0, 0.2, 0.4, 3, 3, r1);
    MatC b = gen_ricean_matrix(params, 50.0, alpha, 1.0, 0.2, 0.4, 3, 3, r2);
    CHECK(a.squaredNorm() / b.squaredNorm() ==
          doctest::Approx(std::pow(2.0, alpha)).epsilon(1e-12));
  }
}

TEST_CASE("channel JSON round-trip") {
  ScenarioConfig cfg;
  cfg.nt = 3;
  cfg.m = 5;
  cfg.k = 2;
  ChannelSet a = gen_scenario(cfg, 42);
  std::stringstream ss;
  save_json(a, ss);
  ChannelSet b = load_json(ss);
  CHECK((a.F - b.F).norm() == 0.0);
  for (int u = 0; u < 2; ++u) {
    CHECK((a.h[u] - b.h[u]).norm() == 0.0);
    CHECK((a.g[u] - b.g[u]).norm() == 0.0);
  }
  CHECK(a.seed == b.seed);
}

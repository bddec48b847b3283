#include <doctest.h>

#include "irsbeam/beamformer.hpp"
#include "irsbeam/metrics.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace irsbeam;
using namespace irsbeam::beamform;

static EffectiveChannels make_ec(std::vector<VecC> a, double gamma_lin, double sigma2) {
  EffectiveChannels ec;
  ec.a = std::move(a);
  ec.gamma.assign(ec.a.size(), gamma_lin);
  ec.sigma2.assign(ec.a.size(), sigma2);
  return ec;
}

TEST_CASE("effective_channel: degenerate links") {
  channel::ScenarioConfig cfg;
  cfg.nt = 3;
  cfg.m = 4;
  cfg.k = 1;
  auto cs = channel::gen_scenario(cfg, 5);
  RngStream rng(6);
  PhaseConfig ph = PhaseConfig::random(cs.m(), rng);

  auto zero_h = cs;
  zero_h.h[0].setZero();
  CHECK((effective_channel(ph, zero_h, 0) - cs.g[0]).norm() == 0.0);

  auto zero_f = cs;
  zero_f.F.setZero();
  CHECK((effective_channel(ph, zero_f, 0) - cs.g[0]).norm() == 0.0);
}

TEST_CASE("solve_min_power: single user closed form (maximum ratio)") {
  RngStream rng(11);
  double gamma = metrics::db_to_linear(2.0);
  double sigma2 = 1e-12;
  for (int rep = 0; rep < 5; ++rep) {
    VecC a = 1e-5 * rng.cgaussian_vec(4);
    auto sol = solve_min_power(make_ec({a}, gamma, sigma2));
    REQUIRE(sol.status == conic::SolveStatus::optimal);
    double expect = gamma * sigma2 / a.squaredNorm();
    CHECK(sol.total_power == doctest::Approx(expect).epsilon(1e-7));
    // maximum-ratio direction: |a^H w| = ||a|| ||w||
    double align = std::abs(a.dot(sol.w[0])) / (a.norm() * sol.w[0].norm());
    CHECK(align == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("solve_min_power: two orthogonal users decouple") {
  double gamma = metrics::db_to_linear(4.0);
  double sigma2 = 1e-12;
  VecC a1 = VecC::Zero(4), a2 = VecC::Zero(4);
  a1(0) = Complex(3e-6, 1e-6);
  a1(2) = Complex(0, 2e-6);
  a2(1) = Complex(1e-6, -1e-6);
  a2(3) = Complex(2e-6, 1e-6);
  auto sol = solve_min_power(make_ec({a1, a2}, gamma, sigma2));
  REQUIRE(sol.status == conic::SolveStatus::optimal);
  double expect = gamma * sigma2 / a1.squaredNorm() + gamma * sigma2 / a2.squaredNorm();
  CHECK(sol.total_power == doctest::Approx(expect).epsilon(1e-7));
}

TEST_CASE("solve_min_power matches the duality fixed-point oracle") {
  // Near-aligned channel draws are rejected: they sit in the documented
  // near-infeasible band where neither route resolves 1e-6.
  RngStream rng(13);
  double sigma2 = 1e-12;
  int kept = 0;
  while (kept < 50) {
    std::vector<VecC> a{1e-5 * rng.cgaussian_vec(2), 1e-5 * rng.cgaussian_vec(2)};
    double gamma = metrics::db_to_linear(rng.uniform(-2.0, 6.0));
    double align = std::abs(a[0].dot(a[1])) / (a[0].norm() * a[1].norm());
    if (align > 0.9) continue;
    ++kept;
    auto ec = make_ec(a, gamma, sigma2);
    auto sol = solve_min_power(ec);
    REQUIRE(sol.status == conic::SolveStatus::optimal);
    auto oracle = oracles::duality_min_power(a, ec.gamma, ec.sigma2);
    REQUIRE(oracle.converged);
    CHECK(std::abs(sol.total_power - oracle.total_power) <= 1e-6 * oracle.total_power);
  }
}

TEST_CASE("solve_min_power: SINR constraints are active at the optimum") {
  RngStream rng(17);
  double sigma2 = 1e-12;
  for (int rep = 0; rep < 10; ++rep) {
    int K = 3, nt = 4;
    std::vector<VecC> a;
    for (int k = 0; k < K; ++k) a.push_back(1e-5 * rng.cgaussian_vec(nt));
    double gamma = metrics::db_to_linear(2.0);
    auto sol = solve_min_power(make_ec(a, gamma, sigma2));
    REQUIRE(sol.status == conic::SolveStatus::optimal);
    for (int k = 0; k < K; ++k)
      CHECK(std::abs(sol.per_user_sinr[k] - gamma) / gamma <= 1e-5);
  }
}

TEST_CASE("solve_min_power: raising a target never lowers the power") {
  RngStream rng(19);
  double sigma2 = 1e-12;
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<VecC> a{1e-5 * rng.cgaussian_vec(3), 1e-5 * rng.cgaussian_vec(3),
                        1e-5 * rng.cgaussian_vec(3)};
    auto ec = make_ec(a, metrics::db_to_linear(1.0), sigma2);
    auto lo = solve_min_power(ec);
    ec.gamma[1] = metrics::db_to_linear(3.0);
    auto hi = solve_min_power(ec);
    REQUIRE(lo.status == conic::SolveStatus::optimal);
    REQUIRE(hi.status == conic::SolveStatus::optimal);
    CHECK(hi.total_power >= lo.total_power - 1e-9 * std::max(1.0, lo.total_power));
  }
}

TEST_CASE("solve_min_power: scaling all noise powers scales the power exactly") {
  RngStream rng(23);
  std::vector<VecC> a{1e-5 * rng.cgaussian_vec(3), 1e-5 * rng.cgaussian_vec(3)};
  auto ec1 = make_ec(a, metrics::db_to_linear(2.0), 1e-12);
  auto ec4 = make_ec(a, metrics::db_to_linear(2.0), 4e-12);
  auto s1 = solve_min_power(ec1);
  auto s4 = solve_min_power(ec4);
  REQUIRE(s1.status == conic::SolveStatus::optimal);
  REQUIRE(s4.status == conic::SolveStatus::optimal);
  CHECK(s4.total_power == 4.0 * s1.total_power);
}

TEST_CASE("solve_min_power: unreachable targets are infeasible") {
  // Two users on the same single-antenna channel with gamma = 1 each.
  VecC a(1);
  a(0) = Complex(1e-6, 0);
  auto sol = solve_min_power(make_ec({a, a}, 1.0, 1e-12));
  CHECK(sol.status == conic::SolveStatus::infeasible);
}

#include <doctest.h>

#include <sstream>

#include <Eigen/Eigenvalues>

#include "irsbeam/conic.hpp"
#include "irsbeam/hermitian.hpp"
#include "test_util.hpp"

using namespace irsbeam;
using namespace irsbeam::conic;
using testutil::random_hermitian;

TEST_CASE("LP: min x s.t. x >= 5") {
  Problem p;
  auto x = p.add_scalar("x");
  AffExpr negx = AffExpr::of(x, -1.0);
  p.add_ineq(negx, -5.0);  // -x <= -5
  p.set_objective(AffExpr::of(x));
  auto r = p.solve();
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(5.0).epsilon(1e-7));
  CHECK(r.value(x) == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("LP: contradictory equalities are reported infeasible") {
  Problem p;
  auto x = p.add_scalar("x");
  p.add_eq(AffExpr::of(x), 1.0);
  p.add_eq(AffExpr::of(x), 2.0);
  p.set_objective(AffExpr::of(x));
  auto r = p.solve();
  CHECK(r.status == SolveStatus::infeasible);
}

TEST_CASE("LP: unbounded problem yields a certificate status") {
  Problem p;
  auto x = p.add_scalar("x");
  p.add_ineq(AffExpr::of(x), 3.0);  // x <= 3, minimize x
  p.set_objective(AffExpr::of(x));
  auto r = p.solve();
  CHECK(r.status == SolveStatus::unbounded);
}

TEST_CASE("SOCP: Euclidean norm epigraph") {
  // min t s.t. ||(3, 4)|| <= t
  Problem p;
  auto t = p.add_scalar("t");
  p.add_soc(AffExpr::of(t), {AffExpr(3.0), AffExpr(4.0)});
  p.set_objective(AffExpr::of(t));
  auto r = p.solve();
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("Frobenius epigraph: scalar square and constant matrix") {
  {
    // x fixed to 2, minimize t with x^2 <= t -> t* = 4
    Problem p;
    auto x = p.add_scalar("x");
    auto t = p.add_scalar("t");
    p.add_eq(AffExpr::of(x), 2.0);
    HermExpr a;
    a.dim = 1;
    a.rows.resize(1);
    a.rows[0].add(x.offset, 1.0);
    p.add_frobenius_epigraph(a, t);
    p.set_objective(AffExpr::of(t));
    auto r = p.solve();
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective == doctest::Approx(4.0).epsilon(1e-6));
  }
  {
    // constant C: t* = ||C||_F^2
    RngStream rng(5);
    MatC C = random_hermitian(rng, 3);
    Problem p;
    auto t = p.add_scalar("t");
    p.add_frobenius_epigraph(HermExpr::constant(C), t);
    p.set_objective(AffExpr::of(t));
    auto r = p.solve();
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective == doctest::Approx(C.squaredNorm()).epsilon(1e-7));
  }
}

TEST_CASE("Frobenius epigraph: random affine map agrees with recomputation") {
  RngStream rng(9);
  for (int rep = 0; rep < 5; ++rep) {
    Problem p;
    auto H = p.add_hermitian(3, "H");
    auto t = p.add_scalar("t");
    MatC target = random_hermitian(rng, 3);
    // A(H) = H - target, H diagonal fixed to the target diagonal plus noise
    HermExpr a = HermExpr::from_var(H);
    a -= HermExpr::constant(target);
    p.add_frobenius_epigraph(a, t);
    // pin a few coordinates so the optimum is nontrivial
    AffExpr d0;
    d0.add(H.offset + herm::hsvec_dim(1) - 1, 1.0);  // first diagonal coord
    p.add_eq(d0, target(0, 0).real() + 0.5);
    p.set_objective(AffExpr::of(t));
    auto r = p.solve();
    REQUIRE(r.status == SolveStatus::optimal);
    MatC Hv = r.matrix_value(H);
    double direct = (Hv - target).squaredNorm();
    CHECK(r.objective == doctest::Approx(direct).epsilon(1e-6));
    CHECK(r.objective == doctest::Approx(0.25).epsilon(1e-6));  // best is 0.5^2
  }
}

TEST_CASE("SDP: min Tr(CX), Tr(X)=1, X psd equals lambda_min(C)") {
  RngStream rng(33);
  for (int rep = 0; rep < 5; ++rep) {
    MatC C = random_hermitian(rng, 3);
    Problem p;
    auto X = p.add_hermitian(3, "X");
    p.add_psd(X);
    // Tr(X) = 1: sum over diagonal hsvec coords
    AffExpr tr;
    VecR cvec = herm::hsvec(MatC::Identity(3, 3));
    for (int i = 0; i < cvec.size(); ++i)
      if (cvec(i) != 0.0) tr.add(X.offset + i, cvec(i));
    p.add_eq(tr, 1.0);
    AffExpr obj;
    VecR cc = herm::hsvec(C);
    for (int i = 0; i < cc.size(); ++i)
      if (cc(i) != 0.0) obj.add(X.offset + i, cc(i));
    p.set_objective(obj);
    auto r = p.solve();
    REQUIRE(r.status == SolveStatus::optimal);
    Eigen::SelfAdjointEigenSolver<MatC> es(C, Eigen::EigenvaluesOnly);
    CHECK(r.objective == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-7));
    // Returned matrix is Hermitian after un-embedding (by construction of the
    // coordinate representation) and nearly rank one.
    MatC Xv = r.matrix_value(X);
    CHECK((Xv - Xv.adjoint()).norm() <= 1e-10);
    CHECK(Xv.trace().real() == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("SDP with unit-diagonal constraint and feasibility slack") {
  // max s s.t. Diag(V) = 1, V psd, s <= margin rows: a small analogue of the
  // phase-feasibility subproblem shape.
  RngStream rng(41);
  int n = 5;
  Problem p;
  auto V = p.add_hermitian(n, "V");
  auto s = p.add_scalar("s");
  p.add_psd(V);
  for (int j = 0; j < n; ++j) {
    AffExpr d;
    d.add(V.offset + j * (j + 1) + 2 * j - 2 * j, 0.0);  // placeholder, fixed below
    // diagonal coordinate index in hsvec order: j*(j+1)/2 ... compute directly
    d.terms.clear();
    VecR e = herm::hsvec(MatC((VecC::Unit(n, j) * VecC::Unit(n, j).adjoint())));
    for (int i = 0; i < e.size(); ++i)
      if (e(i) != 0.0) d.add(V.offset + i, e(i));
    p.add_eq(d, 1.0);
  }
  // Tr(R V) + s <= rhs for a random Hermitian R
  MatC R = random_hermitian(rng, n);
  AffExpr row = AffExpr::of(s);
  VecR rv = herm::hsvec(R);
  for (int i = 0; i < rv.size(); ++i)
    if (rv(i) != 0.0) row.add(V.offset + i, rv(i));
  p.add_ineq(row, 0.5);
  AffExpr obj = AffExpr::of(s, -1.0);
  p.set_objective(obj);  // maximize s
  auto r = p.solve();
  REQUIRE(r.status == SolveStatus::optimal);
  MatC Vv = r.matrix_value(V);
  for (int j = 0; j < n; ++j) CHECK(Vv(j, j).real() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.max_violation <= 1e-7);
}

TEST_CASE("round-trip: reported-optimal solutions satisfy all constraints") {
  RngStream rng(55);
  for (int rep = 0; rep < 10; ++rep) {
    Problem p;
    auto X = p.add_hermitian(4, "X");
    auto t = p.add_scalar("t");
    p.add_psd(X);
    MatC C = testutil::random_psd(rng, 4);
    AffExpr tr;
    VecR iv = herm::hsvec(MatC::Identity(4, 4));
    for (int i = 0; i < iv.size(); ++i)
      if (iv(i) != 0.0) tr.add(X.offset + i, iv(i));
    p.add_eq(tr, 2.0);
    HermExpr a = HermExpr::from_var(X);
    a -= HermExpr::constant(C);
    p.add_frobenius_epigraph(a, t);
    AffExpr obj = AffExpr::of(t);
    p.set_objective(obj);
    auto r = p.solve();
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.max_violation <= 10.0 * 1e-8);
  }
}

TEST_CASE("determinism: identical problems give identical iterates") {
  auto build_and_solve = []() {
    RngStream rng(77);
    Problem p;
    auto X = p.add_hermitian(3, "X");
    p.add_psd(X);
    AffExpr tr;
    VecR iv = herm::hsvec(MatC::Identity(3, 3));
    for (int i = 0; i < iv.size(); ++i)
      if (iv(i) != 0.0) tr.add(X.offset + i, iv(i));
    p.add_eq(tr, 1.0);
    MatC C = random_hermitian(rng, 3);
    AffExpr obj;
    VecR cc = herm::hsvec(C);
    for (int i = 0; i < cc.size(); ++i)
      if (cc(i) != 0.0) obj.add(X.offset + i, cc(i));
    p.set_objective(obj);
    return p.solve();
  };
  auto a = build_and_solve();
  auto b = build_and_solve();
  REQUIRE(a.status == SolveStatus::optimal);
  CHECK(a.objective == b.objective);
  CHECK((a.x - b.x).norm() == 0.0);
}

TEST_CASE("dump_triplets emits a parseable structure") {
  Problem p;
  auto x = p.add_scalar("x");
  auto X = p.add_hermitian(2, "X");
  p.add_psd(X);
  p.add_eq(AffExpr::of(x), 1.0);
  p.add_ineq(AffExpr::of(x), 2.0);
  p.set_objective(AffExpr::of(x));
  std::ostringstream os;
  p.dump_triplets(os);
  std::string s = os.str();
  CHECK(s.find("conic-problem v1") != std::string::npos);
  CHECK(s.find("vars 5") != std::string::npos);
  CHECK(s.find("eq 1") != std::string::npos);
  CHECK(s.find("psd-var offset 1 dim 2") != std::string::npos);
}

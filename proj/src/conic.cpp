#include "irsbeam/conic.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "irsbeam/hermitian.hpp"

namespace irsbeam::conic {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

double eval(const std::vector<std::pair<int, double>>& terms, const VecR& x) {
  double v = 0.0;
  for (const auto& [i, c] : terms) v += c * x(i);
  return v;
}
}  // namespace

AffExpr& AffExpr::operator+=(const AffExpr& o) {
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

AffExpr& AffExpr::operator*=(double a) {
  constant *= a;
  for (auto& t : terms) t.second *= a;
  return *this;
}

HermExpr HermExpr::from_var(const HermVar& v) {
  HermExpr e;
  e.dim = v.dim;
  e.rows.resize(v.coords());
  for (int i = 0; i < v.coords(); ++i) e.rows[i].add(v.offset + i, 1.0);
  return e;
}

HermExpr HermExpr::constant(const MatC& H) {
  HermExpr e;
  e.dim = static_cast<int>(H.rows());
  VecR v = herm::hsvec(H);
  e.rows.resize(v.size());
  for (int i = 0; i < v.size(); ++i) e.rows[i].constant = v(i);
  return e;
}

HermExpr HermExpr::congruence(const MatC& G, const HermVar& x) {
  MatR M = congruence_hsvec_matrix(G, x.dim);
  HermExpr e;
  e.dim = static_cast<int>(G.rows());
  e.rows.resize(M.rows());
  for (int r = 0; r < M.rows(); ++r) {
    for (int c = 0; c < M.cols(); ++c) {
      if (M(r, c) != 0.0) e.rows[r].add(x.offset + c, M(r, c));
    }
  }
  return e;
}

HermExpr& HermExpr::operator+=(const HermExpr& o) {
  if (dim != o.dim) throw std::invalid_argument("HermExpr: dimension mismatch");
  for (size_t i = 0; i < rows.size(); ++i) rows[i] += o.rows[i];
  return *this;
}

HermExpr& HermExpr::operator-=(const HermExpr& o) {
  if (dim != o.dim) throw std::invalid_argument("HermExpr: dimension mismatch");
  for (size_t i = 0; i < rows.size(); ++i) {
    AffExpr neg = o.rows[i];
    neg *= -1.0;
    rows[i] += neg;
  }
  return *this;
}

HermExpr& HermExpr::scale(double a) {
  for (auto& r : rows) r *= a;
  return *this;
}

MatR congruence_hsvec_matrix(const MatC& G, int in_dim) {
  if (G.cols() != in_dim) throw std::invalid_argument("congruence_hsvec_matrix: shape");
  const int out_dim = static_cast<int>(G.rows());
  MatR M(herm::hsvec_dim(out_dim), herm::hsvec_dim(in_dim));
  int col = 0;
  // Basis elements in hsvec order: (re, im) pairs for i < j, then diagonal.
  MatC E = MatC::Zero(in_dim, in_dim);
  const double is2 = 1.0 / kSqrt2;
  for (int j = 0; j < in_dim; ++j) {
    for (int i = 0; i < j; ++i) {
      E.setZero();
      E(i, j) = is2;
      E(j, i) = is2;
      M.col(col++) = herm::hsvec(G * E * G.adjoint());
      E.setZero();
      E(i, j) = Complex(0.0, is2);
      E(j, i) = Complex(0.0, -is2);
      M.col(col++) = herm::hsvec(G * E * G.adjoint());
    }
    E.setZero();
    E(j, j) = 1.0;
    M.col(col++) = herm::hsvec(G * E * G.adjoint());
  }
  return M;
}

MatC SolveResult::matrix_value(const HermVar& v) const {
  return herm::hsvec_to_matrix(x.segment(v.offset, v.coords()), v.dim);
}

ScalarVar Problem::add_scalar(std::string name) {
  ScalarVar v{ncoords_};
  ncoords_ += 1;
  var_names_.emplace_back(name.empty() ? "s" + std::to_string(ncoords_) : std::move(name), 1);
  return v;
}

HermVar Problem::add_hermitian(int dim, std::string name) {
  if (dim < 1) throw std::invalid_argument("add_hermitian: dim must be >= 1");
  HermVar v{ncoords_, dim};
  ncoords_ += v.coords();
  var_names_.emplace_back(name.empty() ? "H" + std::to_string(ncoords_) : std::move(name),
                          v.coords());
  return v;
}

int Problem::add_eq(const AffExpr& e, double rhs) {
  eq_rows_.push_back({e.terms, rhs - e.constant});
  return static_cast<int>(eq_rows_.size()) - 1;
}

int Problem::add_ineq(const AffExpr& e, double rhs) {
  ineq_rows_.push_back({e.terms, rhs - e.constant});
  return static_cast<int>(ineq_rows_.size()) - 1;
}

void Problem::add_soc(const AffExpr& head, const std::vector<AffExpr>& tail) {
  SocBlock blk{static_cast<int>(soc_rows_.size()), static_cast<int>(tail.size()) + 1};
  soc_rows_.push_back({head.terms, head.constant});
  for (const auto& t : tail) soc_rows_.push_back({t.terms, t.constant});
  soc_blocks_.push_back(blk);
}

void Problem::add_rsoc(const AffExpr& u, const AffExpr& v, const std::vector<AffExpr>& w) {
  // 2uv >= ||w||^2  <=>  ||(u - v, sqrt2 w)|| <= u + v
  AffExpr head = u;
  head += v;
  AffExpr diff = u;
  AffExpr negv = v;
  negv *= -1.0;
  diff += negv;
  std::vector<AffExpr> tail;
  tail.reserve(w.size() + 1);
  tail.push_back(diff);
  for (const auto& e : w) {
    AffExpr se = e;
    se *= kSqrt2;
    tail.push_back(se);
  }
  add_soc(head, tail);
}

void Problem::add_frobenius_epigraph(const HermExpr& a, ScalarVar t) {
  add_rsoc(AffExpr::of(t), AffExpr(0.5), a.rows);
}

void Problem::add_psd(const HermVar& v) { psd_vars_.push_back(v); }

void Problem::set_objective(const AffExpr& e) {
  obj_ = e.terms;
  obj_const_ = e.constant;
}

ConeProblemData Problem::assemble() const {
  ConeProblemData d;
  const int n = ncoords_;
  d.c = VecR::Zero(n);
  for (const auto& [i, c] : obj_) d.c(i) += c;

  const int p = static_cast<int>(eq_rows_.size());
  d.A = MatR::Zero(p, n);
  d.b = VecR::Zero(p);
  for (int r = 0; r < p; ++r) {
    for (const auto& [i, c] : eq_rows_[r].terms) d.A(r, i) += c;
    d.b(r) = eq_rows_[r].rhs;
  }

  d.cones.nonneg = static_cast<int>(ineq_rows_.size());
  bool added_slack = false;
  if (d.cones.nonneg == 0 && soc_blocks_.empty() && psd_vars_.empty()) {
    d.cones.nonneg = 1;  // dummy slack keeps the cone nonempty
    added_slack = true;
  }
  for (const auto& blk : soc_blocks_) d.cones.soc.push_back(blk.rows);
  for (const auto& v : psd_vars_) d.cones.psd.push_back(PsdBlock{v.dim, v.offset});

  const int dr = d.cones.dense_rows();
  d.Gd = MatR::Zero(dr, n);
  d.hd = VecR::Zero(dr);
  int r = 0;
  for (const auto& row : ineq_rows_) {
    // a.x <= rhs: s = rhs - a.x >= 0
    for (const auto& [i, c] : row.terms) d.Gd(r, i) += c;
    d.hd(r) = row.rhs;
    ++r;
  }
  if (added_slack) {
    d.hd(r) = 1.0;
    ++r;
  }
  for (const auto& row : soc_rows_) {
    // s_row = a.x + const: G = -a, h = const
    for (const auto& [i, c] : row.terms) d.Gd(r, i) -= c;
    d.hd(r) = row.rhs;  // soc rows store the constant in rhs
    ++r;
  }
  return d;
}

SolveResult Problem::solve(const SolverSettings& settings) const {
  auto t0 = std::chrono::steady_clock::now();
  ConeProblemData d = assemble();
  ConeSolution sol = solve_cone_problem(d, settings);
  SolveResult out;
  out.status = sol.status;
  out.iterations = sol.iterations;
  out.message = sol.message;
  if (sol.x.size() == ncoords_) {
    out.x = sol.x;
    out.objective = d.c.dot(sol.x) + obj_const_;
    out.max_violation = max_violation(sol.x);
  }
  if (sol.status == SolveStatus::optimal) {
    out.eq_duals = sol.y;
    out.ineq_duals = sol.z.head(static_cast<int>(ineq_rows_.size()));
  }
  out.solve_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

double Problem::max_violation(const VecR& x) const {
  double viol = 0.0;
  for (const auto& row : eq_rows_) viol = std::max(viol, std::abs(eval(row.terms, x) - row.rhs));
  for (const auto& row : ineq_rows_) viol = std::max(viol, eval(row.terms, x) - row.rhs);
  for (const auto& blk : soc_blocks_) {
    double head = eval(soc_rows_[blk.first_row].terms, x) + soc_rows_[blk.first_row].rhs;
    double tail2 = 0.0;
    for (int i = 1; i < blk.rows; ++i) {
      double v = eval(soc_rows_[blk.first_row + i].terms, x) + soc_rows_[blk.first_row + i].rhs;
      tail2 += v * v;
    }
    viol = std::max(viol, std::sqrt(tail2) - head);
  }
  for (const auto& v : psd_vars_) {
    MatC H = herm::hsvec_to_matrix(x.segment(v.offset, v.coords()), v.dim);
    VecR ev = herm::eigenvalues_desc(H);
    viol = std::max(viol, -ev(v.dim - 1));
  }
  return viol;
}

void Problem::dump_triplets(std::ostream& os) const {
  ConeProblemData d = assemble();
  os << "conic-problem v1\n";
  os << "vars " << ncoords_ << "\n";
  for (const auto& [name, width] : var_names_) os << "var " << name << " " << width << "\n";
  os << "objective";
  for (int i = 0; i < d.c.size(); ++i)
    if (d.c(i) != 0.0) os << " " << i << ":" << d.c(i);
  os << "\n";
  os << "eq " << d.A.rows() << "\n";
  for (int r = 0; r < d.A.rows(); ++r) {
    os << "A " << r;
    for (int c2 = 0; c2 < d.A.cols(); ++c2)
      if (d.A(r, c2) != 0.0) os << " " << c2 << ":" << d.A(r, c2);
    os << " = " << d.b(r) << "\n";
  }
  os << "cones nonneg " << d.cones.nonneg << " soc";
  for (int q : d.cones.soc) os << " " << q;
  os << " psd";
  for (const auto& pb : d.cones.psd) os << " " << pb.embed_dim();
  os << "\n";
  for (int r = 0; r < d.Gd.rows(); ++r) {
    os << "G " << r;
    for (int c2 = 0; c2 < d.Gd.cols(); ++c2)
      if (d.Gd(r, c2) != 0.0) os << " " << c2 << ":" << d.Gd(r, c2);
    os << " h " << d.hd(r) << "\n";
  }
  for (const auto& pb : d.cones.psd)
    os << "psd-var offset " << pb.var_offset << " dim " << pb.herm_dim << "\n";
}

}  // namespace irsbeam::conic

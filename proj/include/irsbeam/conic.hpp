#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irsbeam/solver.hpp"
#include "irsbeam/types.hpp"

// Conic program builder. Scalar variables are free reals; Hermitian matrix
// variables are stored in hsvec coordinates (n^2 reals). Constraints are
// linear equalities/inequalities, second-order cones, rotated second-order
// cones, and PSD constraints on Hermitian variables (which reach the solver
// through the real embedding).
namespace irsbeam::conic {

struct ScalarVar {
  int offset = -1;
};

struct HermVar {
  int offset = -1;
  int dim = 0;
  int coords() const { return dim * dim; }
};

// Sparse affine scalar expression over problem coordinates.
struct AffExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  AffExpr() = default;
  explicit AffExpr(double c) : constant(c) {}
  static AffExpr of(ScalarVar v, double coef = 1.0) {
    AffExpr e;
    e.terms.emplace_back(v.offset, coef);
    return e;
  }
  AffExpr& add(int coord, double coef) {
    terms.emplace_back(coord, coef);
    return *this;
  }
  AffExpr& operator+=(const AffExpr& o);
  AffExpr& operator*=(double a);
};

// Hermitian-matrix-valued affine expression, stored as one AffExpr per hsvec
// coordinate.
struct HermExpr {
  int dim = 0;
  std::vector<AffExpr> rows;  // dim*dim entries in hsvec order

  static HermExpr from_var(const HermVar& v);
  static HermExpr constant(const MatC& H);
  // rows of hsvec(G X G^H) as a linear function of X's hsvec coordinates.
  static HermExpr congruence(const MatC& G, const HermVar& x);
  HermExpr& operator+=(const HermExpr& o);
  HermExpr& operator-=(const HermExpr& o);
  HermExpr& scale(double a);
};

// Dense linear map M with hsvec(G X G^H) = M * hsvec(X) for n x n Hermitian X
// (G may be rectangular). Reusable across constraint builds.
MatR congruence_hsvec_matrix(const MatC& G, int in_dim);

enum class ConstraintKind { eq, ineq, soc, psd };

struct ConstraintHandle {
  ConstraintKind kind;
  int index;
};

struct SolveResult {
  SolveStatus status = SolveStatus::numerical_failure;
  double objective = 0.0;
  VecR x;                    // all coordinates
  double max_violation = 0.0;
  double solve_time_s = 0.0;
  int iterations = 0;
  std::string message;
  VecR eq_duals;       // one per equality row
  VecR ineq_duals;     // one per inequality row (>= 0)

  double value(ScalarVar v) const { return x(v.offset); }
  MatC matrix_value(const HermVar& v) const;
};

class Problem {
 public:
  int num_coords() const { return ncoords_; }

  ScalarVar add_scalar(std::string name = {});
  HermVar add_hermitian(int dim, std::string name = {});

  // sum(coeffs . x) + expr.constant == rhs
  int add_eq(const AffExpr& e, double rhs);
  // expr <= rhs
  int add_ineq(const AffExpr& e, double rhs);
  // ||tail||_2 <= head
  void add_soc(const AffExpr& head, const std::vector<AffExpr>& tail);
  // 2 u v >= sum(w_i^2), u, v >= 0
  void add_rsoc(const AffExpr& u, const AffExpr& v, const std::vector<AffExpr>& w);
  // ||A(x)||_F^2 <= t for a Hermitian-valued affine A
  void add_frobenius_epigraph(const HermExpr& a, ScalarVar t);
  void add_psd(const HermVar& v);

  void set_objective(const AffExpr& e);

  SolveResult solve(const SolverSettings& settings = {}) const;

  // Re-evaluates every constraint at x; returns the largest violation.
  double max_violation(const VecR& x) const;

  // Sparse-triplet text dump of the assembled cone program (objective, A/b,
  // dense G/h rows with the cone layout, PSD variable blocks), for
  // cross-checks against external solvers.
  void dump_triplets(std::ostream& os) const;

 private:
  struct Row {
    std::vector<std::pair<int, double>> terms;
    double rhs = 0.0;  // already folds the expression constant
  };
  struct SocBlock {
    int first_row;
    int rows;
  };

  ConeProblemData assemble() const;

  int ncoords_ = 0;
  std::vector<std::pair<int, double>> obj_;
  double obj_const_ = 0.0;
  std::vector<Row> eq_rows_;
  std::vector<Row> ineq_rows_;        // a.x <= rhs
  std::vector<Row> soc_rows_;         // grouped by soc_blocks_
  std::vector<SocBlock> soc_blocks_;
  std::vector<HermVar> psd_vars_;
  std::vector<std::pair<std::string, int>> var_names_;
};

}  // namespace irsbeam::conic

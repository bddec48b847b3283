#pragma once

#include <string>
#include <vector>

#include "irsbeam/types.hpp"

// Embedded primal-dual interior-point solver for the standard cone form
//
//   minimize    c'x
//   subject to  A x = b
//               G x + s = h,   s in K
//
// where K is a product of the nonnegative orthant, second-order cones, and
// real-symmetric PSD cones (in scaled svec coordinates). Alternating
// directions are computed on the homogeneous self-dual embedding with
// Nesterov-Todd scaling and a Mehrotra predictor-corrector, so primal and
// dual infeasibility are detected through certificates.
//
// PSD cones appear here only as "a Hermitian variable block is PSD": the
// 2n x 2n real embedding of an n x n Hermitian variable stored in n^2 hsvec
// coordinates. Rows for those blocks are implied (s = ssvec(embed(X))) and
// are not part of the dense G.
namespace irsbeam::conic {

enum class SolveStatus {
  optimal,
  infeasible,
  unbounded,
  numerical_failure,
  iteration_limit,
};

const char* to_string(SolveStatus s);

struct SolverSettings {
  double feastol = 1e-8;
  double abstol = 1e-8;
  double reltol = 1e-8;
  int max_iters = 200;
  bool verbose = false;
};

// PSD cone block tied to a Hermitian variable: the cone is over
// embed_dim x embed_dim real symmetric matrices with embed_dim = 2*herm_dim,
// and the implied rows are -embed_map(herm_dim) at var_offset.
struct PsdBlock {
  int herm_dim = 0;
  int var_offset = 0;
  int embed_dim() const { return 2 * herm_dim; }
  int rows() const { return embed_dim() * (embed_dim() + 1) / 2; }
};

struct ConeSpec {
  int nonneg = 0;
  std::vector<int> soc;  // cone dimensions, each >= 1
  std::vector<PsdBlock> psd;

  int dense_rows() const;  // nonneg + sum(soc)
  int total_rows() const;
  int degree() const;  // barrier degree: nonneg + #soc + sum(embed dims)
};

struct ConeProblemData {
  VecR c;
  MatR A;   // p x n (p may be 0)
  VecR b;
  MatR Gd;  // dense_rows x n
  VecR hd;  // dense_rows
  ConeSpec cones;
};

struct ConeSolution {
  SolveStatus status = SolveStatus::numerical_failure;
  VecR x, y, z, s;  // z, s over the full row space
  double pobj = 0.0;
  double dobj = 0.0;
  double gap = 0.0;
  double pres = 0.0;
  double dres = 0.0;
  int iterations = 0;
  std::string message;
};

ConeSolution solve_cone_problem(const ConeProblemData& data, const SolverSettings& settings);

}  // namespace irsbeam::conic

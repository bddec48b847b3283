#pragma once

#include <Eigen/Sparse>

#include "irsbeam/types.hpp"

// Complex-Hermitian matrix utilities: eigen-analysis, nuclear/spectral norms,
// rank-one certificates, and the complex-to-real embedding that lets a real
// conic solver handle Hermitian PSD constraints.
namespace irsbeam::herm {

// Relative tolerance for accepting a matrix as Hermitian.
inline constexpr double kSymTol = 1e-12;

bool is_hermitian(const MatC& H, double rel_tol = kSymTol);

// (H + H^H)/2. Throws std::invalid_argument for non-square input.
MatC symmetrized(const MatC& H);

// Throws std::invalid_argument if H is not Hermitian within rel_tol.
void require_hermitian(const MatC& H, const char* where, double rel_tol = kSymTol);

struct EigPair {
  double value = 0.0;  // largest eigenvalue
  VecC vector;         // associated unit-norm eigenvector
};

// Largest eigenvalue and an associated unit eigenvector, computed through a
// dense symmetric eigendecomposition of the real embedding. The residual
// ||H u - lambda u|| <= tol * ||H||_F is re-checked before returning.
EigPair principal_eigpair(const MatC& H, double tol = 1e-10);

struct Norms {
  double nuclear = 0.0;   // sum of |eigenvalues|
  double spectral = 0.0;  // max |eigenvalue|
};

Norms nuclear_spectral_norms(const MatC& H);

// Eigenvalues of a Hermitian matrix in decreasing order.
VecR eigenvalues_desc(const MatC& H);

// [[Re H, -Im H], [Im H, Re H]]; PSD iff H is PSD, eigenvalues doubled.
MatR real_embed(const MatC& H);

// Left inverse of real_embed: orthogonal projection of a 2n x 2n symmetric
// matrix onto the embedded-Hermitian subspace, returned as the n x n
// Hermitian matrix. real_embed followed by unembed is the identity.
MatC unembed(const MatR& S);

// lambda_2 / lambda_1 for a PSD matrix (0 when lambda_1 = 0 or dim 1).
// Throws std::invalid_argument when H is indefinite beyond psd_tol
// (relative to the largest eigenvalue magnitude).
double rank_ratio(const MatC& H, double psd_tol = 1e-8);

// ---- Real coordinate plumbing shared with the conic layer ----
//
// hsvec packs an n x n Hermitian matrix into n^2 reals (diagonal entries and
// sqrt(2)-scaled off-diagonal re/im parts) so that dot(hsvec(A), hsvec(B)) =
// Re tr(A^H B). ssvec does the same for real symmetric matrices.

inline int hsvec_dim(int n) { return n * n; }
inline int ssvec_dim(int d) { return d * (d + 1) / 2; }

VecR hsvec(const MatC& H);
MatC hsvec_to_matrix(const VecR& v, int n);
VecR ssvec(const MatR& S);
MatR ssvec_to_matrix(const VecR& v, int d);

// Sparse map E with ssvec(real_embed(H)) = E * hsvec(H); E^T E = 2 I.
Eigen::SparseMatrix<double> embed_map(int n);

}  // namespace irsbeam::herm

#include "irsbeam/hermitian.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace irsbeam::herm {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2 = 0.7071067811865476;
}  // namespace

bool is_hermitian(const MatC& H, double rel_tol) {
  if (H.rows() != H.cols()) return false;
  double scale = H.norm();
  double dev = (H - H.adjoint()).norm();
  return dev <= rel_tol * std::max(scale, 1e-300) || dev == 0.0;
}

MatC symmetrized(const MatC& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("symmetrized: matrix not square");
  return 0.5 * (H + H.adjoint());
}

void require_hermitian(const MatC& H, const char* where, double rel_tol) {
  if (!is_hermitian(H, rel_tol)) {
    throw std::invalid_argument(std::string(where) + ": input matrix is not Hermitian");
  }
}

MatR real_embed(const MatC& H) {
  require_hermitian(H, "real_embed");
  const int n = static_cast<int>(H.rows());
  MatR S(2 * n, 2 * n);
  S.topLeftCorner(n, n) = H.real();
  S.bottomRightCorner(n, n) = H.real();
  S.topRightCorner(n, n) = -H.imag();
  S.bottomLeftCorner(n, n) = H.imag();
  return S;
}

MatC unembed(const MatR& S) {
  if (S.rows() != S.cols() || S.rows() % 2 != 0)
    throw std::invalid_argument("unembed: expected even-dimension square matrix");
  const int n = static_cast<int>(S.rows()) / 2;
  MatR re = 0.5 * (S.topLeftCorner(n, n) + S.bottomRightCorner(n, n));
  MatR im = 0.5 * (S.bottomLeftCorner(n, n) - S.topRightCorner(n, n));
  re = 0.5 * (re + re.transpose()).eval();
  im = 0.5 * (im - im.transpose()).eval();
  MatC H(n, n);
  H.real() = re;
  H.imag() = im;
  return H;
}

VecR eigenvalues_desc(const MatC& H) {
  require_hermitian(H, "eigenvalues_desc");
  const int n = static_cast<int>(H.rows());
  Eigen::SelfAdjointEigenSolver<MatR> es(real_embed(symmetrized(H)), Eigen::EigenvaluesOnly);
  // Embedding doubles every eigenvalue; take every second one (ascending),
  // then reverse.
  VecR out(n);
  for (int i = 0; i < n; ++i) out(i) = es.eigenvalues()(2 * n - 1 - 2 * i);
  return out;
}

EigPair principal_eigpair(const MatC& H, double tol) {
  require_hermitian(H, "principal_eigpair");
  const MatC Hs = symmetrized(H);
  const int n = static_cast<int>(Hs.rows());
  Eigen::SelfAdjointEigenSolver<MatR> es(real_embed(Hs));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("principal_eigpair: eigendecomposition failed");
  EigPair out;
  out.value = es.eigenvalues()(2 * n - 1);
  VecR q = es.eigenvectors().col(2 * n - 1);
  VecC u(n);
  u.real() = q.head(n);
  u.imag() = q.tail(n);
  u.normalize();
  out.vector = u;
  double res = (Hs * u - out.value * u).norm();
  double scale = std::max(Hs.norm(), 1e-300);
  if (res > std::max(tol, 1e-12) * scale)
    throw std::runtime_error("principal_eigpair: residual bound violated");
  return out;
}

Norms nuclear_spectral_norms(const MatC& H) {
  require_hermitian(H, "nuclear_spectral_norms");
  VecR ev = eigenvalues_desc(symmetrized(H));
  Norms out;
  for (int i = 0; i < ev.size(); ++i) {
    out.nuclear += std::abs(ev(i));
    out.spectral = std::max(out.spectral, std::abs(ev(i)));
  }
  return out;
}

double rank_ratio(const MatC& H, double psd_tol) {
  require_hermitian(H, "rank_ratio");
  const int n = static_cast<int>(H.rows());
  VecR ev = eigenvalues_desc(symmetrized(H));
  double lmax = ev(0);
  double lmin = ev(n - 1);
  double scale = std::max(std::abs(lmax), std::abs(lmin));
  if (scale <= 0.0) return 0.0;  // zero matrix
  if (lmin < -psd_tol * scale)
    throw std::invalid_argument("rank_ratio: matrix is indefinite beyond tolerance");
  if (n == 1 || lmax <= 0.0) return 0.0;
  double l2 = std::max(ev(1), 0.0);
  return l2 / lmax;
}

VecR hsvec(const MatC& H) {
  require_hermitian(H, "hsvec");
  const int n = static_cast<int>(H.rows());
  VecR v(hsvec_dim(n));
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      v(k++) = kSqrt2 * H(i, j).real();
      v(k++) = kSqrt2 * H(i, j).imag();
    }
    v(k++) = H(j, j).real();
  }
  return v;
}

MatC hsvec_to_matrix(const VecR& v, int n) {
  if (v.size() != hsvec_dim(n)) throw std::invalid_argument("hsvec_to_matrix: bad dimension");
  MatC H(n, n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      Complex z(kInvSqrt2 * v(k), kInvSqrt2 * v(k + 1));
      k += 2;
      H(i, j) = z;
      H(j, i) = std::conj(z);
    }
    H(j, j) = Complex(v(k++), 0.0);
  }
  return H;
}

VecR ssvec(const MatR& S) {
  if (S.rows() != S.cols()) throw std::invalid_argument("ssvec: matrix not square");
  const int d = static_cast<int>(S.rows());
  VecR v(ssvec_dim(d));
  int k = 0;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < j; ++i) v(k++) = kSqrt2 * 0.5 * (S(i, j) + S(j, i));
    v(k++) = S(j, j);
  }
  return v;
}

MatR ssvec_to_matrix(const VecR& v, int d) {
  if (v.size() != ssvec_dim(d)) throw std::invalid_argument("ssvec_to_matrix: bad dimension");
  MatR S(d, d);
  int k = 0;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < j; ++i) {
      double x = kInvSqrt2 * v(k++);
      S(i, j) = x;
      S(j, i) = x;
    }
    S(j, j) = v(k++);
  }
  return S;
}

// ssvec index of entry (i, j), i <= j, in a d x d symmetric matrix.
static int ssvec_index(int i, int j) { return j * (j + 1) / 2 + i; }

Eigen::SparseMatrix<double> embed_map(int n) {
  // Column layout follows hsvec: for each j, off-diagonal (re, im) pairs for
  // i < j, then the diagonal entry.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * hsvec_dim(n));
  int col = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      // sqrt(2) Re H_ij: embedded entries (i,j) and (n+i, n+j), value 1/sqrt2
      // times sqrt(2) scaling of ssvec -> 1.
      trip.emplace_back(ssvec_index(i, j), col, 1.0);
      trip.emplace_back(ssvec_index(n + i, n + j), col, 1.0);
      ++col;
      // sqrt(2) Im H_ij: S(i, n+j) = -Im, S(j, n+i) = +Im.
      trip.emplace_back(ssvec_index(i, n + j), col, -1.0);
      trip.emplace_back(ssvec_index(j, n + i), col, 1.0);
      ++col;
    }
    // Diagonal H_jj appears at (j,j) and (n+j, n+j).
    trip.emplace_back(ssvec_index(j, j), col, 1.0);
    trip.emplace_back(ssvec_index(n + j, n + j), col, 1.0);
    ++col;
  }
  Eigen::SparseMatrix<double> E(ssvec_dim(2 * n), hsvec_dim(n));
  E.setFromTriplets(trip.begin(), trip.end());
  return E;
}

}  // namespace irsbeam::herm

#include "irsbeam/solver.hpp"
#include <cstdio>

#include <cmath>
#include <limits>
#include <stdexcept>

#include <algorithm>
#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "irsbeam/hermitian.hpp"

namespace irsbeam::conic {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kStep = 0.99;
}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::numerical_failure: return "numerical-failure";
    case SolveStatus::iteration_limit: return "iteration-limit";
  }
  return "?";
}

int ConeSpec::dense_rows() const {
  int r = nonneg;
  for (int q : soc) r += q;
  return r;
}

int ConeSpec::total_rows() const {
  int r = dense_rows();
  for (const auto& pb : psd) r += pb.rows();
  return r;
}

int ConeSpec::degree() const {
  int d = nonneg + static_cast<int>(soc.size());
  for (const auto& pb : psd) d += pb.embed_dim();
  return d;
}

namespace {

// Row-space offsets of each cone block.
struct Layout {
  int l = 0;
  std::vector<int> soc_off;
  std::vector<int> psd_off;
  int m = 0;

  explicit Layout(const ConeSpec& spec) {
    l = spec.nonneg;
    int off = l;
    for (int q : spec.soc) {
      soc_off.push_back(off);
      off += q;
    }
    for (const auto& pb : spec.psd) {
      psd_off.push_back(off);
      off += pb.rows();
    }
    m = off;
  }
};

struct PsdScaling {
  MatR R, Rinv;
  VecR sigma;       // lambda eigenvalues
  MatR sigma_s;     // R R'
  MatR sigma_i;     // (R R')^{-1}
  Eigen::LLT<MatR> chol_s;  // factor of the S block, for step computation
};

struct SocScaling {
  double eta = 1.0;
  VecR wbar;  // normalized scaling point, wbar'J wbar = 1
};

// Nesterov-Todd scalings and Jordan-algebra operations for the product cone.
class ConeOps {
 public:
  ConeOps(const ConeSpec& spec, const Layout& lay) : spec_(spec), lay_(lay) {}

  // Computes W from a strictly feasible (s, z) pair; returns false on
  // breakdown (non-PD blocks).
  bool compute_scaling(const VecR& s, const VecR& z, VecR& lambda) {
    lambda.resize(lay_.m);
    w_nn_.resize(lay_.l);
    for (int i = 0; i < lay_.l; ++i) {
      if (s(i) <= 0 || z(i) <= 0) return false;
      w_nn_(i) = std::sqrt(s(i) / z(i));
      lambda(i) = std::sqrt(s(i) * z(i));
    }
    soc_.clear();
    for (size_t k = 0; k < spec_.soc.size(); ++k) {
      int q = spec_.soc[k], off = lay_.soc_off[k];
      auto sb = s.segment(off, q);
      auto zb = z.segment(off, q);
      double as2 = sb(0) * sb(0) - sb.tail(q - 1).squaredNorm();
      double az2 = zb(0) * zb(0) - zb.tail(q - 1).squaredNorm();
      if (as2 <= 0 || az2 <= 0 || sb(0) <= 0 || zb(0) <= 0) return false;
      double as = std::sqrt(as2), az = std::sqrt(az2);
      VecR sbar = sb / as, zbar = zb / az;
      double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
      SocScaling sc;
      sc.wbar = sbar;
      sc.wbar(0) += zbar(0);
      sc.wbar.tail(q - 1) -= zbar.tail(q - 1);
      sc.wbar /= (2.0 * gamma);
      sc.eta = std::sqrt(as / az);
      soc_.push_back(sc);
      // lambda = W z
      lambda.segment(off, q) = apply_h(sc.wbar, zb) * sc.eta;
    }
    psd_.clear();
    for (size_t k = 0; k < spec_.psd.size(); ++k) {
      int d = spec_.psd[k].embed_dim(), off = lay_.psd_off[k];
      MatR S = herm::ssvec_to_matrix(s.segment(off, spec_.psd[k].rows()), d);
      MatR Z = herm::ssvec_to_matrix(z.segment(off, spec_.psd[k].rows()), d);
      PsdScaling ps;
      ps.chol_s.compute(S);
      Eigen::LLT<MatR> chol_z(Z);
      if (ps.chol_s.info() != Eigen::Success || chol_z.info() != Eigen::Success) return false;
      MatR Ls = ps.chol_s.matrixL();
      MatR Lz = chol_z.matrixL();
      Eigen::JacobiSVD<MatR> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
      VecR sv = svd.singularValues();
      if (sv.minCoeff() <= 0) return false;
      VecR isqrt = sv.array().sqrt().inverse().matrix();
      ps.R = Ls * svd.matrixV() * isqrt.asDiagonal();
      ps.Rinv = isqrt.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
      ps.sigma = sv;
      ps.sigma_s.noalias() = ps.R * ps.R.transpose();
      ps.sigma_i.noalias() = ps.Rinv.transpose() * ps.Rinv;
      lambda.segment(off, spec_.psd[k].rows()) =
          herm::ssvec(MatR(ps.sigma.asDiagonal()));
      psd_.push_back(std::move(ps));
    }
    return true;
  }

  // out = op(v) blockwise; op in {W, W', W^-1, W^-T}. For the nonneg and SOC
  // families W is symmetric; for PSD blocks W: X -> R'XR and W': X -> RXR'.
  enum class Op { W, WT, Winv, WinvT };

  VecR apply(Op op, const VecR& v) const {
    VecR out(lay_.m);
    for (int i = 0; i < lay_.l; ++i) {
      double w = w_nn_(i);
      out(i) = (op == Op::W || op == Op::WT) ? v(i) * w : v(i) / w;
    }
    for (size_t k = 0; k < spec_.soc.size(); ++k) {
      int q = spec_.soc[k], off = lay_.soc_off[k];
      const auto& sc = soc_[k];
      VecR vb = v.segment(off, q);
      if (op == Op::W || op == Op::WT) {
        out.segment(off, q) = apply_h(sc.wbar, vb) * sc.eta;
      } else {
        VecR wtil = sc.wbar;
        wtil.tail(q - 1) = -wtil.tail(q - 1);
        out.segment(off, q) = apply_h(wtil, vb) / sc.eta;
      }
    }
    for (size_t k = 0; k < spec_.psd.size(); ++k) {
      int d = spec_.psd[k].embed_dim(), off = lay_.psd_off[k], r = spec_.psd[k].rows();
      const auto& ps = psd_[k];
      MatR X = herm::ssvec_to_matrix(v.segment(off, r), d);
      MatR Y;
      switch (op) {
        case Op::W: Y.noalias() = ps.R.transpose() * X * ps.R; break;
        case Op::WT: Y.noalias() = ps.R * X * ps.R.transpose(); break;
        case Op::Winv: Y.noalias() = ps.Rinv.transpose() * X * ps.Rinv; break;
        case Op::WinvT: Y.noalias() = ps.Rinv * X * ps.Rinv.transpose(); break;
      }
      out.segment(off, r) = herm::ssvec(0.5 * (Y + Y.transpose()));
    }
    return out;
  }

  // out = (W'W)^{-1} v (also exposed as forward for refinement residuals).
  VecR apply_theta(const VecR& v, bool inverse) const {
    VecR out(lay_.m);
    for (int i = 0; i < lay_.l; ++i) {
      double w2 = w_nn_(i) * w_nn_(i);
      out(i) = inverse ? v(i) / w2 : v(i) * w2;
    }
    for (size_t k = 0; k < spec_.soc.size(); ++k) {
      int q = spec_.soc[k], off = lay_.soc_off[k];
      const auto& sc = soc_[k];
      VecR vb = v.segment(off, q);
      VecR u = sc.wbar;
      if (inverse) u.tail(q - 1) = -u.tail(q - 1);  // J wbar
      // (eta^2) (2 u u' - J) or its inverse with u -> J wbar
      VecR Jv = vb;
      Jv.tail(q - 1) = -Jv.tail(q - 1);
      VecR res = 2.0 * u.dot(vb) * u - Jv;
      double e2 = sc.eta * sc.eta;
      out.segment(off, q) = res * (inverse ? 1.0 / e2 : e2);
    }
    for (size_t k = 0; k < spec_.psd.size(); ++k) {
      int d = spec_.psd[k].embed_dim(), off = lay_.psd_off[k], r = spec_.psd[k].rows();
      const auto& ps = psd_[k];
      const MatR& M = inverse ? ps.sigma_i : ps.sigma_s;
      MatR X = herm::ssvec_to_matrix(v.segment(off, r), d);
      MatR Y1;
      Y1.noalias() = M * X;
      MatR Y2;
      Y2.noalias() = Y1 * M;
      out.segment(off, r) = herm::ssvec(0.5 * (Y2 + Y2.transpose()));
    }
    return out;
  }

  // Applies W^-T in place to the dense rows (nonneg + SOC blocks) of a
  // row-major stack; PSD rows never appear in the dense part.
  void scale_dense_rows_winvt(MatR& rows) const {
    for (int i = 0; i < lay_.l; ++i) rows.row(i) /= w_nn_(i);
    for (size_t k = 0; k < spec_.soc.size(); ++k) {
      int q = spec_.soc[k], off = lay_.soc_off[k];
      const auto& sc = soc_[k];
      VecR v = sc.wbar;
      v.tail(q - 1) = -v.tail(q - 1);  // J wbar
      if (q == 1) {
        rows.row(off) *= v(0) / sc.eta;
        continue;
      }
      // H(v) applied to the block of rows, then divided by eta.
      Eigen::RowVectorXd b0 = rows.row(off);
      Eigen::RowVectorXd t = v.tail(q - 1).transpose() * rows.middleRows(off + 1, q - 1);
      rows.row(off) = (v(0) * b0 + t) / sc.eta;
      rows.middleRows(off + 1, q - 1) +=
          v.tail(q - 1) * (b0 + t / (1.0 + v(0)));
      rows.middleRows(off + 1, q - 1) /= sc.eta;
    }
  }

  // Jordan product u o v.
  VecR jordan_prod(const VecR& u, const VecR& v) const {
    VecR out(lay_.m);
    for (int i = 0; i < lay_.l; ++i) out(i) = u(i) * v(i);
    for (size_t k = 0; k < spec_.soc.size(); ++k) {
      int q = spec_.soc[k], off = lay_.soc_off[k];
      auto ub = u.segment(off, q);
      auto vb = v.segment(off, q);
      out(off) = ub.dot(vb);
      out.segment(off + 1, q - 1) = ub(0) * vb.tail(q - 1) + vb(0) * ub.tail(q - 1);
    }
    for (size_t k = 0; k < spec_.psd.size(); ++k) {
      int d = spec_.psd[k].embed_dim(), off = lay_.psd_off[k], r = spec_.psd[k].rows();
      MatR U = herm::ssvec_to_matrix(u.segment(off, r), d);
      MatR V = herm::ssvec_to_matrix(v.segment(off, r), d);
      MatR P;
      P.noalias() = U * V;
      out.segment(off, r) = herm::ssvec(0.5 * (P + P.transpose()));
    }
    return out;
  }

  // Solves lambda o x = d for x; lambda is the current scaled point.
  VecR jordan_div(const VecR& lambda, const VecR& d) const {
    VecR out(lay_.m);
    for (int i = 0; i < lay_.l; ++i) out(i) = d(i) / lambda(i);
    for (size_t k = 0; k < spec_.soc.size(); ++k) {
      int q = spec_.soc[k], off = lay_.soc_off[k];
      auto lb = lambda.segment(off, q);
      auto db = d.segment(off, q);
      double det = lb(0) * lb(0) - lb.tail(q - 1).squaredNorm();
      double x0 = (lb(0) * db(0) - lb.tail(q - 1).dot(db.tail(q - 1))) / det;
      out(off) = x0;
      out.segment(off + 1, q - 1) = (db.tail(q - 1) - x0 * lb.tail(q - 1)) / lb(0);
    }
    for (size_t k = 0; k < spec_.psd.size(); ++k) {
      int off = lay_.psd_off[k], r = spec_.psd[k].rows();
      const auto& ps = psd_[k];
      int d2 = spec_.psd[k].embed_dim();
      MatR D = herm::ssvec_to_matrix(d.segment(off, r), d2);
      MatR X(d2, d2);
      for (int i = 0; i < d2; ++i)
        for (int j = 0; j < d2; ++j) X(i, j) = 2.0 * D(i, j) / (ps.sigma(i) + ps.sigma(j));
      out.segment(off, r) = herm::ssvec(0.5 * (X + X.transpose()));
    }
    return out;
  }

  // Largest step a such that v + a*dv stays in the cone (v strictly inside).
  double max_step(const VecR& v, const VecR& dv) const {
    double a = kInf;
    for (int i = 0; i < lay_.l; ++i)
      if (dv(i) < 0) a = std::min(a, -v(i) / dv(i));
    for (size_t k = 0; k < spec_.soc.size(); ++k) {
      int q = spec_.soc[k], off = lay_.soc_off[k];
      auto vb = v.segment(off, q);
      auto db = dv.segment(off, q);
      double c2 = vb(0) * vb(0) - vb.tail(q - 1).squaredNorm();
      double c1 = vb(0) * db(0) - vb.tail(q - 1).dot(db.tail(q - 1));
      double c0 = db(0) * db(0) - db.tail(q - 1).squaredNorm();
      // roots of c0 a^2 + 2 c1 a + c2 = 0
      double root = kInf;
      if (std::abs(c0) < 1e-300) {
        if (c1 < 0) root = -c2 / (2.0 * c1);
      } else {
        double disc = c1 * c1 - c0 * c2;
        if (disc >= 0) {
          double sq = std::sqrt(disc);
          double r1 = (-c1 - sq) / c0;
          double r2 = (-c1 + sq) / c0;
          if (r1 > r2) std::swap(r1, r2);
          if (r1 > 0)
            root = r1;
          else if (r2 > 0 && c0 < 0)
            root = r2;
        }
      }
      if (db(0) < 0) root = std::min(root, -vb(0) / db(0));
      a = std::min(a, root);
    }
    for (size_t k = 0; k < spec_.psd.size(); ++k) {
      int d = spec_.psd[k].embed_dim(), off = lay_.psd_off[k], r = spec_.psd[k].rows();
      MatR V = herm::ssvec_to_matrix(v.segment(off, r), d);
      MatR D = herm::ssvec_to_matrix(dv.segment(off, r), d);
      Eigen::LLT<MatR> chol(V);
      if (chol.info() != Eigen::Success) return 0.0;
      MatR L = chol.matrixL();
      MatR T = L.triangularView<Eigen::Lower>().solve(D);
      MatR M = L.triangularView<Eigen::Lower>().solve(T.transpose()).transpose();
      Eigen::SelfAdjointEigenSolver<MatR> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
      double lmin = es.eigenvalues()(0);
      if (lmin < 0) a = std::min(a, -1.0 / lmin);
    }
    return a;
  }

  // Signed distance to the cone along e: negative values mean v is strictly
  // inside with that margin.
  double dist_outside(const VecR& v) const {
    double a = -kInf;
    for (int i = 0; i < lay_.l; ++i) a = std::max(a, -v(i));
    for (size_t k = 0; k < spec_.soc.size(); ++k) {
      int q = spec_.soc[k], off = lay_.soc_off[k];
      auto vb = v.segment(off, q);
      a = std::max(a, vb.tail(q - 1).norm() - vb(0));
    }
    for (size_t k = 0; k < spec_.psd.size(); ++k) {
      int d = spec_.psd[k].embed_dim(), off = lay_.psd_off[k], r = spec_.psd[k].rows();
      MatR V = herm::ssvec_to_matrix(v.segment(off, r), d);
      Eigen::SelfAdjointEigenSolver<MatR> es(V, Eigen::EigenvaluesOnly);
      a = std::max(a, -es.eigenvalues()(0));
    }
    return a;
  }

  // Cone identity element.
  VecR identity() const {
    VecR e = VecR::Zero(lay_.m);
    for (int i = 0; i < lay_.l; ++i) e(i) = 1.0;
    for (size_t k = 0; k < spec_.soc.size(); ++k) e(lay_.soc_off[k]) = 1.0;
    for (size_t k = 0; k < spec_.psd.size(); ++k) {
      int d = spec_.psd[k].embed_dim(), off = lay_.psd_off[k];
      e.segment(off, spec_.psd[k].rows()) = herm::ssvec(MatR::Identity(d, d));
    }
    return e;
  }

  const PsdScaling& psd_scaling(size_t k) const { return psd_[k]; }

 private:
  // H(wbar) x for the SOC hyperbolic reflector.
  static VecR apply_h(const VecR& w, const VecR& x) {
    int q = static_cast<int>(w.size());
    VecR out(q);
    if (q == 1) {
      out(0) = w(0) * x(0);
      return out;
    }
    double t = w.tail(q - 1).dot(x.tail(q - 1));
    out(0) = w(0) * x(0) + t;
    out.tail(q - 1) = x.tail(q - 1) + (x(0) + t / (1.0 + w(0))) * w.tail(q - 1);
    return out;
  }

  const ConeSpec& spec_;
  const Layout& lay_;
  VecR w_nn_;
  std::vector<SocScaling> soc_;
  std::vector<PsdScaling> psd_;
};

// KKT system solver for
//   [ 0   A'  G' ] [ux]   [bx]
//   [ A   0   0  ] [uy] = [by]
//   [ G   0  -W'W] [uz]   [bz]
// via elimination of uz and the equality block.
class KktSolver {
 public:
  KktSolver(const ConeProblemData& data, const Layout& lay)
      : data_(data), lay_(lay), n_(static_cast<int>(data.c.size())),
        p_(static_cast<int>(data.b.size())) {
    for (const auto& pb : data_.cones.psd) emaps_.push_back(herm::embed_map(pb.herm_dim));
  }

  VecR g_apply(const VecR& x) const {
    VecR out(lay_.m);
    int dr = data_.cones.dense_rows();
    out.head(dr).noalias() = data_.Gd * x;
    for (size_t k = 0; k < data_.cones.psd.size(); ++k) {
      const auto& pb = data_.cones.psd[k];
      out.segment(lay_.psd_off[k], pb.rows()).noalias() =
          -(emaps_[k] * x.segment(pb.var_offset, pb.herm_dim * pb.herm_dim));
    }
    return out;
  }

  VecR gt_apply(const VecR& z) const {
    VecR out(n_);
    int dr = data_.cones.dense_rows();
    out.noalias() = data_.Gd.transpose() * z.head(dr);
    for (size_t k = 0; k < data_.cones.psd.size(); ++k) {
      const auto& pb = data_.cones.psd[k];
      out.segment(pb.var_offset, pb.herm_dim * pb.herm_dim).noalias() -=
          emaps_[k].transpose() * z.segment(lay_.psd_off[k], pb.rows());
    }
    return out;
  }

  VecR h_full() const {
    VecR h = VecR::Zero(lay_.m);
    h.head(data_.cones.dense_rows()) = data_.hd;
    return h;
  }

  // Factors the reduced system for the current scaling.
  bool factor(const ConeOps& ops) {
    ops_ = &ops;
    MatR Hhat = MatR::Zero(n_, n_);
    // Dense cone rows: Hhat += (W^-T Gd)' (W^-T Gd). Scale rows blockwise.
    int dr = data_.cones.dense_rows();
    if (dr > 0) {
      MatR scaled = data_.Gd;
      ops.scale_dense_rows_winvt(scaled);
      Hhat.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
    }
    // Structural PSD blocks: Hhat_block = E' Theta^{-1} E computed from the
    // columns of sigma_i (embedded basis elements are sums of rank-two
    // symmetric terms).
    for (size_t k = 0; k < data_.cones.psd.size(); ++k) {
      add_psd_block(ops, k, Hhat);
    }
    // Only the lower triangle is filled; LLT reads exactly that.
    double reg = 1e-12 * std::max(1.0, Hhat.diagonal().maxCoeff());
    Hhat.diagonal().array() += reg;
    chol_h_.compute(Hhat);
    if (chol_h_.info() != Eigen::Success) {
      Hhat.diagonal().array() += 1e4 * reg;
      chol_h_.compute(Hhat);
      if (chol_h_.info() != Eigen::Success) return false;
    }
    if (p_ > 0) {
      MatR AHiAT(p_, p_);
      MatR Hi_At = chol_h_.solve(data_.A.transpose());
      AHiAT.noalias() = data_.A * Hi_At;
      AHiAT.diagonal().array() += 1e-12 * std::max(1.0, AHiAT.diagonal().maxCoeff());
      chol_s_.compute(AHiAT);
      if (chol_s_.info() != Eigen::Success) return false;
    }
    return true;
  }

  // Solves the 3x3 system with iterative refinement; corrections that do not
  // reduce the true residual are rolled back.
  void solve(const VecR& bx, const VecR& by, const VecR& bz, VecR& ux, VecR& uy,
             VecR& uz) const {
    solve_once(bx, by, bz, ux, uy, uz);
    double scale = 1.0 + bx.norm() + bz.norm() + (p_ > 0 ? by.norm() : 0.0);
    auto residual = [&](const VecR& vx, const VecR& vy, const VecR& vz, VecR& rx, VecR& ry,
                        VecR& rz) {
      rx = bx - (p_ > 0 ? VecR(data_.A.transpose() * vy) : VecR::Zero(n_)) - gt_apply(vz);
      ry = p_ > 0 ? VecR(by - data_.A * vx) : VecR(0);
      rz = bz - g_apply(vx) + ops_->apply_theta(vz, /*inverse=*/false);
      return rx.norm() + (p_ > 0 ? ry.norm() : 0.0) + rz.norm();
    };
    VecR rx, ry, rz;
    double res = residual(ux, uy, uz, rx, ry, rz);
    for (int round = 0; round < 4 && res > 1e-13 * scale; ++round) {
      VecR cx, cy, cz;
      solve_once(rx, ry, rz, cx, cy, cz);
      VecR tx = ux + cx;
      VecR ty = p_ > 0 ? VecR(uy + cy) : VecR(0);
      VecR tz = uz + cz;
      VecR rx2, ry2, rz2;
      double res2 = residual(tx, ty, tz, rx2, ry2, rz2);
      if (res2 >= res) break;
      ux.swap(tx);
      if (p_ > 0) uy.swap(ty);
      uz.swap(tz);
      rx.swap(rx2);
      ry.swap(ry2);
      rz.swap(rz2);
      res = res2;
    }
  }

 private:
  void solve_once(const VecR& bx, const VecR& by, const VecR& bz, VecR& ux, VecR& uy,
                  VecR& uz) const {
    VecR r1 = bx + gt_apply(ops_->apply_theta(bz, /*inverse=*/true));
    if (p_ > 0) {
      VecR t = chol_h_.solve(r1);
      uy = chol_s_.solve(data_.A * t - by);
      ux = chol_h_.solve(r1 - data_.A.transpose() * uy);
    } else {
      uy.resize(0);
      ux = chol_h_.solve(r1);
    }
    uz = ops_->apply_theta(g_apply(ux) - bz, /*inverse=*/true);
  }

  void add_psd_block(const ConeOps& ops, size_t k, MatR& Hhat) const {
    const auto& pb = data_.cones.psd[k];
    const MatR& Si = ops.psd_scaling(k).sigma_i;
    const int nh = pb.herm_dim;
    const int d = pb.embed_dim();
    const int q = nh * nh;
    const int off = pb.var_offset;
    MatR Y(d, d);
    // hsvec coordinate order: for each col j, (re, im) pairs for i < j, then
    // the diagonal entry.
    struct Coord {
      int i, j;
      int kind;  // 0 diag, 1 re, 2 im
    };
    std::vector<Coord> coords(q);
    {
      int c = 0;
      for (int j = 0; j < nh; ++j) {
        for (int i = 0; i < j; ++i) {
          coords[c++] = {i, j, 1};
          coords[c++] = {i, j, 2};
        }
        coords[c++] = {j, j, 0};
      }
    }
    const double is2 = 1.0 / kSqrt2;
    for (int cj = 0; cj < q; ++cj) {
      const Coord& co = coords[cj];
      // Y = sigma_i * embed(basis) * sigma_i, assembled from columns of
      // sigma_i since embed(basis) is a sum of symmetric rank-two terms.
      if (co.kind == 0) {
        Y.noalias() = Si.col(co.j) * Si.col(co.j).transpose();
        Y.noalias() += Si.col(nh + co.j) * Si.col(nh + co.j).transpose();
      } else if (co.kind == 1) {
        Y.noalias() = is2 * (Si.col(co.i) * Si.col(co.j).transpose());
        Y.noalias() += is2 * (Si.col(co.j) * Si.col(co.i).transpose());
        Y.noalias() += is2 * (Si.col(nh + co.i) * Si.col(nh + co.j).transpose());
        Y.noalias() += is2 * (Si.col(nh + co.j) * Si.col(nh + co.i).transpose());
      } else {
        Y.noalias() = -is2 * (Si.col(co.i) * Si.col(nh + co.j).transpose());
        Y.noalias() -= is2 * (Si.col(nh + co.j) * Si.col(co.i).transpose());
        Y.noalias() += is2 * (Si.col(co.j) * Si.col(nh + co.i).transpose());
        Y.noalias() += is2 * (Si.col(nh + co.i) * Si.col(co.j).transpose());
      }
      for (int ci = cj; ci < q; ++ci) {
        const Coord& ri = coords[ci];
        double v;
        if (ri.kind == 0) {
          v = Y(ri.j, ri.j) + Y(nh + ri.j, nh + ri.j);
        } else if (ri.kind == 1) {
          v = kSqrt2 * (Y(ri.i, ri.j) + Y(nh + ri.i, nh + ri.j));
        } else {
          v = kSqrt2 * (-Y(ri.i, nh + ri.j) + Y(ri.j, nh + ri.i));
        }
        Hhat(off + ci, off + cj) += v;
      }
    }
  }

  const ConeProblemData& data_;
  const Layout& lay_;
  int n_, p_;
  const ConeOps* ops_ = nullptr;
  std::vector<Eigen::SparseMatrix<double>> emaps_;
  Eigen::LLT<MatR> chol_h_;
  Eigen::LLT<MatR> chol_s_;
};

}  // namespace

namespace {
ConeSolution solve_scaled(const ConeProblemData& data, const SolverSettings& st);
}

ConeSolution solve_cone_problem(const ConeProblemData& raw, const SolverSettings& st) {
  const int n = static_cast<int>(raw.c.size());
  const int p = static_cast<int>(raw.b.size());
  Layout lay0(raw.cones);
  if (lay0.m == 0) throw std::invalid_argument("solve_cone_problem: empty cone");
  if (raw.Gd.rows() != raw.cones.dense_rows() || raw.Gd.cols() != n)
    throw std::invalid_argument("solve_cone_problem: G dimension mismatch");
  if (raw.A.rows() != p || (p > 0 && raw.A.cols() != n))
    throw std::invalid_argument("solve_cone_problem: A dimension mismatch");

  // Normalize the right-hand-side scale so the homogeneous tau stays O(1)
  // even when the solution is large; x and s are scaled back on exit.
  double beta = 1.0;
  if (p > 0) beta = std::max(beta, raw.b.lpNorm<Eigen::Infinity>());
  if (raw.hd.size() > 0) beta = std::max(beta, raw.hd.lpNorm<Eigen::Infinity>());
  ConeProblemData data = raw;
  data.b /= beta;
  data.hd /= beta;

  // Presolve: the interior-point certificates require Rank(A) = p. Dependent
  // equality rows are dropped when consistent and reported as infeasible
  // otherwise.
  std::vector<int> kept_rows;
  bool presolved = false;
  if (p > 0) {
    Eigen::ColPivHouseholderQR<MatR> qr(data.A.transpose());
    qr.setThreshold(1e-10);
    int rank = static_cast<int>(qr.rank());
    if (rank < p) {
      presolved = true;
      const auto& perm = qr.colsPermutation().indices();
      std::vector<int> kept(perm.data(), perm.data() + rank);
      std::sort(kept.begin(), kept.end());
      MatR Ak(rank, n);
      VecR bk(rank);
      for (int i = 0; i < rank; ++i) {
        Ak.row(i) = data.A.row(kept[i]);
        bk(i) = data.b(kept[i]);
      }
      Eigen::ColPivHouseholderQR<MatR> qrk(Ak.transpose());
      for (int i = rank; i < p; ++i) {
        int row = perm(i);
        VecR lam = qrk.solve(data.A.row(row).transpose());
        double bcomb = lam.dot(bk);
        double scale = std::max({1.0, std::abs(data.b(row)), bk.cwiseAbs().maxCoeff()});
        if (std::abs(bcomb - data.b(row)) > 1e-8 * scale) {
          ConeSolution out;
          out.status = SolveStatus::infeasible;
          out.message = "inconsistent equality rows";
          VecR y = VecR::Zero(p);
          double sgn = (bcomb - data.b(row) > 0) ? -1.0 : 1.0;
          for (int k = 0; k < rank; ++k) y(kept[k]) = sgn * lam(k);
          y(row) = -sgn;
          out.y = y;
          out.z = VecR::Zero(lay0.m);
          return out;
        }
      }
      data.A = Ak;
      data.b = bk;
      kept_rows = kept;
    }
  }

  ConeSolution out = solve_scaled(data, st);
  if (presolved && out.y.size() > 0) {
    VecR yfull = VecR::Zero(p);
    for (size_t i = 0; i < kept_rows.size(); ++i) yfull(kept_rows[i]) = out.y(i);
    out.y = yfull;
  }
  if (out.x.size() > 0 && out.status != SolveStatus::infeasible &&
      out.status != SolveStatus::unbounded) {
    out.x *= beta;
    out.s *= beta;
    out.pobj *= beta;
    out.dobj *= beta;
    out.gap *= beta;
  }
  return out;
}

namespace {
ConeSolution solve_scaled(const ConeProblemData& data, const SolverSettings& st) {
  const int n = static_cast<int>(data.c.size());
  const int p = static_cast<int>(data.b.size());
  Layout lay(data.cones);
  const int m = lay.m;

  ConeSolution out;
  ConeOps ops(data.cones, lay);
  KktSolver kkt(data, lay);
  VecR h = kkt.h_full();

  const double nu = static_cast<double>(data.cones.degree());
  const double resx0 = std::max(1.0, data.c.norm());
  const double resy0 = std::max(1.0, data.b.norm());
  const double resz0 = std::max(1.0, h.norm());

  // --- Initialization with identity scaling ---
  VecR x, y, z, s;
  {
    VecR lambda0;
    VecR s0 = ops.identity(), z0 = ops.identity();
    if (!ops.compute_scaling(s0, z0, lambda0))
      throw std::logic_error("identity scaling failed");
    if (!kkt.factor(ops)) {
      out.message = "initial KKT factorization failed";
      return out;
    }
    VecR uz, uy;
    kkt.solve(VecR::Zero(n), data.b, h, x, y, uz);
    VecR scand = -uz;
    double a = ops.dist_outside(scand);
    s = (a < -1e-9) ? scand : VecR(scand + (1.0 + std::max(a, 0.0)) * ops.identity());

    VecR xd;
    kkt.solve(-data.c, VecR::Zero(p), VecR::Zero(m), xd, y, z);
    double ad = ops.dist_outside(z);
    if (ad >= -1e-9) z += (1.0 + std::max(ad, 0.0)) * ops.identity();
  }
  double tau = 1.0, kappa = 1.0;

  double mu0 = (s.dot(z) + tau * kappa) / (nu + 1.0);
  VecR lambda;
  std::string fail_msg;

  // Best scaled iterate seen, by worst normalized optimality measure.
  double best_score = kInf;
  VecR bx_, by_, bz_, bs_;
  double best_pobj = 0, best_dobj = 0, best_gap = 0, best_pres = 0, best_dres = 0;

  for (int iter = 0; iter <= st.max_iters; ++iter) {
    // Residuals of the self-dual embedding.
    VecR res_x = (p > 0 ? VecR(data.A.transpose() * y) : VecR::Zero(n)) + kkt.gt_apply(z) +
                 data.c * tau;
    VecR res_y = p > 0 ? VecR(-data.A * x + data.b * tau) : VecR(0);
    VecR res_z = -kkt.g_apply(x) + h * tau - s;
    double res_tau = -data.c.dot(x) - (p > 0 ? data.b.dot(y) : 0.0) - h.dot(z) - kappa;

    double gap = s.dot(z) / (tau * tau);
    double pcost = data.c.dot(x) / tau;
    double dcost = -((p > 0 ? data.b.dot(y) : 0.0) + h.dot(z)) / tau;
    double pres = std::max((p > 0 ? res_y.norm() : 0.0) / resy0, res_z.norm() / resz0) / tau;
    double dres = res_x.norm() / resx0 / tau;
    double relgap = gap / std::max(1.0, std::abs(pcost));

    out.iterations = iter;
    out.pobj = pcost;
    out.dobj = dcost;
    out.gap = gap;
    out.pres = pres;
    out.dres = dres;

    if (st.verbose) {
      std::fprintf(stderr,
                   "it %3d  pcost % .6e dcost % .6e gap %.3e pres %.3e dres %.3e "
                   "tau %.3e kappa %.3e\n",
                   iter, pcost, dcost, gap, pres, dres, tau, kappa);
    }

    if (!std::isfinite(pres) || !std::isfinite(dres) || !std::isfinite(gap)) {
      out.status = SolveStatus::numerical_failure;
      out.message = "non-finite iterate";
      return out;
    }

    double score = std::max({pres / st.feastol, dres / st.feastol,
                             std::min(gap / st.abstol, relgap / st.reltol)});
    if (score < best_score) {
      best_score = score;
      bx_ = x / tau;
      by_ = y / tau;
      bz_ = z / tau;
      bs_ = s / tau;
      best_pobj = pcost;
      best_dobj = dcost;
      best_gap = gap;
      best_pres = pres;
      best_dres = dres;
    }

    if (score <= 1.0) {
      out.status = SolveStatus::optimal;
      out.x = x / tau;
      out.y = y / tau;
      out.z = z / tau;
      out.s = s / tau;
      return out;
    }
    // Infeasibility certificates.
    double hz_by = -((p > 0 ? data.b.dot(y) : 0.0) + h.dot(z));
    if (hz_by > 0) {
      double cert = ((p > 0 ? VecR(data.A.transpose() * y) : VecR::Zero(n)) + kkt.gt_apply(z))
                        .norm() /
                    resx0 / hz_by;
      if (cert <= st.feastol) {
        out.status = SolveStatus::infeasible;
        out.y = y / hz_by;
        out.z = z / hz_by;
        out.message = "primal infeasibility certificate";
        return out;
      }
    }
    if (-data.c.dot(x) > 0) {
      double denom = -data.c.dot(x);
      double cert = std::max((p > 0 ? (data.A * x).norm() : 0.0) / resy0,
                             (kkt.g_apply(x) + s).norm() / resz0) /
                    denom;
      if (cert <= st.feastol) {
        out.status = SolveStatus::unbounded;
        out.x = x / denom;
        out.s = s / denom;
        out.message = "dual infeasibility certificate";
        return out;
      }
    }
    if (iter == st.max_iters) {
      out.status = SolveStatus::iteration_limit;
      out.x = x / tau;
      out.y = y / tau;
      out.z = z / tau;
      out.s = s / tau;
      out.message = "iteration limit reached";
      return out;
    }

    if (!ops.compute_scaling(s, z, lambda)) {
      fail_msg = "scaling breakdown (iterate left the cone)";
      break;
    }
    if (st.verbose) {
      double e1 = (ops.apply(ConeOps::Op::WinvT, s) - lambda).norm();
      double e2 = (ops.apply(ConeOps::Op::W, z) - lambda).norm();
      double e3 = (ops.apply(ConeOps::Op::WinvT, ops.apply(ConeOps::Op::WT, s)) - s).norm();
      double e4 = (ops.apply_theta(ops.apply_theta(s, false), true) - s).norm();
      std::fprintf(stderr, "    scaling checks: Winv_t*s-l %.2e Wz-l %.2e inv %.2e theta %.2e\n",
                   e1, e2, e3, e4);
    }
    if (!kkt.factor(ops)) {
      fail_msg = "KKT factorization failed";
      break;
    }
    double mu = (s.dot(z) + tau * kappa) / (nu + 1.0);

    // Constant-rhs solve reused by both steps this iteration.
    VecR t1x, t1y, t1z;
    kkt.solve(-data.c, data.b, h, t1x, t1y, t1z);
    VecR lam_sq = ops.jordan_prod(lambda, lambda);
    double cbh_t1 = data.c.dot(t1x) + (p > 0 ? data.b.dot(t1y) : 0.0) + h.dot(t1z);

    auto compute_dir = [&](const VecR& ds, double dkappa_rhs, double sigma_scale, VecR& dx,
                           VecR& dy, VecR& dz, VecR& dsv, double& dtau, double& dkap) {
      // Linear rhs: -(1 - sigma) * residuals.
      VecR rhs_x = -sigma_scale * res_x;
      VecR rhs_y = p > 0 ? VecR(-sigma_scale * res_y) : VecR(0);
      VecR rhs_z = -sigma_scale * res_z;
      double rhs_tau = -sigma_scale * res_tau;
      VecR bz_t = rhs_z + ops.apply(ConeOps::Op::WT, ops.jordan_div(lambda, ds));
      VecR vx, vy, vz;
      kkt.solve(rhs_x, p > 0 ? VecR(-rhs_y) : VecR(0), -bz_t, vx, vy, vz);
      double cbh_v = data.c.dot(vx) + (p > 0 ? data.b.dot(vy) : 0.0) + h.dot(vz);
      dtau = (rhs_tau + cbh_v + dkappa_rhs / tau) / (kappa / tau - cbh_t1);
      dx = vx + dtau * t1x;
      if (p > 0) dy = vy + dtau * t1y; else dy.resize(0);
      dz = vz + dtau * t1z;
      dsv = ops.apply(ConeOps::Op::WT,
                      ops.jordan_div(lambda, ds) - ops.apply(ConeOps::Op::W, dz));
      dkap = (dkappa_rhs - kappa * dtau) / tau;
    };

    // Affine step.
    VecR dxa, dya, dza, dsa;
    double dtaua, dkapa;
    compute_dir(-lam_sq, -tau * kappa, 1.0, dxa, dya, dza, dsa, dtaua, dkapa);

    if (st.verbose) {
      VecR n1 = (p > 0 ? VecR(data.A.transpose() * dya) : VecR::Zero(n)) + kkt.gt_apply(dza) +
                data.c * dtaua + res_x;
      VecR n3 = -kkt.g_apply(dxa) + h * dtaua - dsa + res_z;
      double n4 = -data.c.dot(dxa) - (p > 0 ? data.b.dot(dya) : 0.0) - h.dot(dza) - dkapa +
                  res_tau;
      VecR nc = ops.jordan_prod(lambda, ops.apply(ConeOps::Op::W, dza) +
                                            ops.apply(ConeOps::Op::WinvT, dsa)) +
                lam_sq;
      std::fprintf(stderr, "    newton res: n1 %.2e n3 %.2e n4 %.2e nc %.2e\n", n1.norm(),
                   n3.norm(), std::abs(n4), nc.norm());
    }

    double alpha_aff = std::min({1.0, ops.max_step(s, dsa), ops.max_step(z, dza),
                                 dtaua < 0 ? -tau / dtaua : kInf,
                                 dkapa < 0 ? -kappa / dkapa : kInf});
    double gap_aff = (s + alpha_aff * dsa).dot(z + alpha_aff * dza) +
                     (tau + alpha_aff * dtaua) * (kappa + alpha_aff * dkapa);
    double rho = gap_aff / (s.dot(z) + tau * kappa);
    double sigma = std::pow(std::clamp(rho, 0.0, 1.0), 3);

    // Combined step with Mehrotra correction.
    VecR corr = ops.jordan_prod(ops.apply(ConeOps::Op::WinvT, dsa),
                                ops.apply(ConeOps::Op::W, dza));
    VecR ds_comb = -lam_sq - corr + sigma * mu * ops.identity();
    double dk_comb = -tau * kappa - dtaua * dkapa + sigma * mu;
    VecR dx, dy, dz, dsv;
    double dtau, dkap;
    compute_dir(ds_comb, dk_comb, 1.0 - sigma, dx, dy, dz, dsv, dtau, dkap);

    double alpha = std::min({1.0 / kStep, ops.max_step(s, dsv), ops.max_step(z, dz),
                             dtau < 0 ? -tau / dtau : kInf,
                             dkap < 0 ? -kappa / dkap : kInf});
    alpha *= kStep;
    alpha = std::min(alpha, 1.0);
    if (!(alpha > 1e-13)) {
      fail_msg = "step size collapsed";
      break;
    }

    if (st.verbose) {
      std::fprintf(stderr,
                   "    step: a_aff %.3e sigma %.3e a %.3e dtau_a % .2e dkap_a % .2e "
                   "dtau % .2e dkap % .2e\n",
                   alpha_aff, sigma, alpha, dtaua, dkapa, dtau, dkap);
    }

    x += alpha * dx;
    if (p > 0) y += alpha * dy;
    z += alpha * dz;
    s += alpha * dsv;
    tau += alpha * dtau;
    kappa += alpha * dkap;

    if (tau <= 1e-14 * std::max(1.0, kappa) && s.dot(z) + tau * kappa < 1e-10 * mu0) {
      fail_msg = "tau collapsed without certificate";
      break;
    }
  }

  out.message = fail_msg.empty() ? "interior-point breakdown" : fail_msg;
  if (best_score < kInf) {
    out.x = bx_;
    out.y = by_;
    out.z = bz_;
    out.s = bs_;
    out.pobj = best_pobj;
    out.dobj = best_dobj;
    out.gap = best_gap;
    out.pres = best_pres;
    out.dres = best_dres;
  }
  // Accept the best iterate at mildly reduced accuracy before declaring a
  // numerical failure.
  if (best_score <= 10.0) {
    out.status = SolveStatus::optimal;
    out.message = "reduced accuracy (" + out.message + ")";
  } else {
    out.status = SolveStatus::numerical_failure;
  }
  return out;
}
}  // namespace

}  // namespace irsbeam::conic

#include "predictor/qp.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

namespace predictor {

namespace {

constexpr double kEqTol = 1e-12;   // al == au detection
constexpr double kReg = 1e-11;     // static KKT regularization

// Origin of a one-sided inequality (or equality) after the canonical
// instance has been split for the interior-point method.
struct IneqRef {
  enum Kind { RowUpper, RowLower, BoxUpper, BoxLower } kind;
  int index;
};

struct EqRef {
  bool is_box;
  int index;
};

struct Split {
  // equalities E x = f
  Eigen::SparseMatrix<double> E;
  Eigen::VectorXd f;
  std::vector<EqRef> eq_refs;
  // inequalities G x <= h; the first `rows` entries come from general
  // constraint rows and stay in the KKT border, the remainder are
  // single-entry box rows that get condensed into the Hessian diagonal.
  Eigen::SparseMatrix<double> G;
  Eigen::VectorXd h;
  std::vector<IneqRef> ineq_refs;
  int rows = 0;
};

Split split_instance(const QpInstance& q) {
  Split sp;
  const int n = q.num_vars();
  const int m = q.num_rows();

  std::vector<Eigen::Triplet<double>> te, tg;
  std::vector<double> fe, hg;

  auto add_row = [&](std::vector<Eigen::Triplet<double>>& t, int r, int src_row, double sign) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(q.A, src_row); it; ++it) {
      t.emplace_back(r, static_cast<int>(it.col()), sign * it.value());
    }
  };

  // q.A is row-iterable only if row-major; work with a row-major copy.
  Eigen::SparseMatrix<double, Eigen::RowMajor> Ar = q.A;
  auto add_row_rm = [&](std::vector<Eigen::Triplet<double>>& t, int r, int src_row, double sign) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(Ar, src_row); it; ++it) {
      t.emplace_back(r, static_cast<int>(it.col()), sign * it.value());
    }
  };
  (void)add_row;

  for (int i = 0; i < m; ++i) {
    const double lo = q.al(i), hi = q.au(i);
    if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= kEqTol) {
      add_row_rm(te, static_cast<int>(fe.size()), i, 1.0);
      fe.push_back(lo);
      sp.eq_refs.push_back({false, i});
      continue;
    }
    if (std::isfinite(hi)) {
      add_row_rm(tg, static_cast<int>(hg.size()), i, 1.0);
      hg.push_back(hi);
      sp.ineq_refs.push_back({IneqRef::RowUpper, i});
    }
    if (std::isfinite(lo)) {
      add_row_rm(tg, static_cast<int>(hg.size()), i, -1.0);
      hg.push_back(-lo);
      sp.ineq_refs.push_back({IneqRef::RowLower, i});
    }
  }
  sp.rows = static_cast<int>(hg.size());
  for (int j = 0; j < n; ++j) {
    const double lo = q.xl(j), hi = q.xu(j);
    if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= kEqTol) {
      te.emplace_back(static_cast<int>(fe.size()), j, 1.0);
      fe.push_back(lo);
      sp.eq_refs.push_back({true, j});
      continue;
    }
    if (std::isfinite(hi)) {
      tg.emplace_back(static_cast<int>(hg.size()), j, 1.0);
      hg.push_back(hi);
      sp.ineq_refs.push_back({IneqRef::BoxUpper, j});
    }
    if (std::isfinite(lo)) {
      tg.emplace_back(static_cast<int>(hg.size()), j, -1.0);
      hg.push_back(-lo);
      sp.ineq_refs.push_back({IneqRef::BoxLower, j});
    }
  }

  sp.E.resize(static_cast<int>(fe.size()), n);
  sp.E.setFromTriplets(te.begin(), te.end());
  sp.f = Eigen::Map<Eigen::VectorXd>(fe.data(), static_cast<long>(fe.size()));
  sp.G.resize(static_cast<int>(hg.size()), n);
  sp.G.setFromTriplets(tg.begin(), tg.end());
  sp.h = Eigen::Map<Eigen::VectorXd>(hg.data(), static_cast<long>(hg.size()));
  return sp;
}

double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double a = 1.0;
  for (long i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) {
      a = std::min(a, -v(i) / dv(i));
    }
  }
  return a;
}

// Augmented KKT system: general inequality rows stay in the border (with
// their barrier diagonal), only single-entry box rows are condensed into
// the Hessian diagonal. This keeps the (1,1) block as sparse as P itself,
// so factorization cost grows linearly with the number of circuits instead
// of through dense circuit-coupling fill from G'WG.
Eigen::SparseMatrix<double> assemble_kkt(const Eigen::SparseMatrix<double>& P,
                                         const Eigen::VectorXd& hdiag,
                                         const Eigen::SparseMatrix<double>& E,
                                         const Eigen::SparseMatrix<double>& Gr,
                                         const Eigen::VectorXd& rdiag) {
  const int n = static_cast<int>(P.rows());
  const int me = static_cast<int>(E.rows());
  const int mr = static_cast<int>(Gr.rows());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(P.nonZeros() + n + 2 * E.nonZeros() + me + 2 * Gr.nonZeros() + mr);
  for (int k = 0; k < P.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(P, k); it; ++it) {
      t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int j = 0; j < n; ++j) {
    t.emplace_back(j, j, kReg + hdiag(j));
  }
  for (int k = 0; k < E.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(E, k); it; ++it) {
      t.emplace_back(n + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      t.emplace_back(static_cast<int>(it.col()), n + static_cast<int>(it.row()), it.value());
    }
  }
  for (int i = 0; i < me; ++i) {
    t.emplace_back(n + i, n + i, -kReg);
  }
  for (int k = 0; k < Gr.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(Gr, k); it; ++it) {
      t.emplace_back(n + me + static_cast<int>(it.row()), static_cast<int>(it.col()),
                     it.value());
      t.emplace_back(static_cast<int>(it.col()), n + me + static_cast<int>(it.row()),
                     it.value());
    }
  }
  for (int i = 0; i < mr; ++i) {
    t.emplace_back(n + me + i, n + me + i, -rdiag(i) - kReg);
  }
  Eigen::SparseMatrix<double> K(n + me + mr, n + me + mr);
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

}  // namespace

void QpInstance::dump(std::ostream& os) const {
  os << "qp n=" << num_vars() << " m=" << num_rows() << "\n";
  os << "P\n" << Eigen::MatrixXd(P) << "\nq\n" << q.transpose() << "\n";
  os << "A\n" << Eigen::MatrixXd(A) << "\n";
  os << "al\n" << al.transpose() << "\nau\n" << au.transpose() << "\n";
  os << "xl\n" << xl.transpose() << "\nxu\n" << xu.transpose() << "\n";
}

QpSolution solve(const QpInstance& qp, const std::optional<QpSolution>& warm_start) {
  const int n = qp.num_vars();
  const Split sp = split_instance(qp);
  const int me = static_cast<int>(sp.E.rows());
  const int mi = static_cast<int>(sp.G.rows());

  QpSolution sol;
  sol.x = Eigen::VectorXd::Zero(n);
  if (warm_start && warm_start->x.size() == n) {
    sol.x = warm_start->x;
  }

  Eigen::VectorXd x = sol.x;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(me);
  Eigen::VectorXd s, z;
  if (mi > 0) {
    s = (sp.h - sp.G * x).cwiseMax(1.0);
    z = Eigen::VectorXd::Ones(mi);
  }

  const int mr = sp.rows;           // general rows, kept in the KKT border
  const int mb = mi - mr;           // box rows, condensed into the diagonal
  const Eigen::SparseMatrix<double> Gr = sp.G.topRows(mr);
  const Eigen::SparseMatrix<double> Gb = sp.G.bottomRows(mb);

  const double bscale = me > 0 ? sp.f.cwiseAbs().maxCoeff() : 0.0;
  const double hscale = mi > 0 ? sp.h.cwiseAbs().maxCoeff() : 0.0;
  const double qscale = n > 0 && qp.q.size() > 0 ? qp.q.cwiseAbs().maxCoeff() : 0.0;

  // The KKT matrix is quasidefinite, so an LDLT factorization without
  // pivoting is valid under any symmetric (fill-reducing) permutation.
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                        Eigen::AMDOrdering<int>> lu;
  bool analyzed = false;  // the KKT pattern is constant across iterations
  const int max_iters = 500;
  int iter = 0;
  bool failed = false;

  for (; iter < max_iters; ++iter) {
    Eigen::VectorXd rd = qp.P * x + qp.q + sp.E.transpose() * y;
    if (mi > 0) {
      rd += sp.G.transpose() * z;
    }
    Eigen::VectorXd rp = me > 0 ? Eigen::VectorXd(sp.E * x - sp.f) : Eigen::VectorXd();
    Eigen::VectorXd gx = mi > 0 ? Eigen::VectorXd(sp.G * x) : Eigen::VectorXd();
    Eigen::VectorXd rg = mi > 0 ? Eigen::VectorXd(gx + s - sp.h) : Eigen::VectorXd();

    const double mu = mi > 0 ? s.dot(z) / mi : 0.0;
    const double rp_inf = me > 0 ? rp.cwiseAbs().maxCoeff() : 0.0;
    const double viol = mi > 0 ? std::max(0.0, (gx - sp.h).maxCoeff()) : 0.0;
    const double rd_inf = rd.cwiseAbs().maxCoeff();
    const double gscale = 1.0 + qscale + x.cwiseAbs().maxCoeff();

    if (rp_inf <= 1e-10 * (1.0 + bscale) && viol <= 1e-10 * (1.0 + hscale) &&
        rd_inf <= 1e-10 * gscale && mu <= 1e-12 * gscale) {
      break;
    }

    // KKT matrix with the current barrier weights
    Eigen::VectorXd w, hdiag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd rdiag = Eigen::VectorXd::Zero(mr);
    if (mi > 0) {
      w = z.cwiseQuotient(s);
      rdiag = s.head(mr).cwiseQuotient(z.head(mr));
      for (int i = mr; i < mi; ++i) {
        hdiag(sp.ineq_refs[static_cast<size_t>(i)].index) += w(i);
      }
    }
    Eigen::SparseMatrix<double> K = assemble_kkt(qp.P, hdiag, sp.E, Gr, rdiag);
    if (!analyzed) {
      lu.analyzePattern(K);
      analyzed = true;
    }
    lu.factorize(K);
    if (lu.info() != Eigen::Success) {
      failed = true;
      break;
    }

    auto solve_step = [&](const Eigen::VectorXd& rsz, Eigen::VectorXd& dx,
                          Eigen::VectorXd& dy, Eigen::VectorXd& ds,
                          Eigen::VectorXd& dz) {
      Eigen::VectorXd rhs(n + me + mr);
      Eigen::VectorXd top = -rd;
      if (mb > 0) {
        // condensed box rows: dz = S^-1(-rsz) - W ds,  ds = -rg - G dx
        top -= Gb.transpose() *
               Eigen::VectorXd((-rsz.tail(mb)).cwiseQuotient(s.tail(mb)) +
                               w.tail(mb).cwiseProduct(rg.tail(mb)));
      }
      rhs.head(n) = top;
      if (me > 0) {
        rhs.segment(n, me) = -rp;
      }
      if (mr > 0) {
        // bordered rows: Gr dx - (S/Z) dz = -rg + Z^-1 rsz
        rhs.tail(mr) =
            -rg.head(mr) + rsz.head(mr).cwiseQuotient(z.head(mr));
      }
      Eigen::VectorXd d = lu.solve(rhs);
      dx = d.head(n);
      dy = me > 0 ? Eigen::VectorXd(d.segment(n, me)) : Eigen::VectorXd();
      if (mi > 0) {
        ds = -rg - sp.G * dx;
        dz.resize(mi);
        if (mr > 0) {
          dz.head(mr) = d.tail(mr);
        }
        if (mb > 0) {
          dz.tail(mb) = (-rsz.tail(mb)).cwiseQuotient(s.tail(mb)) -
                        w.tail(mb).cwiseProduct(ds.tail(mb));
        }
      }
    };

    Eigen::VectorXd dx, dy, ds, dz;
    if (mi == 0) {
      solve_step(Eigen::VectorXd(), dx, dy, ds, dz);
      x += dx;
      if (me > 0) y += dy;
      continue;
    }

    // affine-scaling direction
    Eigen::VectorXd rsz_aff = s.cwiseProduct(z);
    solve_step(rsz_aff, dx, dy, ds, dz);
    const double a_aff = std::min(max_step(s, ds), max_step(z, dz));
    const double mu_aff = (s + a_aff * ds).dot(z + a_aff * dz) / mi;
    const double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);

    // corrector
    Eigen::VectorXd rsz = s.cwiseProduct(z) + ds.cwiseProduct(dz) -
                          (sigma * mu) * Eigen::VectorXd::Ones(mi);
    solve_step(rsz, dx, dy, ds, dz);
    const double alpha =
        0.995 * std::min(max_step(s, ds), std::min(max_step(z, dz), 1.0 / 0.995));
    x += alpha * dx;
    if (me > 0) y += alpha * dy;
    s += alpha * ds;
    z += alpha * dz;
  }

  sol.x = x;
  sol.row_duals = Eigen::VectorXd::Zero(qp.num_rows());
  sol.box_duals = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < me; ++i) {
    const auto& ref = sp.eq_refs[i];
    if (ref.is_box) {
      sol.box_duals(ref.index) += y(i);
    } else {
      sol.row_duals(ref.index) += y(i);
    }
  }
  for (int i = 0; i < mi; ++i) {
    const auto& ref = sp.ineq_refs[i];
    switch (ref.kind) {
      case IneqRef::RowUpper: sol.row_duals(ref.index) += z(i); break;
      case IneqRef::RowLower: sol.row_duals(ref.index) -= z(i); break;
      case IneqRef::BoxUpper: sol.box_duals(ref.index) += z(i); break;
      case IneqRef::BoxLower: sol.box_duals(ref.index) -= z(i); break;
    }
  }
  sol.iterations = iter;
  sol.objective = 0.5 * x.dot(qp.P * x) + qp.q.dot(x);

  if (failed) {
    sol.status = QpStatus::NumericalFailure;
  } else if (kkt_residuals(qp, sol).within_tolerance()) {
    sol.status = QpStatus::Optimal;
  } else {
    sol.status = iter >= max_iters ? QpStatus::MaxIterations : QpStatus::NumericalFailure;
  }
  return sol;
}

KktResiduals kkt_residuals(const QpInstance& q, const QpSolution& s) {
  KktResiduals r;
  const int n = q.num_vars();
  const int m = q.num_rows();

  Eigen::VectorXd grad = q.P * s.x + q.q + s.box_duals;
  if (m > 0) {
    grad += q.A.transpose() * s.row_duals;
  }
  r.stationarity = n > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;

  Eigen::VectorXd ax = m > 0 ? Eigen::VectorXd(q.A * s.x) : Eigen::VectorXd();
  auto account = [&](double v, double lo, double hi, double dual) {
    if (std::isfinite(lo)) {
      r.primal = std::max(r.primal, (lo - v) / (1.0 + std::abs(lo)));
    }
    if (std::isfinite(hi)) {
      r.primal = std::max(r.primal, (v - hi) / (1.0 + std::abs(hi)));
    }
    const bool is_eq = std::isfinite(lo) && std::isfinite(hi) && hi - lo <= kEqTol;
    if (is_eq) {
      return;
    }
    const double up = std::max(dual, 0.0);
    const double dn = std::max(-dual, 0.0);
    if (!std::isfinite(hi)) {
      r.dual = std::max(r.dual, up);
    } else {
      const double slack = hi - v;
      r.complementarity =
          std::max(r.complementarity, up * std::abs(slack) / (1.0 + up + std::abs(slack)));
    }
    if (!std::isfinite(lo)) {
      r.dual = std::max(r.dual, dn);
    } else {
      const double slack = v - lo;
      r.complementarity =
          std::max(r.complementarity, dn * std::abs(slack) / (1.0 + dn + std::abs(slack)));
    }
  };

  for (int i = 0; i < m; ++i) {
    account(ax(i), q.al(i), q.au(i), s.row_duals(i));
  }
  for (int j = 0; j < n; ++j) {
    account(s.x(j), q.xl(j), q.xu(j), s.box_duals(j));
  }
  r.primal = std::max(r.primal, 0.0);
  return r;
}

}  // namespace predictor

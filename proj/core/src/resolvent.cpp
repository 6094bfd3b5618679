// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/UmfPackSupport>
#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include <unsupported/Eigen/IterativeSolvers>

#include "limabs/errors.hpp"
#include "limabs/numerics.hpp"

namespace limabs {

namespace {

template <class T>
using Sp = Eigen::SparseMatrix<T>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <class T>
T conj_if(const T& v, bool c) {
  if constexpr (std::is_same_v<T, cplx>) return c ? std::conj(v) : v;
  return v;
}

template <class T>
Vec<T> conj_if(const Vec<T>& v, bool c) {
  if constexpr (std::is_same_v<T, cplx>) return c ? Vec<T>(v.conjugate()) : v;
  return v;
}

template <class T>
bool diagonal_matrix(const Sp<T>& m) {
  for (int col = 0; col < m.outerSize(); ++col)
    for (typename Sp<T>::InnerIterator it(m, col); it; ++it)
      if (it.row() != it.col()) return false;
  return true;
}

// (S - s B) x = y with S = h^3 [[0, C^T], [C, 0]] and B = diag(Le, Lh). With a
// diagonal Lh the face unknowns are eliminated:
//   (h^6 C^T Lh^-1 C - s^2 Le) xE = s yE + h^3 C^T Lh^-1 yH,  xH = Lh^-1 (h^3 C xE - yH) / s.
template <class T>
class ShiftedSystem {
 public:
  ShiftedSystem(const Sp<T>& c, const Sp<T>& le, const Sp<T>& lh, double h3, T shift)
      : c_(c), le_(le), lh_(lh), h3_(h3), shift_(shift) {
    ne_ = le.rows();
    nf_ = lh.rows();
    reduced_ = shift != T(0) && diagonal_matrix(lh);
    if (reduced_) {
      dinv_ = lh.diagonal().cwiseInverse();
      Sp<T> ct = c.transpose();
      a_ = (h3 * h3) * (ct * dinv_.asDiagonal() * c) - (shift * shift) * le;
    } else {
      std::vector<Eigen::Triplet<T>> t;
      t.reserve(2 * c.nonZeros() + le.nonZeros() + lh.nonZeros());
      for (int col = 0; col < le.outerSize(); ++col)
        for (typename Sp<T>::InnerIterator it(le, col); it; ++it)
          t.emplace_back(it.row(), it.col(), -shift * it.value());
      for (int col = 0; col < lh.outerSize(); ++col)
        for (typename Sp<T>::InnerIterator it(lh, col); it; ++it)
          t.emplace_back(ne_ + it.row(), ne_ + it.col(), -shift * it.value());
      for (int col = 0; col < c.outerSize(); ++col)
        for (typename Sp<T>::InnerIterator it(c, col); it; ++it) {
          t.emplace_back(ne_ + it.row(), it.col(), h3 * it.value());
          t.emplace_back(it.col(), ne_ + it.row(), h3 * it.value());
        }
      a_.resize(ne_ + nf_, ne_ + nf_);
      a_.setFromTriplets(t.begin(), t.end());
    }
    a_.makeCompressed();
  }

  bool reduced() const { return reduced_; }
  const Sp<T>& matrix() const { return a_; }

  void factorize() {
    lu_ = std::make_unique<Eigen::UmfPackLU<Sp<T>>>();
    lu_->umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
    lu_->umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_METIS;
    lu_->compute(a_);
    if (lu_->info() != Eigen::Success)
      throw Error(ErrorCode::SingularAtRealFrequency, "sparse factorization failed");
  }
  bool factorized() const { return lu_ != nullptr; }

  // The system right-hand side for data (yE, yH); conj selects the conjugate shift.
  Vec<T> rhs(const Vec<T>& ye, const Vec<T>& yh, bool conj) const {
    if (!reduced_) {
      Vec<T> b(ne_ + nf_);
      b << ye, yh;
      return b;
    }
    const T s = conj_if(shift_, conj);
    const Vec<T> dh = conj_if(Vec<T>(dinv_), conj).cwiseProduct(yh);
    return s * ye + h3_ * (c_.transpose() * dh);
  }

  void recover(const Vec<T>& z, const Vec<T>& yh, bool conj, Vec<T>& xe, Vec<T>& xh) const {
    if (!reduced_) {
      xe = z.head(ne_);
      xh = z.tail(nf_);
      return;
    }
    const T s = conj_if(shift_, conj);
    xe = z;
    xh = conj_if(Vec<T>(dinv_), conj).cwiseProduct(h3_ * (c_ * z) - yh) / s;
  }

  // A^-1 b, or conj(A)^-1 b = conj(A^-1 conj(b)).
  Vec<T> factor_solve(const Vec<T>& b, bool conj) const {
    if (!conj) return lu_->solve(b);
    return conj_if(Vec<T>(lu_->solve(conj_if(b, true))), true);
  }

  void solve(const Vec<T>& ye, const Vec<T>& yh, Vec<T>& xe, Vec<T>& xh, bool conj = false) const {
    recover(factor_solve(rhs(ye, yh, conj), conj), yh, conj, xe, xh);
  }

 private:
  Sp<T> c_, le_, lh_;
  double h3_;
  T shift_;
  Id ne_ = 0, nf_ = 0;
  bool reduced_ = false;
  Vec<T> dinv_;
  Sp<T> a_;
  std::unique_ptr<Eigen::UmfPackLU<Sp<T>>> lu_;
};

// Factorization at a reference shift used as a GMRES preconditioner.
class ShiftPreconditioner {
 public:
  ShiftPreconditioner() = default;
  template <class M>
  ShiftPreconditioner& analyzePattern(const M&) { return *this; }
  template <class M>
  ShiftPreconditioner& factorize(const M&) { return *this; }
  template <class M>
  ShiftPreconditioner& compute(const M&) { return *this; }
  Eigen::ComputationInfo info() const { return Eigen::Success; }

  template <class R>
  CVec solve(const Eigen::MatrixBase<R>& b) const {
    return sys->factor_solve(CVec(b), conj);
  }

  const ShiftedSystem<cplx>* sys = nullptr;
  bool conj = false;
};

}  // namespace

struct ResolventSolver::Impl {
  CSpMat le, lh;  // Lambda with the absorber when enabled
  bool absorbing = false;
  std::unique_ptr<ShiftedSystem<cplx>> sys;
  std::unique_ptr<ShiftedSystem<cplx>> ref;  // preconditioner for iterative solves
  bool iterative = false;
};

ResolventSolver::ResolventSolver(std::shared_ptr<const MaxwellOperator> op, cplx omega, SolverOptions opts)
    : op_(std::move(op)), omega_(omega), opts_(std::move(opts)), impl_(std::make_unique<Impl>()) {
  if (omega_.imag() == 0.0)
    throw Error(ErrorCode::SingularAtRealFrequency,
                fmt::format("resolvent requested at real omega = {}", omega_.real()));
  if (!(opts_.tol > 0.0)) throw Error(ErrorCode::BadParameters, "solver tolerance must be positive");
  const auto& ops = op_->ops();
  const double h3 = std::pow(op_->dofs().h(), 3);
  impl_->absorbing = opts_.absorber.enabled();
  impl_->le = ops.absorbing_e(opts_.absorber);
  impl_->lh = ops.absorbing_h(opts_.absorber);
  const CSpMat c = op_->curl().cast<cplx>();
  impl_->sys = std::make_unique<ShiftedSystem<cplx>>(c, impl_->le, impl_->lh, h3, omega_);

  const int n = op_->dofs().grid().n();
  impl_->iterative = opts_.method == SolverOptions::Method::Iterative ||
                     (opts_.method == SolverOptions::Method::Auto && n > opts_.direct_max_n);
  if (!impl_->iterative) {
    impl_->sys->factorize();
  } else {
    const cplx shift = opts_.reference_shift.value_or(cplx(omega_.real(), 1.0));
    if (shift.imag() == 0.0)
      throw Error(ErrorCode::BadParameters, "reference shift must have nonzero imaginary part");
    impl_->ref = std::make_unique<ShiftedSystem<cplx>>(c, impl_->le, impl_->lh, h3, shift);
    if (impl_->ref->reduced() != impl_->sys->reduced())
      throw Error(ErrorCode::BadParameters, "reference shift changes the system form");
    impl_->ref->factorize();
  }
  spdlog::debug("resolvent at omega = {}{:+}i, {} unknowns, {}", omega_.real(), omega_.imag(),
                impl_->sys->matrix().rows(), impl_->iterative ? "gmres" : "direct");
}

ResolventSolver::~ResolventSolver() = default;

bool ResolventSolver::reduced() const { return impl_->sys->reduced(); }

namespace {

ResolventSolve run_solve(const ResolventSolver& rs, const ShiftedSystem<cplx>& sys,
                         const ShiftedSystem<cplx>* ref, const CSpMat& le, const CSpMat& lh,
                         const FieldPair& f, cplx omega, bool conj, const SolverOptions& opts) {
  const auto& op = rs.op();
  if (f.E.size() != op.dofs().n_edges() || f.H.size() != op.dofs().n_faces())
    throw Error(ErrorCode::DimensionMismatch, "right-hand side does not match the dof map");
  if (!f.E.allFinite() || !f.H.allFinite()) throw Error(ErrorCode::BadParameters, "right-hand side not finite");

  ResolventSolve out;
  out.omega = omega;
  out.f = f;
  out.f_norm = op.ops().norm(f);
  const CVec ye = le * f.E;
  const CVec yh = -I_UNIT * (lh * f.H);
  CVec xe, xh;
  if (ref == nullptr) {
    sys.solve(ye, yh, xe, xh, conj);
    out.method = "direct";
    out.iterations = 1;
  } else {
    Eigen::GMRES<CSpMat, ShiftPreconditioner> gm;
    gm.set_restart(opts.restart);
    gm.setMaxIterations(opts.max_iterations);
    gm.setTolerance(0.1 * opts.tol);
    const CSpMat a = conj ? CSpMat(sys.matrix().conjugate()) : sys.matrix();
    gm.compute(a);
    gm.preconditioner().sys = ref;
    gm.preconditioner().conj = conj;
    const CVec z = gm.solve(sys.rhs(ye, yh, conj));
    sys.recover(z, yh, conj, xe, xh);
    out.method = "iterative";
    out.iterations = int(gm.iterations());
  }
  out.u = {xe, I_UNIT * xh};
  const double res = rs.residual(out.u, f, omega);
  out.rel_residual = out.f_norm > 0.0 ? res / out.f_norm : res;
  // one refinement step for the direct path
  if (ref == nullptr && out.rel_residual > opts.tol && out.f_norm > 0.0) {
    const FieldPair r = f - apply_shifted(op, omega, out.u, opts.absorber);
    const CVec re = le * r.E, rh = -I_UNIT * (lh * r.H);
    CVec de, dh;
    sys.solve(re, rh, de, dh, conj);
    out.u.E += de;
    out.u.H += I_UNIT * dh;
    out.rel_residual = rs.residual(out.u, f, omega) / out.f_norm;
    out.iterations = 2;
  }
  if (out.rel_residual > opts.tol)
    throw Error(ErrorCode::SolverStagnation,
                fmt::format("{} solve at omega = {}{:+}i stalled at relative residual {:.3e} (tol {:.1e})",
                            out.method, omega.real(), omega.imag(), out.rel_residual, opts.tol));
  out.u_norm = op.ops().norm(out.u);
  return out;
}

}  // namespace

ResolventSolve ResolventSolver::solve(const FieldPair& f) const {
  return run_solve(*this, *impl_->sys, impl_->ref.get(), impl_->le, impl_->lh, f, omega_, false, opts_);
}

ResolventSolve ResolventSolver::solve_conjugate(const FieldPair& f) const {
  if (!has_conjugate())
    throw Error(ErrorCode::BadParameters, "conjugate solve needs a real Lambda (absorber off)");
  return run_solve(*this, *impl_->sys, impl_->ref.get(), impl_->le, impl_->lh, f, std::conj(omega_),
                   true, opts_);
}

double ResolventSolver::residual(const FieldPair& u, const FieldPair& f, cplx omega) const {
  const double h3 = std::pow(op_->dofs().h(), 3);
  const FieldPair rot = op_->rot(u);
  FieldPair rho{I_UNIT * h3 * rot.E - omega * (impl_->le * u.E) - impl_->le * f.E,
                I_UNIT * h3 * rot.H - omega * (impl_->lh * u.H) - impl_->lh * f.H};
  const FieldPair lr = op_->ops().solve(rho);
  return std::sqrt(std::max(0.0, (rho.E.dot(lr.E) + rho.H.dot(lr.H)).real()));
}

ResolventSolve solve_resolvent(std::shared_ptr<const MaxwellOperator> op, cplx omega, const FieldPair& f,
                               double tol, SolverOptions opts) {
  opts.tol = tol;
  ResolventSolver rs(std::move(op), omega, opts);
  return rs.solve(f);
}

FieldPair apply_shifted(const MaxwellOperator& op, cplx omega, const FieldPair& u, const AbsorberSpec& absorber) {
  if (!absorber.enabled()) return op.apply(u) - omega * u;
  const auto& ops = op.ops();
  const CSpMat le = ops.absorbing_e(absorber), lh = ops.absorbing_h(absorber);
  if (!diagonal_matrix(le) || !diagonal_matrix(lh))
    throw Error(ErrorCode::BadParameters, "absorbing apply needs a diagonal Lambda");
  const double h3 = std::pow(op.dofs().h(), 3);
  const FieldPair rot = op.rot(u);
  return FieldPair{I_UNIT * h3 * rot.E.cwiseQuotient(le.diagonal()),
                   I_UNIT * h3 * rot.H.cwiseQuotient(lh.diagonal())} -
         omega * u;
}

double r_norm(const MaxwellOperator& op, const FieldPair& u) {
  const double h3 = std::pow(op.dofs().h(), 3);
  const FieldPair r = op.rot(u);
  return std::sqrt(h3 * (u.E.squaredNorm() + u.H.squaredNorm() + r.E.squaredNorm() + r.H.squaredNorm()));
}

ResolventProbe resolvent_norm_probe(std::shared_ptr<const MaxwellOperator> op, cplx omega, int samples,
                                    std::uint64_t seed, SolverOptions opts) {
  if (samples < 1) throw Error(ErrorCode::BadParameters, "need at least one probe sample");
  if (opts.absorber.enabled())
    throw Error(ErrorCode::BadParameters, "resolvent probe needs the self-adjoint operator");
  ResolventSolver rs(op, omega, opts);
  const auto& ops = op->ops();
  std::mt19937_64 rng(seed);
  FieldPair x = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
  x *= 1.0 / ops.norm(x);

  ResolventProbe p;
  p.omega = omega;
  p.bound = 1.0 / std::abs(omega.imag());
  for (int it = 0; it < samples; ++it) {
    const auto y = rs.solve(x);
    p.norm_estimate = std::max(p.norm_estimate, y.u_norm);
    p.c_emp = std::max(p.c_emp, r_norm(*op, y.u) * std::abs(omega.imag()) / ((1.0 + std::abs(omega)) * y.f_norm));
    p.iterations = it + 1;
    // the Lambda-adjoint of (M_h - omega)^-1 is (M_h - conj omega)^-1
    FieldPair z = rs.solve_conjugate(y.u).u;
    const double nz = ops.norm(z);
    if (nz == 0.0) break;
    z *= 1.0 / nz;
    if ((z - x).coeff_norm() < 1e-12 * x.coeff_norm()) break;
    x = std::move(z);
  }
  return p;
}

FieldPair project_out_kernel(const FieldPair& f, const KernelBasis& basis, const BlockOperators& ops) {
  FieldPair r = f;
  if (basis.vectors.empty()) return r;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& v : basis.vectors) r -= ops.inner(r, v) * v;
  return r;
}

namespace {

// B-orthonormalize the columns of X against V (columns [0, nv)) and among
// themselves; returns the number of columns kept.
int b_orthonormalize(RMat& v, int nv, RMat x, const SpMat& b, double drop) {
  int kept = 0;
  for (int j = 0; j < x.cols(); ++j) {
    RVec w = x.col(j);
    const double w0 = std::sqrt(w.dot(b * w));
    if (w0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      const RVec bw = b * w;
      const int cur = nv + kept;
      if (cur > 0) w -= v.leftCols(cur) * (v.leftCols(cur).transpose() * bw);
    }
    const double nw = std::sqrt(std::max(0.0, w.dot(b * w)));
    if (nw <= drop * w0) continue;
    if (nv + kept >= v.cols()) v.conservativeResize(Eigen::NoChange, v.cols() + x.cols());
    v.col(nv + kept) = w / nw;
    ++kept;
  }
  return kept;
}

}  // namespace

KernelBasis eigensolve_near(std::shared_ptr<const MaxwellOperator> op, double omega0, int k,
                            const EigenOptions& opts) {
  if (k < 1) throw Error(ErrorCode::BadParameters, "eigensolve needs k >= 1");
  const auto& ops = op->ops();
  const auto& dm = op->dofs();
  const Id ne = dm.n_edges(), nf = dm.n_faces(), n = ne + nf;
  const double h3 = std::pow(dm.h(), 3);

  // real pencil in the H = i H' variables
  std::vector<Eigen::Triplet<double>> ts;
  const SpMat& c = op->curl();
  for (int col = 0; col < c.outerSize(); ++col)
    for (SpMat::InnerIterator it(c, col); it; ++it) {
      ts.emplace_back(ne + it.row(), it.col(), h3 * it.value());
      ts.emplace_back(it.col(), ne + it.row(), h3 * it.value());
    }
  SpMat s(n, n), b(n, n);
  s.setFromTriplets(ts.begin(), ts.end());
  std::vector<Eigen::Triplet<double>> tb;
  for (const auto* m : {&ops.lambda_e(), &ops.lambda_h()}) {
    const Id off = m == &ops.lambda_e() ? 0 : ne;
    for (int col = 0; col < m->outerSize(); ++col)
      for (SpMat::InnerIterator it(*m, col); it; ++it) tb.emplace_back(off + it.row(), off + it.col(), it.value());
  }
  b.setFromTriplets(tb.begin(), tb.end());

  ShiftedSystem<double> sys(c, ops.lambda_e(), ops.lambda_h(), h3, omega0);
  try {
    sys.factorize();
  } catch (const Error&) {
    throw Error(ErrorCode::ConvergenceFailure, fmt::format("shift {} is an exact eigenvalue", omega0));
  }
  auto op_inv = [&](const RMat& x) {
    RMat y(n, x.cols());
    for (int j = 0; j < x.cols(); ++j) {
      const RVec bx = b * x.col(j);
      RVec xe, xh;
      sys.solve(bx.head(ne), bx.tail(nf), xe, xh);
      y.col(j) << xe, xh;
    }
    return y;
  };
  // ||(S - lambda B) x||_{B^-1} with B^-1 applied blockwise
  auto pencil_residual = [&](const RVec& x, double lambda) {
    const RVec r = s * x - lambda * (b * x);
    FieldPair rp{r.head(ne).cast<cplx>(), r.tail(nf).cast<cplx>()};
    const FieldPair q = ops.solve(rp);
    return std::sqrt(std::max(0.0, (rp.E.dot(q.E) + rp.H.dot(q.H)).real()));
  };

  const int p = opts.block > 0 ? opts.block : std::max(k + 2, 6);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> nd;
  RMat x(n, p);
  for (Id i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) x(i, j) = nd(rng);
  // drop the static kernel's dominance by starting from OP x
  x = op_inv(x);

  std::vector<double> lam;
  RMat ritz;
  std::vector<double> res;
  bool converged = false;
  const double zero_tol = 1e-6 * std::max(1.0, std::abs(omega0));
  for (int restart = 0; restart < opts.max_restarts && !converged; ++restart) {
    RMat v(n, p * (opts.krylov_steps + 1));
    int nv = b_orthonormalize(v, 0, x, b, 1e-10);
    int start = 0;
    for (int step = 0; step < opts.krylov_steps; ++step) {
      const RMat y = op_inv(v.middleCols(start, nv - start));
      start = nv;
      nv += b_orthonormalize(v, nv, y, b, 1e-10);
      if (nv == start) break;
    }
    v.conservativeResize(Eigen::NoChange, nv);
    const RMat t = v.transpose() * (s * v);
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (t + t.transpose()));
    std::vector<int> order(nv);
    std::iota(order.begin(), order.end(), 0);
    const auto& ev = es.eigenvalues();
    // skip the static kernel (lambda = 0)
    order.erase(std::remove_if(order.begin(), order.end(), [&](int i) { return std::abs(ev[i]) < zero_tol; }),
                order.end());
    std::sort(order.begin(), order.end(),
              [&](int a, int bb) { return std::abs(ev[a] - omega0) < std::abs(ev[bb] - omega0); });
    const int m = std::min<int>(p, int(order.size()));
    lam.assign(m, 0.0);
    res.assign(m, 0.0);
    ritz.resize(n, m);
    for (int j = 0; j < m; ++j) {
      lam[j] = ev[order[j]];
      ritz.col(j) = v * es.eigenvectors().col(order[j]);
      res[j] = pencil_residual(ritz.col(j), lam[j]);
    }
    converged = m >= std::min(k, m) && m > 0;
    for (int j = 0; j < std::min(k, m); ++j)
      if (res[j] > opts.tol * std::max(1.0, std::abs(lam[j]))) converged = false;
    spdlog::debug("eigensolve restart {}: nv = {}, lambda0 = {}, res0 = {:.2e}", restart, nv,
                  m ? lam[0] : 0.0, m ? res[0] : 0.0);
    x = ritz;
  }
  if (!converged)
    throw Error(ErrorCode::ConvergenceFailure,
                fmt::format("no converged eigenpairs near {} after {} restarts", omega0, opts.max_restarts));

  KernelBasis kb;
  kb.omega = omega0;
  kb.kernel_tol = opts.kernel_tol;
  const auto& epos = dm.positions(Location::Edge);
  const auto& fpos = dm.positions(Location::Face);
  const double half = 0.5 * dm.grid().r_max();
  const int m = std::min<int>(k, int(lam.size()));
  for (int j = 0; j < m; ++j) {
    EigenPair ep;
    ep.lambda = lam[j];
    const RVec xj = ritz.col(j);
    ep.v = FieldPair{xj.head(ne).cast<cplx>(), I_UNIT * xj.tail(nf).cast<cplx>()};
    ep.v *= 1.0 / ops.norm(ep.v);
    const cplx rq = ops.inner(op->apply(ep.v), ep.v) / ops.inner(ep.v, ep.v);
    ep.rq_imag = rq.imag();
    ep.residual = ops.norm(op->apply(ep.v) - cplx(ep.lambda) * ep.v);
    ep.kernel_residual = ops.norm(op->apply(ep.v) - cplx(omega0) * ep.v);
    double inner = 0.0, outer = 0.0;
    for (Id i = 0; i < ne; ++i) (epos[i].norm() > half ? outer : inner) += std::norm(ep.v.E[i]);
    for (Id i = 0; i < nf; ++i) (fpos[i].norm() > half ? outer : inner) += std::norm(ep.v.H[i]);
    ep.localization = inner > 0.0 ? std::sqrt(outer / inner) : std::numeric_limits<double>::infinity();
    ep.truncation_artifact = !(ep.localization < opts.localization_limit);
    if (ep.kernel_residual <= opts.kernel_tol && !ep.truncation_artifact) {
      kb.vectors.push_back(ep.v);
      kb.residuals.push_back(ep.kernel_residual);
    }
    kb.pairs.push_back(std::move(ep));
  }
  // keep the basis Lambda-orthonormal across degenerate pairs
  for (std::size_t i = 0; i < kb.vectors.size(); ++i) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < i; ++j) kb.vectors[i] -= ops.inner(kb.vectors[i], kb.vectors[j]) * kb.vectors[j];
    kb.vectors[i] *= 1.0 / ops.norm(kb.vectors[i]);
  }
  return kb;
}

}  // namespace limabs

#include "kvwave/discretization.hpp"

#include <cmath>
#include <sstream>

#include "kvwave/error.hpp"

namespace kvwave {

namespace {

cplx dot(std::span<const cplx> y, std::span<const cplx> x) {
  cplx acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(y[i]) * x[i];
  return acc;
}

void check_size(const StateBlock& x, std::size_t m, const char* what) {
  if (x.u.size() != m || x.v.size() != m || x.w.size() != m || x.z.size() != m)
    throw Error(ErrorCode::DimensionMismatch, what);
}

void axpy(CVec& y, cplx a, const CVec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

Mesh::Mesh(std::size_t elements) : N(elements) {
  if (N < 2 || N % 2 != 0) throw Error(ErrorCode::InvalidMesh, "element count must be even and >= 2");
  h = 2.0 / static_cast<double>(N);
  nodes.resize(N + 1);
  for (std::size_t i = 0; i <= N; ++i) nodes[i] = -1.0 + h * static_cast<double>(i);
  nodes[N / 2] = 0.0;
  nodes[N] = 1.0;
  interface_index = N / 2;
}

std::size_t Mesh::node_at(double x) const {
  double t = (x + 1.0) / h;
  double r = std::round(t);
  if (r < 0.0 || r > static_cast<double>(N) || std::abs(t - r) > 1e-9) return npos;
  return static_cast<std::size_t>(r);
}

GramMatrices assemble(const Mesh& mesh, const ModelParams& params) {
  const auto& sup = params.damping_support;
  std::size_t lo = mesh.node_at(sup.lo);
  std::size_t hi = mesh.node_at(sup.hi);
  if (lo == Mesh::npos || hi == Mesh::npos) {
    std::ostringstream os;
    os << "support [" << sup.lo << ", " << sup.hi << "] does not fall on nodes of N=" << mesh.N;
    throw Error(ErrorCode::MisalignedSupport, os.str());
  }

  const std::size_t m = mesh.interior();
  const double h = mesh.h;
  GramMatrices g;
  g.h = h;
  g.mass = {std::vector<double>(m, 2.0 * h / 3.0), std::vector<double>(m - 1, h / 6.0)};
  g.stiffness = {std::vector<double>(m, 2.0 / h), std::vector<double>(m - 1, -1.0 / h)};
  g.damping = {std::vector<double>(m, 0.0), std::vector<double>(m - 1, 0.0)};

  // element e spans nodes e and e+1; interior node i is global node i+1
  if (params.d != 0.0) {
    const double k = params.d / h;
    for (std::size_t e = lo; e < hi; ++e) {
      bool left = e >= 1 && e <= m;
      bool right = e + 1 <= m;
      if (left) g.damping.diag[e - 1] += k;
      if (right) g.damping.diag[e] += k;
      if (left && right) g.damping.off[e - 1] -= k;
    }
  }
  g.mass_chol = TridiagCholesky(g.mass);
  g.stiffness_chol = TridiagCholesky(g.stiffness);
  return g;
}

StateBlock& StateBlock::operator+=(const StateBlock& o) {
  check_size(o, size(), "state add");
  axpy(u, 1.0, o.u);
  axpy(v, 1.0, o.v);
  axpy(w, 1.0, o.w);
  axpy(z, 1.0, o.z);
  return *this;
}

StateBlock& StateBlock::operator-=(const StateBlock& o) {
  check_size(o, size(), "state subtract");
  axpy(u, -1.0, o.u);
  axpy(v, -1.0, o.v);
  axpy(w, -1.0, o.w);
  axpy(z, -1.0, o.z);
  return *this;
}

StateBlock& StateBlock::operator*=(cplx s) {
  for (auto* f : {&u, &v, &w, &z})
    for (auto& x : *f) x *= s;
  return *this;
}

StateBlock operator+(StateBlock a, const StateBlock& b) { return a += b; }
StateBlock operator-(StateBlock a, const StateBlock& b) { return a -= b; }
StateBlock operator*(cplx s, StateBlock a) { return a *= s; }

StateBlock generator_apply(const StateBlock& x, const GramMatrices& g, const ModelParams& p) {
  const std::size_t m = g.size();
  check_size(x, m, "generator_apply");
  StateBlock y(m);
  y.u = x.w;
  y.v = x.z;
  CVec fu = g.stiffness.apply(x.u);
  g.damping.apply_add(x.w, fu);
  CVec mu = g.mass_chol.solve(fu);
  CVec mv = g.mass_chol.solve(g.stiffness.apply(x.v));
  for (std::size_t i = 0; i < m; ++i) {
    y.w[i] = -mu[i] - x.z[i];
    y.z[i] = -p.c * mv[i] + x.w[i];
  }
  return y;
}

cplx energy_inner(const StateBlock& x, const StateBlock& y, const GramMatrices& g,
                  const ModelParams& p) {
  const std::size_t m = g.size();
  check_size(x, m, "energy_inner");
  check_size(y, m, "energy_inner");
  return dot(y.u, g.stiffness.apply(x.u)) + p.c * dot(y.v, g.stiffness.apply(x.v)) +
         dot(y.w, g.mass.apply(x.w)) + dot(y.z, g.mass.apply(x.z));
}

double energy_norm(const StateBlock& x, const GramMatrices& g, const ModelParams& p) {
  return std::sqrt(std::max(0.0, energy_inner(x, x, g, p).real()));
}

double discrete_energy(const StateBlock& x, const GramMatrices& g, const ModelParams& p) {
  return 0.5 * energy_inner(x, x, g, p).real();
}

double dissipation_rate(const StateBlock& x, const GramMatrices& g) {
  return dot(x.w, g.damping.apply(x.w)).real();
}

StateBlock energy_gram_apply(const StateBlock& x, const GramMatrices& g, const ModelParams& p) {
  check_size(x, g.size(), "energy_gram_apply");
  StateBlock y;
  y.u = g.stiffness.apply(x.u);
  y.v = g.stiffness.apply(x.v);
  for (auto& e : y.v) e *= p.c;
  y.w = g.mass.apply(x.w);
  y.z = g.mass.apply(x.z);
  return y;
}

StateBlock energy_gram_solve(const StateBlock& x, const GramMatrices& g, const ModelParams& p) {
  check_size(x, g.size(), "energy_gram_solve");
  StateBlock y;
  y.u = g.stiffness_chol.solve(x.u);
  y.v = g.stiffness_chol.solve(x.v);
  for (auto& e : y.v) e /= p.c;
  y.w = g.mass_chol.solve(x.w);
  y.z = g.mass_chol.solve(x.z);
  return y;
}

// Eliminating w = s u - F_u and z = s v - F_v leaves
//   (s^2 M + K + s Ka) u + s M v = M F_w + s M F_u + Ka F_u + M F_v
//   -s M u + (s^2 M + c K) v     = M F_z + s M F_v - M F_u
// stored with unknowns interleaved as (u_0, v_0, u_1, v_1, ...).
ShiftedSolver::ShiftedSolver(cplx s, const GramMatrices& g, const ModelParams& p)
    : s_(s), g_(&g), p_(p), lu_(2 * g.size(), 3, 3) {
  const std::size_t m = g.size();
  const cplx s2 = s * s;
  const auto& M = g.mass;
  const auto& K = g.stiffness;
  const auto& Ka = g.damping;
  auto put = [&](std::size_t i, std::size_t j, double mij, double kij, double kaij) {
    lu_.at(2 * i, 2 * j) = s2 * mij + kij + s * kaij;
    lu_.at(2 * i, 2 * j + 1) = s * mij;
    lu_.at(2 * i + 1, 2 * j) = -s * mij;
    lu_.at(2 * i + 1, 2 * j + 1) = s2 * mij + p.c * kij;
  };
  for (std::size_t i = 0; i < m; ++i) {
    put(i, i, M.diag[i], K.diag[i], Ka.diag[i]);
    if (i + 1 < m) {
      put(i, i + 1, M.off[i], K.off[i], Ka.off[i]);
      put(i + 1, i, M.off[i], K.off[i], Ka.off[i]);
    }
  }
  lu_.factor();
}

StateBlock ShiftedSolver::raw_solve(const StateBlock& f) const {
  const std::size_t m = g_->size();
  const auto& M = g_->mass;
  CVec ru = M.apply(f.w);
  M.apply_add(f.u, ru, s_);
  g_->damping.apply_add(f.u, ru);
  M.apply_add(f.v, ru);
  CVec rv = M.apply(f.z);
  M.apply_add(f.v, rv, s_);
  M.apply_add(f.u, rv, -1.0);

  CVec b(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    b[2 * i] = ru[i];
    b[2 * i + 1] = rv[i];
  }
  lu_.solve_in_place(b);

  StateBlock x(m);
  for (std::size_t i = 0; i < m; ++i) {
    x.u[i] = b[2 * i];
    x.v[i] = b[2 * i + 1];
    x.w[i] = s_ * x.u[i] - f.u[i];
    x.z[i] = s_ * x.v[i] - f.v[i];
  }
  return x;
}

StateBlock ShiftedSolver::residual(const StateBlock& x, const StateBlock& f) const {
  const std::size_t m = g_->size();
  const auto& M = g_->mass;
  StateBlock r(m);
  CVec yw(m), yz(m), tw(m), tz(m);
  for (std::size_t i = 0; i < m; ++i) {
    r.u[i] = f.u[i] - (s_ * x.u[i] - x.w[i]);
    r.v[i] = f.v[i] - (s_ * x.v[i] - x.z[i]);
    tw[i] = f.w[i] - s_ * x.w[i] - x.z[i];
    tz[i] = f.z[i] - s_ * x.z[i] + x.w[i];
  }
  M.apply_add(tw, yw);
  g_->stiffness.apply_add(x.u, yw, -1.0);
  g_->damping.apply_add(x.w, yw, -1.0);
  M.apply_add(tz, yz);
  g_->stiffness.apply_add(x.v, yz, -p_.c);
  r.w = g_->mass_chol.solve(yw);
  r.z = g_->mass_chol.solve(yz);
  return r;
}

double ShiftedSolver::residual_norm(const StateBlock& x, const StateBlock& f) const {
  return energy_norm(residual(x, f), *g_, p_);
}

StateBlock ShiftedSolver::solve(const StateBlock& f) const {
  check_size(f, g_->size(), "shifted_solve");
  const double fnorm = energy_norm(f, *g_, p_);
  StateBlock x = raw_solve(f);
  if (fnorm == 0.0) return x;
  double res = 0.0;
  for (int pass = 0; pass < 3; ++pass) {
    StateBlock r = residual(x, f);
    res = energy_norm(r, *g_, p_);
    if (res <= residual_tol * fnorm) return x;
    if (pass < 2) x += raw_solve(r);
  }
  std::ostringstream os;
  os << "relative residual " << res / fnorm << " at shift " << s_;
  throw Error(ErrorCode::ResidualTooLarge, os.str());
}

// R = Q1 S^{-1} P + Q2 with P F = (r_u, r_v), Q1 (u, v) = (u, v, s u, s v) and
// Q2 F = (0, 0, -F_u, -F_v); the adjoint is assembled term by term.
StateBlock ShiftedSolver::adjoint_apply(const StateBlock& y) const {
  const std::size_t m = g_->size();
  check_size(y, m, "adjoint_apply");
  const auto& M = g_->mass;
  const cplx sb = std::conj(s_);
  StateBlock hy = energy_gram_apply(y, *g_, p_);

  CVec b(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    b[2 * i] = hy.u[i] + sb * hy.w[i];
    b[2 * i + 1] = hy.v[i] + sb * hy.z[i];
  }
  lu_.solve_adjoint_in_place(b);
  CVec pu(m), pv(m);
  for (std::size_t i = 0; i < m; ++i) {
    pu[i] = b[2 * i];
    pv[i] = b[2 * i + 1];
  }

  StateBlock out(m);
  M.apply_add(pu, out.u, sb);
  g_->damping.apply_add(pu, out.u);
  M.apply_add(pv, out.u, -1.0);
  M.apply_add(pu, out.v);
  M.apply_add(pv, out.v, sb);
  M.apply_add(pu, out.w);
  M.apply_add(pv, out.z);
  for (std::size_t i = 0; i < m; ++i) {
    out.u[i] -= hy.w[i];
    out.v[i] -= hy.z[i];
  }
  return energy_gram_solve(out, *g_, p_);
}

StateBlock shifted_solve(cplx s, const StateBlock& f, const GramMatrices& g, const ModelParams& p) {
  ShiftedSolver solver(s, g, p);
  return solver.solve(f);
}

}  // namespace kvwave

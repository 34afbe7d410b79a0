#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "kvwave/linalg.hpp"
#include "kvwave/model.hpp"

namespace kvwave {

struct Mesh {
  std::size_t N = 0;  // element count, even
  double h = 0.0;
  std::vector<double> nodes;  // N+1 nodes on [-1, 1]
  std::size_t interface_index = 0;

  explicit Mesh(std::size_t elements);

  std::size_t interior() const { return N - 1; }
  // Node index for a point that lies on the grid, or npos.
  std::size_t node_at(double x) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// P1 Gram matrices on interior nodes, with cached factorizations of the
// mass and stiffness matrices.
struct GramMatrices {
  double h = 0.0;
  SymTridiag mass;
  SymTridiag stiffness;
  SymTridiag damping;
  TridiagCholesky mass_chol;
  TridiagCholesky stiffness_chol;

  std::size_t size() const { return mass.size(); }
};

GramMatrices assemble(const Mesh& mesh, const ModelParams& params);

// Nodal values (u, v, u_t, v_t) on interior nodes.
struct StateBlock {
  CVec u, v, w, z;

  StateBlock() = default;
  explicit StateBlock(std::size_t m) : u(m), v(m), w(m), z(m) {}

  std::size_t size() const { return u.size(); }

  StateBlock& operator+=(const StateBlock& o);
  StateBlock& operator-=(const StateBlock& o);
  StateBlock& operator*=(cplx s);
};

StateBlock operator+(StateBlock a, const StateBlock& b);
StateBlock operator-(StateBlock a, const StateBlock& b);
StateBlock operator*(cplx s, StateBlock a);

StateBlock generator_apply(const StateBlock& x, const GramMatrices& g, const ModelParams& p);
cplx energy_inner(const StateBlock& x, const StateBlock& y, const GramMatrices& g,
                  const ModelParams& p);
double energy_norm(const StateBlock& x, const GramMatrices& g, const ModelParams& p);
double discrete_energy(const StateBlock& x, const GramMatrices& g, const ModelParams& p);
// w^* Ka w, the rate at which energy is removed.
double dissipation_rate(const StateBlock& x, const GramMatrices& g);

// H X and H^{-1} X for the block-diagonal energy Gram operator.
StateBlock energy_gram_apply(const StateBlock& x, const GramMatrices& g, const ModelParams& p);
StateBlock energy_gram_solve(const StateBlock& x, const GramMatrices& g, const ModelParams& p);

// Factorization of (s I - A_h) reduced to the interleaved (u, v) system.
class ShiftedSolver {
 public:
  ShiftedSolver(cplx s, const GramMatrices& g, const ModelParams& p);

  cplx shift() const { return s_; }

  // Solves (s I - A_h) X = F with an H-norm residual check and up to two
  // steps of iterative refinement.
  StateBlock solve(const StateBlock& f) const;
  // Residual F - (s I - A_h) X measured in the energy norm.
  double residual_norm(const StateBlock& x, const StateBlock& f) const;
  // H-adjoint of the resolvent, H^{-1} R^* H Y.
  StateBlock adjoint_apply(const StateBlock& y) const;

  double residual_tol = 1e-9;

 private:
  StateBlock raw_solve(const StateBlock& f) const;
  StateBlock residual(const StateBlock& x, const StateBlock& f) const;

  cplx s_;
  const GramMatrices* g_;
  ModelParams p_;
  BandedLU lu_;
};

StateBlock shifted_solve(cplx s, const StateBlock& f, const GramMatrices& g, const ModelParams& p);

}  // namespace kvwave

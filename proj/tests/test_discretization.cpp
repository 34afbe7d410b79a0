#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kvwave/error.hpp"
#include "support.hpp"

using namespace kvwave;
using kvtest::random_state;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("mesh") {
  Mesh m(8);
  CHECK(m.h == doctest::Approx(0.25));
  CHECK(m.interior() == 7);
  CHECK(m.nodes[m.interface_index] == 0.0);
  CHECK(m.node_at(0.5) == 6);
  CHECK(m.node_at(0.3) == Mesh::npos);
  CHECK_THROWS_AS(Mesh(7), Error);
  CHECK_THROWS_AS(Mesh(0), Error);
}

TEST_CASE("hand assembly at N = 2") {
  Mesh m(2);
  GramMatrices g = assemble(m, ModelParams{4.0, 1.5, {0.0, 1.0}});
  REQUIRE(g.size() == 1);
  CHECK(g.stiffness.diag[0] == doctest::Approx(2.0));
  CHECK(g.mass.diag[0] == doctest::Approx(2.0 / 3.0));
  // only the element [0, 1] is damped and it carries 1/h on its left node
  CHECK(g.damping.diag[0] == doctest::Approx(1.5));

  StateBlock x(1);
  x.u[0] = 1.0;
  CHECK(energy_norm(x, g, ModelParams{}) * energy_norm(x, g, ModelParams{}) == doctest::Approx(2.0));
}

TEST_CASE("hand assembly at N = 4") {
  Mesh m(4);
  GramMatrices g = assemble(m, ModelParams{4.0, 2.0, {0.0, 1.0}});
  // interior nodes at -0.5, 0, 0.5 with h = 0.5
  CHECK(g.stiffness.diag == std::vector<double>{4.0, 4.0, 4.0});
  CHECK(g.stiffness.off == std::vector<double>{-2.0, -2.0});
  CHECK(g.mass.diag[1] == doctest::Approx(1.0 / 3.0));
  CHECK(g.mass.off[0] == doctest::Approx(1.0 / 12.0));
  CHECK(g.damping.diag[0] == 0.0);
  CHECK(g.damping.diag[1] == doctest::Approx(4.0));
  CHECK(g.damping.diag[2] == doctest::Approx(8.0));
  CHECK(g.damping.off[0] == 0.0);
  CHECK(g.damping.off[1] == doctest::Approx(-4.0));
}

TEST_CASE("damping matrix special cases") {
  Mesh m(16);
  GramMatrices g0 = assemble(m, ModelParams{4.0, 0.0, {0.0, 1.0}});
  for (double v : g0.damping.diag) CHECK(v == 0.0);
  for (double v : g0.damping.off) CHECK(v == 0.0);

  GramMatrices full = assemble(m, ModelParams{4.0, 3.0, {-1.0, 1.0}});
  for (std::size_t i = 0; i < full.size(); ++i) CHECK(full.damping.diag[i] == doctest::Approx(3.0 * full.stiffness.diag[i]));
  for (std::size_t i = 0; i + 1 < full.size(); ++i)
    CHECK(full.damping.off[i] == doctest::Approx(3.0 * full.stiffness.off[i]));

  CHECK_THROWS_AS(assemble(Mesh(6), ModelParams{4.0, 1.0, {0.0, 0.5}}), Error);
}

TEST_CASE("generator of the zero state") {
  Mesh m(8);
  ModelParams p;
  GramMatrices g = assemble(m, p);
  StateBlock y = generator_apply(StateBlock(g.size()), g, p);
  for (auto v : y.u) CHECK(v == cplx(0.0));
  for (auto v : y.z) CHECK(v == cplx(0.0));
}

TEST_CASE("dissipativity identity") {
  std::mt19937_64 rng(7);
  for (std::size_t N : {4, 16, 64}) {
    for (double d : {0.0, 1.0, 5.0}) {
      ModelParams p{4.0, d, {0.0, 1.0}};
      Mesh m(N);
      GramMatrices g = assemble(m, p);
      for (int k = 0; k < 20; ++k) {
        StateBlock x = random_state(g.size(), rng);
        double lhs = energy_inner(generator_apply(x, g, p), x, g, p).real();
        double scale = energy_norm(x, g, p) * energy_norm(generator_apply(x, g, p), g, p);
        CHECK(std::abs(lhs + dissipation_rate(x, g)) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("energy inner product") {
  std::mt19937_64 rng(11);
  Mesh m(16);
  ModelParams p;
  GramMatrices g = assemble(m, p);
  StateBlock zero(g.size());
  CHECK(energy_inner(zero, zero, g, p) == cplx(0.0));
  for (int k = 0; k < 5; ++k) {
    StateBlock x = random_state(g.size(), rng), y = random_state(g.size(), rng);
    cplx a = energy_inner(x, y, g, p), b = energy_inner(y, x, g, p);
    CHECK(std::abs(a - std::conj(b)) <= 1e-13 * std::abs(a));
    CHECK(discrete_energy(x, g, p) == doctest::Approx(0.5 * energy_norm(x, g, p) * energy_norm(x, g, p)));
    StateBlock back = energy_gram_solve(energy_gram_apply(x, g, p), g, p);
    CHECK(energy_norm(back - x, g, p) <= 1e-12 * energy_norm(x, g, p));
  }
}

TEST_CASE("shifted solve of zero data") {
  Mesh m(16);
  ModelParams p;
  GramMatrices g = assemble(m, p);
  StateBlock x = shifted_solve(cplx(0.3, 2.0), StateBlock(g.size()), g, p);
  CHECK(energy_norm(x, g, p) == 0.0);
}

TEST_CASE("shifted solve against a dense LU oracle at N = 16") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> re(0.01, 3.0), im(-40.0, 40.0);
  Mesh m(16);
  ModelParams p;
  GramMatrices g = assemble(m, p);
  Eigen::MatrixXcd a = kvtest::dense_generator(g, p);
  for (int k = 0; k < 10; ++k) {
    cplx s(re(rng), im(rng));
    StateBlock f = random_state(g.size(), rng);
    Eigen::MatrixXcd shifted = s * Eigen::MatrixXcd::Identity(a.rows(), a.cols()) - a;
    Eigen::VectorXcd oracle = shifted.fullPivLu().solve(kvtest::flatten(f));
    Eigen::VectorXcd got = kvtest::flatten(shifted_solve(s, f, g, p));
    CHECK((got - oracle).norm() <= 1e-10 * oracle.norm());
  }
}

TEST_CASE("stationary solve is bounded uniformly in N") {
  ModelParams p;
  std::vector<double> ratios;
  for (std::size_t N : {32, 64, 128, 256}) {
    Mesh m(N);
    GramMatrices g = assemble(m, p);
    // the same smooth field sampled on each mesh
    StateBlock f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      double x = m.nodes[i + 1];
      f.u[i] = std::sin(M_PI * (x + 1.0));
      f.z[i] = std::cos(M_PI * x / 2.0);
    }
    StateBlock x = shifted_solve(0.0, f, g, p);
    ratios.push_back(energy_norm(x, g, p) / energy_norm(f, g, p));
  }
  for (double r : ratios) CHECK(rel(r, ratios.back()) < 0.01);
}

TEST_CASE("residual check and refinement") {
  std::mt19937_64 rng(5);
  Mesh m(64);
  ModelParams p;
  GramMatrices g = assemble(m, p);
  ShiftedSolver s(cplx(0.0, 25.0), g, p);
  StateBlock f = random_state(g.size(), rng);
  StateBlock x = s.solve(f);
  CHECK(s.residual_norm(x, f) <= 1e-9 * energy_norm(f, g, p));
}

TEST_CASE("adjoint of the resolvent in the energy inner product") {
  std::mt19937_64 rng(9);
  for (std::size_t N : {8, 64}) {
    Mesh m(N);
    ModelParams p;
    GramMatrices g = assemble(m, p);
    for (cplx s : {cplx(0.0, 0.0), cplx(0.0, 12.6), cplx(0.5, -3.0)}) {
      ShiftedSolver solver(s, g, p);
      StateBlock x = random_state(g.size(), rng), y = random_state(g.size(), rng);
      cplx lhs = energy_inner(solver.solve(x), y, g, p);
      cplx rhs = energy_inner(x, solver.adjoint_apply(y), g, p);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
    }
  }
}

TEST_CASE("banded LU against dense solves") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> nd;
  const std::size_t n = 12, kl = 2, ku = 3;
  BandedLU lu(n, kl, ku);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i > kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j) {
      cplx v(nd(rng), nd(rng));
      lu.at(i, j) = v;
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  lu.factor();
  Eigen::VectorXcd b = Eigen::VectorXcd::Random(n);
  CVec x(b.data(), b.data() + n), xa = x;
  lu.solve_in_place(x);
  lu.solve_adjoint_in_place(xa);
  Eigen::VectorXcd ref = a.fullPivLu().solve(b), refa = a.adjoint().fullPivLu().solve(b);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(x[i] - ref(static_cast<Eigen::Index>(i))) <= 1e-10 * ref.norm());
    CHECK(std::abs(xa[i] - refa(static_cast<Eigen::Index>(i))) <= 1e-10 * refa.norm());
  }

  BandedLU singular(3, 1, 1);
  singular.at(0, 0) = 1.0;
  singular.at(1, 1) = 1.0;
  CHECK_THROWS_AS(singular.factor(), Error);
}

TEST_CASE("tridiagonal Cholesky") {
  SymTridiag a{{4.0, 5.0, 6.0}, {1.0, -2.0}};
  TridiagCholesky chol(a);
  CVec b{1.0, cplx(0.0, 2.0), -1.0};
  CVec x = chol.solve(b);
  CVec back = a.apply(x);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(back[i] - b[i]) < 1e-14);
  CHECK_THROWS_AS(TridiagCholesky(SymTridiag{{1.0, 1.0}, {1.0}}), Error);
}

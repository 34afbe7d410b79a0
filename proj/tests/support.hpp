#pragma once

#include <Eigen/Dense>
#include <functional>
#include <random>

#include "kvwave/discretization.hpp"

namespace kvtest {

using kvwave::cplx;
using kvwave::StateBlock;

inline Eigen::VectorXcd flatten(const StateBlock& x) {
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::VectorXcd v(4 * m);
  const kvwave::CVec* f[4] = {&x.u, &x.v, &x.w, &x.z};
  for (int b = 0; b < 4; ++b)
    for (Eigen::Index i = 0; i < m; ++i) v(b * m + i) = (*f[b])[static_cast<std::size_t>(i)];
  return v;
}

inline StateBlock unflatten(const Eigen::VectorXcd& v) {
  const auto m = v.size() / 4;
  StateBlock x(static_cast<std::size_t>(m));
  kvwave::CVec* f[4] = {&x.u, &x.v, &x.w, &x.z};
  for (int b = 0; b < 4; ++b)
    for (Eigen::Index i = 0; i < m; ++i) (*f[b])[static_cast<std::size_t>(i)] = v(b * m + i);
  return x;
}

// Dense matrix of a linear map on states, column by column.
inline Eigen::MatrixXcd dense(const std::function<StateBlock(const StateBlock&)>& op, std::size_t m) {
  const auto n = static_cast<Eigen::Index>(4 * m);
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e(j) = 1.0;
    out.col(j) = flatten(op(unflatten(e)));
  }
  return out;
}

inline Eigen::MatrixXcd dense_generator(const kvwave::GramMatrices& g, const kvwave::ModelParams& p) {
  return dense([&](const StateBlock& x) { return kvwave::generator_apply(x, g, p); }, g.size());
}

inline Eigen::MatrixXcd dense_gram(const kvwave::GramMatrices& g, const kvwave::ModelParams& p) {
  return dense([&](const StateBlock& x) { return kvwave::energy_gram_apply(x, g, p); }, g.size());
}

// Largest singular value of (i beta - A) in the energy geometry: with H = L L^*
// it is the 2-norm of L^* R L^{-*}.
inline double dense_resolvent_norm(double beta, const kvwave::GramMatrices& g, const kvwave::ModelParams& p) {
  Eigen::MatrixXcd a = dense_generator(g, p);
  Eigen::MatrixXcd h = dense_gram(g, p);
  const auto n = a.rows();
  Eigen::MatrixXcd shifted = cplx(0.0, beta) * Eigen::MatrixXcd::Identity(n, n) - a;
  Eigen::MatrixXcd r = shifted.partialPivLu().inverse();
  Eigen::LLT<Eigen::MatrixXcd> llt(h);
  Eigen::MatrixXcd lstar = llt.matrixU();
  Eigen::MatrixXcd weighted = lstar * r * lstar.inverse();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(weighted);
  return svd.singularValues()(0);
}

inline StateBlock random_state(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  StateBlock x(m);
  for (kvwave::CVec* f : {&x.u, &x.v, &x.w, &x.z})
    for (auto& e : *f) e = {nd(rng), nd(rng)};
  return x;
}

}  // namespace kvtest

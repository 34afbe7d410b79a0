#include "kvwave/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kvwave/error.hpp"

namespace kvwave {

CVec SymTridiag::apply(std::span<const cplx> x) const {
  CVec y(size());
  apply_add(x, y);
  return y;
}

void SymTridiag::apply_add(std::span<const cplx> x, std::span<cplx> y, cplx scale) const {
  const std::size_t n = size();
  if (x.size() != n || y.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "tridiagonal apply");
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = diag[i] * x[i];
    if (i > 0) acc += off[i - 1] * x[i - 1];
    if (i + 1 < n) acc += off[i] * x[i + 1];
    y[i] += scale * acc;
  }
}

TridiagCholesky::TridiagCholesky(const SymTridiag& a) : d_(a.size()), l_(a.size() > 0 ? a.size() - 1 : 0) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    double di = a.diag[i];
    if (i > 0) di -= l_[i - 1] * l_[i - 1] * d_[i - 1];
    if (!(di > 0.0)) throw Error(ErrorCode::SingularMass, "tridiagonal matrix is not positive definite");
    d_[i] = di;
    if (i + 1 < n) l_[i] = a.off[i] / di;
  }
}

CVec TridiagCholesky::solve(std::span<const cplx> b) const {
  const std::size_t n = d_.size();
  if (b.size() != n) throw Error(ErrorCode::DimensionMismatch, "tridiagonal solve");
  CVec x(b.begin(), b.end());
  for (std::size_t i = 1; i < n; ++i) x[i] -= l_[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= d_[i];
  for (std::size_t i = n; i-- > 1;) x[i - 1] -= l_[i - 1] * x[i];
  return x;
}

BandedLU::BandedLU(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), ab_(n * width_), piv_(n) {}

cplx& BandedLU::at(std::size_t i, std::size_t j) { return ab_[idx(i, j)]; }
cplx BandedLU::at(std::size_t i, std::size_t j) const { return ab_[idx(i, j)]; }

void BandedLU::factor(double pivot_tol) {
  std::vector<double> row_scale(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t j0 = i >= kl_ ? i - kl_ : 0;
    std::size_t j1 = std::min(n_ - 1, i + ku_);
    for (std::size_t j = j0; j <= j1; ++j) row_scale[i] = std::max(row_scale[i], std::abs(at(i, j)));
  }

  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t last_row = std::min(n_ - 1, k + kl_);
    std::size_t last_col = std::min(n_ - 1, k + kl_ + ku_);
    std::size_t p = k;
    double best = std::abs(at(k, k));
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      double v = std::abs(at(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > pivot_tol * row_scale[p])) {
      std::ostringstream os;
      os << "pivot " << best << " at column " << k << " below threshold";
      throw Error(ErrorCode::NearSingularShift, os.str());
    }
    piv_[k] = p;
    if (p != k) {
      for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
      std::swap(row_scale[k], row_scale[p]);
    }
    const cplx inv = 1.0 / at(k, k);
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      cplx l = at(i, k) * inv;
      at(i, k) = l;
      if (l == cplx{}) continue;
      for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= l * at(k, j);
    }
  }
  factored_ = true;
}

void BandedLU::solve_in_place(std::span<cplx> b) const {
  if (b.size() != n_) throw Error(ErrorCode::DimensionMismatch, "banded solve");
  for (std::size_t k = 0; k < n_; ++k) {
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    std::size_t last_row = std::min(n_ - 1, k + kl_);
    for (std::size_t i = k + 1; i <= last_row; ++i) b[i] -= at(i, k) * b[k];
  }
  for (std::size_t k = n_; k-- > 0;) {
    std::size_t last_col = std::min(n_ - 1, k + kl_ + ku_);
    cplx acc = b[k];
    for (std::size_t j = k + 1; j <= last_col; ++j) acc -= at(k, j) * b[j];
    b[k] = acc / at(k, k);
  }
}

void BandedLU::solve_adjoint_in_place(std::span<cplx> b) const {
  if (b.size() != n_) throw Error(ErrorCode::DimensionMismatch, "banded adjoint solve");
  // U^* y = b
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t first = k >= kl_ + ku_ ? k - kl_ - ku_ : 0;
    cplx acc = b[k];
    for (std::size_t j = first; j < k; ++j) acc -= std::conj(at(j, k)) * b[j];
    b[k] = acc / std::conj(at(k, k));
  }
  // then undo the elimination steps in reverse order
  for (std::size_t k = n_; k-- > 0;) {
    std::size_t last_row = std::min(n_ - 1, k + kl_);
    cplx acc = b[k];
    for (std::size_t i = k + 1; i <= last_row; ++i) acc -= std::conj(at(i, k)) * b[i];
    b[k] = acc;
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
  }
}

}  // namespace kvwave

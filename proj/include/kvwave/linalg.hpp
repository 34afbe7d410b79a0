#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace kvwave {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Real symmetric tridiagonal matrix; off[i] couples rows i and i+1.
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }
  CVec apply(std::span<const cplx> x) const;
  void apply_add(std::span<const cplx> x, std::span<cplx> y, cplx scale = 1.0) const;
};

// LDL^T factorization of an SPD tridiagonal matrix.
class TridiagCholesky {
 public:
  TridiagCholesky() = default;
  explicit TridiagCholesky(const SymTridiag& a);

  CVec solve(std::span<const cplx> b) const;
  bool empty() const { return d_.empty(); }

 private:
  std::vector<double> d_;
  std::vector<double> l_;
};

// Complex banded LU with partial pivoting. Storage keeps kl extra
// superdiagonals for the fill produced by row interchanges.
class BandedLU {
 public:
  BandedLU(std::size_t n, std::size_t kl, std::size_t ku);

  cplx& at(std::size_t i, std::size_t j);
  cplx at(std::size_t i, std::size_t j) const;

  // Throws NearSingularShift when a pivot falls below pivot_tol times the
  // largest entry of its original row.
  void factor(double pivot_tol = 1e-14);
  void solve_in_place(std::span<cplx> b) const;
  void solve_adjoint_in_place(std::span<cplx> b) const;

  std::size_t size() const { return n_; }
  std::size_t lower() const { return kl_; }
  std::size_t upper() const { return ku_; }
  bool factored() const { return factored_; }

 private:
  std::size_t idx(std::size_t i, std::size_t j) const { return i * width_ + (j + kl_ - i); }

  std::size_t n_, kl_, ku_, width_;
  std::vector<cplx> ab_;
  std::vector<std::size_t> piv_;
  bool factored_ = false;
};

}  // namespace kvwave

// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#ifndef AMPERE_SPARSE_HPP
#define AMPERE_SPARSE_HPP

#include <cstddef>
#include <tuple>
#include <vector>

namespace ampere {

/// Compressed-row sparse matrix with sorted, unique column indices per row.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> rowptr;  ///< size rows+1
  std::vector<int> colind;
  std::vector<double> val;

  /// y = A x (row-parallel, deterministic: each row is one reduction).
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;

  std::vector<double> diagonal() const;
  double max_abs() const;
  /// max_ij |A_ij - A_ji| (structural zeros compare against 0).
  double symmetry_error() const;

  std::size_t nnz() const { return val.size(); }
};

/// Triplet accumulator; duplicate entries are summed on compression.
class TripletBuilder {
 public:
  TripletBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}

  void add(int r, int c, double v) { entries_.emplace_back(r, c, v); }

  SparseMatrix compress() const;

  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_;
  int cols_;
  std::vector<std::tuple<int, int, double>> entries_;
};

/// Result of an iterative solve. `residual` is always recomputed from
/// scratch at exit ("trust but verify"), so converged implies
/// residual <= tolerance by construction.
struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  ///< final relative residual (preconditioned for minres)
  bool converged = false;
  std::vector<double> history;  ///< per-iteration residual estimates
};

/// Conjugate gradients for SPD systems. Relative residual ||b - Ax|| / ||b||.
/// Optional Jacobi preconditioner: entries of `precond_diag` (> 0) are the
/// diagonal of M; pass an empty vector for the unpreconditioned method.
SolveReport cg(const SparseMatrix& A, const std::vector<double>& b,
               std::vector<double>& x, double tol, int maxit,
               const std::vector<double>& precond_diag = {});

/// MINRES (Paige-Saunders) for symmetric, possibly indefinite systems with a
/// positive diagonal preconditioner M = diag(precond_diag). Convergence is
/// measured in the M^{-1/2} residual norm relative to the right-hand side;
/// the recurrence-estimated history is non-increasing.
SolveReport minres(const SparseMatrix& A, const std::vector<double>& b,
                   std::vector<double>& x, double tol, int maxit,
                   const std::vector<double>& precond_diag);

// Deterministic BLAS-1 helpers (fixed summation order).
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);
void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y);

}  // namespace ampere

#endif  // AMPERE_SPARSE_HPP

// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#include "ampere/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ampere {

void SparseMatrix::multiply(const std::vector<double>& x,
                            std::vector<double>& y) const {
  if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("dim");
  y.assign(rows, 0.0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int k = rowptr[r]; k < rowptr[r + 1]; ++k) s += val[k] * x[colind[k]];
    y[r] = s;
  }
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y;
  multiply(x, y);
  return y;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(rows, 0.0);
  for (int r = 0; r < rows && r < cols; ++r) {
    for (int k = rowptr[r]; k < rowptr[r + 1]; ++k)
      if (colind[k] == r) d[r] = val[k];
  }
  return d;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : val) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::symmetry_error() const {
  if (rows != cols) return std::numeric_limits<double>::infinity();
  double err = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int k = rowptr[r]; k < rowptr[r + 1]; ++k) {
      const int c = colind[k];
      // binary search for (c, r)
      const int lo = rowptr[c];
      const int hi = rowptr[c + 1];
      const auto it = std::lower_bound(colind.begin() + lo, colind.begin() + hi, r);
      const double vt = (it != colind.begin() + hi && *it == r)
                            ? val[it - colind.begin()]
                            : 0.0;
      err = std::max(err, std::abs(val[k] - vt));
    }
  }
  return err;
}

SparseMatrix TripletBuilder::compress() const {
  SparseMatrix A;
  A.rows = rows_;
  A.cols = cols_;
  A.rowptr.assign(rows_ + 1, 0);

  std::vector<std::tuple<int, int, double>> t = entries_;
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
    return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) < std::get<0>(b)
                                            : std::get<1>(a) < std::get<1>(b);
  });

  for (std::size_t i = 0; i < t.size();) {
    const int r = std::get<0>(t[i]);
    const int c = std::get<1>(t[i]);
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
      throw std::out_of_range("triplet index");
    double s = 0.0;
    while (i < t.size() && std::get<0>(t[i]) == r && std::get<1>(t[i]) == c)
      s += std::get<2>(t[i++]);
    A.colind.push_back(c);
    A.val.push_back(s);
    ++A.rowptr[r + 1];
  }
  for (int r = 0; r < rows_; ++r) A.rowptr[r + 1] += A.rowptr[r];
  return A;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  // Fixed-order (serial) reduction: bitwise reproducible independent of the
  // thread count used elsewhere.
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(y.size()); ++i)
    y[i] += alpha * x[i];
}

namespace {

double true_relative_residual(const SparseMatrix& A, const std::vector<double>& b,
                              const std::vector<double>& x, double bnorm) {
  std::vector<double> r = A.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return norm2(r) / bnorm;
}

}  // namespace

SolveReport cg(const SparseMatrix& A, const std::vector<double>& b,
               std::vector<double>& x, double tol, int maxit,
               const std::vector<double>& precond_diag) {
  const int n = A.rows;
  SolveReport rep;
  x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    rep.converged = true;
    return rep;
  }
  const bool precond = !precond_diag.empty();
  auto apply_minv = [&](const std::vector<double>& v, std::vector<double>& out) {
    out.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / precond_diag[i];
  };

  std::vector<double> r = b;  // x = 0
  std::vector<double> z;
  if (precond)
    apply_minv(r, z);
  else
    z = r;
  std::vector<double> p = z;
  std::vector<double> Ap(n);
  double rz = dot(r, z);

  while (rep.iterations < maxit) {
    A.multiply(p, Ap);
    const double pAp = dot(p, Ap);
    if (pAp <= 0.0) break;  // not SPD (or breakdown); bail out honestly
    const double alpha = rz / pAp;
    axpy(alpha, p, x);
    axpy(-alpha, Ap, r);
    ++rep.iterations;
    const double rel = norm2(r) / bnorm;
    rep.history.push_back(rel);
    if (rel <= tol) {
      // Verify against the from-scratch residual; the recurrence may drift.
      if (true_relative_residual(A, b, x, bnorm) <= tol) break;
    }
    if (precond)
      apply_minv(r, z);
    else
      z = r;
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  rep.residual = true_relative_residual(A, b, x, bnorm);
  rep.converged = rep.residual <= tol;
  return rep;
}

SolveReport minres(const SparseMatrix& A, const std::vector<double>& b,
                   std::vector<double>& x, double tol, int maxit,
                   const std::vector<double>& precond_diag) {
  const int n = A.rows;
  for (double d : precond_diag)
    if (!(d > 0.0)) throw std::invalid_argument("preconditioner must be positive");
  SolveReport rep;
  x.assign(n, 0.0);

  auto apply_minv = [&](const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / precond_diag[i];
    return out;
  };
  // sqrt(v' M^{-1} v): the preconditioned residual norm.
  auto minv_norm = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * v[i] / precond_diag[i];
    return std::sqrt(s);
  };

  std::vector<double> r1 = b;
  std::vector<double> y = apply_minv(r1);
  const double beta1 = std::sqrt(dot(r1, y));
  if (beta1 == 0.0) {
    rep.converged = true;
    return rep;
  }

  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0;
  double phibar = beta1, cs = -1.0, sn = 0.0;
  std::vector<double> r2 = r1;
  std::vector<double> w(n, 0.0), w2(n, 0.0), v(n), w1(n);

  while (rep.iterations < maxit) {
    ++rep.iterations;
    const double s = 1.0 / beta;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) v[i] = s * y[i];
    A.multiply(v, y);
    if (rep.iterations >= 2) axpy(-beta / oldb, r1, y);
    const double alfa = dot(v, y);
    axpy(-alfa / beta, r2, y);
    r1 = r2;
    r2 = y;
    y = apply_minv(r2);
    oldb = beta;
    beta = std::sqrt(std::max(0.0, dot(r2, y)));

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::hypot(gbar, beta);
    gamma = std::max(gamma, std::numeric_limits<double>::min());
    cs = gbar / gamma;
    sn = std::min(beta / gamma, 1.0);  // hypot guarantees <= 1 up to rounding
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
    axpy(phi, w, x);

    rep.history.push_back(phibar);
    if (phibar <= tol * beta1 || beta == 0.0) {
      // Trust but verify: recompute the preconditioned residual from scratch
      // and keep iterating (same Lanczos process) if the estimate drifted.
      // beta == 0 is a lucky Lanczos breakdown: the Krylov space is invariant
      // and the current iterate is as good as this process gets.
      std::vector<double> r = A.multiply(x);
      for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
      if (minv_norm(r) <= tol * beta1 || beta == 0.0) break;
    }
  }

  std::vector<double> r = A.multiply(x);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  rep.residual = minv_norm(r) / beta1;
  rep.converged = rep.residual <= tol;
  return rep;
}

}  // namespace ampere

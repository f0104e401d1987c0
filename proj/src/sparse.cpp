#include "phaserec/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace phaserec {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

void SparseMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
  y.assign(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k) s += values[k] * x[col_indices[k]];
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
  for (int r = 0; r < rows; ++r)
    for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
      if (col_indices[k] == r) d[r] = values[k];
  return d;
}

double SparseMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      const int c = col_indices[k];
      double vt = 0.0;
      for (int k2 = row_offsets[c]; k2 < row_offsets[c + 1]; ++k2)
        if (col_indices[k2] == r) vt = values[k2];
      worst = std::max(worst, std::abs(values[k] - vt));
    }
  }
  return worst;
}

double SparseMatrix::quadratic_form(const std::vector<double>& x) const {
  double s = 0.0;
  for (int r = 0; r < rows; ++r) {
    double row = 0.0;
    for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k) row += values[k] * x[col_indices[k]];
    s += x[r] * row;
  }
  return s;
}

SparseMatrix csr_from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::invalid_argument("csr_from_triplets: index out of range");
  // canonical order (row, col, value) makes the merged sums independent of
  // the order triplets were produced in, down to the last bit
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    return a.value < b.value;
  });
  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_offsets.assign(rows + 1, 0);
  size_t i = 0;
  while (i < triplets.size()) {
    size_t j = i;
    double s = 0.0;
    while (j < triplets.size() && triplets[j].row == triplets[i].row && triplets[j].col == triplets[i].col) {
      s += triplets[j].value;
      ++j;
    }
    m.col_indices.push_back(triplets[i].col);
    m.values.push_back(s);
    ++m.row_offsets[triplets[i].row + 1];
    i = j;
  }
  for (int r = 0; r < rows; ++r) m.row_offsets[r + 1] += m.row_offsets[r];
  return m;
}

std::vector<double> cg_solve(const SparseMatrix& A, const std::vector<double>& b,
                             const std::vector<double>& diag_precond, double tol, int maxit,
                             const std::vector<double>* x0, SolveStats* stats,
                             void (*iterate_hook)(std::vector<double>&, const void*), const void* hook_ctx) {
  const int n = A.rows;
  if (A.cols != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("cg_solve: dimension mismatch");
  std::vector<double> invd(n);
  for (int i = 0; i < n; ++i) {
    if (!(diag_precond[i] > 0.0)) throw std::invalid_argument("cg_solve: preconditioner not positive");
    invd[i] = 1.0 / diag_precond[i];
  }
  std::vector<double> x = x0 ? *x0 : std::vector<double>(n, 0.0);
  if (iterate_hook) iterate_hook(x, hook_ctx);
  std::vector<double> r(n), z(n), p(n), Ap(n);
  A.multiply(x, Ap);
  for (int i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  const double bnorm = norm2(b);
  const double stop = tol * (bnorm > 0.0 ? bnorm : 1.0);
  double rnorm = norm2(r);
  int it = 0;
  if (rnorm > stop) {
    for (int i = 0; i < n; ++i) z[i] = invd[i] * r[i];
    p = z;
    double rz = dot(r, z);
    for (it = 1; it <= maxit; ++it) {
      A.multiply(p, Ap);
      const double pAp = dot(p, Ap);
      if (!(pAp > 0.0)) throw std::runtime_error("cg_solve: matrix not positive on Krylov space");
      const double alpha = rz / pAp;
      for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
      if (iterate_hook) iterate_hook(x, hook_ctx);
      for (int i = 0; i < n; ++i) r[i] -= alpha * Ap[i];
      rnorm = norm2(r);
      if (rnorm <= stop) break;
      for (int i = 0; i < n; ++i) z[i] = invd[i] * r[i];
      const double rz_next = dot(r, z);
      const double beta = rz_next / rz;
      rz = rz_next;
      for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
  }
  if (stats) {
    stats->iterations = it;
    stats->residual = rnorm;
  }
  if (rnorm > stop) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "cg_solve: no convergence after %d iterations, residual %.3e", maxit, rnorm);
    throw std::runtime_error(msg);
  }
  return x;
}

std::vector<double> bicgstab_solve(const SparseMatrix& A, const std::vector<double>& b,
                                   const std::vector<double>& diag_precond, double tol, int maxit,
                                   const std::vector<double>* x0, SolveStats* stats) {
  const int n = A.rows;
  if (A.cols != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("bicgstab_solve: dimension mismatch");
  std::vector<double> invd(n);
  for (int i = 0; i < n; ++i) {
    if (!(diag_precond[i] > 0.0)) throw std::invalid_argument("bicgstab_solve: preconditioner not positive");
    invd[i] = 1.0 / diag_precond[i];
  }
  std::vector<double> x = x0 ? *x0 : std::vector<double>(n, 0.0);
  std::vector<double> r = A.multiply(x);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const double bnorm = norm2(b);
  const double stop = tol * (bnorm > 0.0 ? bnorm : 1.0);
  std::vector<double> rhat = r, p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double rnorm = norm2(r);
  int it = 0;
  while (rnorm > stop && it < maxit) {
    ++it;
    const double rho_next = dot(rhat, r);
    if (rho_next == 0.0) break;
    if (it == 1) {
      p = r;
    } else {
      const double beta = (rho_next / rho) * (alpha / omega);
      for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    }
    rho = rho_next;
    for (int i = 0; i < n; ++i) phat[i] = invd[i] * p[i];
    A.multiply(phat, v);
    alpha = rho / dot(rhat, v);
    for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (norm2(s) <= stop) {
      for (int i = 0; i < n; ++i) x[i] += alpha * phat[i];
      r = s;
      rnorm = norm2(r);
      break;
    }
    for (int i = 0; i < n; ++i) shat[i] = invd[i] * s[i];
    A.multiply(shat, t);
    const double tt = dot(t, t);
    if (tt == 0.0) break;
    omega = dot(t, s) / tt;
    for (int i = 0; i < n; ++i) x[i] += alpha * phat[i] + omega * shat[i];
    for (int i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
    rnorm = norm2(r);
    if (omega == 0.0) break;
  }
  if (stats) {
    stats->iterations = it;
    stats->residual = rnorm;
  }
  if (rnorm > stop) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "bicgstab_solve: no convergence after %d iterations, residual %.3e", it, rnorm);
    throw std::runtime_error(msg);
  }
  return x;
}

void write_matrix_market(const SparseMatrix& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows << " " << A.cols << " " << A.nnz() << "\n";
  char buf[64];
  for (int r = 0; r < A.rows; ++r) {
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r + 1, A.col_indices[k] + 1, A.values[k]);
      out << buf;
    }
  }
  if (!out) throw std::runtime_error("write_matrix_market: write failed for " + path);
}

}  // namespace phaserec

#pragma once

#include <string>
#include <vector>

namespace phaserec {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row; duplicate triplets are merged at construction.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_offsets;   // size rows+1
  std::vector<int> col_indices;   // size nnz
  std::vector<double> values;     // size nnz

  int nnz() const { return static_cast<int>(values.size()); }
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;
  std::vector<double> diagonal() const;
  double max_asymmetry() const;
  double quadratic_form(const std::vector<double>& x) const;  // x^T A x
};

/// Build CSR from triplets. Triplets are sorted by (row, col, value) before
/// merging, so the result is bitwise independent of input order.
SparseMatrix csr_from_triplets(int rows, int cols, std::vector<Triplet> triplets);

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;  // final absolute residual norm
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive
/// (semi-)definite systems. Stops when ||b - Ax|| <= tol * ||b|| (or maxit).
/// Optional warm start x0 and a per-iteration iterate hook (used by singular
/// Neumann solves to keep the kernel component pinned; shifting the iterate
/// by kernel vectors leaves CG residuals untouched).
std::vector<double> cg_solve(const SparseMatrix& A, const std::vector<double>& b,
                             const std::vector<double>& diag_precond, double tol, int maxit,
                             const std::vector<double>* x0 = nullptr, SolveStats* stats = nullptr,
                             void (*iterate_hook)(std::vector<double>&, const void*) = nullptr,
                             const void* hook_ctx = nullptr);

/// BiCGStab with Jacobi preconditioning for general square systems.
std::vector<double> bicgstab_solve(const SparseMatrix& A, const std::vector<double>& b,
                                   const std::vector<double>& diag_precond, double tol, int maxit,
                                   const std::vector<double>* x0 = nullptr, SolveStats* stats = nullptr);

/// Matrix Market coordinate export (1-based, general real).
void write_matrix_market(const SparseMatrix& A, const std::string& path);

}  // namespace phaserec

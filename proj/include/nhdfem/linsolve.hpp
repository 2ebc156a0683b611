// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nhdfem/types.hpp"

namespace nhdfem {

struct Triplet {
  int row;
  int col;
  Complex val;
};

/// Compressed sparse row storage; column indices strictly increasing within
/// each row.
struct ComplexCSRMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<long> row_ptr;  // size rows + 1
  std::vector<int> col_idx;
  std::vector<Complex> values;

  long nnz() const { return static_cast<long>(values.size()); }
  /// Max absolute row sum.
  Real norm_inf() const;
};

/// Builds CSR from triplets, summing duplicates. The result is independent of
/// the triplet order: entries are canonically sorted (row, col, re, im)
/// before accumulation, so even the floating-point sums are reproducible.
ComplexCSRMatrix csr_from_triplets(int rows, int cols, std::vector<Triplet> triplets);

ComplexVector matvec(const ComplexCSRMatrix& A, const ComplexVector& x);

enum class SolveMethod { DirectLU, Gmres };

struct GmresOptions {
  int restart = 50;
  int max_iter = 2000;
  Real tol = 1e-10;
  bool ilu0 = true;
};

struct SolveReport {
  std::string method;
  int iterations = 0;      // 0 for direct
  Real rel_residual = 0.0; // ||b - Ax||_2 / ||b||_2, recomputed from x
  double wall_time_s = 0.0;
  bool converged = false;
};

/// Solves Ax = b. DirectLU uses UMFPACK when built in, Eigen SparseLU
/// otherwise (both with fill-reducing orderings, deterministic). Gmres is
/// restarted, right-preconditioned with ILU(0). Direct factorization of a
/// singular matrix throws SingularMatrixError; GMRES non-convergence returns
/// the best iterate with converged = false.
std::pair<ComplexVector, SolveReport> solve(const ComplexCSRMatrix& A,
                                            const ComplexVector& b, SolveMethod method,
                                            const GmresOptions& opts = {});

/// MatrixMarket coordinate complex general dump.
void write_matrix_market(const ComplexCSRMatrix& A, std::ostream& out);

}  // namespace nhdfem

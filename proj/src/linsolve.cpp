// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include "nhdfem/linsolve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#ifdef NHDFEM_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

namespace nhdfem {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::SparseMatrix<Complex> to_eigen(const ComplexCSRMatrix& A) {
  std::vector<Eigen::Triplet<Complex>> ts;
  ts.reserve(A.nnz());
  for (int i = 0; i < A.rows; ++i)
    for (long k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      ts.emplace_back(i, A.col_idx[k], A.values[k]);
  Eigen::SparseMatrix<Complex> S(A.rows, A.cols);
  S.setFromTriplets(ts.begin(), ts.end());
  S.makeCompressed();
  return S;
}

/// ILU(0): incomplete LU on the sparsity pattern of A, L unit lower / U upper
/// stored in one CSR copy.
struct Ilu0 {
  ComplexCSRMatrix F;
  std::vector<long> diag;  // position of the diagonal entry per row

  explicit Ilu0(const ComplexCSRMatrix& A) : F(A), diag(A.rows, -1) {
    if (A.rows != A.cols) throw std::invalid_argument("ILU(0): matrix must be square");
    for (int i = 0; i < F.rows; ++i) {
      for (long k = F.row_ptr[i]; k < F.row_ptr[i + 1]; ++k)
        if (F.col_idx[k] == i) diag[i] = k;
      if (diag[i] < 0)
        throw SingularMatrixError("ILU(0): structurally zero diagonal at row " +
                                  std::to_string(i));
    }
    for (int i = 0; i < F.rows; ++i) {
      for (long kk = F.row_ptr[i]; kk < F.row_ptr[i + 1]; ++kk) {
        const int k = F.col_idx[kk];
        if (k >= i) break;
        const Complex pivot = F.values[diag[k]];
        if (std::abs(pivot) == 0.0)
          throw SingularMatrixError("ILU(0): zero pivot at row " + std::to_string(k));
        const Complex lik = F.values[kk] / pivot;
        F.values[kk] = lik;
        // Subtract lik * row k, restricted to the pattern of row i.
        long p = kk + 1;
        for (long q = diag[k] + 1; q < F.row_ptr[k + 1]; ++q) {
          const int j = F.col_idx[q];
          while (p < F.row_ptr[i + 1] && F.col_idx[p] < j) ++p;
          if (p == F.row_ptr[i + 1]) break;
          if (F.col_idx[p] == j) F.values[p] -= lik * F.values[q];
        }
      }
    }
  }

  ComplexVector apply(const ComplexVector& r) const {
    ComplexVector y(r.size());
    for (int i = 0; i < F.rows; ++i) {
      Complex s = r[i];
      for (long k = F.row_ptr[i]; F.col_idx[k] < i; ++k) s -= F.values[k] * y[F.col_idx[k]];
      y[i] = s;
    }
    for (int i = F.rows - 1; i >= 0; --i) {
      Complex s = y[i];
      for (long k = F.row_ptr[i + 1] - 1; k > diag[i]; --k) s -= F.values[k] * y[F.col_idx[k]];
      y[i] = s / F.values[diag[i]];
    }
    return y;
  }
};

std::pair<ComplexVector, SolveReport> solve_gmres(const ComplexCSRMatrix& A,
                                                  const ComplexVector& b,
                                                  const GmresOptions& opts) {
  const auto t0 = Clock::now();
  SolveReport rep;
  rep.method = opts.ilu0 ? "gmres+ilu0" : "gmres";

  std::unique_ptr<Ilu0> prec;
  if (opts.ilu0) prec = std::make_unique<Ilu0>(A);
  auto precondition = [&](const ComplexVector& v) { return prec ? prec->apply(v) : v; };

  const Real bnorm = b.norm();
  ComplexVector x = ComplexVector::Zero(A.cols);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.wall_time_s = seconds_since(t0);
    return {x, rep};
  }

  const int m = std::max(1, opts.restart);
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(A.rows, m + 1);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
  ComplexVector cs(m), sn(m), g(m + 1);

  int total_iters = 0;
  Real best_res = std::numeric_limits<Real>::max();
  ComplexVector best_x = x;

  while (total_iters < opts.max_iter) {
    ComplexVector r = b - matvec(A, x);
    Real beta = r.norm();
    if (beta / bnorm <= opts.tol) break;
    V.col(0) = r / beta;
    g.setZero();
    g[0] = beta;

    int j = 0;
    for (; j < m && total_iters < opts.max_iter; ++j, ++total_iters) {
      // Right preconditioning: w = A M^{-1} v_j.
      ComplexVector w = matvec(A, precondition(V.col(j)));
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V.col(i).dot(w);  // Eigen dot conjugates the first argument
        w -= H(i, j) * V.col(i);
      }
      H(j + 1, j) = w.norm();
      if (std::abs(H(j + 1, j)) > 0.0) V.col(j + 1) = w / H(j + 1, j);

      for (int i = 0; i < j; ++i) {
        const Complex t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -std::conj(sn[i]) * H(i, j) + std::conj(cs[i]) * H(i + 1, j);
        H(i, j) = t;
      }
      // Givens rotation zeroing H(j+1, j).
      const Real denom = std::sqrt(std::norm(H(j, j)) + std::norm(H(j + 1, j)));
      if (denom == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else {
        cs[j] = std::conj(H(j, j)) / denom;
        sn[j] = std::conj(H(j + 1, j)) / denom;
      }
      const Complex t = cs[j] * H(j, j) + sn[j] * H(j + 1, j);
      H(j, j) = t;
      H(j + 1, j) = 0.0;
      g[j + 1] = -std::conj(sn[j]) * g[j];
      g[j] = cs[j] * g[j];

      if (std::abs(g[j + 1]) / bnorm <= opts.tol) {
        ++j;
        ++total_iters;
        break;
      }
    }

    // x += M^{-1} V_j y with H y = g.
    Eigen::VectorXcd y = H.topLeftCorner(j, j)
                             .triangularView<Eigen::Upper>()
                             .solve(g.head(j));
    x += precondition(V.leftCols(j) * y);

    const Real res = (b - matvec(A, x)).norm() / bnorm;
    if (res < best_res) {
      best_res = res;
      best_x = x;
    }
    if (res <= opts.tol) break;
  }

  const Real final_res = (b - matvec(A, x)).norm() / bnorm;
  if (final_res > best_res) x = best_x;
  rep.iterations = total_iters;
  rep.rel_residual = (b - matvec(A, x)).norm() / bnorm;
  rep.converged = rep.rel_residual <= opts.tol;
  rep.wall_time_s = seconds_since(t0);
  return {x, rep};
}

}  // namespace

Real ComplexCSRMatrix::norm_inf() const {
  Real n = 0.0;
  for (int i = 0; i < rows; ++i) {
    Real s = 0.0;
    for (long k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += std::abs(values[k]);
    n = std::max(n, s);
  }
  return n;
}

ComplexCSRMatrix csr_from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::invalid_argument("csr_from_triplets: index (" + std::to_string(t.row) +
                                  "," + std::to_string(t.col) + ") out of range");
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    if (a.val.real() != b.val.real()) return a.val.real() < b.val.real();
    return a.val.imag() < b.val.imag();
  });

  ComplexCSRMatrix A;
  A.rows = rows;
  A.cols = cols;
  A.row_ptr.assign(rows + 1, 0);
  A.col_idx.reserve(triplets.size());
  A.values.reserve(triplets.size());
  size_t i = 0;
  while (i < triplets.size()) {
    Complex sum = triplets[i].val;
    size_t j = i + 1;
    while (j < triplets.size() && triplets[j].row == triplets[i].row &&
           triplets[j].col == triplets[i].col) {
      sum += triplets[j].val;
      ++j;
    }
    A.col_idx.push_back(triplets[i].col);
    A.values.push_back(sum);
    A.row_ptr[triplets[i].row + 1] += 1;
    i = j;
  }
  for (int r = 0; r < rows; ++r) A.row_ptr[r + 1] += A.row_ptr[r];
  return A;
}

ComplexVector matvec(const ComplexCSRMatrix& A, const ComplexVector& x) {
  if (x.size() != A.cols) throw std::invalid_argument("matvec: dimension mismatch");
  ComplexVector y = ComplexVector::Zero(A.rows);
  for (int i = 0; i < A.rows; ++i) {
    Complex s = 0.0;
    for (long k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      s += A.values[k] * x[A.col_idx[k]];
    y[i] = s;
  }
  return y;
}

std::pair<ComplexVector, SolveReport> solve(const ComplexCSRMatrix& A,
                                            const ComplexVector& b, SolveMethod method,
                                            const GmresOptions& opts) {
  if (A.rows != A.cols) throw std::invalid_argument("solve: matrix must be square");
  if (b.size() != A.rows) throw std::invalid_argument("solve: rhs dimension mismatch");

  if (method == SolveMethod::Gmres) return solve_gmres(A, b, opts);

  const auto t0 = Clock::now();
  SolveReport rep;
  const Eigen::SparseMatrix<Complex> S = to_eigen(A);
  ComplexVector x;
#ifdef NHDFEM_HAVE_UMFPACK
  {
    rep.method = "umfpack";
    Eigen::UmfPackLU<Eigen::SparseMatrix<Complex>> lu(S);
    if (lu.info() != Eigen::Success)
      throw SingularMatrixError("direct solve: UMFPACK factorization failed");
    x = lu.solve(b);
  }
#else
  {
    rep.method = "sparselu";
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(S);
    lu.factorize(S);
    if (lu.info() != Eigen::Success)
      throw SingularMatrixError("direct solve: SparseLU factorization failed");
    x = lu.solve(b);
  }
#endif
  const Real bnorm = b.norm();
  rep.rel_residual = bnorm > 0.0 ? (b - matvec(A, x)).norm() / bnorm : 0.0;
  rep.converged = true;
  rep.wall_time_s = seconds_since(t0);
  return {x, rep};
}

void write_matrix_market(const ComplexCSRMatrix& A, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << A.rows << ' ' << A.cols << ' ' << A.nnz() << "\n";
  out.precision(17);
  for (int i = 0; i < A.rows; ++i)
    for (long k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      out << (i + 1) << ' ' << (A.col_idx[k] + 1) << ' ' << A.values[k].real() << ' '
          << A.values[k].imag() << "\n";
}

}  // namespace nhdfem

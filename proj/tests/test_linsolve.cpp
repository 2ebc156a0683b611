// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <sstream>

#include <doctest.h>

#include "nhdfem/linsolve.hpp"
#include "test_support.hpp"

using namespace nhdfem;

namespace {

// Random diagonally dominant complex matrix: always invertible.
ComplexCSRMatrix random_system(int n, unsigned seed, std::vector<Triplet>* out_trips = nullptr) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Triplet> trips;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && std::abs(i - j) % 3 != 0) continue;
      const Complex v = i == j ? Complex(6.0 + u(rng), 2.0) : Complex(u(rng), u(rng));
      trips.push_back({i, j, v});
    }
  }
  if (out_trips) *out_trips = trips;
  return csr_from_triplets(n, n, trips);
}

}  // namespace

TEST_CASE("csr assembly sums duplicates and sorts columns") {
  std::vector<Triplet> trips = {
      {1, 2, Complex(1, 0)}, {0, 0, Complex(2, 1)}, {1, 2, Complex(0.5, -2)},
      {1, 0, Complex(3, 0)}, {0, 0, Complex(-1, 0)},
  };
  const ComplexCSRMatrix A = csr_from_triplets(2, 3, trips);
  CHECK(A.rows == 2);
  CHECK(A.cols == 3);
  CHECK(A.nnz() == 3);
  const Eigen::MatrixXcd D = testsup::dense_from_csr(A);
  CHECK(D(0, 0) == Complex(1, 1));
  CHECK(D(1, 0) == Complex(3, 0));
  CHECK(D(1, 2) == Complex(1.5, -2));
  for (int i = 0; i < A.rows; ++i)
    for (long p = A.row_ptr[i] + 1; p < A.row_ptr[i + 1]; ++p)
      CHECK(A.col_idx[p] > A.col_idx[p - 1]);
}

TEST_CASE("csr assembly is independent of the triplet order") {
  std::vector<Triplet> trips;
  const ComplexCSRMatrix A = random_system(40, 3u, &trips);
  std::mt19937 rng(4u);
  std::shuffle(trips.begin(), trips.end(), rng);
  const ComplexCSRMatrix B = csr_from_triplets(40, 40, trips);
  REQUIRE(A.nnz() == B.nnz());
  for (long p = 0; p < A.nnz(); ++p) {
    CHECK(A.col_idx[p] == B.col_idx[p]);
    CHECK(A.values[p] == B.values[p]);
  }
}

TEST_CASE("matvec matches dense multiplication") {
  const ComplexCSRMatrix A = random_system(30, 5u);
  const Eigen::MatrixXcd D = testsup::dense_from_csr(A);
  std::mt19937 rng(6u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexVector x(30);
  for (int i = 0; i < 30; ++i) x[i] = Complex(u(rng), u(rng));
  const ComplexVector y = matvec(A, x);
  CHECK((y - D * x).norm() < 1e-13 * x.norm());
}

TEST_CASE("norm_inf is the max absolute row sum") {
  std::vector<Triplet> trips = {{0, 0, Complex(3, 4)}, {1, 0, Complex(1, 0)},
                                {1, 1, Complex(0, -2)}};
  const ComplexCSRMatrix A = csr_from_triplets(2, 2, trips);
  CHECK(A.norm_inf() == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("direct solve reproduces a known solution") {
  const int n = 50;
  const ComplexCSRMatrix A = random_system(n, 7u);
  std::mt19937 rng(8u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexVector x_ref(n);
  for (int i = 0; i < n; ++i) x_ref[i] = Complex(u(rng), u(rng));
  const ComplexVector b = matvec(A, x_ref);

  const auto [x, report] = solve(A, b, SolveMethod::DirectLU);
  CHECK(report.converged);
  CHECK(report.iterations == 0);
  CHECK((x - x_ref).norm() < 1e-11 * x_ref.norm());
  CHECK(report.rel_residual < 1e-12);
}

TEST_CASE("gmres agrees with the direct solver") {
  const int n = 80;
  const ComplexCSRMatrix A = random_system(n, 9u);
  ComplexVector b(n);
  for (int i = 0; i < n; ++i) b[i] = Complex(std::sin(0.1 * i), std::cos(0.2 * i));

  const auto [xd, rd] = solve(A, b, SolveMethod::DirectLU);
  GmresOptions opts;
  opts.tol = 1e-12;
  const auto [xg, rg] = solve(A, b, SolveMethod::Gmres, opts);
  CHECK(rg.converged);
  CHECK(rg.iterations > 0);
  CHECK(rg.rel_residual < 1e-11);
  CHECK((xg - xd).norm() < 1e-9 * xd.norm());

  SUBCASE("without the ilu preconditioner") {
    GmresOptions plain;
    plain.tol = 1e-12;
    plain.ilu0 = false;
    const auto [xp, rp] = solve(A, b, SolveMethod::Gmres, plain);
    CHECK(rp.converged);
    CHECK((xp - xd).norm() < 1e-9 * xd.norm());
  }
}

TEST_CASE("gmres reports non-convergence instead of throwing") {
  const ComplexCSRMatrix A = random_system(60, 10u);
  ComplexVector b = ComplexVector::Ones(60);
  GmresOptions opts;
  opts.tol = 1e-14;
  opts.max_iter = 1;
  opts.restart = 1;
  opts.ilu0 = false;
  const auto [x, report] = solve(A, b, SolveMethod::Gmres, opts);
  CHECK(!report.converged);
}

TEST_CASE("singular matrices are rejected by the direct solver") {
  std::vector<Triplet> trips = {{0, 0, Complex(1, 0)}, {1, 1, Complex(0, 0)}};
  const ComplexCSRMatrix A = csr_from_triplets(2, 2, trips);
  const ComplexVector b = ComplexVector::Ones(2);
  CHECK_THROWS_AS(solve(A, b, SolveMethod::DirectLU), SingularMatrixError);
}

TEST_CASE("matrix market dump has the coordinate complex header") {
  std::vector<Triplet> trips = {{0, 0, Complex(1, -1)}, {1, 0, Complex(2, 0.5)}};
  const ComplexCSRMatrix A = csr_from_triplets(2, 2, trips);
  std::ostringstream out;
  write_matrix_market(A, out);
  const std::string text = out.str();
  CHECK(text.find("%%MatrixMarket matrix coordinate complex general") == 0);
  CHECK(text.find("2 2 2") != std::string::npos);
  // 1-based indices
  CHECK(text.find("\n1 1 ") != std::string::npos);
  CHECK(text.find("\n2 1 ") != std::string::npos);
}

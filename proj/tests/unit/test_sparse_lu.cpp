#include <gtest/gtest.h>

#include <random>

#include "bess/milp/sparse_lu.hpp"

using bess::milp::CscMatrix;
using bess::milp::SparseLu;

namespace {

CscMatrix from_dense(const std::vector<std::vector<double>>& a) {
  CscMatrix m;
  const int n = static_cast<int>(a.size());
  m.clear(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (a[i][j] != 0.0) m.push(i, a[i][j]);
    }
    m.finish_column();
  }
  return m;
}

std::vector<double> multiply(const std::vector<std::vector<double>>& a,
                             const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

std::vector<std::vector<double>> random_matrix(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  std::bernoulli_distribution keep(0.3);
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (keep(rng)) a[i][j] = value(rng);
    }
    a[i][i] += 5.0;  // keep it comfortably nonsingular
  }
  return a;
}

}  // namespace

TEST(SparseLu, SolvesAndTransposeSolves) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial;
    auto a = random_matrix(rng, n);
    SparseLu lu;
    ASSERT_TRUE(lu.factorize(from_dense(a)).ok);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = i - 0.5 * n;
    std::vector<double> b = multiply(a, x);
    lu.ftran(b);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(b[i], x[i], 1e-9);

    std::vector<std::vector<double>> at(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) at[i][j] = a[j][i];
    std::vector<double> c = multiply(at, x);
    lu.btran(c);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(c[i], x[i], 1e-9);
  }
}

TEST(SparseLu, EtaUpdatesMatchRefactorization) {
  std::mt19937_64 rng(11);
  const int n = 12;
  auto a = random_matrix(rng, n);
  SparseLu lu;
  ASSERT_TRUE(lu.factorize(from_dense(a)).ok);
  for (int step = 0; step < 6; ++step) {
    // Replace column `pos` by a fresh column.
    int pos = (step * 5) % n;
    std::vector<double> col(n);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    for (int i = 0; i < n; ++i) col[i] = value(rng);
    col[pos] += 4.0;
    std::vector<double> alpha = col;
    lu.ftran(alpha);
    lu.update(pos, alpha);
    for (int i = 0; i < n; ++i) a[i][pos] = col[i];

    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = 1.0 + i;
    std::vector<double> b = multiply(a, x);
    lu.ftran(b);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(b[i], x[i], 1e-8);

    std::vector<double> c(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c[j] += a[i][j] * x[i];
    lu.btran(c);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(c[i], x[i], 1e-8);
  }
  EXPECT_EQ(lu.num_updates(), 6);
}

TEST(SparseLu, ReportsSingularColumns) {
  std::vector<std::vector<double>> a = {{1, 2, 0}, {2, 4, 0}, {0, 0, 3}};
  SparseLu lu;
  auto outcome = lu.factorize(from_dense(a));
  EXPECT_FALSE(outcome.ok);
  ASSERT_EQ(outcome.singular_positions.size(), 1u);
  ASSERT_EQ(outcome.unpivoted_rows.size(), 1u);
}

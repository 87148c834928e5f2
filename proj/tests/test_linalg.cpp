#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "gradcoh/sparse.hpp"

using namespace gradcoh;

namespace {

SparseMatrix dense(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<Rational>> d;
  for (auto& r : rows) {
    d.emplace_back();
    for (int v : r) d.back().emplace_back(v);
  }
  return SparseMatrix::from_dense(d);
}

SparseVector vec(std::initializer_list<int> values) {
  SparseVector v(values.size());
  Index i = 0;
  for (int x : values) v.set(i++, x);
  return v;
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(parse_rational(" -7 ") == Rational(-7));
  CHECK(to_string(parse_rational("0/5")) == "0");
  CHECK_THROWS_AS(parse_rational("4/-2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("rank examples") {
  CHECK(rank(dense({{1, 0}, {0, 1}})) == 2);
  CHECK(rank(dense({{1, 2}, {2, 4}})) == 1);
  std::vector<std::vector<Rational>> hilbert(5, std::vector<Rational>(5));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) hilbert[i][j] = frac(1, i + j + 1);
  CHECK(oracle::dense_rank(hilbert) == 5);
  CHECK(rank(SparseMatrix::from_dense(hilbert)) == 5);
  CHECK(rank(SparseMatrix(0, 0)) == 0);
  CHECK(rank(SparseMatrix(3, 4)) == 0);
}

TEST_CASE("kernel examples") {
  CHECK(kernel_basis(SparseMatrix(3, 3)).size() == 3);
  CHECK(kernel_basis(dense({{1, 0}, {0, 1}})).empty());
  auto k = kernel_basis(dense({{1, 1, 0}, {0, 1, 1}}));
  REQUIRE(k.size() == 1);
  const Rational s = k[0].at(0);
  REQUIRE(s != 0);
  CHECK(k[0].at(1) == -s);
  CHECK(k[0].at(2) == s);
}

TEST_CASE("solve examples") {
  auto x = solve(dense({{1, 0}, {0, 1}}), vec({3, 5}));
  REQUIRE(x);
  CHECK(*x == vec({3, 5}));
  CHECK_FALSE(solve(dense({{1, 2}, {2, 4}}), vec({1, 1})));
  x = solve(dense({{1, 1}, {0, 1}}), vec({2, 1}));
  REQUIRE(x);
  CHECK(*x == vec({1, 1}));
}

TEST_CASE("random matrices against the dense oracle") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> size(1, 12), entry(-9, 9), coin(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = size(rng), cols = size(rng);
    const bool sparse_fill = trial % 2 == 0;
    std::vector<std::vector<Rational>> d(rows, std::vector<Rational>(cols));
    std::vector<std::vector<mpz_class>> z(rows, std::vector<mpz_class>(cols));
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        int v = (sparse_fill && coin(rng) != 0) ? 0 : entry(rng);
        // Force some rank deficiency.
        if (trial % 5 == 0 && r > 0 && r % 3 == 0) v = 0;
        d[r][c] = v;
        z[r][c] = v;
      }
    if (trial % 7 == 0 && rows > 1) {
      for (int c = 0; c < cols; ++c) {
        d[rows - 1][c] = d[0][c] * 2 - d[1 % rows][c];
        z[rows - 1][c] = z[0][c] * 2 - z[1 % rows][c];
      }
    }
    const auto m = SparseMatrix::from_dense(d);
    const auto expected = oracle::bareiss_rank(z);
    CHECK(oracle::dense_rank(d) == expected);
    CHECK(rank(m) == expected);
    auto kernel = kernel_basis(m);
    CHECK(kernel.size() + expected == static_cast<std::size_t>(cols));
    for (auto& v : kernel) CHECK(m.multiply(v).empty());

    // Row permutation and scaling leave the rank unchanged.
    std::vector<std::size_t> perm(rows);
    for (int i = 0; i < rows; ++i) perm[i] = rows - 1 - i;
    auto p = m.select_rows(perm);
    for (std::size_t r = 0; r < p.rows(); ++r) {
      SparseEntries scaled = p.row(r);
      for (auto& e : scaled) e.second *= frac(static_cast<long>(r) + 2, 3);
      p.set_row(r, scaled);
    }
    CHECK(rank(p) == expected);

    // Solve with a consistent right-hand side.
    SparseVector x0(cols);
    for (int c = 0; c < cols; ++c) x0.set(c, entry(rng));
    auto b = m.multiply(x0);
    auto x = solve(m, b);
    REQUIRE(x);
    CHECK(m.multiply(*x) == b);
  }
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "aqe/linalg/exact_matrix.hpp"
#include "aqe/linalg/float_rank.hpp"
#include "test_support.hpp"

using namespace aqe;
using aqe::test::q;

namespace {

RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
  RationalMatrix m(0, rows.front().size());
  for (const auto& r : rows) m.append_row(r);
  return m;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("exact rank") {
  CHECK(exact_rank(from_rows({{q(1), q(2)}, {q(2), q(4)}})) == 1);
  CHECK(exact_rank(from_rows({{q(1, 2), q(1, 3)}, {q(1, 5), q(1, 7)}})) == 2);
  CHECK(exact_rank(from_rows({{q(0), q(0), q(0)}})) == 0);
  CHECK(exact_rank(RationalMatrix(0, 4)) == 0);
}

TEST_CASE("exact kernel of an empty system is the standard basis") {
  const auto k = exact_kernel(RationalMatrix(0, 3));
  REQUIRE(k.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(k[i][j] == q(i == j ? 1 : 0));
  }
}

TEST_CASE("exact kernel vectors are annihilated") {
  const auto m = from_rows({{q(1), q(2), q(3), q(4)}, {q(2), q(4), q(1), q(0)}});
  const auto k = exact_kernel(m);
  CHECK(k.size() == 2);
  for (const auto& v : k) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      Rational s = 0;
      for (std::size_t c = 0; c < m.cols(); ++c) s += m(r, c) * v[c];
      CHECK(s == 0);
    }
  }
}

TEST_CASE("exact solve") {
  const auto m = from_rows({{q(2), q(1)}, {q(1), q(3)}});
  bool consistent = false;
  const auto x = exact_solve(m, {q(3), q(4)}, &consistent);
  REQUIRE(consistent);
  CHECK(x[0] == q(1));
  CHECK(x[1] == q(1));
  const auto singular = from_rows({{q(1), q(1)}, {q(1), q(1)}});
  exact_solve(singular, {q(1), q(2)}, &consistent);
  CHECK_FALSE(consistent);
}

TEST_CASE("float rank and kernel") {
  const std::vector<std::vector<double>> rows{{1, 2, 3}, {2, 4, 6 + 1e-14}};
  CHECK(float_rank(rows, 3) == 1);
  CHECK(float_rank({{1, 0, 0}, {0, 1e-3, 0}}, 3) == 2);
  const auto k = float_kernel({{1, 1, 0}}, 3);
  CHECK(k.size() == 2);
  for (const auto& v : k) CHECK(std::abs(v[0] + v[1]) < 1e-12);
}

TEST_CASE("property: exact and float rank agree on small integer matrices") {
  Sampler s(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t r = 1 + s.next() % 4;
    const std::size_t c = 1 + s.next() % 4;
    RationalMatrix m(r, c);
    std::vector<std::vector<double>> f(r, std::vector<double>(c));
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        const long v = static_cast<long>(s.next() % 3) - 1;
        m(i, j) = v;
        f[i][j] = static_cast<double>(v);
      }
    }
    CHECK(exact_rank(m) == float_rank(f, c));
    CHECK(exact_kernel(m).size() + exact_rank(m) == c);
  }
}

}

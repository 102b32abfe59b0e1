#include <doctest.h>

#include <limits>
#include <set>
#include <vector>

#include "ptcache/combinatorics.hpp"
#include "ptcache/errors.hpp"

using namespace ptcache;

namespace {

std::vector<std::vector<BigInt>> pascal(int n) {
  std::vector<std::vector<BigInt>> rows(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    rows[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i + 1), 1);
    for (int j = 1; j < i; ++j) {
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
          rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
    }
  }
  return rows;
}

// Every subset of [K] with the requested projection sizes, by scanning all masks.
std::vector<std::uint64_t> filter_all_masks(const std::vector<int>& sizes, const std::vector<int>& type) {
  int K = 0;
  for (int s : sizes) K += s;
  std::vector<std::uint64_t> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << K); ++mask) {
    int first = 0;
    bool ok = true;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
      std::uint64_t part = (mask >> first) & ((std::uint64_t{1} << sizes[g]) - 1);
      ok = ok && std::popcount(part) == type[g];
      first += sizes[g];
    }
    if (ok) out.push_back(mask);
  }
  return out;
}

}  // namespace

TEST_CASE("binom matches the Pascal triangle") {
  auto rows = pascal(40);
  for (int n = 0; n <= 40; ++n) {
    for (int k = 0; k <= n; ++k) {
      CHECK(binom(n, k) == rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]);
    }
  }
  CHECK(binom(7, 2) == 21);
  CHECK(binom(5, 0) == 1);
  CHECK(binom(11, 4) == 330);
  CHECK(binom(5, -1) == 0);
  CHECK(binom(5, 6) == 0);
  CHECK(binom(-1, 0) == 0);
}

TEST_CASE("binom is exact beyond 64 bits") {
  auto rows = pascal(100);
  CHECK(rows[100][40] == binom(100, 40));
  CHECK(binom(100, 40) > BigInt(std::numeric_limits<std::uint64_t>::max()));
}

TEST_CASE("rational canonical form and arithmetic") {
  Rational a(BigInt(6), BigInt(-8));
  CHECK(a.numerator() == -3);
  CHECK(a.denominator() == 4);
  CHECK(a.str() == "-3/4");
  CHECK(Rational(5).str() == "5/1");
  CHECK(Rational(BigInt(0), BigInt(7)).str() == "0/1");
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(-Rational(1, 3) < Rational(0));
  CHECK(Rational::parse("12/21") == Rational(4, 7));
  CHECK(Rational::parse("-5") == Rational(-5));
  CHECK_THROWS_AS(Rational::parse("x/2"), std::invalid_argument);
  CHECK_THROWS_AS(Rational(BigInt(1), BigInt(0)), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  CHECK(Rational(3, 4).to_double() == doctest::Approx(0.75));
}

TEST_CASE("enumerate_subsets_by_type against an exhaustive mask filter") {
  const std::vector<std::vector<int>> groupings{{4, 3}, {5, 4}, {6, 5}, {7}, {3, 3}};
  for (const auto& sizes : groupings) {
    UserGrouping g(sizes);
    int K = g.num_users();
    for (int t = 0; t <= K; ++t) {
      for (int a = 0; a <= t; ++a) {
        std::vector<int> type = sizes.size() == 1 ? std::vector<int>{t} : std::vector<int>{a, t - a};
        if (sizes.size() == 1 && a > 0) break;
        bool fits = true;
        for (std::size_t i = 0; i < type.size(); ++i) fits = fits && type[i] <= sizes[i];
        if (!fits) {
          CHECK_THROWS_AS(enumerate_subsets_by_type(g, TypeVector{type}), Error);
          continue;
        }
        auto got = enumerate_subsets_by_type(g, TypeVector{type});
        auto expected = filter_all_masks(sizes, type);
        std::set<std::uint64_t> got_set;
        for (auto s : got) got_set.insert(s.bits());
        CHECK(got_set.size() == got.size());
        CHECK(got_set == std::set<std::uint64_t>(expected.begin(), expected.end()));
        for (std::size_t i = 1; i < got.size(); ++i) CHECK(UserSet::lex_less(got[i - 1], got[i]));
      }
    }
  }
}

TEST_CASE("enumerate_subsets_by_type spec values") {
  UserGrouping g({4, 3});
  CHECK(enumerate_subsets_by_type(g, TypeVector{{1, 1}}).size() == 12);
  CHECK(enumerate_subsets_by_type(g, TypeVector{{0, 2}}).size() == 3);
  auto empty = enumerate_subsets_by_type(g, TypeVector{{0, 0}});
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].empty());
  auto first = enumerate_subsets_by_type(g, TypeVector{{1, 1}}).front();
  CHECK(first.members() == std::vector<int>{1, 5});
  try {
    enumerate_subsets_by_type(g, TypeVector{{5, 0}});
    FAIL("expected ComponentTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ComponentTooLarge);
  }
  try {
    enumerate_subsets_by_type(g, TypeVector{{1}});
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LengthMismatch);
  }
}

TEST_CASE("k_subsets are lexicographic and complete") {
  auto s = k_subsets(5, 2);
  REQUIRE(s.size() == 10);
  CHECK(s.front().members() == std::vector<int>{1, 2});
  CHECK(s[1].members() == std::vector<int>{1, 3});
  CHECK(s.back().members() == std::vector<int>{4, 5});
  CHECK(k_subsets(4, 0).size() == 1);
  CHECK(k_subsets(3, 4).empty());
}

TEST_CASE("user grouping structure") {
  UserGrouping g({4, 3});
  CHECK(g.num_users() == 7);
  CHECK(g.num_distinct() == 2);
  CHECK(UserGrouping({3, 3}).num_distinct() == 1);
  CHECK(g.group_of(4) == 0);
  CHECK(g.group_of(5) == 1);
  CHECK(g.members(1).members() == std::vector<int>{5, 6, 7});
  CHECK(g.type_of(UserSet::from_members({1, 2, 6})) == TypeVector{{2, 1}});
  CHECK_THROWS_AS(UserGrouping({3, 4}), Error);
  CHECK_THROWS_AS(UserGrouping({3, 0}), Error);
  CHECK_THROWS_AS(g.group_of(8), std::out_of_range);
  UserGrouping big({59, 58});
  CHECK(big.num_users() == 117);
  CHECK_THROWS_AS(big.members(0), Error);
}

TEST_CASE("hypergeometric pmf") {
  CHECK(hypergeo_pmf(3, 2, 1) == Rational(12, 21));
  CHECK(hypergeo_pmf(3, 2, 0) == Rational(3, 21));
  CHECK(hypergeo_pmf(3, 2, 2) == Rational(6, 21));
  for (int q = 1; q <= 30; ++q) {
    for (int t = 1; t <= std::min(q, 12); ++t) {
      Rational sum = 0;
      for (int j = 0; j <= t; ++j) {
        Rational direct(binom(q + 1, j) * binom(q, t - j), binom(2 * q + 1, t));
        CHECK(hypergeo_pmf(q, t, j) == direct);
        sum += hypergeo_pmf(q, t, j);
      }
      CHECK(sum == Rational(1));
    }
  }
  try {
    hypergeo_pmf(3, 2, 3);
    FAIL("expected OutOfSupport");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfSupport);
  }
  CHECK_THROWS_AS(hypergeo_pmf(3, 2, -1), Error);
}

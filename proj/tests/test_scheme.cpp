#include <doctest.h>

#include <vector>

#include "ptcache/errors.hpp"
#include "ptcache/scheme.hpp"

using namespace ptcache;

namespace {

// Subfiles of type v cached by the first user of each group, by scanning every mask.
std::vector<std::vector<BigInt>> brute_per_group(const UserGrouping& g, const TypeLayout& layout, int t) {
  const int K = g.num_users();
  std::vector<std::vector<BigInt>> out(static_cast<std::size_t>(g.num_groups()),
                                       std::vector<BigInt>(layout.subfile_types.size(), 0));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << K); ++mask) {
    if (std::popcount(mask) != t) continue;
    UserSet s(mask);
    int v = layout.subfile_index(g.type_of(s));
    REQUIRE(v >= 0);
    for (int i = 0; i < g.num_groups(); ++i) {
      if (s.contains(g.first_user(i))) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] += 1;
    }
  }
  return out;
}

std::vector<BigInt> brute_totals(const UserGrouping& g, const TypeLayout& layout, int t) {
  std::vector<BigInt> out(layout.subfile_types.size(), 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.num_users()); ++mask) {
    if (std::popcount(mask) != t) continue;
    out[static_cast<std::size_t>(layout.subfile_index(g.type_of(UserSet(mask))))] += 1;
  }
  return out;
}

std::vector<BigInt> bigs(std::initializer_list<long long> values) {
  std::vector<BigInt> out;
  for (auto v : values) out.emplace_back(v);
  return out;
}

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidParams;
}

}  // namespace

TEST_CASE("type layout for K=7, t=2") {
  auto layout = derive_types(SystemParams{7, 2, 7, 1}, UserGrouping({4, 3}));
  REQUIRE(layout.num_subfile_types() == 3);
  REQUIRE(layout.num_group_types() == 4);
  CHECK(layout.subfile_types[0] == TypeVector{{0, 2}});
  CHECK(layout.subfile_types[2] == TypeVector{{2, 0}});
  CHECK(layout.group_types[0] == TypeVector{{0, 3}});
  CHECK(layout.group_types[3] == TypeVector{{3, 0}});
  CHECK(layout.involved[1] == std::vector<int>{0, 1});
  CHECK(layout.removal[1] == std::vector<int>{0, 1});
  CHECK(layout.removal[0] == std::vector<int>{-1, 0});
  CHECK(layout.group_index(TypeVector{{1, 2}}) == 1);
  CHECK(layout.subfile_index(TypeVector{{3, 0}}) == -1);
}

TEST_CASE("type counts for K=11, t=4") {
  auto layout = derive_types(SystemParams{11, 4, 11, 1}, UserGrouping({6, 5}));
  CHECK(layout.num_subfile_types() == 5);
  CHECK(layout.num_group_types() == 6);
}

TEST_CASE("local factors count the transmitters each receiver hears") {
  auto layout = derive_types(SystemParams{7, 2, 7, 1}, UserGrouping({4, 3}));
  // s_2 = (1,2) with the Q1 member transmitting.
  auto lf = local_fs({0}, layout, 1);
  REQUIRE(lf.size() == 2);
  CHECK(lf[0].component == 0);
  CHECK(lf[0].subfile_type == 0);
  CHECK(lf[0].factor == 0);
  CHECK(lf[1].component == 1);
  CHECK(lf[1].subfile_type == 1);
  CHECK(lf[1].factor == 1);
  // s_3 = (2,1) with both Q1 members transmitting.
  lf = local_fs({0}, layout, 2);
  CHECK(lf[0].factor == 1);
  CHECK(lf[1].factor == 2);
  // Everyone transmits in s_2: each receiver hears the other two.
  lf = local_fs({0, 1}, layout, 1);
  CHECK(lf[0].factor == 2);
  CHECK(lf[1].factor == 2);
  // s_1 = (0,3) has no Q1 receivers.
  lf = local_fs({1}, layout, 0);
  REQUIRE(lf.size() == 1);
  CHECK(lf[0].factor == 2);
}

TEST_CASE("count vectors for q=3, t=2") {
  SystemParams p{7, 2, 7, 1};
  UserGrouping g({4, 3});
  auto c = count_vectors(p, g);
  CHECK(c.F == bigs({3, 12, 6}));
  CHECK(c.per_group[0] == bigs({0, 3, 3}));
  CHECK(c.per_group[1] == bigs({2, 4, 0}));
  CHECK(c.delta[0] == bigs({2, 1, -3}));
}

TEST_CASE("count vectors for q=5, t=4") {
  auto c = count_vectors(SystemParams{11, 4, 11, 1}, UserGrouping({6, 5}));
  CHECK(c.F == bigs({5, 60, 150, 100, 15}));
  BigInt total = 0;
  for (const auto& f : c.F) total += f;
  CHECK(total == binom(11, 4));
}

TEST_CASE("count vectors agree with an exhaustive scan") {
  const std::vector<std::pair<std::vector<int>, int>> cases{
      {{4, 3}, 2}, {{5, 4}, 2}, {{5, 4}, 3}, {{6, 5}, 4}, {{7, 5}, 4}, {{6, 6}, 4}, {{8, 7}, 6}};
  for (const auto& [sizes, t] : cases) {
    UserGrouping g(sizes);
    SystemParams p{g.num_users(), t, g.num_users(), 1};
    auto layout = derive_types(p, g);
    auto c = count_vectors(p, g);
    CHECK(c.F == brute_totals(g, layout, t));
    auto per = brute_per_group(g, layout, t);
    for (int i = 0; i < g.num_groups(); ++i) CHECK(c.per_group[static_cast<std::size_t>(i)] == per[static_cast<std::size_t>(i)]);
    for (std::size_t i = 0; i + 1 < per.size(); ++i) {
      for (std::size_t v = 0; v < per[i].size(); ++v) CHECK(c.delta[i][v] == per[i + 1][v] - per[i][v]);
    }
  }
}

TEST_CASE("theorem1 at K=7, t=2") {
  auto a = analyze(make_preset("theorem1", 7, 2));
  CHECK(a.fs.intermediate[0] == std::vector<int>{0, 1, 2});
  CHECK(a.fs.intermediate[1] == std::vector<int>{0, 1, 0});
  CHECK(a.fs.aggregate == std::vector<int>{0, 2, 2});
  CHECK(a.sizing.gamma == std::vector<Rational>{Rational(1), Rational(5)});
  CHECK(a.sizing.ell == bigs({1, 5}));
  CHECK(a.sizing.L == 84);
  CHECK(a.f_pt == 36);
  CHECK(a.f_jcm == 42);
  for (const auto& r : a.mc_residual) CHECK(r.is_zero());
}

TEST_CASE("theorem1 at K=11, t=4") {
  auto a = analyze(make_preset("theorem1", 11, 4));
  CHECK(a.sizing.gamma.back() == Rational(21, 4));
  CHECK(a.sizing.L == 12540);
  CHECK(a.f_pt == 1180);
  CHECK(a.f_jcm == 1320);
}

TEST_CASE("theorem1 packet ratio is K-2 at t=2") {
  for (int q = 3; q <= 20; ++q) {
    int K = 2 * q + 1;
    auto a = analyze(make_preset("theorem1", K, 2));
    CHECK(a.sizing.gamma.back() == Rational(K - 2));
  }
}

TEST_CASE("sizing reproduces the exact ratios and the file length") {
  for (int t : {2, 4, 6}) {
    for (int q = t + 1; q <= t + 6; ++q) {
      auto a = analyze(make_preset("theorem1", 2 * q + 1, t));
      const auto& ell = a.sizing.ell;
      CHECK(Rational(ell[1], ell[0]) == a.sizing.gamma[1]);
      CHECK(gcd(ell[0], ell[1]) == 1);
      BigInt L = dot(a.fs.intermediate[0], a.counts.F) * ell[0] + dot(a.fs.intermediate[1], a.counts.F) * ell[1];
      CHECK(L == a.sizing.L);
      CHECK(a.f_pt == dot(a.fs.aggregate, a.counts.F));
      // Memory per user is t/K of the library, so each group's cached load is equal.
      for (const auto& d : a.counts.delta) {
        Rational residual = 0;
        for (std::size_t g = 0; g < ell.size(); ++g) residual += Rational(dot(a.fs.intermediate[g], d) * ell[g]);
        CHECK(residual.is_zero());
      }
    }
  }
}

TEST_CASE("odd_t3 construction") {
  for (int q = 4; q <= 12; ++q) {
    auto a = analyze(make_preset("odd_t3", 2 * q + 1, 3));
    CHECK(a.sizing.gamma.back() == Rational(2 * (2 * q - 1), q + 4));
    CHECK(a.f_pt == BigInt(q) * (q + 1) * (7 * q - 4) / 2);
  }
  auto a = analyze(make_preset("odd_t3", 9, 3));
  CHECK(a.fs.intermediate[0] == std::vector<int>{0, 1, 2, 3});
  CHECK(a.fs.intermediate[1] == std::vector<int>{0, 2, 1, 0});
  CHECK(a.sizing.ell == bigs({4, 7}));
  CHECK(a.f_pt == 240);
  CHECK(a.f_jcm == 252);
}

TEST_CASE("odd_t3 alternative first-round selection reaches 210 packets") {
  auto spec = make_preset("odd_t3", 9, 3);
  spec.plans[0] = TransmitterSelection{{{1}, {0}, {0}, {1}, {0}}};
  auto a = analyze(spec);
  CHECK(a.fs.intermediate[0] == std::vector<int>{0, 1, 2, 0});
  CHECK(a.fs.multipliers[0][3] == 2);
  CHECK(a.sizing.gamma.back() == Rational(1, 4));
  CHECK(a.f_pt == 210);
  CHECK(Rational(a.f_pt, a.f_jcm) == Rational(5, 6));
  for (const auto& r : a.mc_residual) CHECK(r.is_zero());
}

TEST_CASE("even_K construction") {
  for (auto [K, t, gamma] : std::vector<std::tuple<int, int, Rational>>{
           {12, 2, Rational(5)}, {6, 2, Rational(2)}, {12, 4, Rational(3)}}) {
    auto a = analyze(make_preset("even_K", K, t));
    CHECK(a.spec.grouping.sizes() == std::vector<int>{K / 2 + 1, K / 2 - 1});
    CHECK(a.sizing.gamma.back() == gamma);
    CHECK(a.sizing.gamma.back() > Rational(0));
  }
}

TEST_CASE("jcm preset") {
  for (int K = 3; K <= 9; ++K) {
    for (int t = 1; t < K; ++t) {
      auto a = analyze(make_preset("jcm", K, t));
      CHECK(a.fs.aggregate == std::vector<int>{t});
      CHECK(a.sizing.L == BigInt(t) * binom(K, t));
      CHECK(a.f_pt == a.f_jcm);
    }
  }
}

TEST_CASE("preset constraint errors") {
  CHECK(kind_of([] { make_preset("theorem1", 8, 2); }) == ErrorKind::PresetConstraintViolated);
  CHECK(kind_of([] { make_preset("theorem1", 7, 3); }) == ErrorKind::PresetConstraintViolated);
  CHECK(kind_of([] { make_preset("theorem1", 9, 4); }) == ErrorKind::PresetConstraintViolated);
  CHECK(kind_of([] { make_preset("odd_t3", 7, 3); }) == ErrorKind::PresetConstraintViolated);
  CHECK(kind_of([] { make_preset("even_K", 7, 2); }) == ErrorKind::PresetConstraintViolated);
  CHECK(kind_of([] { make_preset("jcm", 5, 5); }) == ErrorKind::PresetConstraintViolated);
  CHECK(kind_of([] { make_preset("theorem1", 7, 2, 5); }) == ErrorKind::PresetConstraintViolated);
  CHECK(kind_of([] { make_preset("nope", 7, 2); }) == ErrorKind::InvalidParams);
  try {
    make_preset("theorem1", 8, 2);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("K must be odd") != std::string::npos);
  }
}

TEST_CASE("selection errors") {
  auto layout = derive_types(SystemParams{7, 2, 7, 1}, UserGrouping({4, 3}));
  TransmitterSelection conflict{{{1}, {1}, {0, 1}, {0}}};
  CHECK(kind_of([&] { intermediate_fs(conflict, layout); }) == ErrorKind::IncompatibleLocals);
  TransmitterSelection empty{{{1}, {}, {0}, {0}}};
  CHECK(kind_of([&] { intermediate_fs(empty, layout); }) == ErrorKind::EmptySelection);
  TransmitterSelection short_plan{{{1}, {0}}};
  CHECK(kind_of([&] { vector_lcm(short_plan, layout); }) == ErrorKind::LengthMismatch);
  auto spec = make_preset("theorem1", 7, 2);
  spec.plans[0].daggers.pop_back();
  CHECK(kind_of([&] { analyze(spec); }) == ErrorKind::LengthMismatch);
  CHECK(kind_of([] { derive_types(SystemParams{9, 2, 9, 1}, UserGrouping({3, 3, 3})); }) ==
        ErrorKind::UnsupportedGrouping);
  CHECK(kind_of([] { with_grouping(make_preset("theorem1", 7, 2), {3, 2, 2}); }) ==
        ErrorKind::UnsupportedGrouping);
}

TEST_CASE("intermediate FS skips group types with no subsets") {
  // Grouping (6,1): s_1 = (0,3) has no subsets and its selection is irrelevant.
  auto spec = with_grouping(make_preset("theorem1", 7, 2), {6, 1});
  auto layout = derive_types(spec.params, spec.grouping);
  CHECK(layout.group_counts[0] == 0);
  CHECK_NOTHROW(intermediate_fs(spec.plans[0], layout));
}

TEST_CASE("single coupled group must already satisfy memory") {
  auto spec = make_preset("theorem1", 7, 2);
  spec.plans.pop_back();
  CHECK_THROWS_AS(analyze(spec), Error);
}

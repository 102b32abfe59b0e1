#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "ptcache/analysis.hpp"
#include "ptcache/combinatorics.hpp"
#include "ptcache/errors.hpp"
#include "ptcache/scheme.hpp"
#include "ptcache/serialize.hpp"

using namespace ptcache;

namespace {

// Packets per file summed over every t-subset of [2q+1] directly.
BigInt brute_f_pt(int q, int t) {
  const int K = 2 * q + 1;
  const int r = t / 2;
  BigInt total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << K); ++mask) {
    if (std::popcount(mask) != t) continue;
    int in_q1 = std::popcount(mask & ((std::uint64_t{1} << (q + 1)) - 1));
    int k = in_q1 + 1;
    total += k <= r ? 2 * (k - 1) : t;
  }
  return total;
}

}  // namespace

TEST_CASE("packet counts") {
  CHECK(f_pt(3, 1) == 36);
  CHECK(f_pt(4, 1) == 60);
  CHECK(f_pt(5, 2) == 1180);
  CHECK(f_jcm(7, 2) == 42);
  CHECK(f_jcm(11, 4) == 1320);
  CHECK(f_jcm(5, 2) == 20);
  for (int t : {2, 4, 6}) {
    for (int q = t + 1; q <= 9; ++q) {
      CHECK(f_pt(q, t / 2) == brute_f_pt(q, t));
      CHECK(f_pt(q, t / 2) == analyze(make_preset("theorem1", 2 * q + 1, t)).f_pt);
    }
  }
}

TEST_CASE("ratios") {
  CHECK(pt_ratio(3, 2) == Rational(6, 7));
  CHECK(pt_ratio(4, 2) == Rational(5, 6));
  CHECK(pt_ratio(5, 2) == Rational(9, 11));
  CHECK(pt_ratio(6, 2) == Rational(21, 26));
  CHECK(pt_ratio(5, 4) == Rational(59, 66));
}

TEST_CASE("asymptotes") {
  CHECK(asymptotic_ratio(2).exact == Rational(3, 4));
  CHECK(asymptotic_ratio(4).exact == Rational(13, 16));
  CHECK(asymptotic_ratio(6).exact == Rational(27, 32));
  CHECK(asymptotic_ratio(8).exact == Rational(221, 256));
  for (int t : {2, 4, 8, 16, 32}) {
    CHECK(asymptotic_ratio(t).stirling == doctest::Approx(1.0 - std::sqrt(1.0 / (2 * M_PI * t))));
    CHECK(std::abs(asymptotic_ratio(t).stirling - asymptotic_ratio(t).exact.to_double()) < 0.05);
  }
}

TEST_CASE("ratios decrease toward the asymptote") {
  auto records = sweep({2, 4, 6, 8}, 0);
  CHECK(records.empty());
  records = sweep({2, 4, 6, 8}, 58);
  REQUIRE_FALSE(records.empty());
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    CHECK((a.t < b.t || (a.t == b.t && a.q < b.q)));
    if (a.t == b.t) CHECK(b.ratio < a.ratio);
  }
  for (const auto& rec : records) {
    CHECK(rec.ratio > rec.asymptote);
    CHECK(rec.K == 2 * rec.q + 1);
    CHECK(rec.ratio == Rational(rec.F_PT, rec.F_JCM));
    CHECK(rec.gamma > Rational(0));
    if (rec.q == default_q_max(rec.t)) {
      double gap = (rec.ratio - rec.asymptote).to_double() / rec.asymptote.to_double();
      CHECK(gap < 0.0105);
    }
  }
}

TEST_CASE("sweep rejects odd t") {
  try {
    sweep({3}, 10);
    FAIL("expected InvalidParams");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParams);
    CHECK(std::string(e.what()).find("even t required") != std::string::npos);
  }
}

TEST_CASE("sweep csv and json carry the same values") {
  auto records = sweep({2, 4}, 8);
  std::ostringstream csv;
  write_sweep_csv(csv, records);
  auto json = sweep_json(records);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "K,t,q,r,F_PT,F_JCM,ratio_exact,ratio_float,asymptote_exact,asymptote_float,gamma");
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    REQUIRE(i < json.size());
    const auto& j = json[i++];
    std::string expected = std::to_string(j["K"].get<int>()) + "," + std::to_string(j["t"].get<int>()) + "," +
                           std::to_string(j["q"].get<int>()) + "," + std::to_string(j["r"].get<int>()) + "," +
                           std::to_string(j["F_PT"].get<long long>()) + "," +
                           std::to_string(j["F_JCM"].get<long long>()) + "," +
                           j["ratio_exact"].get<std::string>() + "," + j["ratio_float"].get<std::string>() + "," +
                           j["asymptote_exact"].get<std::string>() + "," +
                           j["asymptote_float"].get<std::string>() + "," + j["gamma"].get<std::string>();
    CHECK(line == expected);
  }
  CHECK(i == json.size());
  CHECK(format_float(6.0 / 7.0) == "0.857142857143");
}

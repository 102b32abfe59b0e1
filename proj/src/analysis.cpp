#include "ptcache/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ptcache/combinatorics.hpp"
#include "ptcache/errors.hpp"
#include "ptcache/scheme.hpp"

namespace ptcache {

namespace {

void require_even_t(int t) {
  if (t < 2 || t % 2 != 0) {
    throw Error(ErrorKind::InvalidParams,
                "even t required for theorem1 sweep; use --preset odd_t3 (t=" + std::to_string(t) + ")");
  }
}

}  // namespace

BigInt f_pt(int q, int r) {
  const int t = 2 * r;
  if (r < 1 || q < t + 1) {
    throw Error(ErrorKind::InvalidParams, "f_pt needs r >= 1 and q >= t+1 (q=" + std::to_string(q) +
                                              ", t=" + std::to_string(t) + ")");
  }
  BigInt total = 0;
  for (int k = 1; k <= t + 1; ++k) {
    const int alpha = k <= r ? 2 * (k - 1) : t;
    total += binom(q + 1, k - 1) * binom(q, t - k + 1) * alpha;
  }
  return total;
}

BigInt f_jcm(int K, int t) {
  if (t < 1 || t >= K) {
    throw Error(ErrorKind::InvalidParams, "f_jcm needs 1 <= t < K");
  }
  return binom(K, t) * t;
}

Rational pt_ratio(int q, int t) {
  require_even_t(t);
  return Rational(f_pt(q, t / 2), f_jcm(2 * q + 1, t));
}

Asymptote asymptotic_ratio(int t) {
  require_even_t(t);
  BigInt pow2 = BigInt(1) << (t + 1);
  Asymptote a;
  a.exact = Rational(1) - Rational(binom(t, t / 2), pow2);
  a.stirling = 1.0 - std::sqrt(1.0 / (2.0 * std::numbers::pi * t));
  return a;
}

std::vector<RatioRecord> sweep(const std::vector<int>& t_list, int q_max) {
  std::vector<int> ts = t_list;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<RatioRecord> out;
  for (int t : ts) {
    require_even_t(t);
    const Rational asym = asymptotic_ratio(t).exact;
    for (int q = t + 1; q <= q_max; ++q) {
      RatioRecord rec;
      rec.K = 2 * q + 1;
      rec.t = t;
      rec.q = q;
      rec.r = t / 2;
      rec.F_PT = f_pt(q, rec.r);
      rec.F_JCM = f_jcm(rec.K, t);
      rec.ratio = Rational(rec.F_PT, rec.F_JCM);
      rec.asymptote = asym;
      SchemeAlgebra alg = analyze(make_preset("theorem1", rec.K, t));
      rec.gamma = alg.sizing.gamma.back();
      out.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace ptcache

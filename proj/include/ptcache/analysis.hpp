#pragma once

#include <vector>

#include "ptcache/rational.hpp"

namespace ptcache {

/// Packets per file of the theorem1 construction, t = 2r, K = 2q+1:
/// sum_k alpha_k C(q+1,k-1) C(q,t-k+1), alpha_k = 2(k-1) for k <= r, else t.
BigInt f_pt(int q, int r);

/// t * C(K, t).
BigInt f_jcm(int K, int t);

/// F_PT / F_JCM for theorem1 at (q, t).
Rational pt_ratio(int q, int t);

struct Asymptote {
  Rational exact;   // 1 - C(t, t/2) / 2^(t+1)
  double stirling;  // 1 - sqrt(1 / (2 pi t))
};

Asymptote asymptotic_ratio(int t);

struct RatioRecord {
  int K = 0;
  int t = 0;
  int q = 0;
  int r = 0;
  BigInt F_PT;
  BigInt F_JCM;
  Rational ratio;
  Rational asymptote;
  Rational gamma;
};

/// One record per (t, q) with q in [t+1 : q_max], sorted by (t, q). Every t
/// must be even.
std::vector<RatioRecord> sweep(const std::vector<int>& t_list, int q_max);

/// Default upper end of the q range for a given t.
inline int default_q_max(int t) { return t + 50; }

}  // namespace ptcache

#pragma once

#include <cstdint>
#include <vector>

#include "ptcache/scheme.hpp"
#include "ptcache/verifier.hpp"

namespace ptcache {

/// JCM as a PT design: one group, one coupled group, every user transmits,
/// every subfile split into t equal packets.
SchemeAlgebra jcm_construct(int K, int t, int N = 0, int unit = 1);

struct Comparison {
  int K = 0;
  int t = 0;
  BigInt f_pt;
  BigInt f_jcm;
  Rational rate_pt;
  Rational rate_jcm;
  bool pt_pass = false;
  bool jcm_pass = false;
  std::string failure;

  bool pass() const { return pt_pass && jcm_pass && rate_pt == rate_jcm && f_pt < f_jcm; }
};

/// Simulates both schemes on the same demands and seed.
Comparison compare(const SchemeSpec& pt_spec, const SchemeSpec& jcm_spec,
                   const std::vector<int>& demands, std::uint64_t seed);

}  // namespace ptcache

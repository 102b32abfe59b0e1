#include "ptcache/jcm.hpp"

#include "ptcache/errors.hpp"

namespace ptcache {

SchemeAlgebra jcm_construct(int K, int t, int N, int unit) {
  return analyze(make_preset("jcm", K, t, N, unit));
}

Comparison compare(const SchemeSpec& pt_spec, const SchemeSpec& jcm_spec,
                   const std::vector<int>& demands, std::uint64_t seed) {
  if (pt_spec.params.K != jcm_spec.params.K || pt_spec.params.t != jcm_spec.params.t) {
    throw Error(ErrorKind::InvalidParams, "compared schemes must share K and t");
  }
  Comparison c;
  c.K = pt_spec.params.K;
  c.t = pt_spec.params.t;
  VerificationReport pt = verify_end_to_end(pt_spec, demands, seed);
  VerificationReport jcm = verify_end_to_end(jcm_spec, demands, seed);
  c.f_pt = pt.f_pt;
  c.f_jcm = jcm.f_pt;
  c.rate_pt = pt.rate;
  c.rate_jcm = jcm.rate;
  c.pt_pass = pt.pass();
  c.jcm_pass = jcm.pass();
  if (!pt.failure.empty()) c.failure = pt_spec.name + ": " + pt.failure;
  if (!jcm.failure.empty()) c.failure += (c.failure.empty() ? "" : "; ") + std::string("jcm: ") + jcm.failure;
  return c;
}

}  // namespace ptcache

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ptcache/rational.hpp"
#include "ptcache/scheme.hpp"

namespace ptcache {

/// One named pass/fail check with the values that decided it.
struct Check {
  std::string id;
  bool pass = false;
  std::string witness;
  std::string note;
};

struct CheckReport {
  std::string subject;  // e.g. "claims t=4 q=5"
  std::vector<Check> checks;

  bool pass() const;
  const Check* find(const std::string& id) const;
};

struct UserAudit {
  int user = 0;
  bool decode_ok = false;
  BigInt cached_bytes;
  std::uint64_t packets_decoded = 0;
};

struct VerificationReport {
  std::string scheme;
  int K = 0;
  int t = 0;
  std::uint64_t seed = 0;
  std::vector<int> demands;
  BigInt f_pt;
  BigInt f_jcm;
  BigInt L;  // units
  std::vector<Rational> gamma;
  std::vector<std::uint64_t> messages_per_round;
  BigInt transmitted_units;
  Rational rate;
  Rational expected_rate;
  Rational memory_target_bytes;  // t N L unit / K
  std::vector<UserAudit> users;
  std::uint64_t dof_violations = 0;  // messages not useful to exactly t receivers
  bool decode_ok = false;
  bool memory_ok = false;
  bool rate_ok = false;
  bool dof_ok = false;
  /// Empty on success, otherwise the first failure.
  std::string failure;

  bool pass() const { return decode_ok && memory_ok && rate_ok && dof_ok && failure.empty(); }
};

/// Splits, places, delivers and decodes on real bytes; never throws.
VerificationReport verify_end_to_end(const SchemeSpec& spec, const std::vector<int>& demands,
                                     std::uint64_t seed, std::uint64_t file_key = 0);

/// Delta sign pattern and sum, delta_{t,q} sign structure, the bound on q
/// that forces negativity, and monotonicity of phi_t. t = 2r, q >= t.
CheckReport verify_claims(int t, int q);

struct Lemma1Result {
  CheckReport report;
  std::vector<int> qs;
  std::vector<Rational> ratios;        // F_PT / F_JCM
  std::vector<Rational> expectations;  // E[h(J_q)]
};

/// Strict decrease of F_PT/F_JCM over [q_lo, q_hi] and its hypergeometric form.
Lemma1Result verify_lemma1(int t, int q_lo, int q_hi);

struct Lemma3Result {
  CheckReport report;
  std::vector<int> q1s;
  std::vector<BigInt> counts;
  int argmin = 0;
};

/// Packet counts of the theorem1 FS vector under groupings (q1, K-q1) for
/// q1 in [q+1 : K-t-1]; the strict minimum must sit at q1 = q+1.
Lemma3Result verify_lemma3(int K, int t);

struct Remark3Strategy {
  std::vector<int> dagger_s2;
  std::vector<int> dagger_s3;
  std::vector<int> alpha;
  BigInt residual;  // alpha . Delta
};

struct Remark3Result {
  CheckReport report;
  std::vector<Remark3Strategy> strategies;
};

/// All nine single-coupled-group selections for s_2, s_3 at t = 2,
/// grouping (q+1, q): (2,2,2) must be the only FS vector meeting the memory
/// constraint.
Remark3Result verify_remark3(int q);

struct ObstructionResult {
  CheckReport report;
  int factor_low = 0;   // from s_{r+1}
  int factor_high = 0;  // from s_{r+2}
  int lcm = 0;
};

/// Pivot local factors for v_{r+1} at t = 2r+1 under the hill selection.
ObstructionResult verify_odd_t_obstruction(int r);

/// Integer window [floor((t - sqrt t)/2) + 2 : ceil((t + sqrt t)/2)].
std::pair<int, int> phi_window(int t);

}  // namespace ptcache

#include "ptcache/verifier.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "ptcache/analysis.hpp"
#include "ptcache/combinatorics.hpp"
#include "ptcache/errors.hpp"
#include "ptcache/exchange.hpp"

namespace ptcache {

namespace {

std::string join(const std::vector<BigInt>& values) {
  std::string out = "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += to_string(values[i]);
  }
  return out + ")";
}

std::string join(const std::vector<Rational>& values) {
  std::string out = "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += values[i].str();
  }
  return out + ")";
}

std::string join(const std::vector<int>& values) { return TypeVector{values}.str(); }

SchemeSpec theorem1_spec(int q, int t) {
  SchemeSpec spec;
  spec.name = "theorem1";
  spec.params = SystemParams{2 * q + 1, t, 2 * q + 1, 1};
  spec.grouping = UserGrouping({q + 1, q});
  spec.plans = theorem1_plans(t);
  return spec;
}

// A_k and B_k of phi_t(k) = A_k / B_k.
BigInt phi_num(int t, int k) {
  return BigInt(k - 1) * (k - 2) + BigInt(t - k) * (t - k + 1);
}

BigInt phi_den(int t, int k) {
  BigInt d = t - 2 * (k - 1);
  return BigInt(t) - d * d;
}

}  // namespace

bool CheckReport::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* CheckReport::find(const std::string& id) const {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::pair<int, int> phi_window(int t) {
  // floor((t - sqrt t)/2) is the largest a with t - 2a >= 0 and (t - 2a)^2 >= t.
  int a = t / 2;
  while (a >= 0 && !(static_cast<long long>(t - 2 * a) * (t - 2 * a) >= t)) --a;
  // ceil((t + sqrt t)/2) is the smallest b with 2b - t >= 0 and (2b - t)^2 >= t.
  int b = (t + 1) / 2;
  while (!(static_cast<long long>(2 * b - t) * (2 * b - t) >= t)) ++b;
  return {a + 2, b};
}

VerificationReport verify_end_to_end(const SchemeSpec& spec, const std::vector<int>& demands,
                                     std::uint64_t seed, std::uint64_t file_key) {
  VerificationReport rep;
  rep.scheme = spec.name;
  rep.K = spec.params.K;
  rep.t = spec.params.t;
  rep.seed = seed;
  rep.demands = demands;
  try {
    SchemeAlgebra alg = analyze(spec);
    check_demands(alg, demands);
    const auto& p = alg.spec.params;
    rep.f_pt = alg.f_pt;
    rep.f_jcm = alg.f_jcm;
    rep.L = alg.sizing.L;
    rep.gamma = alg.sizing.gamma;
    rep.expected_rate = Rational(p.K - p.t, p.t);
    rep.memory_target_bytes = Rational(BigInt(p.t) * p.N * alg.sizing.L * p.unit, BigInt(p.K));

    CounterHashOracle oracle(file_key);
    std::vector<int> files(demands.begin(), demands.end());
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    auto store = std::make_shared<const PacketStore>(split_files(alg, oracle, files));

    std::vector<Cache> caches;
    try {
      caches = build_caches(alg, store);
      rep.memory_ok = true;
    } catch (const Error& e) {
      rep.failure = e.what();
      return rep;
    }
    for (const auto& c : caches) rep.users.push_back(UserAudit{c.user(), false, c.cached_bytes(), 0});

    auto messages = generate_delivery(alg, *store, demands, seed);
    rep.messages_per_round.assign(static_cast<std::size_t>(spec.num_coupled_groups()), 0);
    BigInt units = 0;
    for (const auto& msg : messages) {
      ++rep.messages_per_round[static_cast<std::size_t>(msg.round - 1)];
      units += msg.payload.size() / static_cast<std::size_t>(p.unit);
      std::uint64_t useful = 0;
      for (int y : msg.group.members()) {
        if (y == msg.transmitter) continue;
        int unknown = 0;
        for (const auto& id : msg.constituents) unknown += id.support.contains(y) ? 0 : 1;
        useful += unknown == 1 ? 1 : 0;
      }
      if (useful != static_cast<std::uint64_t>(p.t) || msg.constituents.size() != static_cast<std::size_t>(p.t)) {
        if (rep.dof_violations == 0 && rep.failure.empty()) {
          rep.failure = "message from user " + std::to_string(msg.transmitter) + " to " +
                        msg.group.str() + " serves " + std::to_string(useful) + " receivers";
        }
        ++rep.dof_violations;
      }
    }
    rep.dof_ok = rep.dof_violations == 0;
    rep.transmitted_units = units;
    rep.rate = Rational(units, alg.sizing.L);
    rep.rate_ok = rep.rate == rep.expected_rate;
    if (!rep.rate_ok && rep.failure.empty()) {
      rep.failure = "rate " + rep.rate.str() + " differs from " + rep.expected_rate.str();
    }

    rep.decode_ok = true;
    std::vector<std::uint8_t> expected(store->layout().file_units() * static_cast<std::uint64_t>(p.unit));
    for (auto& audit : rep.users) {
      const int u = audit.user;
      try {
        DecodeResult res = decode(u, caches[static_cast<std::size_t>(u - 1)], messages, demands);
        oracle.fill(demands[static_cast<std::size_t>(u - 1)], 0, expected);
        audit.decode_ok = res.bytes == expected;
        audit.packets_decoded = res.messages_used;
        if (!audit.decode_ok && rep.failure.empty()) {
          rep.failure = "user " + std::to_string(u) + " reconstructed different bytes";
        }
      } catch (const Error& e) {
        audit.decode_ok = false;
        if (rep.failure.empty()) rep.failure = "user " + std::to_string(u) + ": " + e.what();
      }
      rep.decode_ok = rep.decode_ok && audit.decode_ok;
    }
  } catch (const std::exception& e) {
    rep.decode_ok = false;
    if (rep.failure.empty()) rep.failure = e.what();
  }
  return rep;
}

CheckReport verify_claims(int t, int q) {
  CheckReport rep;
  rep.subject = "claims t=" + std::to_string(t) + " q=" + std::to_string(q);
  if (t < 2 || t % 2 != 0 || q < t) {
    rep.checks.push_back({"preconditions", false, "", "requires even t >= 2 and q >= t"});
    return rep;
  }
  const int r = t / 2;
  const SystemParams params{2 * q + 1, t, 2 * q + 1, 1};
  const UserGrouping grouping({q + 1, q});
  const auto delta = count_vectors(params, grouping).delta.front();
  // 1-based accessor matching the v_k numbering.
  auto D = [&](int k) -> const BigInt& { return delta[static_cast<std::size_t>(k - 1)]; };

  {
    bool ok = true;
    for (int k = 1; k <= t + 1; ++k) ok = ok && (k <= r + 1 ? D(k) > 0 : D(k) < 0);
    rep.checks.push_back({"claim1.delta_sign", ok, "Delta=" + join(delta),
                          "positive on [1:r+1], negative on [r+2:t+1]"});
  }
  {
    BigInt sum = std::accumulate(delta.begin(), delta.end(), BigInt(0));
    rep.checks.push_back({"claim2.delta_sum", sum == 0, "sum=" + to_string(sum), ""});
  }

  std::vector<BigInt> d(static_cast<std::size_t>(r + 1));
  for (int k = 1; k <= r; ++k) d[static_cast<std::size_t>(k - 1)] = D(k) + D(t + 2 - k);
  d[static_cast<std::size_t>(r)] = D(r + 1);
  auto dd = [&](int k) -> const BigInt& { return d[static_cast<std::size_t>(k - 1)]; };
  const std::string dwit = "delta_tq=" + join(d);

  rep.checks.push_back({"claim3.endpoints", dd(1) < 0 && dd(r + 1) > 0, dwit,
                        "delta_tq(1) < 0 and delta_tq(r+1) > 0"});

  int changes = 0;
  int k_last_negative = 0;
  for (int k = 1; k <= r + 1; ++k) {
    if (dd(k) < 0) k_last_negative = k;
    if (k > 1 && ((dd(k - 1) < 0) != (dd(k) < 0))) ++changes;
  }
  const bool one_change = changes == 1 && dd(1) < 0;
  if (r >= 2) {
    bool prop2 = dd(2) < 0;
    rep.checks.push_back({"claim3.prefix_negative", prop2, dwit,
                          "some k' in [2:r] has delta_tq(k) < 0 for all k <= k'"});
    bool prop3 = true;
    for (int k = 2; k <= r - 1; ++k) {
      if (dd(k + 1) < 0 && !(dd(k) < 0)) prop3 = false;
    }
    rep.checks.push_back({"claim3.negativity_propagates", prop3, dwit,
                          "delta_tq(k+1) < 0 implies delta_tq(k) < 0 on [2:r-1]"});
    bool in_range = k_last_negative >= 2 && k_last_negative <= r;
    rep.checks.push_back({"claim3.single_sign_change", one_change && in_range,
                          dwit + " k''=" + std::to_string(k_last_negative),
                          "negative on [1:k''], non-negative on [k''+1:r+1], k'' in [2:r]"});
  } else {
    rep.checks.push_back({"claim3.single_sign_change", one_change,
                          dwit + " k''=" + std::to_string(k_last_negative),
                          "r = 1: only the endpoint signs and the single change are checked; "
                          "the change point k''=1 lies outside [2:r]"});
  }

  {
    bool ok = true;
    int triggered = 0;
    for (int k = 2; k <= r; ++k) {
      const BigInt A = phi_num(t, k);
      const BigInt B = phi_den(t, k);
      const bool forced = B <= 0 || BigInt(q) * B < A;
      if (forced) {
        ++triggered;
        ok = ok && dd(k) < 0;
      }
    }
    rep.checks.push_back({"claim3.bound_implication", ok,
                          std::to_string(triggered) + " indices satisfy the sufficient condition",
                          "B_k <= 0 or q < phi_t(k) implies delta_tq(k) < 0"});
  }

  {
    auto [lo, hi] = phi_window(t);
    bool positive = true;
    for (int k = lo; k <= hi; ++k) positive = positive && phi_den(t, k) > 0;
    positive = positive && phi_den(t, lo - 1) <= 0 && phi_den(t, hi + 1) <= 0;
    rep.checks.push_back({"claim4.window", positive,
                          "B=[" + std::to_string(lo) + ":" + std::to_string(hi) + "]",
                          "B_k > 0 exactly on the window"});
    bool mono = true;
    bool beta_ok = true;
    std::string wit;
    int pairs = 0;
    for (int k = std::max(2, lo); k + 1 <= hi && k <= r - 1; ++k) {
      ++pairs;
      const BigInt Ak = phi_num(t, k), Ak1 = phi_num(t, k + 1);
      const BigInt Bk = phi_den(t, k), Bk1 = phi_den(t, k + 1);
      const BigInt beta = Ak1 * Bk - Ak * Bk1;
      const BigInt closed = BigInt(2) * t * (t - 1) * (2 * k - (t + 1));
      beta_ok = beta_ok && beta == closed && beta < 0;
      mono = mono && Rational(Ak1, Bk1) < Rational(Ak, Bk);
      wit += " beta_" + std::to_string(k) + "=" + to_string(beta);
    }
    rep.checks.push_back({"claim4.phi_decreasing", mono && beta_ok,
                          std::to_string(pairs) + " pairs;" + wit,
                          pairs == 0 ? "no index pair k, k+1 in the window with k <= r-1" : ""});
    bool identity = true;
    std::string all;
    for (int k = 2; k <= r - 1; ++k) {
      const BigInt beta = phi_num(t, k + 1) * phi_den(t, k) - phi_num(t, k) * phi_den(t, k + 1);
      identity = identity && beta == BigInt(2) * t * (t - 1) * (2 * k - (t + 1)) && beta < 0;
      all += " " + to_string(beta);
    }
    rep.checks.push_back({"claim4.beta_identity", identity, "beta on [2:r-1]:" + (all.empty() ? std::string(" none") : all),
                          "A_{k+1}B_k - A_kB_{k+1} = 2t(t-1)(2k-(t+1)) < 0"});
  }

  try {
    SchemeAlgebra alg = analyze(theorem1_spec(q, t));
    const BigInt a1 = dot(alg.fs.intermediate[0], alg.counts.delta[0]);
    const BigInt a2 = dot(alg.fs.intermediate[1], alg.counts.delta[0]);
    const Rational gamma = alg.sizing.gamma[1];
    rep.checks.push_back({"lemma2.gamma_positive", a1 < 0 && a2 > 0 && gamma.sign() > 0,
                          "alpha1.Delta=" + to_string(a1) + " alpha2.Delta=" + to_string(a2) +
                              " gamma=" + gamma.str(),
                          ""});
  } catch (const Error& e) {
    rep.checks.push_back({"lemma2.gamma_positive", false, e.what(), ""});
  }
  return rep;
}

Lemma1Result verify_lemma1(int t, int q_lo, int q_hi) {
  Lemma1Result res;
  res.report.subject = "lemma1 t=" + std::to_string(t);
  if (q_lo > q_hi) throw Error(ErrorKind::EmptyRange, "empty q range");
  if (t < 2 || t % 2 != 0 || q_lo < t + 1) {
    throw Error(ErrorKind::InvalidParams, "lemma1 needs even t and q >= t+1");
  }
  const int r = t / 2;
  bool identity = true;
  for (int q = q_lo; q <= q_hi; ++q) {
    res.qs.push_back(q);
    res.ratios.push_back(pt_ratio(q, t));
    Rational e = 0;
    for (int j = 0; j <= t; ++j) {
      const Rational h = j < r ? Rational(2 * j, t) : Rational(1);
      e += hypergeo_pmf(q, t, j) * h;
    }
    res.expectations.push_back(e);
    identity = identity && e == res.ratios.back();
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < res.ratios.size(); ++i) {
    decreasing = decreasing && res.ratios[i] < res.ratios[i - 1];
  }
  res.report.checks.push_back({"lemma1.strictly_decreasing", decreasing, join(res.ratios), ""});
  res.report.checks.push_back({"lemma1.hypergeometric_identity", identity, join(res.expectations),
                               "E[h(J_q)], h(j) = 2j/t for j < r, 1 otherwise"});
  return res;
}

Lemma3Result verify_lemma3(int K, int t) {
  Lemma3Result res;
  res.report.subject = "lemma3 K=" + std::to_string(K) + " t=" + std::to_string(t);
  const int q = (K - 1) / 2;
  const int lo = q + 1;
  const int hi = K - t - 1;
  if (lo > hi) {
    throw Error(ErrorKind::EmptyRange, "q1 range [" + std::to_string(lo) + ":" +
                                           std::to_string(hi) + "] is empty");
  }
  const auto alpha = analyze(make_preset("theorem1", K, t)).fs.aggregate;
  for (int q1 = lo; q1 <= hi; ++q1) {
    std::vector<BigInt> F;
    for (int k = 1; k <= t + 1; ++k) F.push_back(binom(q1, k - 1) * binom(K - q1, t - k + 1));
    res.q1s.push_back(q1);
    res.counts.push_back(dot(alpha, F));
  }
  auto it = std::min_element(res.counts.begin(), res.counts.end());
  res.argmin = res.q1s[static_cast<std::size_t>(it - res.counts.begin())];
  const bool strict = std::count(res.counts.begin(), res.counts.end(), *it) == 1;
  res.report.checks.push_back({"lemma3.argmin", strict && res.argmin == q + 1,
                               "F=" + join(res.counts) + " argmin q1=" + std::to_string(res.argmin),
                               "strict minimum at q1 = q+1"});
  return res;
}

Remark3Result verify_remark3(int q) {
  Remark3Result res;
  res.report.subject = "remark3 q=" + std::to_string(q);
  if (q < 3) throw Error(ErrorKind::InvalidParams, "remark3 needs q >= 3");
  const int t = 2;
  const SystemParams params{2 * q + 1, t, 2 * q + 1, 1};
  const UserGrouping grouping({q + 1, q});
  const TypeLayout layout = derive_types(params, grouping);
  const auto delta = count_vectors(params, grouping).delta.front();
  const std::vector<std::vector<int>> choices{{0}, {1}, {0, 1}};
  std::set<std::vector<int>> satisfying;
  for (const auto& c2 : choices) {
    for (const auto& c3 : choices) {
      TransmitterSelection plan{{{1}, c2, c3, {0}}};
      Remark3Strategy s{c2, c3, vector_lcm(plan, layout), 0};
      s.residual = dot(s.alpha, delta);
      if (s.residual == 0) satisfying.insert(s.alpha);
      res.strategies.push_back(std::move(s));
    }
  }
  std::string wit;
  for (const auto& a : satisfying) wit += (wit.empty() ? "" : " ") + join(a);
  const bool unique = satisfying.size() == 1 && *satisfying.begin() == std::vector<int>{2, 2, 2};
  res.report.checks.push_back({"remark3.unique_mc_vector", unique, wit.empty() ? "none" : wit,
                               "only (2,2,2) meets the memory constraint"});
  const BigInt example = dot({0, 1, 2}, delta);
  res.report.checks.push_back({"remark3.theorem1_residual", example == 1 - 2 * q,
                               "alpha=(0,1,2) residual=" + to_string(example), "equals 1-2q"});
  return res;
}

ObstructionResult verify_odd_t_obstruction(int r) {
  ObstructionResult res;
  res.report.subject = "odd-t r=" + std::to_string(r);
  if (r < 1) throw Error(ErrorKind::InvalidParams, "r >= 1 required");
  const int t = 2 * r + 1;
  const SystemParams params{2 * t + 3, t, 2 * t + 3, 1};
  const TypeLayout layout = derive_types(params, UserGrouping({t + 2, t + 1}));
  // s_{r+1} = (r, r+2) with Q1 transmitting; s_{r+2} = (r+1, r+1) with Q2 transmitting.
  auto low = local_fs({0}, layout, r);
  auto high = local_fs({1}, layout, r + 1);
  const int pivot = r;  // index of v_{r+1}
  for (const auto& lf : low) {
    if (lf.subfile_type == pivot) res.factor_low = lf.factor;
  }
  for (const auto& lf : high) {
    if (lf.subfile_type == pivot) res.factor_high = lf.factor;
  }
  res.lcm = std::lcm(res.factor_low, res.factor_high);
  const std::string wit = "factors " + std::to_string(res.factor_low) + "," +
                          std::to_string(res.factor_high) + " lcm=" + std::to_string(res.lcm) +
                          " t=" + std::to_string(t);
  const bool factors = res.factor_low == r && res.factor_high == r + 1;
  if (r >= 2) {
    res.report.checks.push_back({"odd_t.obstruction", factors && res.lcm == r * (r + 1) && res.lcm > t,
                                 wit, "lcm(r, r+1) = r(r+1) exceeds t"});
  } else {
    res.report.checks.push_back({"odd_t.boundary", factors && res.lcm <= t, wit,
                                 "r = 1 is not obstructed"});
  }
  return res;
}

}  // namespace ptcache

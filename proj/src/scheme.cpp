#include "ptcache/scheme.hpp"

#include <algorithm>
#include <numeric>

#include "ptcache/errors.hpp"

namespace ptcache {

namespace {

BigInt type_count(const UserGrouping& grouping, const TypeVector& type) {
  BigInt count = 1;
  for (int g = 0; g < grouping.num_groups(); ++g) count *= binom(grouping.size(g), type[g]);
  return count;
}

void check_selection(const std::vector<int>& dagger, const TypeVector& s) {
  if (dagger.empty()) {
    throw Error(ErrorKind::EmptySelection, "no transmitter component for group type " + s.str());
  }
  for (int c : dagger) {
    if (c < 0 || c >= s.size() || s[c] == 0) {
      throw Error(ErrorKind::InvalidParams, "transmitter component " + std::to_string(c + 1) +
                                                " is empty in group type " + s.str());
    }
  }
}

}  // namespace

int TypeLayout::subfile_index(const TypeVector& v) const {
  auto it = std::find(subfile_types.begin(), subfile_types.end(), v);
  return it == subfile_types.end() ? -1 : static_cast<int>(it - subfile_types.begin());
}

int TypeLayout::group_index(const TypeVector& s) const {
  auto it = std::find(group_types.begin(), group_types.end(), s);
  return it == group_types.end() ? -1 : static_cast<int>(it - group_types.begin());
}

TypeLayout derive_types(const SystemParams& params, const UserGrouping& grouping) {
  const int t = params.t;
  if (t < 1) throw Error(ErrorKind::InvalidParams, "t >= 1 required");
  if (grouping.num_users() != params.K) {
    throw Error(ErrorKind::InvalidParams, "grouping " + grouping.str() + " does not sum to K=" +
                                              std::to_string(params.K));
  }
  TypeLayout layout;
  const int m = grouping.num_groups();
  if (m == 1) {
    layout.subfile_types = {TypeVector{{t}}};
    layout.group_types = {TypeVector{{t + 1}}};
    layout.involved = {{0}};
    layout.removal = {{0}};
  } else if (m == 2) {
    for (int k = 1; k <= t + 1; ++k) layout.subfile_types.push_back(TypeVector{{k - 1, t - k + 1}});
    for (int k = 1; k <= t + 2; ++k) {
      layout.group_types.push_back(TypeVector{{k - 1, t - k + 2}});
      // Index k-1 is s_k; dropping a Q1 member gives v_{k-1}, a Q2 member v_k.
      int from_q1 = k >= 2 ? k - 2 : -1;
      int from_q2 = k <= t + 1 ? k - 1 : -1;
      layout.removal.push_back({from_q1, from_q2});
      std::vector<int> inv;
      if (from_q1 >= 0) inv.push_back(from_q1);
      if (from_q2 >= 0) inv.push_back(from_q2);
      layout.involved.push_back(inv);
    }
  } else {
    throw Error(ErrorKind::UnsupportedGrouping,
                "only one or two user groups are supported, got " + grouping.str());
  }
  for (const auto& v : layout.subfile_types) layout.subfile_counts.push_back(type_count(grouping, v));
  for (const auto& s : layout.group_types) layout.group_counts.push_back(type_count(grouping, s));
  return layout;
}

std::vector<LocalFactor> local_fs(const std::vector<int>& dagger, const TypeLayout& layout,
                                  int group_type) {
  const TypeVector& s = layout.group_types[static_cast<std::size_t>(group_type)];
  check_selection(dagger, s);
  int transmitters = 0;
  for (int c : dagger) transmitters += s[c];
  std::vector<LocalFactor> out;
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] == 0) continue;
    bool is_tx = std::find(dagger.begin(), dagger.end(), i) != dagger.end();
    out.push_back(LocalFactor{i, layout.removal[static_cast<std::size_t>(group_type)]
                                               [static_cast<std::size_t>(i)],
                              is_tx ? transmitters - 1 : transmitters});
  }
  return out;
}

std::vector<int> vector_lcm(const TransmitterSelection& plan, const TypeLayout& layout) {
  if (static_cast<int>(plan.daggers.size()) != layout.num_group_types()) {
    throw Error(ErrorKind::LengthMismatch, "selection covers " +
                                               std::to_string(plan.daggers.size()) + " of " +
                                               std::to_string(layout.num_group_types()) +
                                               " group types");
  }
  const auto V = static_cast<std::size_t>(layout.num_subfile_types());
  std::vector<int> entry(V, -1);
  for (int s = 0; s < layout.num_group_types(); ++s) {
    if (layout.group_counts[static_cast<std::size_t>(s)] == 0) continue;
    for (const auto& lf : local_fs(plan.daggers[static_cast<std::size_t>(s)], layout, s)) {
      int& e = entry[static_cast<std::size_t>(lf.subfile_type)];
      if (e < 0) {
        e = lf.factor;
      } else if (e != 0) {
        e = lf.factor == 0 ? 0 : std::lcm(e, lf.factor);
      }
    }
  }
  for (int& e : entry) e = std::max(e, 0);
  return entry;
}

IntermediateFs intermediate_fs(const TransmitterSelection& plan, const TypeLayout& layout) {
  IntermediateFs out;
  out.alpha = vector_lcm(plan, layout);
  out.multiplier.assign(static_cast<std::size_t>(layout.num_group_types()), 0);
  for (int s = 0; s < layout.num_group_types(); ++s) {
    if (layout.group_counts[static_cast<std::size_t>(s)] == 0) continue;
    auto locals = local_fs(plan.daggers[static_cast<std::size_t>(s)], layout, s);
    bool active = std::any_of(locals.begin(), locals.end(), [&](const LocalFactor& lf) {
      return out.alpha[static_cast<std::size_t>(lf.subfile_type)] != 0;
    });
    if (!active) continue;
    int mult = 0;
    for (const auto& lf : locals) {
      int e = out.alpha[static_cast<std::size_t>(lf.subfile_type)];
      const std::string where = "group type " + layout.group_types[static_cast<std::size_t>(s)].str() +
                                ", subfile type " +
                                layout.subfile_types[static_cast<std::size_t>(lf.subfile_type)].str();
      if (lf.factor == 0) {
        if (e != 0) {
          throw Error(ErrorKind::IncompatibleLocals,
                      where + ": receiver hears no transmitter but needs " + std::to_string(e) +
                          " packets");
        }
        continue;
      }
      if (e == 0) {
        throw Error(ErrorKind::IncompatibleLocals,
                    where + ": local factor " + std::to_string(lf.factor) +
                        " conflicts with a zero factor from another group type");
      }
      int m = e / lf.factor;
      if (mult != 0 && m != mult) {
        throw Error(ErrorKind::IncompatibleLocals,
                    where + ": packet multiplier " + std::to_string(m) +
                        " differs from " + std::to_string(mult) + " for another receiver");
      }
      mult = m;
    }
    out.multiplier[static_cast<std::size_t>(s)] = mult;
  }
  return out;
}

std::vector<int> aggregate_fs(const std::vector<std::vector<int>>& intermediates) {
  if (intermediates.empty()) return {};
  std::vector<int> sum(intermediates.front().size(), 0);
  for (const auto& a : intermediates) {
    if (a.size() != sum.size()) {
      throw Error(ErrorKind::LengthMismatch, "intermediate FS vectors differ in length");
    }
    for (std::size_t i = 0; i < a.size(); ++i) sum[i] += a[i];
  }
  return sum;
}

CountVectors count_vectors(const SystemParams& params, const UserGrouping& grouping) {
  TypeLayout layout = derive_types(params, grouping);
  CountVectors cv;
  cv.F = layout.subfile_counts;
  const int m = grouping.num_groups();
  for (int i = 0; i < m; ++i) {
    std::vector<BigInt> Fi;
    for (const auto& v : layout.subfile_types) {
      BigInt c = binom(grouping.size(i) - 1, v[i] - 1);
      for (int j = 0; j < m; ++j) {
        if (j != i) c *= binom(grouping.size(j), v[j]);
      }
      Fi.push_back(c);
    }
    cv.per_group.push_back(std::move(Fi));
  }
  for (int i = 0; i + 1 < m; ++i) {
    std::vector<BigInt> d;
    for (std::size_t k = 0; k < cv.F.size(); ++k) {
      d.push_back(cv.per_group[static_cast<std::size_t>(i + 1)][k] -
                  cv.per_group[static_cast<std::size_t>(i)][k]);
    }
    cv.delta.push_back(std::move(d));
  }
  return cv;
}

BigInt dot(const std::vector<int>& alpha, const std::vector<BigInt>& counts) {
  if (alpha.size() != counts.size()) {
    throw Error(ErrorKind::LengthMismatch, "FS vector and count vector differ in length");
  }
  BigInt s = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) s += counts[i] * alpha[i];
  return s;
}

std::vector<Rational> solve_packet_ratio(const FsVectors& fs, const CountVectors& counts) {
  const auto G = fs.intermediate.size();
  if (G == 0) throw Error(ErrorKind::DegenerateSystem, "no coupled groups");
  const auto rows = counts.delta.size();
  const std::size_t unknowns = G - 1;
  // Augmented system: sum_{g>=2} gamma_g c_{i,g} = -c_{i,1}.
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(unknowns + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t g = 1; g < G; ++g) a[i][g - 1] = Rational(dot(fs.intermediate[g], counts.delta[i]));
    a[i][unknowns] = -Rational(dot(fs.intermediate[0], counts.delta[i]));
  }
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t col = 0; col < unknowns && rank < rows; ++col) {
    std::size_t p = rank;
    while (p < rows && a[p][col].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    Rational inv = Rational(1) / a[rank][col];
    for (auto& x : a[rank]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || a[i][col].is_zero()) continue;
      Rational f = a[i][col];
      for (std::size_t j = col; j <= unknowns; ++j) a[i][j] -= f * a[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t i = rank; i < rows; ++i) {
    if (!a[i][unknowns].is_zero()) {
      throw Error(ErrorKind::DegenerateSystem,
                  "memory constraint has no solution for the given FS vectors");
    }
  }
  if (rank < unknowns) {
    throw Error(ErrorKind::DegenerateSystem, "memory constraint does not determine all " +
                                                 std::to_string(unknowns) + " packet-size ratios");
  }
  std::vector<Rational> gamma(G, Rational(1));
  for (std::size_t i = 0; i < rank; ++i) gamma[pivot_col[i] + 1] = a[i][unknowns];
  for (std::size_t g = 0; g < G; ++g) {
    if (gamma[g].sign() <= 0) {
      throw Error(ErrorKind::InvalidRatio, "gamma_" + std::to_string(g + 1) + " = " +
                                               gamma[g].str() + " is not positive");
    }
  }
  return gamma;
}

PacketSizing integer_packet_sizes(const std::vector<Rational>& gamma, const FsVectors& fs,
                                  const CountVectors& counts, int unit) {
  if (gamma.size() != fs.intermediate.size()) {
    throw Error(ErrorKind::LengthMismatch, "one ratio per coupled group required");
  }
  if (unit < 1) throw Error(ErrorKind::InvalidParams, "unit must be >= 1");
  BigInt den = 1;
  for (const auto& g : gamma) den = boost::multiprecision::lcm(den, g.denominator());
  std::vector<BigInt> ell;
  BigInt common = 0;
  for (const auto& g : gamma) {
    ell.push_back(g.numerator() * (den / g.denominator()));
    common = boost::multiprecision::gcd(common, ell.back());
  }
  for (auto& e : ell) e /= common;
  PacketSizing sizing;
  sizing.gamma = gamma;
  sizing.ell = ell;
  sizing.L = 0;
  for (std::size_t g = 0; g < ell.size(); ++g) sizing.L += dot(fs.intermediate[g], counts.F) * ell[g];
  sizing.unit = unit;
  return sizing;
}

void validate(const SchemeSpec& spec) {
  const auto& p = spec.params;
  if (p.t < 1) throw Error(ErrorKind::InvalidParams, "t >= 1 required");
  if (p.K < p.t + 1) {
    throw Error(ErrorKind::InvalidParams, "K >= t+1 required (K=" + std::to_string(p.K) +
                                              ", t=" + std::to_string(p.t) + ")");
  }
  if (p.N < p.K) {
    throw Error(ErrorKind::InvalidParams, "N >= K required (N=" + std::to_string(p.N) +
                                              ", K=" + std::to_string(p.K) + ")");
  }
  if (p.unit < 1) throw Error(ErrorKind::InvalidParams, "unit >= 1 required");
  if (spec.grouping.num_users() != p.K) {
    throw Error(ErrorKind::InvalidParams, "grouping " + spec.grouping.str() +
                                              " does not sum to K=" + std::to_string(p.K));
  }
  if (spec.plans.empty()) throw Error(ErrorKind::InvalidParams, "at least one coupled group required");
  if (spec.num_coupled_groups() < spec.grouping.num_distinct()) {
    throw Error(ErrorKind::InvalidParams,
                "G >= number of distinct group sizes required (G=" +
                    std::to_string(spec.num_coupled_groups()) + ", distinct sizes=" +
                    std::to_string(spec.grouping.num_distinct()) + ")");
  }
  TypeLayout layout = derive_types(p, spec.grouping);
  for (const auto& plan : spec.plans) {
    if (static_cast<int>(plan.daggers.size()) != layout.num_group_types()) {
      throw Error(ErrorKind::LengthMismatch,
                  "each plan needs one dagger set per group type (" +
                      std::to_string(layout.num_group_types()) + ")");
    }
    for (int s = 0; s < layout.num_group_types(); ++s) {
      check_selection(plan.daggers[static_cast<std::size_t>(s)],
                      layout.group_types[static_cast<std::size_t>(s)]);
    }
  }
}

SchemeAlgebra analyze(const SchemeSpec& spec) {
  validate(spec);
  SchemeAlgebra alg;
  alg.spec = spec;
  alg.layout = derive_types(spec.params, spec.grouping);
  for (const auto& plan : spec.plans) {
    IntermediateFs inter = intermediate_fs(plan, alg.layout);
    alg.fs.intermediate.push_back(std::move(inter.alpha));
    alg.fs.multipliers.push_back(std::move(inter.multiplier));
  }
  alg.fs.aggregate = aggregate_fs(alg.fs.intermediate);
  alg.counts = count_vectors(spec.params, spec.grouping);
  auto gamma = solve_packet_ratio(alg.fs, alg.counts);
  alg.sizing = integer_packet_sizes(gamma, alg.fs, alg.counts, spec.params.unit);
  alg.f_pt = dot(alg.fs.aggregate, alg.counts.F);
  alg.f_jcm = binom(spec.params.K, spec.params.t) * spec.params.t;
  for (const auto& d : alg.counts.delta) {
    Rational res = 0;
    for (std::size_t g = 0; g < gamma.size(); ++g) res += gamma[g] * Rational(dot(alg.fs.intermediate[g], d));
    alg.mc_residual.push_back(res);
  }
  return alg;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"theorem1", "odd_t3", "even_K", "jcm"};
  return names;
}

std::vector<TransmitterSelection> theorem1_plans(int t) {
  const int r = t / 2;
  TransmitterSelection g1;
  TransmitterSelection g2;
  // Index k-1 holds the dagger set of s_k = (k-1, t-k+2).
  for (int k = 1; k <= t + 2; ++k) {
    if (k == 1) {
      g1.daggers.push_back({1});
      g2.daggers.push_back({1});
    } else if (k == t + 2) {
      g1.daggers.push_back({0});
      g2.daggers.push_back({0});
    } else {
      g1.daggers.push_back({0});
      g2.daggers.push_back(k <= r + 1 ? std::vector<int>{0} : std::vector<int>{1});
    }
  }
  return {g1, g2};
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::PresetConstraintViolated, what);
}

std::string kv(const char* name, int value) { return std::string(name) + "=" + std::to_string(value); }

}  // namespace

SchemeSpec make_preset(const std::string& name, int K, int t, int N, int unit) {
  SchemeSpec spec;
  spec.name = name;
  spec.params = SystemParams{K, t, N == 0 ? K : N, unit};
  if (name == "theorem1") {
    require(K % 2 == 1, "K must be odd for theorem1 (" + kv("K", K) + ")");
    require(t >= 2 && t % 2 == 0, "t must be even and >= 2 for theorem1 (" + kv("t", t) + ")");
    const int q = (K - 1) / 2;
    require(q >= t + 1, "q >= t+1 required (" + kv("q", q) + ", " + kv("t", t) + ")");
    spec.grouping = UserGrouping({q + 1, q});
    spec.plans = theorem1_plans(t);
  } else if (name == "odd_t3") {
    require(t == 3, "odd_t3 requires t = 3 (" + kv("t", t) + ")");
    require(K % 2 == 1, "K must be odd for odd_t3 (" + kv("K", K) + ")");
    const int q = (K - 1) / 2;
    require(q >= 4, "q >= 4 required for odd_t3 (" + kv("q", q) + ")");
    spec.grouping = UserGrouping({q + 1, q});
    TransmitterSelection g1{{{1}, {0}, {0}, {0}, {0}}};
    TransmitterSelection g2{{{1}, {0}, {1}, {1}, {0}}};
    spec.plans = {g1, g2};
  } else if (name == "even_K") {
    require(K % 2 == 0, "K must be even for even_K (" + kv("K", K) + ")");
    require(t >= 2 && t % 2 == 0, "t must be even and >= 2 for even_K (" + kv("t", t) + ")");
    const int q = K / 2;
    require(q >= t + 1, "q >= 2r+1 required (" + kv("q", q) + ", " + kv("r", t / 2) + ")");
    spec.grouping = UserGrouping({q + 1, q - 1});
    spec.plans = theorem1_plans(t);
  } else if (name == "jcm") {
    require(t >= 1 && t < K, "1 <= t < K required (" + kv("K", K) + ", " + kv("t", t) + ")");
    spec.grouping = UserGrouping({K});
    spec.plans = {TransmitterSelection{{{0}}}};
  } else {
    throw Error(ErrorKind::InvalidParams, "unknown preset '" + name + "'");
  }
  require(spec.params.N >= K, "N >= K required (" + kv("N", spec.params.N) + ", " + kv("K", K) + ")");
  require(unit >= 1, "unit >= 1 required");
  return spec;
}

SchemeSpec with_grouping(SchemeSpec spec, const std::vector<int>& sizes) {
  UserGrouping grouping(sizes);
  if (grouping.num_users() != spec.params.K) {
    throw Error(ErrorKind::InvalidParams, "grouping " + grouping.str() + " does not sum to K=" +
                                              std::to_string(spec.params.K));
  }
  if (grouping.num_groups() != spec.grouping.num_groups()) {
    throw Error(ErrorKind::UnsupportedGrouping,
                "grouping " + grouping.str() + " has a different number of groups than preset " +
                    spec.name);
  }
  spec.grouping = grouping;
  return spec;
}

}  // namespace ptcache

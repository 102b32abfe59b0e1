#include "ptcache/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptcache/analysis.hpp"
#include "ptcache/errors.hpp"
#include "ptcache/exchange.hpp"
#include "ptcache/jcm.hpp"
#include "ptcache/serialize.hpp"
#include "ptcache/verifier.hpp"

namespace ptcache {

namespace {

struct SchemeOptions {
  std::string preset = "theorem1";
  int K = 0;
  int t = 0;
  int N = 0;
  int unit = 1;
  std::vector<int> grouping;
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::string demands = "distinct";
  std::string transcript;
};

struct VerifyOptions {
  bool claims = false;
  bool lemma1 = false;
  bool lemma3 = false;
  bool remark3 = false;
  bool odd_t = false;
  std::vector<int> t;
  int K = 0;
  int q = 0;
  int r = 0;
  std::string q_range;
  std::string r_range;
};

struct SweepOptions {
  std::vector<int> t{2, 4, 6, 8};
  int q_max = 0;
  std::string format = "csv";
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_scheme_options(CLI::App* cmd, SchemeOptions& s) {
  cmd->add_option("--preset", s.preset, "theorem1 | odd_t3 | even_K | jcm")->capture_default_str();
  cmd->add_option("--K", s.K, "number of users");
  cmd->add_option("--t", s.t, "aggregate cache size KM/N");
  cmd->add_option("--N", s.N, "number of files (default K)");
  cmd->add_option("--unit", s.unit, "bytes per packet-size unit")->capture_default_str();
  cmd->add_option("--grouping", s.grouping, "group sizes, e.g. 5,4")->delimiter(',');
}

SchemeSpec build_spec(const SchemeOptions& s) {
  int t = s.t;
  if (t == 0 && s.preset == "odd_t3") t = 3;
  if (s.K == 0 || t == 0) throw ConfigError("--K and --t are required");
  SchemeSpec spec = make_preset(s.preset, s.K, t, s.N, s.unit);
  if (!s.grouping.empty()) spec = with_grouping(spec, s.grouping);
  return spec;
}

std::vector<int> parse_demands(const std::string& text, const SchemeSpec& spec) {
  const int K = spec.params.K;
  std::vector<int> d;
  if (text == "distinct") {
    for (int u = 1; u <= K; ++u) d.push_back(u);
  } else if (text == "uniform") {
    d.assign(static_cast<std::size_t>(K), 1);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        d.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw ConfigError("cannot parse demand '" + item + "'");
      }
    }
  }
  return d;
}

std::pair<int, int> parse_range(const std::string& text, const char* flag) {
  auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse ") + flag + " '" + text + "', expected a:b");
  }
}

std::filesystem::path resolve(const std::string& path) {
  std::filesystem::path p(path);
  const char* dir = std::getenv(kOutputDirEnv);
  if (p.is_relative() && dir != nullptr && *dir != '\0') p = std::filesystem::path(dir) / p;
  return p;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  auto p = resolve(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + p.string());
  f << text;
}

int cmd_construct(const SchemeOptions& s, const std::string& output, std::ostream& out) {
  SchemeAlgebra alg = analyze(build_spec(s));
  emit(blueprint_json(alg).dump(2) + "\n", output, out);
  return kExitPass;
}

int cmd_simulate(const SchemeOptions& s, const RunOptions& run, const std::string& output,
                 std::ostream& out) {
  SchemeSpec spec = build_spec(s);
  SchemeAlgebra alg = analyze(spec);
  std::vector<int> demands = parse_demands(run.demands, spec);
  check_demands(alg, demands);
  VerificationReport rep = verify_end_to_end(spec, demands, run.seed);
  if (!run.transcript.empty()) {
    std::vector<int> files(demands);
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    PacketStore store = split_files(alg, CounterHashOracle(0), files);
    std::ostringstream lines;
    write_transcript(lines, generate_delivery(alg, store, demands, run.seed));
    emit(lines.str(), run.transcript, out);
  }
  Json doc = report_json(rep);
  doc["blueprint"] = blueprint_json(alg);
  emit(doc.dump(2) + "\n", output, out);
  return rep.pass() ? kExitPass : kExitFailure;
}

int cmd_compare(const SchemeOptions& s, const RunOptions& run, const std::string& output,
                std::ostream& out) {
  SchemeSpec pt = build_spec(s);
  SchemeSpec jcm = make_preset("jcm", pt.params.K, pt.params.t, pt.params.N, pt.params.unit);
  std::vector<int> demands = parse_demands(run.demands, pt);
  check_demands(analyze(pt), demands);
  Comparison c = compare(pt, jcm, demands, run.seed);
  emit(comparison_json(c).dump(2) + "\n", output, out);
  return c.pass() ? kExitPass : kExitFailure;
}

int cmd_verify(const VerifyOptions& v, bool strict, const std::string& output, std::ostream& out) {
  if (!(v.claims || v.lemma1 || v.lemma3 || v.remark3 || v.odd_t)) {
    throw ConfigError("choose at least one of --claims --lemma1 --lemma3 --remark3 --odd-t");
  }
  Json reports = Json::array();
  bool pass = true;
  auto add = [&](const CheckReport& r) {
    reports.push_back(check_report_json(r));
    pass = pass && r.pass();
  };
  auto q_bounds = [&](int lo_default, int hi_default) -> std::pair<int, int> {
    if (v.q != 0) return {v.q, v.q};
    if (!v.q_range.empty()) return parse_range(v.q_range, "--q-range");
    return {lo_default, hi_default};
  };
  if ((v.claims || v.lemma1 || v.lemma3) && v.t.empty()) throw ConfigError("--t is required");
  if (v.claims) {
    for (int t : v.t) {
      auto [lo, hi] = q_bounds(t + 1, t + 20);
      if (lo > hi) throw Error(ErrorKind::EmptyRange, "empty q range");
      for (int q = lo; q <= hi; ++q) add(verify_claims(t, q));
    }
  }
  if (v.lemma1) {
    for (int t : v.t) {
      auto [lo, hi] = q_bounds(t + 1, t + 15);
      add(verify_lemma1(t, lo, hi).report);
    }
  }
  if (v.lemma3) {
    if (v.K == 0) throw ConfigError("--lemma3 needs --K");
    for (int t : v.t) add(verify_lemma3(v.K, t).report);
  }
  if (v.remark3) {
    auto [lo, hi] = q_bounds(3, 12);
    if (lo > hi) throw Error(ErrorKind::EmptyRange, "empty q range");
    for (int q = lo; q <= hi; ++q) add(verify_remark3(q).report);
  }
  if (v.odd_t) {
    std::pair<int, int> rr{1, 6};
    if (v.r != 0) rr = {v.r, v.r};
    if (!v.r_range.empty()) rr = parse_range(v.r_range, "--r-range");
    if (rr.first > rr.second) throw Error(ErrorKind::EmptyRange, "empty r range");
    for (int r = rr.first; r <= rr.second; ++r) add(verify_odd_t_obstruction(r).report);
  }
  Json doc{{"command", "verify"}, {"pass", pass}, {"reports", reports}};
  emit(doc.dump(2) + "\n", output, out);
  return pass || !strict ? kExitPass : kExitFailure;
}

int cmd_sweep(const SweepOptions& s, const std::string& output, std::ostream& out) {
  if (s.format != "csv" && s.format != "json") throw ConfigError("--format must be csv or json");
  std::vector<RatioRecord> records;
  std::vector<int> ts = s.t;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (int t : ts) {
    const int q_max = s.q_max != 0 ? s.q_max : default_q_max(t);
    if (t % 2 == 0 && q_max < t + 1) {
      throw Error(ErrorKind::EmptyRange, "--q-max " + std::to_string(q_max) + " is below t+1 for t=" +
                                             std::to_string(t));
    }
    auto part = sweep({t}, q_max);
    records.insert(records.end(), part.begin(), part.end());
  }
  std::ostringstream text;
  if (s.format == "csv") {
    write_sweep_csv(text, records);
  } else {
    text << sweep_json(records).dump(2) << "\n";
  }
  emit(text.str(), output, out);
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Packet-type D2D coded caching: construct, simulate, verify, sweep", "ptcache"};
  app.require_subcommand(1);

  SchemeOptions scheme;
  RunOptions run;
  VerifyOptions verify;
  SweepOptions sweep_opts;
  std::string output;
  bool strict = false;

  auto* construct = app.add_subcommand("construct", "print the blueprint and derived algebra");
  add_scheme_options(construct, scheme);
  construct->add_option("--output", output, "write to this file instead of stdout");

  auto* simulate = app.add_subcommand("simulate", "run placement, delivery and decoding on bytes");
  add_scheme_options(simulate, scheme);
  simulate->add_option("--seed", run.seed, "seed of the delivery bijections")->capture_default_str();
  simulate->add_option("--demands", run.demands, "distinct | uniform | comma list")->capture_default_str();
  simulate->add_option("--transcript", run.transcript, "write the delivery transcript (JSON lines)");
  simulate->add_option("--output", output, "write the report to this file instead of stdout");
  simulate->add_flag("--strict", strict, "accepted for symmetry; failures always exit 1");

  auto* cmp = app.add_subcommand("compare", "simulate a scheme and JCM on the same demands");
  add_scheme_options(cmp, scheme);
  cmp->add_option("--seed", run.seed, "seed of the delivery bijections")->capture_default_str();
  cmp->add_option("--demands", run.demands, "distinct | uniform | comma list")->capture_default_str();
  cmp->add_option("--output", output, "write to this file instead of stdout");

  auto* ver = app.add_subcommand("verify", "check the analytic claims over a grid");
  ver->add_flag("--claims", verify.claims, "Delta, delta_tq, phi_t and gamma checks");
  ver->add_flag("--lemma1", verify.lemma1, "monotone ratio and hypergeometric form");
  ver->add_flag("--lemma3", verify.lemma3, "grouping scan minimality");
  ver->add_flag("--remark3", verify.remark3, "homogeneous selections at t=2");
  ver->add_flag("--odd-t", verify.odd_t, "pivot LCM obstruction for odd t");
  ver->add_option("--t", verify.t, "even t values, comma separated")->delimiter(',');
  ver->add_option("--K", verify.K, "number of users (lemma3)");
  ver->add_option("--q", verify.q, "single q");
  ver->add_option("--q-range", verify.q_range, "q range a:b");
  ver->add_option("--r", verify.r, "single r (odd-t)");
  ver->add_option("--r-range", verify.r_range, "r range a:b (odd-t, default 1:6)");
  ver->add_flag("--strict", strict, "exit 1 when any check fails");
  ver->add_option("--output", output, "write to this file instead of stdout");

  auto* sw = app.add_subcommand("sweep", "F_PT/F_JCM ratio records for plotting");
  sw->add_option("--t", sweep_opts.t, "even t values, comma separated")->delimiter(',')->capture_default_str();
  sw->add_option("--q-max", sweep_opts.q_max, "largest q (default t+50)");
  sw->add_option("--format", sweep_opts.format, "csv | json")->capture_default_str();
  sw->add_option("--output", output, "write to this file instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  try {
    if (*construct) return cmd_construct(scheme, output, out);
    if (*simulate) return cmd_simulate(scheme, run, output, out);
    if (*cmp) return cmd_compare(scheme, run, output, out);
    if (*ver) return cmd_verify(verify, strict, output, out);
    if (*sw) return cmd_sweep(sweep_opts, output, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace ptcache

#include "ptcache/serialize.hpp"

#include <cstdio>
#include <limits>

namespace ptcache {

namespace {

Json users_json(UserSet s) { return Json(s.members()); }

Json big_list(const std::vector<BigInt>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(big_json(v));
  return out;
}

Json rational_list(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(v.str());
  return out;
}

Json types_json(const std::vector<TypeVector>& types) {
  Json out = Json::array();
  for (const auto& t : types) out.push_back(t.entries);
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

Json big_json(const BigInt& value) {
  if (value >= std::numeric_limits<std::int64_t>::min() && value <= std::numeric_limits<std::int64_t>::max()) {
    return Json(value.convert_to<std::int64_t>());
  }
  return Json(to_string(value));
}

std::string format_float(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

Json blueprint_json(const SchemeAlgebra& a) {
  const auto& p = a.spec.params;
  Json doc;
  doc["scheme"] = a.spec.name;
  doc["params"] = {{"K", p.K}, {"t", p.t}, {"N", p.N}, {"unit", p.unit}};
  doc["grouping"] = a.spec.grouping.sizes();
  doc["subfile_types"] = types_json(a.layout.subfile_types);
  doc["group_types"] = types_json(a.layout.group_types);
  Json involved = Json::array();
  for (const auto& inv : a.layout.involved) {
    Json row = Json::array();
    for (int i : inv) row.push_back(i + 1);
    involved.push_back(row);
  }
  doc["involved"] = involved;
  Json plans = Json::array();
  for (std::size_t g = 0; g < a.spec.plans.size(); ++g) {
    Json daggers = Json::array();
    for (const auto& d : a.spec.plans[g].daggers) {
      Json row = Json::array();
      for (int c : d) row.push_back(c + 1);
      daggers.push_back(row);
    }
    plans.push_back({{"coupled_group", g + 1}, {"daggers", daggers}});
  }
  doc["plans"] = plans;
  doc["fs"] = {{"intermediate", a.fs.intermediate},
               {"aggregate", a.fs.aggregate},
               {"multipliers", a.fs.multipliers}};
  Json per_group = Json::array();
  for (const auto& f : a.counts.per_group) per_group.push_back(big_list(f));
  Json delta = Json::array();
  for (const auto& d : a.counts.delta) delta.push_back(big_list(d));
  doc["counts"] = {{"F", big_list(a.counts.F)}, {"F_groups", per_group}, {"Delta", delta}};
  doc["gamma"] = a.sizing.gamma.back().str();
  doc["sizing"] = {{"gamma", rational_list(a.sizing.gamma)},
                   {"ell_units", big_list(a.sizing.ell)},
                   {"L_units", big_json(a.sizing.L)},
                   {"unit", a.sizing.unit},
                   {"file_bytes", big_json(a.sizing.L * a.sizing.unit)}};
  doc["mc_residual"] = rational_list(a.mc_residual);
  doc["F_PT"] = big_json(a.f_pt);
  doc["F_JCM"] = big_json(a.f_jcm);
  doc["ratio"] = Rational(a.f_pt, a.f_jcm).str();
  return doc;
}

Json report_json(const VerificationReport& r) {
  Json doc;
  doc["scheme"] = r.scheme;
  doc["K"] = r.K;
  doc["t"] = r.t;
  doc["seed"] = r.seed;
  doc["demands"] = r.demands;
  doc["pass"] = r.pass();
  doc["decode_ok"] = r.decode_ok;
  doc["memory_ok"] = r.memory_ok;
  doc["rate_ok"] = r.rate_ok;
  doc["dof_ok"] = r.dof_ok;
  doc["rate"] = r.rate.str();
  doc["expected_rate"] = r.expected_rate.str();
  doc["F_PT"] = big_json(r.f_pt);
  doc["F_JCM"] = big_json(r.f_jcm);
  doc["L_units"] = big_json(r.L);
  doc["gamma"] = rational_list(r.gamma);
  doc["messages_per_round"] = r.messages_per_round;
  doc["transmitted_units"] = big_json(r.transmitted_units);
  doc["memory_target_bytes"] = r.memory_target_bytes.str();
  Json users = Json::array();
  for (const auto& u : r.users) {
    users.push_back({{"user", u.user},
                     {"decode_ok", u.decode_ok},
                     {"cached_bytes", big_json(u.cached_bytes)},
                     {"packets_decoded", u.packets_decoded}});
  }
  doc["users"] = users;
  doc["dof_violations"] = r.dof_violations;
  doc["failure"] = r.failure;
  return doc;
}

Json check_report_json(const CheckReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"id", c.id}, {"pass", c.pass}, {"witness", c.witness}, {"note", c.note}});
  }
  return Json{{"subject", r.subject}, {"pass", r.pass()}, {"checks", checks}};
}

Json comparison_json(const Comparison& c) {
  return Json{{"K", c.K},
              {"t", c.t},
              {"F_PT", big_json(c.f_pt)},
              {"F_JCM", big_json(c.f_jcm)},
              {"rate_pt", c.rate_pt.str()},
              {"rate_jcm", c.rate_jcm.str()},
              {"pt_pass", c.pt_pass},
              {"jcm_pass", c.jcm_pass},
              {"pass", c.pass()},
              {"failure", c.failure}};
}

Json packet_id_json(const PacketId& id) {
  return Json{{"file", id.file}, {"support", users_json(id.support)}, {"group", id.group}, {"index", id.index}};
}

void write_transcript(std::ostream& out, const std::vector<CodedMessage>& messages) {
  for (const auto& m : messages) {
    Json constituents = Json::array();
    for (const auto& id : m.constituents) constituents.push_back(packet_id_json(id));
    Json rec{{"round", m.round},
             {"S", users_json(m.group)},
             {"transmitter", m.transmitter},
             {"copy", m.copy},
             {"constituents", constituents},
             {"payload_bytes", m.payload.size()},
             {"payload_fnv1a", hex64(fnv1a(m.payload))}};
    out << rec.dump() << '\n';
  }
}

Json sweep_json(const std::vector<RatioRecord>& records) {
  Json out = Json::array();
  for (const auto& r : records) {
    out.push_back({{"K", r.K},
                   {"t", r.t},
                   {"q", r.q},
                   {"r", r.r},
                   {"F_PT", big_json(r.F_PT)},
                   {"F_JCM", big_json(r.F_JCM)},
                   {"ratio_exact", r.ratio.str()},
                   {"ratio_float", format_float(r.ratio.to_double())},
                   {"asymptote_exact", r.asymptote.str()},
                   {"asymptote_float", format_float(r.asymptote.to_double())},
                   {"gamma", r.gamma.str()}});
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<RatioRecord>& records) {
  out << "K,t,q,r,F_PT,F_JCM,ratio_exact,ratio_float,asymptote_exact,asymptote_float,gamma\n";
  for (const auto& r : records) {
    out << r.K << ',' << r.t << ',' << r.q << ',' << r.r << ',' << to_string(r.F_PT) << ','
        << to_string(r.F_JCM) << ',' << r.ratio.str() << ',' << format_float(r.ratio.to_double())
        << ',' << r.asymptote.str() << ',' << format_float(r.asymptote.to_double()) << ','
        << r.gamma.str() << '\n';
  }
}

}  // namespace ptcache

#pragma once

#include <ostream>
#include <vector>

#include <json.hpp>

#include "ptcache/analysis.hpp"
#include "ptcache/exchange.hpp"
#include "ptcache/jcm.hpp"
#include "ptcache/scheme.hpp"
#include "ptcache/verifier.hpp"

namespace ptcache {

using Json = nlohmann::ordered_json;

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
Json big_json(const BigInt& value);

Json blueprint_json(const SchemeAlgebra& algebra);
Json report_json(const VerificationReport& report);
Json check_report_json(const CheckReport& report);
Json comparison_json(const Comparison& comparison);
Json packet_id_json(const PacketId& id);

/// One JSON object per line: round, S, transmitter, copy, constituents, payload hash.
void write_transcript(std::ostream& out, const std::vector<CodedMessage>& messages);

Json sweep_json(const std::vector<RatioRecord>& records);
void write_sweep_csv(std::ostream& out, const std::vector<RatioRecord>& records);

/// printf("%.12g").
std::string format_float(double value);

}  // namespace ptcache

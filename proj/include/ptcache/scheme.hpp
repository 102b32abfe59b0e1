#pragma once

#include <string>
#include <vector>

#include "ptcache/combinatorics.hpp"
#include "ptcache/rational.hpp"

namespace ptcache {

struct SystemParams {
  int K = 0;     // users
  int t = 0;     // aggregate cache size KM/N
  int N = 0;     // files
  int unit = 1;  // bytes per packet-size unit

  int q() const { return (K - 1) / 2; }
  int r() const { return t / 2; }
};

/// Dagger sets of one coupled group: for every multicast-group type (indexed
/// as in TypeLayout::group_types) the 0-based group components whose members
/// transmit.
struct TransmitterSelection {
  std::vector<std::vector<int>> daggers;
};

struct SchemeSpec {
  std::string name;
  SystemParams params;
  UserGrouping grouping;
  std::vector<TransmitterSelection> plans;  // one per coupled group

  int num_coupled_groups() const { return static_cast<int>(plans.size()); }
};

/// Subfile types v_k, multicast-group types s_k and how they connect.
struct TypeLayout {
  std::vector<TypeVector> subfile_types;
  std::vector<TypeVector> group_types;
  /// involved[s] = subfile-type indices obtained by removing one member of a
  /// type-s group, ascending.
  std::vector<std::vector<int>> involved;
  /// removal[s][i] = subfile-type index left after removing a member of
  /// component i from a type-s group, or -1 when s_i = 0.
  std::vector<std::vector<int>> removal;
  /// Number of subsets of each type for the grouping.
  std::vector<BigInt> subfile_counts;
  std::vector<BigInt> group_counts;

  int num_subfile_types() const { return static_cast<int>(subfile_types.size()); }
  int num_group_types() const { return static_cast<int>(group_types.size()); }
  /// Index of a subfile type, or -1.
  int subfile_index(const TypeVector& v) const;
  /// Index of a multicast-group type, or -1.
  int group_index(const TypeVector& s) const;
};

/// Subfile types ordered by increasing first component; one or two groups.
TypeLayout derive_types(const SystemParams& params, const UserGrouping& grouping);

struct LocalFactor {
  int component;     // group component the removed receiver belongs to
  int subfile_type;  // index into TypeLayout::subfile_types
  int factor;        // transmitters observable by that receiver
};

/// Local FS factors of a type-s multicast group under dagger set D: every
/// receiver hears all transmitters except itself.
std::vector<LocalFactor> local_fs(const std::vector<int>& dagger, const TypeLayout& layout,
                                  int group_type);

/// Entrywise LCM of local factors over all group types, with lcm(0, x) = 0.
/// No compatibility validation; subfile types touched by no group type get 0.
std::vector<int> vector_lcm(const TransmitterSelection& plan, const TypeLayout& layout);

struct IntermediateFs {
  std::vector<int> alpha;       // per subfile type
  std::vector<int> multiplier;  // per group type; messages per transmitter, 0 = omitted
};

/// Intermediate FS vector of one coupled group.
///
/// Each entry is the LCM of the local factors of the group types involving
/// the subfile type, where a zero local factor forces the entry to zero. A
/// group type is delivered when any involved entry is nonzero; then each of
/// its transmitters sends m messages and every receiver component must have
/// entry = m * (its local factor) with one common m. A receiver whose subfile
/// type was zeroed while it still hears transmitters, or disagreeing
/// multipliers, raise IncompatibleLocals.
IntermediateFs intermediate_fs(const TransmitterSelection& plan, const TypeLayout& layout);

/// Entrywise sum.
std::vector<int> aggregate_fs(const std::vector<std::vector<int>>& intermediates);

struct FsVectors {
  std::vector<std::vector<int>> intermediate;
  std::vector<std::vector<int>> multipliers;
  std::vector<int> aggregate;
};

struct CountVectors {
  std::vector<BigInt> F;                       // subfiles per type
  std::vector<std::vector<BigInt>> per_group;  // F_i: type-v subfiles cached by one user of Q_i
  std::vector<std::vector<BigInt>> delta;      // delta[i] = F_{i+1} - F_i
};

CountVectors count_vectors(const SystemParams& params, const UserGrouping& grouping);

BigInt dot(const std::vector<int>& alpha, const std::vector<BigInt>& counts);

/// Packet-size ratios gamma_g = l(g)/l(1), gamma_1 = 1, solving the memory
/// constraint sum_g gamma_g alpha(g).delta_i = 0 for every i.
std::vector<Rational> solve_packet_ratio(const FsVectors& fs, const CountVectors& counts);

struct PacketSizing {
  std::vector<Rational> gamma;
  std::vector<BigInt> ell;  // packet size per coupled group, in units
  BigInt L;                 // file length in units
  int unit = 1;             // bytes per unit
};

/// Smallest positive integer sizes with the exact ratios gamma.
PacketSizing integer_packet_sizes(const std::vector<Rational>& gamma, const FsVectors& fs,
                                  const CountVectors& counts, int unit);

/// Everything derivable from a blueprint without touching bytes.
struct SchemeAlgebra {
  SchemeSpec spec;
  TypeLayout layout;
  FsVectors fs;
  CountVectors counts;
  PacketSizing sizing;
  BigInt f_pt;   // packets per file
  BigInt f_jcm;  // t * C(K, t)
  /// Residual sum_g gamma_g alpha(g).delta_i per constraint (all zero when valid).
  std::vector<Rational> mc_residual;
};

/// Checks the structural invariants of a blueprint; throws on violation.
void validate(const SchemeSpec& spec);

/// Validates and derives types, FS vectors, counts and packet sizes.
SchemeAlgebra analyze(const SchemeSpec& spec);

/// Names accepted by make_preset.
const std::vector<std::string>& preset_names();

/// Builds a named blueprint. N = 0 means N = K.
/// theorem1: K = 2q+1, t = 2r, q >= t+1, grouping (q+1, q).
/// odd_t3:   K = 2q+1, t = 3, q >= 4, grouping (q+1, q).
/// even_K:   K = 2q, t = 2r, q >= 2r+1, grouping (q+1, q-1).
/// jcm:      any 1 <= t < K, single group (K).
SchemeSpec make_preset(const std::string& name, int K, int t, int N = 0, int unit = 1);

/// Replaces the grouping of a two-group preset, keeping its plans.
SchemeSpec with_grouping(SchemeSpec spec, const std::vector<int>& sizes);

/// Dagger plans of the theorem1 construction for even t.
std::vector<TransmitterSelection> theorem1_plans(int t);

}  // namespace ptcache

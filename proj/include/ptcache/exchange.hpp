#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "ptcache/combinatorics.hpp"
#include "ptcache/scheme.hpp"

namespace ptcache {

/// Packet W_{file,support}^{(group),index}; file, group and index are 1-based.
struct PacketId {
  int file = 0;
  UserSet support;
  int group = 0;
  int index = 0;

  friend bool operator==(const PacketId&, const PacketId&) = default;
};

/// Packet of a file, independent of which file.
struct PacketSlot {
  UserSet support;
  int subfile_type = 0;  // index into TypeLayout::subfile_types
  int group = 0;         // 1-based coupled group
  int index = 0;         // 1-based
  std::uint64_t offset_units = 0;
  std::uint64_t size_units = 0;
};

/// Canonical order of the packets of every file: subfile type, then support
/// set (lexicographic), then coupled group, then index.
class PacketLayout {
 public:
  PacketLayout() = default;
  explicit PacketLayout(const SchemeAlgebra& algebra);

  const std::vector<PacketSlot>& slots() const { return slots_; }
  std::size_t num_packets() const { return slots_.size(); }
  std::uint64_t file_units() const { return file_units_; }
  int unit() const { return unit_; }
  int num_files() const { return num_files_; }
  int num_groups() const { return static_cast<int>(alpha_.size()); }
  /// Position of (support, group, index), or -1 when no such packet exists.
  std::int64_t position(UserSet support, int group, int index) const;
  /// Position of a packet id (file ignored), or -1.
  std::int64_t position(const PacketId& id) const { return position(id.support, id.group, id.index); }
  PacketId id_at(int file, std::size_t pos) const;
  /// alpha^(g) entry for a subfile type; group is 1-based.
  int alpha(int group, int subfile_type) const;
  const TypeLayout& types() const { return types_; }
  const UserGrouping& grouping() const { return grouping_; }

 private:
  struct SubfileEntry {
    std::size_t first = 0;  // position of its first packet
    int subfile_type = 0;
  };
  std::vector<PacketSlot> slots_;
  std::unordered_map<std::uint64_t, SubfileEntry> subfiles_;
  std::vector<std::vector<int>> alpha_;  // [group-1][type]
  TypeLayout types_;
  UserGrouping grouping_;
  std::uint64_t file_units_ = 0;
  int unit_ = 1;
  int num_files_ = 0;
};

/// Deterministic source of file contents.
class FileOracle {
 public:
  virtual ~FileOracle() = default;
  /// Writes bytes [offset, offset + out.size()) of file `file` (1-based).
  virtual void fill(int file, std::uint64_t offset, std::span<std::uint8_t> out) const = 0;
};

/// Byte b(n, offset) from a keyed 64-bit counter hash.
class CounterHashOracle : public FileOracle {
 public:
  explicit CounterHashOracle(std::uint64_t key = 0) : key_(key) {}
  void fill(int file, std::uint64_t offset, std::span<std::uint8_t> out) const override;

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Packet bytes of the materialized files.
class PacketStore {
 public:
  PacketStore(std::shared_ptr<const PacketLayout> layout, std::map<int, std::vector<std::uint8_t>> files);

  const PacketLayout& layout() const { return *layout_; }
  std::shared_ptr<const PacketLayout> layout_ptr() const { return layout_; }
  bool has_file(int file) const { return files_.count(file) != 0; }
  std::vector<int> files() const;
  /// Bytes of one packet; throws MissingPacket for unknown ids or files.
  std::span<const std::uint8_t> packet(const PacketId& id) const;
  std::span<const std::uint8_t> packet(int file, std::size_t pos) const;
  const std::vector<std::uint8_t>& file_bytes(int file) const;
  /// Concatenation of a file's packets in canonical order.
  std::vector<std::uint8_t> reassemble(int file) const;

 private:
  std::shared_ptr<const PacketLayout> layout_;
  std::map<int, std::vector<std::uint8_t>> files_;
};

/// Splits files into packets. Only the listed files are materialized (all N
/// when empty); placement and delivery need only the demanded ones.
PacketStore split_files(const SchemeAlgebra& algebra, const FileOracle& oracle,
                        const std::vector<int>& files = {});

/// Cache of one user: every packet whose support contains the user, for all
/// N files.
class Cache {
 public:
  Cache(int user, std::shared_ptr<const PacketStore> store, std::uint64_t units_per_file);

  int user() const { return user_; }
  bool contains(const PacketId& id) const;
  /// Bytes of a cached packet.
  std::span<const std::uint8_t> bytes(const PacketId& id) const;
  std::uint64_t units_per_file() const { return units_per_file_; }
  BigInt cached_bytes() const;
  const PacketStore& store() const { return *store_; }

 private:
  int user_;
  std::shared_ptr<const PacketStore> store_;
  std::uint64_t units_per_file_;
};

/// Fills all K caches and audits cached_bytes * K == t * N * L * unit.
std::vector<Cache> build_caches(const SchemeAlgebra& algebra, std::shared_ptr<const PacketStore> store);

struct CodedMessage {
  UserSet group;  // multicast group S
  int transmitter = 0;
  int round = 0;  // coupled group, 1-based
  int copy = 0;   // 1-based message number of this transmitter in S
  std::vector<std::uint8_t> payload;
  std::vector<PacketId> constituents;  // ascending receiver order
};

/// One receiver's index map pi_y: transmitters other than y -> [lambda_y].
std::vector<int> receiver_bijection(std::uint64_t seed, UserSet group, int round, int receiver,
                                    int lambda);

/// Demands must have length K with entries in [1:N].
void check_demands(const SchemeAlgebra& algebra, const std::vector<int>& demands);

/// All coded messages in (round, group lexicographic, transmitter, copy) order.
std::vector<CodedMessage> generate_delivery(const SchemeAlgebra& algebra, const PacketStore& store,
                                            const std::vector<int>& demands, std::uint64_t seed);

struct DecodeResult {
  std::vector<std::uint8_t> bytes;
  /// decoded[g-1][type] = packets recovered from messages per group and subfile type.
  std::vector<std::vector<std::uint64_t>> decoded;
  std::uint64_t messages_used = 0;
};

/// Recovers W_{d_user} from the user's cache and the messages it receives.
DecodeResult decode(int user, const Cache& cache, const std::vector<CodedMessage>& messages,
                    const std::vector<int>& demands);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::span<const std::uint8_t> bytes);

}  // namespace ptcache

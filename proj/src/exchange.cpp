#include "ptcache/exchange.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <numeric>

#include "ptcache/errors.hpp"

namespace ptcache {

namespace {

std::uint64_t to_u64(const BigInt& value, const char* what) {
  if (value < 0 || value > BigInt(std::numeric_limits<std::int64_t>::max())) {
    throw Error(ErrorKind::InvalidParams, std::string(what) + " " + to_string(value) +
                                              " does not fit the simulator");
  }
  return value.convert_to<std::uint64_t>();
}

void xor_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src) {
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    std::uint64_t a;
    std::uint64_t b;
    std::memcpy(&a, dst.data() + i, 8);
    std::memcpy(&b, src.data() + i, 8);
    a ^= b;
    std::memcpy(dst.data() + i, &a, 8);
  }
  for (; i < n; ++i) dst[i] ^= src[i];
}

std::string describe(const PacketId& id) {
  return "W(" + std::to_string(id.file) + "," + id.support.str() + ")^(" +
         std::to_string(id.group) + ")," + std::to_string(id.index);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001B3ULL;
  }
  return h;
}

PacketLayout::PacketLayout(const SchemeAlgebra& algebra)
    : alpha_(algebra.fs.intermediate),
      types_(algebra.layout),
      grouping_(algebra.spec.grouping),
      unit_(algebra.sizing.unit),
      num_files_(algebra.spec.params.N) {
  std::vector<std::uint64_t> ell;
  for (const auto& e : algebra.sizing.ell) ell.push_back(to_u64(e, "packet size"));
  to_u64(algebra.sizing.L * algebra.sizing.unit, "file length");
  const int G = static_cast<int>(alpha_.size());
  std::uint64_t offset = 0;
  for (int k = 0; k < types_.num_subfile_types(); ++k) {
    for (UserSet T : enumerate_subsets_by_type(grouping_, types_.subfile_types[static_cast<std::size_t>(k)])) {
      subfiles_[T.bits()] = SubfileEntry{slots_.size(), k};
      for (int g = 1; g <= G; ++g) {
        const std::uint64_t size = ell[static_cast<std::size_t>(g - 1)];
        for (int j = 1; j <= alpha(g, k); ++j) {
          slots_.push_back(PacketSlot{T, k, g, j, offset, size});
          offset += size;
        }
      }
    }
  }
  file_units_ = offset;
  if (BigInt(file_units_) != algebra.sizing.L) {
    throw Error(ErrorKind::MemoryMismatch, "packet sizes sum to " + std::to_string(file_units_) +
                                               " units but L = " + to_string(algebra.sizing.L));
  }
}

int PacketLayout::alpha(int group, int subfile_type) const {
  return alpha_[static_cast<std::size_t>(group - 1)][static_cast<std::size_t>(subfile_type)];
}

std::int64_t PacketLayout::position(UserSet support, int group, int index) const {
  auto it = subfiles_.find(support.bits());
  if (it == subfiles_.end()) return -1;
  const int k = it->second.subfile_type;
  if (group < 1 || group > static_cast<int>(alpha_.size())) return -1;
  if (index < 1 || index > alpha(group, k)) return -1;
  std::size_t pos = it->second.first;
  for (int g = 1; g < group; ++g) pos += static_cast<std::size_t>(alpha(g, k));
  return static_cast<std::int64_t>(pos) + index - 1;
}

PacketId PacketLayout::id_at(int file, std::size_t pos) const {
  const auto& s = slots_[pos];
  return PacketId{file, s.support, s.group, s.index};
}

void CounterHashOracle::fill(int file, std::uint64_t offset, std::span<std::uint8_t> out) const {
  const std::uint64_t file_key = splitmix64(key_ ^ (static_cast<std::uint64_t>(file) << 32));
  std::uint64_t pos = offset;
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = splitmix64(file_key + pos / 8);
    unsigned shift = static_cast<unsigned>(pos % 8);
    for (; shift < 8 && i < out.size(); ++shift, ++i, ++pos) {
      out[i] = static_cast<std::uint8_t>(word >> (8 * shift));
    }
  }
}

PacketStore::PacketStore(std::shared_ptr<const PacketLayout> layout,
                         std::map<int, std::vector<std::uint8_t>> files)
    : layout_(std::move(layout)), files_(std::move(files)) {}

std::vector<int> PacketStore::files() const {
  std::vector<int> out;
  for (const auto& [n, bytes] : files_) out.push_back(n);
  return out;
}

std::span<const std::uint8_t> PacketStore::packet(int file, std::size_t pos) const {
  auto it = files_.find(file);
  if (it == files_.end()) {
    throw Error(ErrorKind::MissingPacket, "file " + std::to_string(file) + " is not materialized");
  }
  const auto& s = layout_->slots()[pos];
  const auto unit = static_cast<std::uint64_t>(layout_->unit());
  return std::span<const std::uint8_t>(it->second).subspan(s.offset_units * unit, s.size_units * unit);
}

std::span<const std::uint8_t> PacketStore::packet(const PacketId& id) const {
  auto pos = layout_->position(id);
  if (pos < 0) throw Error(ErrorKind::MissingPacket, "no packet " + describe(id));
  return packet(id.file, static_cast<std::size_t>(pos));
}

const std::vector<std::uint8_t>& PacketStore::file_bytes(int file) const {
  auto it = files_.find(file);
  if (it == files_.end()) {
    throw Error(ErrorKind::MissingPacket, "file " + std::to_string(file) + " is not materialized");
  }
  return it->second;
}

std::vector<std::uint8_t> PacketStore::reassemble(int file) const {
  std::vector<std::uint8_t> out;
  out.reserve(file_bytes(file).size());
  for (std::size_t p = 0; p < layout_->num_packets(); ++p) {
    auto bytes = packet(file, p);
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  return out;
}

PacketStore split_files(const SchemeAlgebra& algebra, const FileOracle& oracle,
                        const std::vector<int>& files) {
  auto layout = std::make_shared<const PacketLayout>(algebra);
  std::vector<int> wanted = files;
  if (wanted.empty()) {
    wanted.resize(static_cast<std::size_t>(algebra.spec.params.N));
    std::iota(wanted.begin(), wanted.end(), 1);
  }
  const std::uint64_t bytes = layout->file_units() * static_cast<std::uint64_t>(layout->unit());
  std::map<int, std::vector<std::uint8_t>> data;
  for (int n : wanted) {
    if (n < 1 || n > algebra.spec.params.N) {
      throw Error(ErrorKind::DemandOutOfRange, "file " + std::to_string(n) + " outside [1:" +
                                                   std::to_string(algebra.spec.params.N) + "]");
    }
    if (data.count(n)) continue;
    std::vector<std::uint8_t> buf(bytes);
    oracle.fill(n, 0, buf);
    data.emplace(n, std::move(buf));
  }
  return PacketStore(std::move(layout), std::move(data));
}

Cache::Cache(int user, std::shared_ptr<const PacketStore> store, std::uint64_t units_per_file)
    : user_(user), store_(std::move(store)), units_per_file_(units_per_file) {}

bool Cache::contains(const PacketId& id) const {
  return id.support.contains(user_) && store_->layout().position(id) >= 0;
}

std::span<const std::uint8_t> Cache::bytes(const PacketId& id) const {
  if (!contains(id)) {
    throw Error(ErrorKind::MissingPacket, "user " + std::to_string(user_) + " does not cache " +
                                              describe(id));
  }
  return store_->packet(id);
}

BigInt Cache::cached_bytes() const {
  return BigInt(units_per_file_) * store_->layout().unit() * store_->layout().num_files();
}

std::vector<Cache> build_caches(const SchemeAlgebra& algebra, std::shared_ptr<const PacketStore> store) {
  const auto& layout = store->layout();
  const int K = algebra.spec.params.K;
  std::vector<std::uint64_t> units(static_cast<std::size_t>(K), 0);
  for (const auto& slot : layout.slots()) {
    for (int u : slot.support.members()) units[static_cast<std::size_t>(u - 1)] += slot.size_units;
  }
  std::vector<Cache> caches;
  caches.reserve(units.size());
  for (int u = 1; u <= K; ++u) caches.emplace_back(u, store, units[static_cast<std::size_t>(u - 1)]);

  const BigInt target_times_k = BigInt(algebra.spec.params.t) * algebra.spec.params.N *
                                BigInt(layout.file_units()) * layout.unit();
  std::string mismatch;
  for (const auto& c : caches) {
    if (c.cached_bytes() * K != target_times_k) {
      mismatch += " user " + std::to_string(c.user()) + ": " + to_string(c.cached_bytes()) + ";";
    }
  }
  if (!mismatch.empty()) {
    BigInt target = target_times_k / K;
    throw Error(ErrorKind::MemoryMismatch,
                "cached bytes differ from tNL/K = " + to_string(target) +
                    (target * K == target_times_k ? "" : " (non-integer)") + ":" + mismatch);
  }
  return caches;
}

std::vector<int> receiver_bijection(std::uint64_t seed, UserSet group, int round, int receiver,
                                    int lambda) {
  std::vector<int> perm(static_cast<std::size_t>(lambda));
  std::iota(perm.begin(), perm.end(), 1);
  std::uint64_t key = splitmix64(seed);
  key = splitmix64(key ^ group.bits());
  key = splitmix64(key ^ (static_cast<std::uint64_t>(round) << 32 | static_cast<std::uint32_t>(receiver)));
  for (int i = lambda - 1; i > 0; --i) {
    std::uint64_t draw = splitmix64(key + static_cast<std::uint64_t>(i));
    auto j = static_cast<int>(draw % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

void check_demands(const SchemeAlgebra& algebra, const std::vector<int>& demands) {
  const auto& p = algebra.spec.params;
  if (static_cast<int>(demands.size()) != p.K) {
    throw Error(ErrorKind::DemandOutOfRange, "demand vector has " + std::to_string(demands.size()) +
                                                 " entries, expected K=" + std::to_string(p.K));
  }
  for (std::size_t u = 0; u < demands.size(); ++u) {
    if (demands[u] < 1 || demands[u] > p.N) {
      throw Error(ErrorKind::DemandOutOfRange, "user " + std::to_string(u + 1) + " demands file " +
                                                   std::to_string(demands[u]) + " outside [1:" +
                                                   std::to_string(p.N) + "]");
    }
  }
}

std::vector<CodedMessage> generate_delivery(const SchemeAlgebra& algebra, const PacketStore& store,
                                            const std::vector<int>& demands, std::uint64_t seed) {
  check_demands(algebra, demands);
  const auto& params = algebra.spec.params;
  const auto& grouping = algebra.spec.grouping;
  const auto& layout = store.layout();
  const auto unit = static_cast<std::uint64_t>(layout.unit());
  std::vector<CodedMessage> out;
  const auto groups = k_subsets(params.K, params.t + 1);
  for (int round = 1; round <= algebra.spec.num_coupled_groups(); ++round) {
    const auto& plan = algebra.spec.plans[static_cast<std::size_t>(round - 1)];
    const auto& mult = algebra.fs.multipliers[static_cast<std::size_t>(round - 1)];
    const std::uint64_t bytes = to_u64(algebra.sizing.ell[static_cast<std::size_t>(round - 1)], "packet size") * unit;
    for (UserSet S : groups) {
      const int s = algebra.layout.group_index(grouping.type_of(S));
      const int m = mult[static_cast<std::size_t>(s)];
      if (m == 0) continue;
      const auto& dagger = plan.daggers[static_cast<std::size_t>(s)];
      const auto members = S.members();
      std::vector<int> tx;
      for (int u : members) {
        if (std::find(dagger.begin(), dagger.end(), grouping.group_of(u)) != dagger.end()) tx.push_back(u);
      }
      // pi[y] maps the rank of a transmitter among tx \ {y} to a packet index.
      std::vector<std::vector<int>> pi(members.size());
      for (std::size_t yi = 0; yi < members.size(); ++yi) {
        const int y = members[yi];
        const int lambda = static_cast<int>(tx.size()) - (std::count(tx.begin(), tx.end(), y) ? 1 : 0);
        pi[yi] = receiver_bijection(seed, S, round, y, lambda);
      }
      for (int x : tx) {
        for (int c = 1; c <= m; ++c) {
          CodedMessage msg;
          msg.group = S;
          msg.transmitter = x;
          msg.round = round;
          msg.copy = c;
          msg.payload.assign(bytes, 0);
          for (std::size_t yi = 0; yi < members.size(); ++yi) {
            const int y = members[yi];
            if (y == x) continue;
            const int lambda = static_cast<int>(pi[yi].size());
            int rank = 0;
            for (int other : tx) {
              if (other == x) break;
              if (other != y) ++rank;
            }
            const int j = (c - 1) * lambda + pi[yi][static_cast<std::size_t>(rank)];
            PacketId id{demands[static_cast<std::size_t>(y - 1)], S.without(y), round, j};
            auto pos = layout.position(id);
            if (pos < 0) {
              throw Error(ErrorKind::MissingPacket, "delivery references nonexistent packet " + describe(id));
            }
            xor_into(msg.payload, store.packet(id.file, static_cast<std::size_t>(pos)));
            msg.constituents.push_back(id);
          }
          out.push_back(std::move(msg));
        }
      }
    }
  }
  return out;
}

DecodeResult decode(int user, const Cache& cache, const std::vector<CodedMessage>& messages,
                    const std::vector<int>& demands) {
  if (user < 1 || user > static_cast<int>(demands.size())) {
    throw Error(ErrorKind::DemandOutOfRange, "user " + std::to_string(user) + " has no demand");
  }
  const int want = demands[static_cast<std::size_t>(user - 1)];
  const PacketStore& store = cache.store();
  const PacketLayout& layout = store.layout();
  const auto unit = static_cast<std::uint64_t>(layout.unit());

  DecodeResult result;
  result.bytes.assign(layout.file_units() * unit, 0);
  result.decoded.assign(static_cast<std::size_t>(layout.num_groups()),
                        std::vector<std::uint64_t>(static_cast<std::size_t>(layout.types().num_subfile_types()), 0));
  std::vector<char> have(layout.num_packets(), 0);

  for (const auto& msg : messages) {
    if (!msg.group.contains(user) || msg.transmitter == user) continue;
    const PacketId* missing = nullptr;
    int missing_count = 0;
    for (const auto& id : msg.constituents) {
      if (!cache.contains(id)) {
        missing = &id;
        ++missing_count;
      }
    }
    const std::string where = "message from user " + std::to_string(msg.transmitter) + " to " +
                              msg.group.str() + " in round " + std::to_string(msg.round);
    if (missing_count != 1) {
      throw Error(ErrorKind::UndecodableMessage,
                  where + ": user " + std::to_string(user) + " lacks " +
                      std::to_string(missing_count) + " constituents");
    }
    if (missing->file != want || missing->support != msg.group.without(user)) {
      throw Error(ErrorKind::UndecodableMessage,
                  where + ": unknown constituent " + describe(*missing) + " is not for user " +
                      std::to_string(user));
    }
    const auto pos = layout.position(*missing);
    if (pos < 0) throw Error(ErrorKind::UndecodableMessage, where + ": no packet " + describe(*missing));
    const auto& slot = layout.slots()[static_cast<std::size_t>(pos)];
    if (msg.payload.size() != slot.size_units * unit) {
      throw Error(ErrorKind::UndecodableMessage, where + ": payload length " +
                                                     std::to_string(msg.payload.size()) +
                                                     " does not match packet size");
    }
    if (have[static_cast<std::size_t>(pos)]) {
      throw Error(ErrorKind::DuplicateDelivery, "user " + std::to_string(user) + " received " +
                                                    describe(*missing) + " twice");
    }
    std::span<std::uint8_t> dst(result.bytes.data() + slot.offset_units * unit, slot.size_units * unit);
    std::copy(msg.payload.begin(), msg.payload.end(), dst.begin());
    for (const auto& id : msg.constituents) {
      if (&id != missing) xor_into(dst, cache.bytes(id));
    }
    have[static_cast<std::size_t>(pos)] = 1;
    ++result.decoded[static_cast<std::size_t>(slot.group - 1)][static_cast<std::size_t>(slot.subfile_type)];
    ++result.messages_used;
  }

  for (std::size_t p = 0; p < layout.num_packets(); ++p) {
    const auto& slot = layout.slots()[p];
    if (slot.support.contains(user)) {
      if (have[p]) {
        throw Error(ErrorKind::DuplicateDelivery, "user " + std::to_string(user) +
                                                      " received cached packet " +
                                                      describe(layout.id_at(want, p)));
      }
      auto src = cache.bytes(layout.id_at(want, p));
      std::copy(src.begin(), src.end(), result.bytes.begin() + static_cast<std::ptrdiff_t>(slot.offset_units * unit));
      have[p] = 1;
    } else if (!have[p]) {
      throw Error(ErrorKind::MissingPacket, "user " + std::to_string(user) + " never received " +
                                                describe(layout.id_at(want, p)));
    }
  }
  return result;
}

}  // namespace ptcache

#include "ptcache/combinatorics.hpp"

#include <algorithm>
#include <sstream>

#include "ptcache/errors.hpp"

namespace ptcache {

BigInt binom(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (long long i = 0; i < k; ++i) {
    result *= (n - i);
    result /= (i + 1);
  }
  return result;
}

int TypeVector::sum() const {
  int total = 0;
  for (int e : entries) total += e;
  return total;
}

std::string TypeVector::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(entries[i]);
  }
  return out + ")";
}

UserSet UserSet::from_members(const std::vector<int>& users) {
  UserSet s;
  for (int u : users) {
    if (u < 1 || u > kMaxUsers) throw std::out_of_range("UserSet: user id out of range");
    s = s.with(u);
  }
  return s;
}

std::vector<int> UserSet::members() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
  return out;
}

std::string UserSet::str() const {
  std::string out = "{";
  bool first = true;
  for (int u : members()) {
    if (!first) out += ",";
    out += std::to_string(u);
    first = false;
  }
  return out + "}";
}

bool UserSet::lex_less(UserSet a, UserSet b) {
  auto ma = a.members();
  auto mb = b.members();
  return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
}

UserGrouping::UserGrouping(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw Error(ErrorKind::InvalidParams, "grouping has no groups");
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] <= 0) throw Error(ErrorKind::InvalidParams, "group sizes must be positive");
    if (i > 0 && sizes_[i] > sizes_[i - 1]) {
      throw Error(ErrorKind::InvalidParams, "group sizes must be non-increasing");
    }
    first_user_.push_back(num_users_ + 1);
    num_users_ += sizes_[i];
  }
}

int UserGrouping::num_distinct() const {
  auto s = sizes_;
  std::sort(s.begin(), s.end());
  return static_cast<int>(std::unique(s.begin(), s.end()) - s.begin());
}

int UserGrouping::group_of(int user) const {
  if (user < 1 || user > num_users_) throw std::out_of_range("UserGrouping: user id out of range");
  for (int g = num_groups() - 1; g >= 0; --g) {
    if (user >= first_user_[static_cast<std::size_t>(g)]) return g;
  }
  return 0;
}

UserSet UserGrouping::members(int group) const {
  if (num_users_ > UserSet::kMaxUsers) {
    throw Error(ErrorKind::InvalidParams, "user sets support at most 64 users");
  }
  int first = first_user_[static_cast<std::size_t>(group)];
  int n = size(group);
  std::uint64_t mask = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  return UserSet(mask << (first - 1));
}

TypeVector UserGrouping::type_of(UserSet subset) const {
  TypeVector type;
  type.entries.reserve(sizes_.size());
  for (int g = 0; g < num_groups(); ++g) type.entries.push_back(subset.intersect(members(g)).size());
  return type;
}

std::string UserGrouping::str() const {
  TypeVector v{sizes_};
  return v.str();
}

std::vector<UserSet> k_subsets(int n, int k) {
  std::vector<UserSet> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    out.push_back(UserSet::from_members(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

std::vector<UserSet> enumerate_subsets_by_type(const UserGrouping& grouping,
                                               const TypeVector& type) {
  if (type.size() != grouping.num_groups()) {
    throw Error(ErrorKind::LengthMismatch, "type " + type.str() + " does not match grouping " +
                                               grouping.str());
  }
  for (int g = 0; g < type.size(); ++g) {
    if (type[g] < 0 || type[g] > grouping.size(g)) {
      throw Error(ErrorKind::ComponentTooLarge,
                  "component " + std::to_string(g + 1) + " of type " + type.str() +
                      " exceeds group size " + std::to_string(grouping.size(g)));
    }
  }
  // Groups occupy consecutive id ranges in order, so taking the per-group
  // combinations as nested loops (first group outermost) is lexicographic.
  std::vector<UserSet> out{UserSet{}};
  for (int g = 0; g < grouping.num_groups(); ++g) {
    auto local = k_subsets(grouping.size(g), type[g]);
    int shift = grouping.first_user(g) - 1;
    std::vector<UserSet> next;
    next.reserve(out.size() * local.size());
    for (UserSet prefix : out) {
      for (UserSet part : local) next.emplace_back(prefix.bits() | (part.bits() << shift));
    }
    out = std::move(next);
  }
  return out;
}

Rational hypergeo_pmf(int q, int t, int j) {
  if (q < 1 || t < 1) throw Error(ErrorKind::InvalidParams, "hypergeo_pmf needs q, t >= 1");
  if (j < 0 || j > t) {
    throw Error(ErrorKind::OutOfSupport, "j=" + std::to_string(j) + " outside [0:" +
                                             std::to_string(t) + "]");
  }
  return Rational(binom(q + 1, j) * binom(q, t - j), binom(2LL * q + 1, t));
}

}  // namespace ptcache

#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "ptcache/rational.hpp"

namespace ptcache {

/// C(n, k) as an exact big integer; 0 outside 0 <= k <= n.
BigInt binom(long long n, long long k);

/// Ordered component sizes of a user subset projected onto the user groups.
struct TypeVector {
  std::vector<int> entries;

  int size() const { return static_cast<int>(entries.size()); }
  int sum() const;
  int operator[](int i) const { return entries[static_cast<std::size_t>(i)]; }
  std::string str() const;  // "(1,2)"

  friend bool operator==(const TypeVector&, const TypeVector&) = default;
  friend auto operator<=>(const TypeVector&, const TypeVector&) = default;
};

/// Subset of users 1..K (K <= 64), one bit per user.
class UserSet {
 public:
  static constexpr int kMaxUsers = 64;

  UserSet() = default;
  explicit UserSet(std::uint64_t bits) : bits_(bits) {}
  static UserSet from_members(const std::vector<int>& users);

  std::uint64_t bits() const { return bits_; }
  int size() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  bool contains(int user) const { return (bits_ >> (user - 1)) & 1U; }
  UserSet with(int user) const { return UserSet(bits_ | (std::uint64_t{1} << (user - 1))); }
  UserSet without(int user) const { return UserSet(bits_ & ~(std::uint64_t{1} << (user - 1))); }
  UserSet intersect(UserSet other) const { return UserSet(bits_ & other.bits_); }

  /// Ascending user ids.
  std::vector<int> members() const;
  std::string str() const;  // "{1,2,5}"

  friend bool operator==(UserSet, UserSet) = default;

  /// Lexicographic order of the ascending member lists.
  static bool lex_less(UserSet a, UserSet b);

 private:
  std::uint64_t bits_ = 0;
};

/// Partition of [K] into consecutive groups Q_1 = {1..q1}, Q_2 = {q1+1..}, ...
class UserGrouping {
 public:
  UserGrouping() = default;
  /// Sizes must be positive and non-increasing. Any K is accepted; member
  /// sets (and hence subset enumeration) need K <= 64.
  explicit UserGrouping(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  int num_groups() const { return static_cast<int>(sizes_.size()); }
  int num_users() const { return num_users_; }
  int size(int group) const { return sizes_[static_cast<std::size_t>(group)]; }
  /// Number of distinct group sizes (unique sets).
  int num_distinct() const;
  /// 0-based group index of a 1-based user.
  int group_of(int user) const;
  int first_user(int group) const { return first_user_[static_cast<std::size_t>(group)]; }
  UserSet members(int group) const;
  /// Projection sizes of a subset onto the groups.
  TypeVector type_of(UserSet subset) const;
  std::string str() const;  // "(4,3)"

  friend bool operator==(const UserGrouping&, const UserGrouping&) = default;

 private:
  std::vector<int> sizes_;
  std::vector<int> first_user_;
  int num_users_ = 0;
};

/// All k-subsets of {1..n} in lexicographic order.
std::vector<UserSet> k_subsets(int n, int k);

/// Every subset whose projection onto the groups has the given sizes, in
/// lexicographic order of the member lists.
std::vector<UserSet> enumerate_subsets_by_type(const UserGrouping& grouping,
                                               const TypeVector& type);

/// Pr(J = j) for J ~ Hypergeo(population 2q+1, successes q+1, draws t).
Rational hypergeo_pmf(int q, int t, int j);

}  // namespace ptcache

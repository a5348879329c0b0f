#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace udag {

using NodeId = int;

constexpr int kMaxNodes = 64;

enum class Errc {
  self_loop,
  directed_cycle,
  duplicate_edge,
  invalid_query,
  node_mismatch,
  precondition_violated,
  variable_mismatch,
  non_positive_distribution,
  zero_probability_evidence,
  unsupported_strictness,
  too_large,
  size_mismatch,
  too_few_samples,
  degenerate_column,
  no_consistent_graph,
  bad_format,
};

/// Domain error carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

/// Set of node ids in [0, 64), packed into a single word.
class NodeSet {
 public:
  constexpr NodeSet() = default;
  constexpr explicit NodeSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr NodeSet full(int n) {
    return NodeSet(n >= kMaxNodes ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static NodeSet of(std::initializer_list<NodeId> ids) {
    NodeSet s;
    for (NodeId v : ids) s.insert(v);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(NodeId v) const { return (bits_ >> v) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int count() const { return std::popcount(bits_); }

  void insert(NodeId v) { bits_ |= std::uint64_t{1} << v; }
  void erase(NodeId v) { bits_ &= ~(std::uint64_t{1} << v); }

  constexpr NodeSet operator|(NodeSet o) const { return NodeSet(bits_ | o.bits_); }
  constexpr NodeSet operator&(NodeSet o) const { return NodeSet(bits_ & o.bits_); }
  constexpr NodeSet operator-(NodeSet o) const { return NodeSet(bits_ & ~o.bits_); }
  NodeSet& operator|=(NodeSet o) { bits_ |= o.bits_; return *this; }
  NodeSet& operator&=(NodeSet o) { bits_ &= o.bits_; return *this; }
  NodeSet& operator-=(NodeSet o) { bits_ &= ~o.bits_; return *this; }

  constexpr bool operator==(const NodeSet&) const = default;
  constexpr bool subset_of(NodeSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool proper_subset_of(NodeSet o) const { return subset_of(o) && bits_ != o.bits_; }
  constexpr bool intersects(NodeSet o) const { return (bits_ & o.bits_) != 0; }
  constexpr bool disjoint(NodeSet o) const { return (bits_ & o.bits_) == 0; }

  /// Lowest member; set must be nonempty.
  NodeId first() const { return std::countr_zero(bits_); }

  std::vector<NodeId> members() const {
    std::vector<NodeId> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  /// Orders sets by their sorted member lists ({0,3} before {1,2}).
  static bool lex_less(NodeSet a, NodeSet b) {
    std::uint64_t x = a.bits_, y = b.bits_;
    while (x != 0 && y != 0) {
      int i = std::countr_zero(x), j = std::countr_zero(y);
      if (i != j) return i < j;
      x &= x - 1;
      y &= y - 1;
    }
    return x == 0 && y != 0;
  }

  struct iterator {
    std::uint64_t rest;
    NodeId operator*() const { return std::countr_zero(rest); }
    iterator& operator++() { rest &= rest - 1; return *this; }
    bool operator!=(const iterator& o) const { return rest != o.rest; }
  };
  iterator begin() const { return {bits_}; }
  iterator end() const { return {0}; }

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace udag

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcc/edit_ops.hpp"
#include "mcc/network.hpp"

namespace mcc {

// Natural number or infinity with saturating addition.
class Cost {
 public:
  Cost() = default;
  explicit Cost(std::uint64_t v) : value_(v) {}
  static Cost infinity() {
    Cost c;
    c.infinite_ = true;
    return c;
  }

  bool is_infinite() const { return infinite_; }
  // Throws std::logic_error when infinite.
  std::uint64_t value() const;
  std::string to_string() const;

  friend Cost operator+(Cost a, Cost b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return Cost(a.value_ + b.value_);
  }
  friend bool operator==(Cost a, Cost b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend bool operator<(Cost a, Cost b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }

 private:
  bool infinite_ = false;
  std::uint64_t value_ = 0;
};

// Dangling: the node u under a fresh root. CycleTop: cycle `id` after its
// first alpha side-A nodes and first beta side-B nodes have been merged into
// the root.
struct PrimeKey {
  enum class Kind : std::uint8_t { Dangling, CycleTop };
  Kind kind = Kind::Dangling;
  std::uint32_t id = 0;
  std::uint32_t alpha = 0;
  std::uint32_t beta = 0;

  friend auto operator<=>(const PrimeKey&, const PrimeKey&) = default;
};

// Join of primes under one root, or a bare leaf.
struct CompositeKey {
  std::vector<PrimeKey> primes;
  std::optional<NodeId> bare_leaf;

  friend bool operator==(const CompositeKey&, const CompositeKey&) = default;
};

// Primes of the network hanging below u (u merged into the key root).
CompositeKey decompose(const Network& n, NodeId u);
// The join subnetwork denoted by a key of n.
Network materialize(const Network& n, const CompositeKey& key);

struct DpTelemetry {
  std::size_t fc_entries = 0;
  std::size_t fp_entries = 0;
  std::size_t fl_entries = 0;
  std::size_t fl_valid_entries = 0;
};

struct DpResult {
  Cost delta;
  Network common;
  WitnessStructure w1;
  WitnessStructure w2;
  DpTelemetry telemetry;
};

struct DpOptions {
  bool traceback = true;
};

// Maximum common contraction of two weakly galled trees without degree-2
// nodes.
DpResult solve(const Network& n1, const Network& n2, const DpOptions& options = {});

}  // namespace mcc

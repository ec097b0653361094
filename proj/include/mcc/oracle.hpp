#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "mcc/edit_ops.hpp"
#include "mcc/network.hpp"

namespace mcc {

struct OracleLimits {
  std::size_t max_internal = 10;
  std::uint64_t budget = 500'000'000;
};

struct MccResult {
  std::size_t delta = 0;
  Network common;
  WitnessStructure w1;
  WitnessStructure w2;
};

// Maximum common contraction by enumeration of connected partitions.
MccResult exact_mcc(const Network& n1, const Network& n2, const OracleLimits& limits = {});

// A witness structure showing that m is a contraction of n, if one exists.
std::optional<WitnessStructure> is_contraction(const Network& n, const Network& m,
                                               std::uint64_t budget = 500'000'000);

struct TreeMccResult {
  std::size_t delta = 0;
  Network common;
};

// Shared-clade construction for trees without degree-2 nodes.
TreeMccResult tree_mcc(const Network& t1, const Network& t2);

}  // namespace mcc

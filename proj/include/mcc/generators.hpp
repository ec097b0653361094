#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mcc/network.hpp"
#include "mcc/rng.hpp"

namespace mcc {

struct SetSplittingInstance {
  std::vector<std::string> universe;
  std::vector<std::vector<std::string>> sets;
};

// Throws InvalidParameters on empty sets or unknown elements.
void check_instance(const SetSplittingInstance& inst);
// First line the universe, each following non-blank line one set.
SetSplittingInstance parse_instance(const std::string& text);
std::string write_instance(const SetSplittingInstance& inst);
// Brute force over all bipartitions of the universe.
bool is_splittable(const SetSplittingInstance& inst);

struct NetworkPair {
  Network first;
  Network second;
};

// Pair on leaves "1".."l" with m and mprime internal nodes whose only common
// contraction is the star.
NetworkPair diameter_pair(std::size_t l, std::size_t m, std::size_t mprime);

struct ReductionInstance {
  Network n1;
  Network n2;
  // Target shape certifying a yes-instance.
  Network target;
  std::size_t k = 0;
};

ReductionInstance reduction_deg_bounded(const SetSplittingInstance& inst);
ReductionInstance reduction_five_leaves(const SetSplittingInstance& inst);

// Random weakly galled tree without degree-2 nodes on leaves "1".."num_leaves".
Network random_wgt(std::size_t num_leaves, std::size_t num_retics, std::uint64_t seed);
// Random tree on leaves "1".."num_leaves" without degree-2 nodes.
Network random_tree(std::size_t num_leaves, SplitMix64& rng);
// Adds reticulations to a weakly galled tree, keeping it weakly galled and
// degree-2-free; throws GenerationFailed after bounded retries.
Network add_random_reticulations(const Network& n, std::size_t count, SplitMix64& rng);

}  // namespace mcc

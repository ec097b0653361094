#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mcc/network.hpp"

namespace mcc {

// Merge edge (u, v) into the fresh node w.
struct Contraction {
  NodeId u;
  NodeId v;
  NodeId w;
};

// Split u into the edge v -> w. X classes go to v, Y classes to w, Z classes
// to both.
struct Expansion {
  NodeId u;
  NodeId v;
  NodeId w;
  std::vector<NodeId> x_in, y_in, z_in;
  std::vector<NodeId> x_out, y_out, z_out;
};

using EditStep = std::variant<Contraction, Expansion>;
using EditSequence = std::vector<EditStep>;

// Keys are internal nodes of the target network, values the internal nodes
// of the source network merged into them (sorted).
struct WitnessStructure {
  std::map<NodeId, std::vector<NodeId>> parts;
};

struct WitnessCheck {
  bool ok = true;
  std::string violation;
  explicit operator bool() const { return ok; }
};

// Raw contraction; the result may be cyclic or may have absorbed a leaf.
Network contract(const Network& n, const Contraction& c);
Network contract(const Network& n, NodeId u, NodeId v);

bool is_admissible(const Network& n, NodeId u, NodeId v);
Network contract_admissible(const Network& n, const Contraction& c);
Network contract_admissible(const Network& n, NodeId u, NodeId v);

Network expand(const Network& n, const Expansion& e);
// The expansion of c.w in contract(before, c) that restores `before` up to
// the ids of the two restored nodes.
Expansion reversing_expansion(const Network& before, const Contraction& c, NodeId fresh_v, NodeId fresh_w);

Network apply_step(const Network& n, const EditStep& step);
Network replay(const Network& n, const EditSequence& seq);

Network star_network(const std::vector<std::string>& labels);
bool is_star(const Network& n);

EditSequence contract_to_star(const Network& n);
EditSequence connect(const Network& n1, const Network& n2);

WitnessCheck validate_witness(const Network& n, const Network& m, const WitnessStructure& w);
EditSequence witness_to_sequence(const Network& n, const Network& m, const WitnessStructure& w);
std::pair<Network, WitnessStructure> sequence_to_witness(const Network& n, const EditSequence& seq);

std::int64_t delta_mcc_from_common(const Network& n1, const Network& n2, const Network& m);

}  // namespace mcc

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mcc/dp.hpp"
#include "mcc/edit_ops.hpp"
#include "mcc/galled.hpp"
#include "mcc/generators.hpp"
#include "mcc/io.hpp"
#include "mcc/oracle.hpp"

namespace {

using namespace mcc;

struct Globals {
  std::string format;
  std::uint64_t seed = 1;
  bool quiet = false;
  std::string dot;
};

Format output_format(const Globals& g) { return g.format == "edgelist" ? Format::EdgeList : Format::ENewick; }

Format detect_format(const Globals& g, const std::string& text) {
  if (g.format == "edgelist") return Format::EdgeList;
  if (g.format == "enewick") return Format::ENewick;
  auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string::npos && text[first] == '(' ? Format::ENewick
         : text.find(';') != std::string::npos && text.find("#leaves") == std::string::npos ? Format::ENewick
                                                                                              : Format::EdgeList;
}

Network load(const Globals& g, const std::string& path) {
  auto text = read_file(path);
  std::vector<std::string> warnings;
  auto n = parse_network(text, detect_format(g, text), &warnings);
  if (!g.quiet) {
    for (const auto& w : warnings) std::cerr << "warning: " << path << ": " << w << "\n";
  }
  return n;
}

std::string extension(const Globals& g) { return output_format(g) == Format::EdgeList ? ".edges" : ".nwk"; }

void emit(const Globals& g, const Network& n) {
  std::cout << write_network(n, output_format(g));
  if (!g.dot.empty()) write_file(g.dot, write_dot(n));
}

NodeId resolve(const Network& n, const std::string& name) {
  if (auto u = n.find_by_name(name)) return *u;
  if (auto u = n.find_leaf(name)) return *u;
  if (name.size() > 1 && name[0] == 'n' && name.find_first_not_of("0123456789", 1) == std::string::npos) {
    NodeId u{static_cast<std::uint32_t>(std::stoul(name.substr(1)))};
    if (n.contains(u)) return u;
  }
  throw Error(ErrorCode::UnknownNode, "no node named " + name);
}

nlohmann::json witness_json(const Network& n, const Network& m, const WitnessStructure& w) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, members] : w.parts) {
    auto& arr = out[m.display_name(key)];
    arr = nlohmann::json::array();
    for (auto u : members) arr.push_back(n.display_name(u));
  }
  return out;
}

void write_mcc_outputs(const Globals& g, const Network& n1, const Network& n2, std::size_t delta,
                       const Network& common, const WitnessStructure& w1, const WitnessStructure& w2,
                       const std::string& emit_path, const std::string& witness_path) {
  std::cout << "delta=" << delta << " common_size=" << common.internal_count() << "\n";
  if (!emit_path.empty()) write_file(emit_path, write_network(common, output_format(g)));
  if (!witness_path.empty()) {
    nlohmann::json j{{"network1", witness_json(n1, common, w1)}, {"network2", witness_json(n2, common, w2)}};
    write_file(witness_path, j.dump(2) + "\n");
  }
  if (!g.dot.empty()) write_file(g.dot, write_dot(common));
}

bool dp_applicable(const Network& n1, const Network& n2) {
  return is_weakly_galled(n1) && is_weakly_galled(n2) && !find_degree2_node(n1) && !find_degree2_node(n2);
}

void write_pair(const Globals& g, const std::string& prefix, const std::vector<std::pair<std::string, Network>>& nets) {
  for (const auto& [suffix, n] : nets) {
    if (prefix.empty()) {
      std::cout << write_network(n, output_format(g));
    } else {
      write_file(prefix + suffix + extension(g), write_network(n, output_format(g)));
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum common contractions of phylogenetic networks"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "Network format: enewick or edgelist")
      ->check(CLI::IsMember({"enewick", "edgelist"}));
  app.add_option("--seed", g.seed, "Random seed");
  app.add_flag("--quiet", g.quiet, "Suppress warnings and summaries");
  app.add_option("--dot", g.dot, "Also write the resulting network as DOT to this file");

  int status = 0;
  std::string file1;
  std::string file2;

  auto* validate_cmd = app.add_subcommand("validate", "Check a network and print a summary");
  validate_cmd->add_option("file", file1)->required();

  auto* iso_cmd = app.add_subcommand("iso", "Test two networks for isomorphism");
  iso_cmd->add_option("file1", file1)->required();
  iso_cmd->add_option("file2", file2)->required();

  std::string edge;
  bool force = false;
  auto* contract_cmd = app.add_subcommand("contract", "Contract one edge");
  contract_cmd->add_option("file", file1)->required();
  contract_cmd->add_option("--edge", edge, "Edge as U,V")->required();
  contract_cmd->add_flag("--force", force, "Contract even if inadmissible");

  auto* star_cmd = app.add_subcommand("star", "Contraction sequence down to the star");
  star_cmd->add_option("file", file1)->required();

  auto* clades_cmd = app.add_subcommand("clades", "List 1-clades and 2-clades");
  clades_cmd->add_option("file", file1)->required();

  auto* mcc_cmd = app.add_subcommand("mcc", "Maximum common contraction");
  mcc_cmd->require_subcommand(1);
  std::string emit_path;
  std::string witness_path;
  auto* wgt_cmd = mcc_cmd->add_subcommand("wgt", "Polynomial algorithm for weakly galled trees");
  auto* exact_cmd = mcc_cmd->add_subcommand("exact", "Exhaustive search for small networks");
  OracleLimits limits;
  for (auto* cmd : {wgt_cmd, exact_cmd}) {
    cmd->add_option("file1", file1)->required();
    cmd->add_option("file2", file2)->required();
    cmd->add_option("--emit", emit_path, "Write the common contraction here");
    cmd->add_option("--witness", witness_path, "Write witness partitions as JSON here");
  }
  exact_cmd->add_option("--max-internal", limits.max_internal, "Largest admissible |I| per side");
  exact_cmd->add_option("--budget", limits.budget, "Search step budget");

  std::size_t k = 0;
  auto* mcnc_cmd = app.add_subcommand("mcnc", "Is there a common contraction with at least K internal nodes");
  mcnc_cmd->add_option("file1", file1)->required();
  mcnc_cmd->add_option("file2", file2)->required();
  mcnc_cmd->add_option("--k", k)->required();
  mcnc_cmd->add_option("--max-internal", limits.max_internal, "Largest |I| per side for the exhaustive search");
  mcnc_cmd->add_option("--budget", limits.budget, "Search step budget");

  auto* dist_cmd = app.add_subcommand("dist", "Distance bounds");
  dist_cmd->require_subcommand(1);
  auto* upper_cmd = dist_cmd->add_subcommand("upper", "Star-path bound and the contraction distance");
  upper_cmd->add_option("file1", file1)->required();
  upper_cmd->add_option("file2", file2)->required();

  auto* gen_cmd = app.add_subcommand("gen", "Generate instances");
  gen_cmd->require_subcommand(1);
  std::string prefix;
  std::size_t leaves = 0;
  std::size_t m = 0;
  std::size_t mprime = 0;
  std::size_t retics = 0;
  std::optional<std::uint64_t> gen_seed;
  std::string instance;
  auto* diameter_cmd = gen_cmd->add_subcommand("diameter", "Pair at maximum distance");
  diameter_cmd->add_option("--leaves", leaves)->required();
  diameter_cmd->add_option("--m", m)->required();
  diameter_cmd->add_option("--mprime", mprime)->required();
  auto* red1_cmd = gen_cmd->add_subcommand("reduction1", "Bounded-degree Set Splitting gadget");
  auto* red2_cmd = gen_cmd->add_subcommand("reduction2", "Five-leaf Set Splitting gadget");
  for (auto* cmd : {red1_cmd, red2_cmd}) cmd->add_option("--instance", instance)->required();
  auto* random_cmd = gen_cmd->add_subcommand("random-wgt", "Random weakly galled tree");
  random_cmd->add_option("--leaves", leaves)->required();
  random_cmd->add_option("--retics", retics)->required();
  random_cmd->add_option("--seed", gen_seed);
  for (auto* cmd : {diameter_cmd, red1_cmd, red2_cmd, random_cmd}) {
    cmd->add_option("--out-prefix", prefix, "Write files with this prefix instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: UsageError: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*validate_cmd) {
      auto n = load(g, file1);
      std::cout << "nodes=" << n.node_count() << " internal=" << n.internal_count() << " leaves=" << n.leaves().size()
                << " reticulations=" << n.reticulation_count()
                << " weakly_galled=" << (is_weakly_galled(n) ? "yes" : "no") << "\n";
      if (!g.dot.empty()) write_file(g.dot, write_dot(n));
    } else if (*iso_cmd) {
      bool same = is_isomorphic(load(g, file1), load(g, file2));
      std::cout << (same ? "isomorphic" : "not isomorphic") << "\n";
      status = same ? 0 : 1;
    } else if (*contract_cmd) {
      auto n = load(g, file1);
      auto comma = edge.find(',');
      if (comma == std::string::npos) throw Error(ErrorCode::InvalidParameters, "--edge expects U,V");
      auto u = resolve(n, edge.substr(0, comma));
      auto v = resolve(n, edge.substr(comma + 1));
      emit(g, force ? contract(n, u, v) : contract_admissible(n, u, v));
    } else if (*star_cmd) {
      auto n = load(g, file1);
      Network cur = n;
      for (const auto& step : contract_to_star(n)) {
        const auto& c = std::get<Contraction>(step);
        std::cout << cur.display_name(c.u) << " " << cur.display_name(c.v) << "\n";
        cur = apply_step(cur, step);
      }
      emit(g, cur);
    } else if (*clades_cmd) {
      auto n = load(g, file1);
      auto universe = universe_of(n);
      auto set_text = [&](const LeafSet& s) {
        std::string out;
        for (const auto& l : universe.to_labels(s)) out += (out.empty() ? "" : ",") + l;
        return out;
      };
      for (const auto& e : one_clades(n, universe)) {
        std::cout << "1 " << set_text(e.leaves) << " :";
        for (auto u : e.nodes) std::cout << " " << n.display_name(u);
        std::cout << "\n";
      }
      for (const auto& e : two_clades(n, universe)) {
        std::cout << "2 " << set_text(e.leaves) << " :";
        for (auto [u, v] : e.pairs) std::cout << " " << n.display_name(u) << "," << n.display_name(v);
        std::cout << "\n";
      }
    } else if (*wgt_cmd) {
      auto n1 = load(g, file1);
      auto n2 = load(g, file2);
      auto r = solve(n1, n2);
      write_mcc_outputs(g, n1, n2, r.delta.value(), r.common, r.w1, r.w2, emit_path, witness_path);
    } else if (*exact_cmd) {
      auto n1 = load(g, file1);
      auto n2 = load(g, file2);
      auto r = exact_mcc(n1, n2, limits);
      write_mcc_outputs(g, n1, n2, r.delta, r.common, r.w1, r.w2, emit_path, witness_path);
    } else if (*mcnc_cmd) {
      auto n1 = load(g, file1);
      auto n2 = load(g, file2);
      std::size_t delta = dp_applicable(n1, n2) ? solve(n1, n2, {false}).delta.value() : exact_mcc(n1, n2, limits).delta;
      std::size_t size = (n1.internal_count() + n2.internal_count() - delta) / 2;
      bool yes = size >= k;
      std::cout << (yes ? "yes" : "no") << " max_common_size=" << size << "\n";
      status = yes ? 0 : 1;
    } else if (*upper_cmd) {
      auto n1 = load(g, file1);
      auto n2 = load(g, file2);
      if (!same_leaf_labels(n1, n2)) throw Error(ErrorCode::LeafSetMismatch, "networks have different leaf labels");
      std::cout << "star_bound=" << n1.internal_count() + n2.internal_count() - 2 << "\n";
      if (dp_applicable(n1, n2)) {
        std::cout << "delta_mcc=" << solve(n1, n2, {false}).delta.to_string() << "\n";
      } else {
        std::cout << "delta_mcc=n/a\n";
      }
    } else if (*diameter_cmd) {
      auto p = diameter_pair(leaves, m, mprime);
      write_pair(g, prefix, {{"1", p.first}, {"2", p.second}});
    } else if (*red1_cmd || *red2_cmd) {
      auto inst = parse_instance(read_file(instance));
      auto r = *red1_cmd ? reduction_deg_bounded(inst) : reduction_five_leaves(inst);
      write_pair(g, prefix, {{"1", r.n1}, {"2", r.n2}, {"_target", r.target}});
      if (!g.quiet) std::cerr << "k=" << r.k << "\n";
    } else if (*random_cmd) {
      write_pair(g, prefix, {{"", random_wgt(leaves, retics, gen_seed.value_or(g.seed))}});
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: InternalError: " << e.what() << "\n";
    return 2;
  }
  return status;
}

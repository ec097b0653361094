#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "mcc/io.hpp"

namespace mcc {

namespace {

bool is_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
  });
}

[[noreturn]] void syntax(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::SyntaxError, std::to_string(line) + ":1: " + message);
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

}  // namespace

Network parse_edgelist(const std::string& text) {
  RawNetwork raw;
  std::set<std::string> targets;
  std::set<std::string> sources;
  bool in_leaves = false;
  std::istringstream in(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto t = tokens(line);
    if (t.empty()) continue;
    if (t.size() == 1 && t[0] == "#leaves") {
      if (in_leaves) syntax(line_no, "repeated #leaves header");
      in_leaves = true;
      continue;
    }
    if (t[0].starts_with('#')) syntax(line_no, "unknown directive '" + t[0] + "'");
    if (t.size() < 2 || (!in_leaves && t.size() != 2)) syntax(line_no, "expected two fields");
    if (!is_name(t[0])) syntax(line_no, "invalid node name '" + t[0] + "'");
    if (in_leaves) {
      // The label is the rest of the line and may contain spaces.
      if (raw.labels.contains(t[0])) syntax(line_no, "leaf '" + t[0] + "' listed twice");
      auto rest = line.substr(line.find(t[0]) + t[0].size());
      auto first = rest.find_first_not_of(" \t\r");
      auto last = rest.find_last_not_of(" \t\r");
      raw.labels.emplace(t[0], rest.substr(first, last - first + 1));
      continue;
    }
    if (!is_name(t[1])) syntax(line_no, "invalid node name '" + t[1] + "'");
    raw.edges.emplace_back(t[0], t[1]);
    sources.insert(t[0]);
    targets.insert(t[1]);
  }
  for (const auto& [name, label] : raw.labels) {
    if (sources.contains(name)) {
      throw Error(ErrorCode::SyntaxError, "listed leaf '" + name + "' has outgoing edges");
    }
    if (!targets.contains(name)) raw.nodes.push_back(name);
  }
  return validate(raw);
}

std::string write_edgelist(const Network& n) {
  auto name = [](NodeId u) { return "n" + std::to_string(u.value); };
  std::string out;
  for (const auto& [u, v] : n.edges()) out += name(u) + " " + name(v) + "\n";
  out += "#leaves\n";
  for (auto leaf : n.leaves()) out += name(leaf) + " " + n.label(leaf) + "\n";
  return out;
}

std::string write_dot(const Network& n) {
  auto name = [](NodeId u) { return "n" + std::to_string(u.value); };
  auto escape = [](const std::string& s) {
    std::string e;
    for (char c : s) {
      if (c == '"' || c == '\\') e += '\\';
      e += c;
    }
    return e;
  };
  std::string out = "digraph network {\n";
  for (auto u : n.nodes()) {
    out += "  " + name(u);
    if (n.is_leaf(u) && n.has_label(u)) {
      out += " [shape=plaintext, label=\"" + escape(n.label(u)) + "\"]";
    } else {
      out += std::string(" [shape=point") + (n.is_reticulation(u) ? ", color=red" : "") + "]";
    }
    out += ";\n";
  }
  for (const auto& [u, v] : n.edges()) out += "  " + name(u) + " -> " + name(v) + ";\n";
  return out + "}\n";
}

}  // namespace mcc

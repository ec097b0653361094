#pragma once

#include <string>
#include <vector>

#include "mcc/network.hpp"

namespace mcc {

// Extended Newick. Internal labels become node names; branch lengths are
// dropped with a warning appended to `warnings` when given.
Network parse_enewick(const std::string& text, std::vector<std::string>* warnings = nullptr);
std::string write_enewick(const Network& n);

// "u v" edge lines, then a "#leaves" line followed by "name label" lines; the
// label is the rest of the line.
Network parse_edgelist(const std::string& text);
std::string write_edgelist(const Network& n);

std::string write_dot(const Network& n);

enum class Format { ENewick, EdgeList };

Network parse_network(const std::string& text, Format format, std::vector<std::string>* warnings = nullptr);
std::string write_network(const Network& n, Format format);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace mcc

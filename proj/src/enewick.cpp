#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include "mcc/io.hpp"

namespace mcc {

namespace {

bool is_label_char(char c) {
  return std::isspace(static_cast<unsigned char>(c)) == 0 && c != '(' && c != ')' && c != ',' && c != ';' &&
         c != ':' && c != '#' && c != '[' && c != ']' && c != '\'';
}

class Parser {
 public:
  Parser(const std::string& text, std::vector<std::string>* warnings) : text_(text), warnings_(warnings) {}

  Network run() {
    skip_space();
    subtree();
    skip_space();
    expect(';');
    skip_space();
    if (pos_ < text_.size()) fail("unexpected text after ';'");
    for (const auto& [tag, info] : tags_) {
      if (!info.defined) {
        throw Error(ErrorCode::UnresolvedHybridTag, "hybrid tag #H" + std::to_string(tag) + " has no defining occurrence");
      }
    }
    check_valid(net_);
    return std::move(net_);
  }

 private:
  struct Tag {
    NodeId node;
    bool defined = false;
  };

  [[noreturn]] void fail(const std::string& message) const {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::SyntaxError, std::to_string(line) + ":" + std::to_string(col) + ": " + message);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_space() {
    while (!at_end()) {
      if (std::isspace(static_cast<unsigned char>(peek())) != 0) {
        ++pos_;
      } else if (peek() == '[') {
        // Bracketed comments.
        while (!at_end() && peek() != ']') ++pos_;
        if (at_end()) fail("unterminated comment");
        ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'" + (at_end() ? " at end of input" : ""));
    ++pos_;
  }

  std::string label() {
    skip_space();
    if (peek() == '\'') {
      ++pos_;
      std::string out;
      while (true) {
        if (at_end()) fail("unterminated quoted label");
        char c = text_[pos_++];
        if (c == '\'') {
          if (peek() == '\'') {
            out += '\'';
            ++pos_;
            continue;
          }
          break;
        }
        out += c;
      }
      return out;
    }
    std::size_t start = pos_;
    while (!at_end() && is_label_char(peek())) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::optional<int> hybrid_tag() {
    skip_space();
    if (peek() != '#') return std::nullopt;
    ++pos_;
    if (peek() != 'H') fail("expected 'H' after '#'");
    ++pos_;
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())) != 0) ++pos_;
    if (start == pos_) fail("expected hybrid tag number");
    if (pos_ - start > 9) fail("hybrid tag number too large");
    return std::stoi(text_.substr(start, pos_ - start));
  }

  void branch_length() {
    skip_space();
    if (peek() != ':') return;
    ++pos_;
    skip_space();
    std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) != 0 || peek() == '.' || peek() == '-' ||
                         peek() == '+' || peek() == 'e' || peek() == 'E')) {
      ++pos_;
    }
    if (start == pos_) fail("expected branch length");
    std::string number = text_.substr(start, pos_ - start);
    std::istringstream in(number);
    double value = 0;
    if (!(in >> value) || !in.eof()) fail("malformed branch length '" + number + "'");
    if (warnings_ != nullptr) warnings_->push_back("branch length " + number + " ignored");
  }

  NodeId tag_node(int tag) {
    auto it = tags_.find(tag);
    if (it != tags_.end()) return it->second.node;
    auto node = net_.add_node();
    tags_.emplace(tag, Tag{node, false});
    return node;
  }

  NodeId subtree() {
    skip_space();
    if (++depth_ > kMaxDepth) fail("nesting too deep");
    NodeId node;
    if (peek() == '(') {
      ++pos_;
      std::vector<NodeId> kids;
      while (true) {
        kids.push_back(subtree());
        skip_space();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ')') {
          ++pos_;
          break;
        }
        fail(at_end() ? "unbalanced parentheses" : "expected ',' or ')'");
      }
      std::string name = label();
      auto tag = hybrid_tag();
      if (tag) {
        node = tag_node(*tag);
        auto& info = tags_.at(*tag);
        if (info.defined) {
          throw Error(ErrorCode::DuplicateHybridDefinition, "hybrid tag #H" + std::to_string(*tag) + " defined twice");
        }
        info.defined = true;
        if (!name.empty()) net_.set_name(node, name);
      } else {
        node = net_.add_node(name);
      }
      for (auto k : kids) {
        if (k == node) fail("hybrid node is its own child");
        net_.add_edge(node, k);
      }
    } else {
      std::string name = label();
      auto tag = hybrid_tag();
      if (tag) {
        node = tag_node(*tag);
      } else {
        if (name.empty()) fail(at_end() ? "unexpected end of input" : std::string("unexpected '") + peek() + "'");
        node = net_.add_node();
        net_.set_label(node, name);
      }
    }
    branch_length();
    --depth_;
    return node;
  }

  static constexpr int kMaxDepth = 10000;
  const std::string& text_;
  std::vector<std::string>* warnings_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  Network net_;
  std::map<int, Tag> tags_;
};

}  // namespace

Network parse_enewick(const std::string& text, std::vector<std::string>* warnings) {
  return Parser(text, warnings).run();
}

std::string write_enewick(const Network& n) {
  auto universe = universe_of(n);
  auto d = all_reachable_leaves(n, universe);
  auto min_leaf = [&](NodeId u) { return d[u.value].min_element().value_or(universe.size()); };
  std::map<std::uint32_t, int> tag_of;
  int next_tag = 1;
  std::string out;
  auto quote = [](const std::string& s) {
    bool plain = !s.empty() && std::all_of(s.begin(), s.end(), is_label_char);
    if (plain) return s;
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("''") : std::string(1, c);
    return q + "'";
  };
  auto ordered = [&](NodeId u) {
    std::vector<NodeId> kids = n.children(u);
    auto key = [&](NodeId x) {
      return std::tuple(min_leaf(x), d[x.value].members(), n.parents(x).size(), n.children(x).size());
    };
    std::stable_sort(kids.begin(), kids.end(), [&](NodeId a, NodeId b) {
      auto ka = key(a);
      auto kb = key(b);
      return ka != kb ? ka < kb : a < b;
    });
    return kids;
  };
  std::function<void(NodeId)> emit = [&](NodeId u) {
    if (n.is_reticulation(u)) {
      auto it = tag_of.find(u.value);
      if (it != tag_of.end()) {
        out += "#H" + std::to_string(it->second);
        return;
      }
      tag_of.emplace(u.value, next_tag++);
    }
    if (n.is_leaf(u)) {
      out += quote(n.label(u));
    } else {
      out += "(";
      auto kids = ordered(u);
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i > 0) out += ",";
        emit(kids[i]);
      }
      out += ")";
    }
    if (n.is_reticulation(u)) out += "#H" + std::to_string(tag_of.at(u.value));
  };
  emit(n.root());
  return out + ";";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
}

Network parse_network(const std::string& text, Format format, std::vector<std::string>* warnings) {
  return format == Format::ENewick ? parse_enewick(text, warnings) : parse_edgelist(text);
}

std::string write_network(const Network& n, Format format) {
  return format == Format::ENewick ? write_enewick(n) + "\n" : write_edgelist(n);
}

}  // namespace mcc

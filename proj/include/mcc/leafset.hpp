#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mcc {

// Fixed-size bitset over the positions of a LeafUniverse.
class LeafSet {
 public:
  LeafSet() = default;
  explicit LeafSet(std::size_t universe_size);

  std::size_t universe_size() const { return size_; }

  void insert(std::size_t i);
  void erase(std::size_t i);
  bool contains(std::size_t i) const;
  bool empty() const;
  std::size_t count() const;
  std::optional<std::size_t> min_element() const;
  std::vector<std::size_t> members() const;
  bool is_subset_of(const LeafSet& other) const;
  bool intersects(const LeafSet& other) const;

  LeafSet& operator|=(const LeafSet& other);
  LeafSet& operator&=(const LeafSet& other);
  // Set difference.
  LeafSet& operator-=(const LeafSet& other);

  friend LeafSet operator|(LeafSet a, const LeafSet& b) { return a |= b; }
  friend LeafSet operator&(LeafSet a, const LeafSet& b) { return a &= b; }
  friend LeafSet operator-(LeafSet a, const LeafSet& b) { return a -= b; }
  friend bool operator==(const LeafSet& a, const LeafSet& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }
  friend bool operator!=(const LeafSet& a, const LeafSet& b) { return !(a == b); }

  // Lexicographic order of the sorted member sequences.
  friend bool operator<(const LeafSet& a, const LeafSet& b);

  std::size_t hash() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct LeafSetHash {
  std::size_t operator()(const LeafSet& s) const { return s.hash(); }
};

// Sorted label universe shared by all LeafSets of one comparison session.
class LeafUniverse {
 public:
  LeafUniverse() = default;
  explicit LeafUniverse(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  LeafSet empty_set() const { return LeafSet(labels_.size()); }
  LeafSet make(const std::vector<std::string>& labels) const;
  std::vector<std::string> to_labels(const LeafSet& s) const;
  std::string format(const LeafSet& s) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace mcc

#include "mcc/leafset.hpp"

#include <algorithm>
#include <bit>

#include "mcc/error.hpp"

namespace mcc {

LeafSet::LeafSet(std::size_t universe_size)
    : size_(universe_size), words_((universe_size + 63) / 64, 0) {}

void LeafSet::insert(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

void LeafSet::erase(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

bool LeafSet::contains(std::size_t i) const {
  return i < size_ && ((words_[i / 64] >> (i % 64)) & 1U) != 0;
}

bool LeafSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t LeafSet::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::optional<std::size_t> LeafSet::min_element() const {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k] != 0) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
  }
  return std::nullopt;
}

std::vector<std::size_t> LeafSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < words_.size(); ++k) {
    auto w = words_[k];
    while (w != 0) {
      out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

bool LeafSet::is_subset_of(const LeafSet& other) const {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if ((words_[k] & ~other.words_[k]) != 0) return false;
  }
  return true;
}

bool LeafSet::intersects(const LeafSet& other) const {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if ((words_[k] & other.words_[k]) != 0) return true;
  }
  return false;
}

LeafSet& LeafSet::operator|=(const LeafSet& other) {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
  return *this;
}

LeafSet& LeafSet::operator&=(const LeafSet& other) {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
  return *this;
}

LeafSet& LeafSet::operator-=(const LeafSet& other) {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~other.words_[k];
  return *this;
}

bool operator<(const LeafSet& a, const LeafSet& b) {
  for (std::size_t k = 0; k < a.words_.size(); ++k) {
    auto diff = a.words_[k] ^ b.words_[k];
    if (diff == 0) continue;
    auto bit = static_cast<std::size_t>(std::countr_zero(diff));
    bool a_has = ((a.words_[k] >> bit) & 1U) != 0;
    const LeafSet& holder = a_has ? a : b;
    const LeafSet& other = a_has ? b : a;
    // The set lacking the bit is smaller only if it has nothing left above it.
    std::uint64_t above = bit == 63 ? 0 : (other.words_[k] >> (bit + 1));
    bool other_continues = above != 0;
    for (std::size_t j = k + 1; !other_continues && j < other.words_.size(); ++j) {
      other_continues = other.words_[j] != 0;
    }
    bool holder_smaller = other_continues;
    return (&holder == &a) ? holder_smaller : !holder_smaller;
  }
  return false;
}

std::size_t LeafSet::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

LeafUniverse::LeafUniverse(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
  for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], i);
}

std::optional<std::size_t> LeafUniverse::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LeafSet LeafUniverse::make(const std::vector<std::string>& labels) const {
  LeafSet s(labels_.size());
  for (const auto& l : labels) {
    auto i = index_of(l);
    if (!i) throw Error(ErrorCode::LeafSetMismatch, "label '" + l + "' is outside the universe");
    s.insert(*i);
  }
  return s;
}

std::vector<std::string> LeafUniverse::to_labels(const LeafSet& s) const {
  std::vector<std::string> out;
  for (auto i : s.members()) out.push_back(labels_[i]);
  return out;
}

std::string LeafUniverse::format(const LeafSet& s) const {
  std::string out = "{";
  bool first = true;
  for (auto i : s.members()) {
    if (!first) out += ',';
    out += labels_[i];
    first = false;
  }
  return out + "}";
}

}  // namespace mcc

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hampack {

/// Fixed-width dynamic bitset backed by 64-bit words. Bits past size() are
/// always zero, so word-level operations never need masking.
class Bitset {
 public:
  using Word = std::uint64_t;
  static constexpr int kWordBits = 64;

  Bitset() = default;
  explicit Bitset(int size) : size_(size), words_(word_count(size), 0) {}

  static constexpr std::size_t word_count(int size) {
    return static_cast<std::size_t>((size + kWordBits - 1) / kWordBits);
  }

  int size() const { return size_; }

  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(int i) { words_[i >> 6] |= Word{1} << (i & 63); }
  void reset(int i) { words_[i >> 6] &= ~(Word{1} << (i & 63)); }
  void assign(int i, bool value) { value ? set(i) : reset(i); }

  void set_all() {
    for (auto& w : words_) w = ~Word{0};
    trim();
  }
  void clear() {
    for (auto& w : words_) w = 0;
  }

  int count() const {
    int c = 0;
    for (Word w : words_) c += std::popcount(w);
    return c;
  }
  bool any() const {
    for (Word w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  /// popcount(this & other); both must have equal width.
  int count_and(const Bitset& other) const {
    int c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) c += std::popcount(words_[k] & other.words_[k]);
    return c;
  }
  bool intersects(const Bitset& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & other.words_[k]) return true;
    return false;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  /// this &= ~o
  Bitset& subtract(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }

  /// Index of the first set bit at or after `from`, or size() if none.
  int find_next(int from) const {
    if (from >= size_) return size_;
    std::size_t k = static_cast<std::size_t>(from >> 6);
    Word w = words_[k] & (~Word{0} << (from & 63));
    while (true) {
      if (w) return static_cast<int>(k * kWordBits) + std::countr_zero(w);
      if (++k >= words_.size()) return size_;
      w = words_[k];
    }
  }
  int find_first() const { return find_next(0); }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      Word w = words_[k];
      while (w) {
        f(static_cast<int>(k * kWordBits) + std::countr_zero(w));
        w &= w - 1;
      }
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  friend bool operator==(const Bitset&, const Bitset&) = default;

 private:
  void trim() {
    if (size_ % kWordBits != 0 && !words_.empty())
      words_.back() &= (Word{1} << (size_ % kWordBits)) - 1;
  }

  int size_ = 0;
  std::vector<Word> words_;
};

}  // namespace hampack

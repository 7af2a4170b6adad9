#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace sptree {

// Fixed-length packed bit vector. Used for matrix rows and for the
// accept-sets built by the verification harness.
class BitRow {
 public:
  BitRow() = default;
  explicit BitRow(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  bool none() const { return !any(); }

  // True iff some bit is set here but not in `other`.
  bool any_outside(const BitRow& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~other.words_[k]) return true;
    return false;
  }

  // Index of the first bit set here but not in `other`, or size() if none.
  std::size_t first_outside(const BitRow& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      auto w = words_[k] & ~other.words_[k];
      if (w) return k * 64 + static_cast<std::size_t>(std::countr_zero(w));
    }
    return size_;
  }

  bool intersects(const BitRow& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & other.words_[k]) return true;
    return false;
  }

  std::size_t count_and_not(const BitRow& other) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k)
      c += static_cast<std::size_t>(std::popcount(words_[k] & ~other.words_[k]));
    return c;
  }

  BitRow& operator|=(const BitRow& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  BitRow& operator&=(const BitRow& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  BitRow& and_not(const BitRow& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }

  void fill() {
    for (auto& w : words_) w = ~std::uint64_t{0};
    trim();
  }

  template <class F>
  void for_each_set(F&& fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      auto w = words_[k];
      while (w) {
        fn(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const BitRow&, const BitRow&) = default;

 private:
  void trim() {
    if (size_ % 64 && !words_.empty())
      words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace sptree

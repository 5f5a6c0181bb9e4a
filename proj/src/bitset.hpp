#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace bramble_forge::detail {

class DynamicBitset {
 public:
  DynamicBitset() = default;
  explicit DynamicBitset(int bits) : words_((bits + 63) / 64, 0) {}

  void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  bool intersects(const DynamicBitset& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }
  bool is_subset_of(const DynamicBitset& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }
  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  /// Popcount of this & ~mask.
  int count_excluding(const DynamicBitset& mask) const {
    int c = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) c += std::popcount(words_[w] & ~mask.words_[w]);
    return c;
  }
  bool intersects_excluding(const DynamicBitset& o, const DynamicBitset& mask) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & o.words_[w] & ~mask.words_[w]) return true;
    return false;
  }
  DynamicBitset& operator|=(const DynamicBitset& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(static_cast<int>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }
  friend bool operator==(const DynamicBitset&, const DynamicBitset&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace bramble_forge::detail

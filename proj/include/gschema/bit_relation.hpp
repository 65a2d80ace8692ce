#pragma once

// Dense binary relation over {0, ..., n-1}, one bit row per source.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace gschema {

class BitRelation {
 public:
  BitRelation() = default;
  explicit BitRelation(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  static BitRelation identity(std::size_t n) {
    BitRelation r(n);
    for (std::size_t i = 0; i < n; ++i) r.set(i, i);
    return r;
  }

  static BitRelation full(std::size_t n) {
    BitRelation r(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) r.set(i, j);
    }
    return r;
  }

  std::size_t dimension() const { return n_; }

  bool test(std::size_t i, std::size_t j) const { return (row(i)[j / 64] >> (j % 64)) & 1U; }
  void set(std::size_t i, std::size_t j) { row(i)[j / 64] |= std::uint64_t{1} << (j % 64); }

  bool empty() const {
    for (auto w : bits_) {
      if (w) return false;
    }
    return true;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  BitRelation& operator|=(const BitRelation& o) {
    for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] |= o.bits_[k];
    return *this;
  }
  BitRelation& operator&=(const BitRelation& o) {
    for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] &= o.bits_[k];
    return *this;
  }
  friend BitRelation operator|(BitRelation a, const BitRelation& b) { return a |= b; }
  friend BitRelation operator&(BitRelation a, const BitRelation& b) { return a &= b; }

  /// Pairs of `a` not in `b`.
  friend BitRelation operator-(BitRelation a, const BitRelation& b) {
    for (std::size_t k = 0; k < a.bits_.size(); ++k) a.bits_[k] &= ~b.bits_[k];
    return a;
  }

  /// Relational composition: {(i,k) | (i,j) in a, (j,k) in b}.
  friend BitRelation compose(const BitRelation& a, const BitRelation& b) {
    BitRelation r(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) {
      std::uint64_t* out = r.row(i);
      const std::uint64_t* src = a.row(i);
      for (std::size_t w = 0; w < a.words_; ++w) {
        std::uint64_t word = src[w];
        while (word) {
          const std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
          word &= word - 1;
          const std::uint64_t* brow = b.row(j);
          for (std::size_t k = 0; k < a.words_; ++k) out[k] |= brow[k];
        }
      }
    }
    return r;
  }

  /// Row `dst` |= row `src`.
  void merge_row(std::size_t dst, std::size_t src) {
    std::uint64_t* d = row(dst);
    const std::uint64_t* s = row(src);
    for (std::size_t w = 0; w < words_; ++w) d[w] |= s[w];
  }

  /// Set of i with some (i, j).
  std::vector<std::size_t> domain() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i) {
      const std::uint64_t* r = row(i);
      for (std::size_t w = 0; w < words_; ++w) {
        if (r[w]) {
          out.push_back(i);
          break;
        }
      }
    }
    return out;
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (test(i, j)) out.emplace_back(i, j);
      }
    }
    return out;
  }

  friend bool operator==(const BitRelation&, const BitRelation&) = default;

 private:
  std::uint64_t* row(std::size_t i) { return bits_.data() + i * words_; }
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace gschema

#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace nesting {

// Fixed-length packed bit vector. Plain accessors are for single-threaded
// or immutable use; the *_relaxed accessors go through std::atomic_ref for
// words that are shared between the search workers and the incumbent-update
// region. Bits there only ever flip 1 -> 0, so stale reads are benign.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t nbits, bool value = false)
      : nbits_(nbits),
        words_((nbits + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    trim();
  }

  std::size_t size() const { return nbits_; }
  std::size_t word_count() const { return words_.size(); }

  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) {
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  void set_all() {
    for (auto& w : words_) w = ~std::uint64_t{0};
    trim();
  }
  void reset_all() {
    for (auto& w : words_) w = 0;
  }

  bool test_relaxed(std::size_t i) const {
    return (load_word_relaxed(i >> 6) >> (i & 63)) & 1u;
  }
  void reset_relaxed(std::size_t i) {
    std::atomic_ref<std::uint64_t> ref(words_[i >> 6]);
    ref.fetch_and(~(std::uint64_t{1} << (i & 63)),
                  std::memory_order_relaxed);
  }

  std::uint64_t word(std::size_t w) const { return words_[w]; }
  std::uint64_t& word(std::size_t w) { return words_[w]; }
  std::uint64_t load_word_relaxed(std::size_t w) const {
    std::atomic_ref<const std::uint64_t> ref(words_[w]);
    return ref.load(std::memory_order_relaxed);
  }
  void store_word_relaxed(std::size_t w, std::uint64_t value) {
    std::atomic_ref<std::uint64_t> ref(words_[w]);
    ref.store(value, std::memory_order_relaxed);
  }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool none() const {
    for (std::uint64_t w : words_)
      if (w) return false;
    return true;
  }

  void and_assign(const BitVector& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  }

  // dst = a & b, all same length
  static void and_into(BitVector& dst, const BitVector& a,
                       const BitVector& b) {
    for (std::size_t w = 0; w < dst.words_.size(); ++w)
      dst.words_[w] = a.words_[w] & b.words_[w];
  }

  bool operator==(const BitVector& other) const {
    return nbits_ == other.nbits_ && words_ == other.words_;
  }

 private:
  void trim() {
    if (nbits_ % 64 != 0 && !words_.empty())
      words_.back() &= (std::uint64_t{1} << (nbits_ % 64)) - 1;
  }

  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace nesting

#pragma once
// Fixed-width bit patterns stored as little-endian 64-bit words.
// Canonical form: bits above `width` are always zero.

#include <cstdint>
#include <cstring>
#include <string>

namespace actsim {

constexpr uint32_t kWordBits = 64;

inline uint32_t words_for_width(uint32_t width) {
  return (width + kWordBits - 1) / kWordBits;
}

class WideValue {
public:
  WideValue() = default;

  explicit WideValue(uint32_t width) { reset(width); }

  static WideValue from_u64(uint32_t width, uint64_t v) {
    WideValue r(width);
    if (r.nwords_ > 0) r.data()[0] = v;
    r.mask_top();
    return r;
  }

  WideValue(const WideValue& o) { copy_from(o); }
  WideValue(WideValue&& o) noexcept { steal_from(o); }
  WideValue& operator=(const WideValue& o) {
    if (this != &o) {
      release();
      copy_from(o);
    }
    return *this;
  }
  WideValue& operator=(WideValue&& o) noexcept {
    if (this != &o) {
      release();
      steal_from(o);
    }
    return *this;
  }
  ~WideValue() { release(); }

  uint32_t width() const { return width_; }
  uint32_t num_words() const { return nwords_; }

  uint64_t* data() { return on_heap() ? heap_ : inline_; }
  const uint64_t* data() const { return on_heap() ? heap_ : inline_; }
  uint64_t word(uint32_t i) const { return i < nwords_ ? data()[i] : 0; }

  // Re-dimension to `width`, zeroed.
  void reset(uint32_t width) {
    uint32_t nw = words_for_width(width);
    if (nw != nwords_) {
      release();
      nwords_ = nw;
      if (on_heap()) heap_ = new uint64_t[nwords_];
    }
    width_ = width;
    std::memset(data(), 0, sizeof(uint64_t) * nwords_);
  }

  // Zero any bits above width_ in the top word.
  void mask_top() {
    if (nwords_ == 0) return;
    uint32_t rem = width_ % kWordBits;
    if (rem != 0) data()[nwords_ - 1] &= (~uint64_t{0}) >> (kWordBits - rem);
  }

  bool bit(uint32_t i) const {
    if (i >= width_) return false;
    return (data()[i / kWordBits] >> (i % kWordBits)) & 1;
  }

  void set_bit(uint32_t i, bool v) {
    if (i >= width_) return;
    uint64_t m = uint64_t{1} << (i % kWordBits);
    if (v)
      data()[i / kWordBits] |= m;
    else
      data()[i / kWordBits] &= ~m;
  }

  bool sign_bit() const { return width_ > 0 && bit(width_ - 1); }

  bool is_zero() const {
    for (uint32_t i = 0; i < nwords_; i++)
      if (data()[i] != 0) return false;
    return true;
  }

  uint64_t low_u64() const { return nwords_ ? data()[0] : 0; }

  bool operator==(const WideValue& o) const {
    if (width_ != o.width_) return false;
    for (uint32_t i = 0; i < nwords_; i++)
      if (data()[i] != o.data()[i]) return false;
    return true;
  }
  bool operator!=(const WideValue& o) const { return !(*this == o); }

  // Width change. Sign extension replicates the old sign bit; truncation masks.
  WideValue extended(uint32_t new_width, bool sign_extend) const;

  // Two's complement negation within width.
  WideValue negated() const;

  std::string to_bin() const;  // exactly width() chars, msb first
  std::string to_hex() const;
  std::string to_decimal() const;

  // Parses an unsigned decimal string; returns false on overflow past width.
  static bool from_decimal(uint32_t width, const std::string& s, WideValue& out);

private:
  static constexpr uint32_t kInlineWords = 2;

  bool on_heap() const { return nwords_ > kInlineWords; }

  void release() {
    if (on_heap()) delete[] heap_;
    nwords_ = 0;
    width_ = 0;
  }

  void copy_from(const WideValue& o) {
    width_ = o.width_;
    nwords_ = o.nwords_;
    if (on_heap()) heap_ = new uint64_t[nwords_];
    std::memcpy(data(), o.data(), sizeof(uint64_t) * nwords_);
  }

  void steal_from(WideValue& o) {
    width_ = o.width_;
    nwords_ = o.nwords_;
    if (on_heap())
      heap_ = o.heap_;
    else
      std::memcpy(inline_, o.inline_, sizeof(inline_));
    o.nwords_ = 0;
    o.width_ = 0;
  }

  uint32_t width_ = 0;
  uint32_t nwords_ = 0;
  union {
    uint64_t inline_[kInlineWords] = {0, 0};
    uint64_t* heap_;
  };
};

// Word-level primitives. Operands must already share the result width unless
// noted; results are canonical.
WideValue wv_add(const WideValue& a, const WideValue& b);
WideValue wv_sub(const WideValue& a, const WideValue& b);
WideValue wv_mul(const WideValue& a, const WideValue& b, uint32_t out_width);
// Unsigned divide; b must be nonzero. Quotient carries a's width, remainder b's.
void wv_divmod_u(const WideValue& a, const WideValue& b, WideValue& q, WideValue& r);
WideValue wv_and(const WideValue& a, const WideValue& b);
WideValue wv_or(const WideValue& a, const WideValue& b);
WideValue wv_xor(const WideValue& a, const WideValue& b);
WideValue wv_not(const WideValue& a);
WideValue wv_shift_left(const WideValue& a, uint64_t n, uint32_t out_width);
// Logical right shift (operand already sign-extended by the caller if needed).
WideValue wv_shift_right(const WideValue& a, uint64_t n, uint32_t out_width);
WideValue wv_cat(const WideValue& hi, const WideValue& lo);
WideValue wv_extract(const WideValue& a, uint32_t hi, uint32_t lo);
int wv_compare_u(const WideValue& a, const WideValue& b);  // -1/0/1 as patterns
bool wv_all_ones(const WideValue& a);
bool wv_parity(const WideValue& a);

}  // namespace actsim

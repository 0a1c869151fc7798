#include "actsim/wide_value.hpp"

#include <algorithm>
#include <cassert>

namespace actsim {

WideValue WideValue::extended(uint32_t new_width, bool sign_extend) const {
  WideValue r(new_width);
  uint32_t copy_words = std::min(r.num_words(), num_words());
  std::memcpy(r.data(), data(), sizeof(uint64_t) * copy_words);
  if (sign_extend && new_width > width_ && sign_bit()) {
    // Fill bits [width, new_width) with ones.
    uint32_t w = width_ / kWordBits;
    if (w < r.num_words()) {
      r.data()[w] |= ~uint64_t{0} << (width_ % kWordBits);
      for (uint32_t i = w + 1; i < r.num_words(); i++) r.data()[i] = ~uint64_t{0};
    }
  }
  r.mask_top();
  return r;
}

WideValue WideValue::negated() const {
  WideValue r(width_);
  uint64_t carry = 1;
  for (uint32_t i = 0; i < nwords_; i++) {
    uint64_t v = ~data()[i];
    uint64_t s = v + carry;
    carry = (s < v) ? 1 : 0;
    r.data()[i] = s;
  }
  r.mask_top();
  return r;
}

std::string WideValue::to_bin() const {
  std::string s;
  s.reserve(width_);
  for (uint32_t i = width_; i-- > 0;) s.push_back(bit(i) ? '1' : '0');
  if (s.empty()) s = "0";
  return s;
}

std::string WideValue::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  uint32_t nibbles = (width_ + 3) / 4;
  for (uint32_t i = nibbles; i-- > 0;) {
    uint32_t lo = i * 4;
    uint32_t v = 0;
    for (uint32_t b = 0; b < 4; b++)
      if (bit(lo + b)) v |= 1u << b;
    s.push_back(digits[v]);
  }
  if (s.empty()) s = "0";
  return s;
}

namespace {

// Divides in place by a small divisor, returns the remainder.
uint64_t divmod_small(uint64_t* words, uint32_t n, uint64_t divisor) {
  uint64_t rem = 0;
  for (uint32_t i = n; i-- > 0;) {
    unsigned __int128 cur = ((unsigned __int128)rem << 64) | words[i];
    words[i] = (uint64_t)(cur / divisor);
    rem = (uint64_t)(cur % divisor);
  }
  return rem;
}

}  // namespace

std::string WideValue::to_decimal() const {
  if (is_zero()) return "0";
  std::string digits;
  WideValue tmp = *this;
  while (!tmp.is_zero()) {
    uint64_t d = divmod_small(tmp.data(), tmp.num_words(), 10);
    digits.push_back(char('0' + d));
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

bool WideValue::from_decimal(uint32_t width, const std::string& s, WideValue& out) {
  out.reset(width);
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    // out = out * 10 + digit, with overflow detection against width
    uint64_t carry = uint64_t(c - '0');
    for (uint32_t i = 0; i < out.num_words(); i++) {
      unsigned __int128 cur = (unsigned __int128)out.data()[i] * 10 + carry;
      out.data()[i] = (uint64_t)cur;
      carry = (uint64_t)(cur >> 64);
    }
    if (carry != 0) return false;
  }
  WideValue check = out;
  check.mask_top();
  if (check != out) return false;
  return true;
}

WideValue wv_add(const WideValue& a, const WideValue& b) {
  assert(a.width() == b.width());
  WideValue r(a.width());
  uint64_t carry = 0;
  for (uint32_t i = 0; i < r.num_words(); i++) {
    uint64_t x = a.word(i), y = b.word(i);
    uint64_t s = x + y;
    uint64_t c1 = (s < x) ? 1 : 0;
    uint64_t s2 = s + carry;
    uint64_t c2 = (s2 < s) ? 1 : 0;
    r.data()[i] = s2;
    carry = c1 | c2;
  }
  r.mask_top();
  return r;
}

WideValue wv_sub(const WideValue& a, const WideValue& b) {
  assert(a.width() == b.width());
  WideValue r(a.width());
  uint64_t borrow = 0;
  for (uint32_t i = 0; i < r.num_words(); i++) {
    uint64_t x = a.word(i), y = b.word(i);
    uint64_t d = x - y;
    uint64_t b1 = (x < y) ? 1 : 0;
    uint64_t d2 = d - borrow;
    uint64_t b2 = (d < borrow) ? 1 : 0;
    r.data()[i] = d2;
    borrow = b1 | b2;
  }
  r.mask_top();
  return r;
}

WideValue wv_mul(const WideValue& a, const WideValue& b, uint32_t out_width) {
  WideValue r(out_width);
  uint32_t rn = r.num_words();
  for (uint32_t i = 0; i < a.num_words() && i < rn; i++) {
    uint64_t carry = 0;
    uint64_t ai = a.word(i);
    if (ai == 0) continue;
    for (uint32_t j = 0; i + j < rn; j++) {
      unsigned __int128 cur = (unsigned __int128)ai * b.word(j) + r.data()[i + j] + carry;
      r.data()[i + j] = (uint64_t)cur;
      carry = (uint64_t)(cur >> 64);
    }
  }
  r.mask_top();
  return r;
}

int wv_compare_u(const WideValue& a, const WideValue& b) {
  uint32_t n = std::max(a.num_words(), b.num_words());
  for (uint32_t i = n; i-- > 0;) {
    uint64_t x = a.word(i), y = b.word(i);
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

void wv_divmod_u(const WideValue& a, const WideValue& b, WideValue& q, WideValue& r) {
  assert(!b.is_zero());
  q.reset(a.width());
  r.reset(b.width());
  // Bitwise long division, msb first.
  WideValue rem(a.width() + 1);
  for (uint32_t i = a.width(); i-- > 0;) {
    // rem = (rem << 1) | a[i]
    uint64_t carry = a.bit(i) ? 1 : 0;
    for (uint32_t w = 0; w < rem.num_words(); w++) {
      uint64_t v = rem.data()[w];
      rem.data()[w] = (v << 1) | carry;
      carry = v >> 63;
    }
    rem.mask_top();
    if (wv_compare_u(rem, b) >= 0) {
      // rem -= b
      uint64_t borrow = 0;
      for (uint32_t w = 0; w < rem.num_words(); w++) {
        uint64_t x = rem.data()[w], y = b.word(w);
        uint64_t d = x - y;
        uint64_t b1 = (x < y) ? 1 : 0;
        uint64_t d2 = d - borrow;
        uint64_t b2 = (d < borrow) ? 1 : 0;
        rem.data()[w] = d2;
        borrow = b1 | b2;
      }
      q.set_bit(i, true);
    }
  }
  for (uint32_t w = 0; w < r.num_words(); w++) r.data()[w] = rem.word(w);
  r.mask_top();
}

WideValue wv_and(const WideValue& a, const WideValue& b) {
  assert(a.width() == b.width());
  WideValue r(a.width());
  for (uint32_t i = 0; i < r.num_words(); i++) r.data()[i] = a.word(i) & b.word(i);
  return r;
}

WideValue wv_or(const WideValue& a, const WideValue& b) {
  assert(a.width() == b.width());
  WideValue r(a.width());
  for (uint32_t i = 0; i < r.num_words(); i++) r.data()[i] = a.word(i) | b.word(i);
  return r;
}

WideValue wv_xor(const WideValue& a, const WideValue& b) {
  assert(a.width() == b.width());
  WideValue r(a.width());
  for (uint32_t i = 0; i < r.num_words(); i++) r.data()[i] = a.word(i) ^ b.word(i);
  return r;
}

WideValue wv_not(const WideValue& a) {
  WideValue r(a.width());
  for (uint32_t i = 0; i < r.num_words(); i++) r.data()[i] = ~a.word(i);
  r.mask_top();
  return r;
}

WideValue wv_shift_left(const WideValue& a, uint64_t n, uint32_t out_width) {
  WideValue r(out_width);
  if (n >= out_width) return r;
  uint32_t word_shift = (uint32_t)(n / kWordBits);
  uint32_t bit_shift = (uint32_t)(n % kWordBits);
  for (uint32_t i = r.num_words(); i-- > 0;) {
    uint64_t v = 0;
    if (i >= word_shift) {
      v = a.word(i - word_shift) << bit_shift;
      if (bit_shift != 0 && i > word_shift)
        v |= a.word(i - word_shift - 1) >> (kWordBits - bit_shift);
    }
    r.data()[i] = v;
  }
  r.mask_top();
  return r;
}

WideValue wv_shift_right(const WideValue& a, uint64_t n, uint32_t out_width) {
  WideValue r(out_width);
  if (n >= a.width()) return r;
  uint32_t word_shift = (uint32_t)(n / kWordBits);
  uint32_t bit_shift = (uint32_t)(n % kWordBits);
  for (uint32_t i = 0; i < r.num_words(); i++) {
    uint64_t v = a.word(i + word_shift) >> bit_shift;
    if (bit_shift != 0) v |= a.word(i + word_shift + 1) << (kWordBits - bit_shift);
    r.data()[i] = v;
  }
  r.mask_top();
  return r;
}

WideValue wv_cat(const WideValue& hi, const WideValue& lo) {
  WideValue r = lo.extended(hi.width() + lo.width(), false);
  WideValue h = wv_shift_left(hi, lo.width(), r.width());
  return wv_or(r, h);
}

WideValue wv_extract(const WideValue& a, uint32_t hi, uint32_t lo) {
  assert(hi >= lo && hi < a.width());
  return wv_shift_right(a, lo, hi - lo + 1);
}

bool wv_all_ones(const WideValue& a) {
  for (uint32_t i = 0; i < a.width(); i++)
    if (!a.bit(i)) return false;
  return a.width() > 0;
}

bool wv_parity(const WideValue& a) {
  uint64_t acc = 0;
  for (uint32_t i = 0; i < a.num_words(); i++) acc ^= a.word(i);
  return __builtin_parityll(acc);
}

}  // namespace actsim

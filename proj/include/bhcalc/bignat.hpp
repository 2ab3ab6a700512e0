#ifndef BHCALC_BIGNAT_HPP
#define BHCALC_BIGNAT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bhcalc {

//---- arbitrary-size natural numbers, little-endian base 2^32

// Just enough arithmetic for pairing-based term codes: add, multiply,
// halve, compare, print.
struct BigNat {
  std::vector<std::uint32_t> limbs;  // no trailing zero limbs

  static BigNat of(std::uint64_t n) {
    BigNat r;
    if (n) r.limbs.push_back(static_cast<std::uint32_t>(n & 0xffffffffu));
    if (n >> 32) r.limbs.push_back(static_cast<std::uint32_t>(n >> 32));
    return r;
  }
  bool is_zero() const { return limbs.empty(); }
};

inline int big_cmp(const BigNat& a, const BigNat& b) {
  if (a.limbs.size() != b.limbs.size()) return a.limbs.size() < b.limbs.size() ? -1 : 1;
  for (std::size_t i = a.limbs.size(); i-- > 0;)
    if (a.limbs[i] != b.limbs[i]) return a.limbs[i] < b.limbs[i] ? -1 : 1;
  return 0;
}

inline bool big_eq(const BigNat& a, const BigNat& b) { return big_cmp(a, b) == 0; }

inline BigNat big_add(const BigNat& a, const BigNat& b) {
  BigNat r;
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < a.limbs.size() || i < b.limbs.size() || carry; ++i) {
    std::uint64_t s = carry;
    if (i < a.limbs.size()) s += a.limbs[i];
    if (i < b.limbs.size()) s += b.limbs[i];
    r.limbs.push_back(static_cast<std::uint32_t>(s & 0xffffffffu));
    carry = s >> 32;
  }
  while (!r.limbs.empty() && r.limbs.back() == 0) r.limbs.pop_back();
  return r;
}

inline BigNat big_mul(const BigNat& a, const BigNat& b) {
  BigNat r;
  if (a.is_zero() || b.is_zero()) return r;
  r.limbs.assign(a.limbs.size() + b.limbs.size(), 0);
  for (std::size_t i = 0; i < a.limbs.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < b.limbs.size(); ++j) {
      std::uint64_t cur = r.limbs[i + j] +
                          static_cast<std::uint64_t>(a.limbs[i]) * b.limbs[j] + carry;
      r.limbs[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    std::size_t k = i + b.limbs.size();
    while (carry) {
      std::uint64_t cur = r.limbs[k] + carry;
      r.limbs[k] = static_cast<std::uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
      ++k;
    }
  }
  while (!r.limbs.empty() && r.limbs.back() == 0) r.limbs.pop_back();
  return r;
}

inline BigNat big_shr1(BigNat a) {
  std::uint32_t carry = 0;
  for (std::size_t i = a.limbs.size(); i-- > 0;) {
    std::uint32_t next = a.limbs[i] & 1u;
    a.limbs[i] = (a.limbs[i] >> 1) | (carry << 31);
    carry = next;
  }
  while (!a.limbs.empty() && a.limbs.back() == 0) a.limbs.pop_back();
  return a;
}

// Cantor pairing (a+b)(a+b+1)/2 + b; the product is always even
inline BigNat big_pair(const BigNat& a, const BigNat& b) {
  BigNat s = big_add(a, b);
  BigNat s1 = big_add(s, BigNat::of(1));
  return big_add(big_shr1(big_mul(s, s1)), b);
}

inline std::optional<std::uint64_t> big_u64(const BigNat& a) {
  if (a.limbs.size() > 2) return std::nullopt;
  std::uint64_t r = 0;
  if (a.limbs.size() > 1) r = static_cast<std::uint64_t>(a.limbs[1]) << 32;
  if (!a.limbs.empty()) r |= a.limbs[0];
  return r;
}

inline std::string big_str(const BigNat& a) {
  if (a.is_zero()) return "0";
  std::vector<std::uint32_t> work(a.limbs.rbegin(), a.limbs.rend());  // big-endian
  std::string out;
  while (!work.empty()) {
    std::uint64_t rem = 0;
    std::vector<std::uint32_t> quot;
    for (std::uint32_t limb : work) {
      std::uint64_t cur = (rem << 32) | limb;
      std::uint32_t q = static_cast<std::uint32_t>(cur / 1000000000u);
      rem = cur % 1000000000u;
      if (!quot.empty() || q) quot.push_back(q);
    }
    std::string chunk = std::to_string(rem);
    if (!quot.empty()) chunk = std::string(9 - chunk.size(), '0') + chunk;
    out = chunk + out;
    work = std::move(quot);
  }
  return out;
}

}  // namespace bhcalc

#endif

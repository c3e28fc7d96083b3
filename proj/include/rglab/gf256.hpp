#pragma once

// Arithmetic over GF(2^8) with primitive polynomial x^8+x^4+x^3+x^2+1 (0x11D).
// Log/antilog tables are computed at compile time, so there is no runtime
// initialization to race on.

#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>

namespace rglab::gf256 {

inline constexpr unsigned kOrder = 256;
inline constexpr unsigned kPolynomial = 0x11D;
inline constexpr std::uint8_t kFieldId = 0;  // id written into share headers

namespace detail {

struct Tables {
  std::array<std::uint8_t, 512> exp{};  // doubled so exp[log a + log b] needs no mod
  std::array<std::uint8_t, 256> log{};
};

constexpr Tables make_tables() {
  Tables t;
  unsigned x = 1;
  for (unsigned i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<std::uint8_t>(x);
    t.log[x] = static_cast<std::uint8_t>(i);
    x <<= 1;
    if (x & 0x100) x ^= kPolynomial;
  }
  for (unsigned i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

inline constexpr Tables kTables = make_tables();

}  // namespace detail

/// A field element; addition is XOR, multiplication goes through the tables.
class Element {
 public:
  constexpr Element() = default;
  constexpr explicit Element(std::uint8_t v) : v_(v) {}

  constexpr std::uint8_t value() const { return v_; }
  constexpr bool is_zero() const { return v_ == 0; }

  friend constexpr Element operator+(Element a, Element b) { return Element(a.v_ ^ b.v_); }
  friend constexpr Element operator-(Element a, Element b) { return a + b; }
  friend constexpr Element operator*(Element a, Element b) {
    if (a.v_ == 0 || b.v_ == 0) return Element{};
    const auto& t = detail::kTables;
    return Element(t.exp[t.log[a.v_] + t.log[b.v_]]);
  }
  constexpr Element& operator+=(Element o) { v_ ^= o.v_; return *this; }
  constexpr Element& operator-=(Element o) { v_ ^= o.v_; return *this; }
  constexpr Element& operator*=(Element o) { *this = *this * o; return *this; }

  friend constexpr bool operator==(Element, Element) = default;
  friend constexpr auto operator<=>(Element, Element) = default;

 private:
  std::uint8_t v_ = 0;
};

inline Element inverse(Element a) {
  if (a.is_zero()) throw std::domain_error("division by zero in field");
  const auto& t = detail::kTables;
  return Element(t.exp[255 - t.log[a.value()]]);
}

inline Element operator/(Element a, Element b) { return a * inverse(b); }

constexpr Element pow(Element a, unsigned e) {
  Element r(1);
  while (e) {
    if (e & 1u) r *= a;
    a *= a;
    e >>= 1;
  }
  return r;
}

inline std::ostream& operator<<(std::ostream& os, Element e) {
  return os << static_cast<unsigned>(e.value());
}

enum class Op { kAdd, kMul, kInv };

/// Single dispatch point over the field operations; kInv ignores `b`.
inline Element apply(Element a, Element b, Op op) {
  switch (op) {
    case Op::kAdd: return a + b;
    case Op::kMul: return a * b;
    case Op::kInv: return inverse(a);
  }
  throw std::invalid_argument("unknown field op");
}

}  // namespace rglab::gf256

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "rglab/gf256.hpp"

using rglab::gf256::Element;
namespace gf = rglab::gf256;

namespace {

Element e(unsigned v) { return Element(static_cast<std::uint8_t>(v)); }

TEST(Gf256, TableProductMatchesShiftAndAddOnEveryPair) {
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b)
      ASSERT_EQ((e(a) * e(b)).value(), oracle::mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)))
          << a << " * " << b;
}

TEST(Gf256, InverseMatchesExhaustiveSearch) {
  for (unsigned a = 1; a < 256; ++a) {
    const Element inv = gf::inverse(e(a));
    EXPECT_EQ(inv.value(), oracle::inv(static_cast<std::uint8_t>(a)));
    EXPECT_EQ((e(a) * inv).value(), 1);
  }
}

TEST(Gf256, ZeroHasNoInverse) {
  EXPECT_THROW(gf::inverse(Element{}), std::domain_error);
  EXPECT_THROW(e(7) / Element{}, std::domain_error);
  EXPECT_THROW(gf::apply(Element{}, e(1), gf::Op::kInv), std::domain_error);
}

TEST(Gf256, AdditionIsXorAndSelfInverse) {
  EXPECT_EQ((e(0x53) + e(0xCA)).value(), 0x53 ^ 0xCA);
  for (unsigned a = 0; a < 256; ++a) EXPECT_TRUE((e(a) - e(a)).is_zero());
}

TEST(Gf256, TwoGeneratesTheMultiplicativeGroup) {
  std::set<unsigned> seen;
  Element x(1);
  for (int i = 0; i < 255; ++i) {
    seen.insert(x.value());
    x *= e(2);
  }
  EXPECT_EQ(seen.size(), 255u);
  EXPECT_EQ(x.value(), 1);
  EXPECT_EQ(gf::pow(e(2), 8).value(), 0x1D);
}

TEST(Gf256, PowMatchesRepeatedProduct) {
  for (unsigned a : {0u, 1u, 2u, 3u, 0x8Eu, 0xFFu}) {
    std::uint8_t acc = 1;
    for (unsigned k = 0; k < 300; ++k) {
      EXPECT_EQ(gf::pow(e(a), k).value(), acc) << a << "^" << k;
      acc = oracle::mul(acc, static_cast<std::uint8_t>(a));
    }
  }
}

TEST(Gf256, FieldAxiomsOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20000; ++t) {
    const Element a = e(rng() & 0xFF), b = e(rng() & 0xFF), c = e(rng() & 0xFF);
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ(a * (b + c), a * b + a * c);
    ASSERT_EQ(a * b, b * a);
    ASSERT_EQ((a + b) + c, a + (b + c));
    if (!b.is_zero()) {
      ASSERT_EQ((a / b) * b, a);
    }
  }
}

TEST(Gf256, ApplyDispatchesEachOp) {
  EXPECT_EQ(gf::apply(e(3), e(5), gf::Op::kAdd), e(6));
  EXPECT_EQ(gf::apply(e(3), e(5), gf::Op::kMul).value(), oracle::mul(3, 5));
  EXPECT_EQ(gf::apply(e(3), e(99), gf::Op::kInv), gf::inverse(e(3)));
}

}  // namespace

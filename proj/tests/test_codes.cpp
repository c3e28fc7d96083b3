#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rglab/codes.hpp"

using namespace rglab;
namespace gf = rglab::gf256;

namespace {

struct Preset {
  const char* name;
  int n, k, d, ell;
};

const std::vector<Preset> kPresets = {
    {"mbr-211", 2, 1, 1, 0}, {"mbr-322", 3, 2, 2, 0},  {"mbr-433", 4, 3, 3, 0},
    {"mbr-534", 5, 3, 4, 0}, {"src-3221", 3, 2, 2, 1}, {"src-4331", 4, 3, 3, 1},
};

Code mdcsr_4331() {
  return Code(integerize_profile(4, MessageProfile::make(3, 1, {{2, Rational(1, 2)}, {3, Rational(1, 2)}})));
}

std::vector<Code> all_codes() {
  std::vector<Code> out;
  for (const auto& p : kPresets) out.push_back(build_src(p.n, p.k, p.d, p.ell, 1));
  out.push_back(build_src(5, 3, 4, 1, 2));
  out.push_back(mdcsr_4331());
  return out;
}

/// Share of node i (1-based) rebuilt from scratch: psi_i = (1, i, i^2, ...) and
/// the stripe matrix filled row by row over the upper triangle of the first j rows.
Symbols reference_share(const Code& code, const MessageBundle& b, int node) {
  const int d = code.d(), ell = code.ell();
  Symbols out;
  std::size_t key_pos = 0;
  for (const auto& lv : code.spec().levels) {
    std::size_t msg_pos = 0;
    for (int s = 0; s < lv.beta; ++s) {
      std::vector<std::vector<Element>> m(d, std::vector<Element>(d));
      for (int r = 0; r < lv.level; ++r)
        for (int c = r; c < d; ++c) {
          const Element v = r < ell ? b.key[key_pos++] : b.messages.at(lv.level)[msg_pos++];
          m[r][c] = m[c][r] = v;
        }
      for (int c = 0; c < d; ++c) {
        Element acc;
        for (int r = 0; r < d; ++r) acc += gf::pow(Element(static_cast<std::uint8_t>(node)), r) * m[r][c];
        out.push_back(acc);
      }
    }
  }
  return out;
}

TEST(Codes, EncodingMatchesReferenceConstruction) {
  SymbolSource src(5);
  for (const auto& code : all_codes()) {
    for (int t = 0; t < 5; ++t) {
      const auto b = code.random_bundle(src);
      const auto shares = code.encode(b);
      ASSERT_EQ(static_cast<int>(shares.size()), code.n());
      for (int i = 0; i < code.n(); ++i) {
        EXPECT_EQ(shares[i].node, i + 1);
        ASSERT_EQ(shares[i].payload, reference_share(code, b, i + 1)) << "node " << i + 1;
      }
    }
  }
}

TEST(Codes, EncodingIsLinear) {
  SymbolSource src(21);
  for (const auto& code : all_codes()) {
    for (const auto& sh : code.encode(code.zero_bundle()))
      for (const auto& e : sh.payload) ASSERT_EQ(e, Element());
    for (int t = 0; t < 4; ++t) {
      const auto a = code.random_bundle(src), b = code.random_bundle(src);
      MessageBundle sum = a;
      for (auto& [j, blk] : sum.messages)
        for (std::size_t x = 0; x < blk.size(); ++x) blk[x] = Element(blk[x].value() ^ b.messages.at(j)[x].value());
      for (std::size_t x = 0; x < sum.key.size(); ++x) sum.key[x] = Element(sum.key[x].value() ^ b.key[x].value());
      const auto sa = code.encode(a), sb = code.encode(b), ss = code.encode(sum);
      for (int i = 0; i < code.n(); ++i)
        for (std::size_t x = 0; x < ss[i].payload.size(); ++x)
          ASSERT_EQ(ss[i].payload[x].value(), sa[i].payload[x].value() ^ sb[i].payload[x].value());
    }
  }
}

TEST(Codes, AnyLevelSizedSubsetRecoversThatLevel) {
  SymbolSource src(17);
  for (const auto& code : all_codes()) {
    const auto b = code.random_bundle(src);
    const auto shares = code.encode(b);
    for (int j : code.levels())
      for (const auto& subset : oracle::subsets(code.n(), j)) {
        std::vector<NodeShare> picked;
        for (auto i : subset) picked.push_back(shares[i]);
        ASSERT_EQ(code.recover(j, picked), b.messages.at(j));
        // Any order of the same shares works too.
        std::reverse(picked.begin(), picked.end());
        ASSERT_EQ(code.recover(j, picked), b.messages.at(j));
      }
  }
}

TEST(Codes, EveryNodeRegeneratesFromEveryHelperSet) {
  SymbolSource src(23);
  for (const auto& code : all_codes()) {
    const auto b = code.random_bundle(src);
    const auto shares = code.encode(b);
    for (int f = 1; f <= code.n(); ++f) {
      std::vector<int> others;
      for (int h = 1; h <= code.n(); ++h)
        if (h != f) others.push_back(h);
      for (const auto& pick : oracle::subsets(others.size(), code.d())) {
        std::vector<RepairPacket> packets;
        for (auto idx : pick) {
          const auto p = code.repair_extract(shares[others[idx] - 1], f);
          EXPECT_EQ(static_cast<int>(p.payload.size()), code.beta());
          packets.push_back(p);
        }
        ASSERT_EQ(code.regenerate(f, packets), shares[f - 1]) << "target " << f;
      }
    }
  }
}

TEST(Codes, ParametersOfBuiltCodes) {
  const Code mbr = build_pm_mbr(5, 3, 4, 1);
  EXPECT_EQ(mbr.alpha(), 4);
  EXPECT_EQ(mbr.beta(), 1);
  EXPECT_EQ(mbr.total_message_size(), 9);
  EXPECT_EQ(mbr.key_size(), 0);
  const Code src = build_src(4, 3, 3, 1, 1);
  EXPECT_EQ(src.total_message_size(), 3);
  EXPECT_EQ(src.key_size(), 3);
  const Code m = mdcsr_4331();
  EXPECT_EQ(m.spec().levels, (std::vector<LevelSpec>{{2, 6, 3}, {3, 6, 2}}));
  EXPECT_EQ(m.alpha(), 15);
  EXPECT_EQ(m.beta(), 5);
  EXPECT_EQ(m.key_size(), 15);
}

TEST(Codes, IntegerizationOfFigureOneProfile) {
  const auto p = MessageProfile::from_levels(3, 0, {0, Rational(1, 3), Rational(2, 3)});
  const Code code(integerize_profile(4, p));
  EXPECT_EQ(code.spec().levels, (std::vector<LevelSpec>{{2, 15, 3}, {3, 30, 5}}));
  const auto pt = normalized_point(code);
  EXPECT_EQ(pt.alpha_bar, Rational(8, 15));
  EXPECT_EQ(pt.beta_bar, Rational(8, 45));
  EXPECT_EQ(achieved_profile(code), p);
}

TEST(Codes, SeparateCodingAchievesItsPointOnRandomProfiles) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    const int d = 1 + static_cast<int>(rng() % 5), ell = static_cast<int>(rng() % d);
    std::map<int, Rational> w;
    long long total = 0;
    for (int j = ell + 1; j <= d; ++j) {
      const long long x = static_cast<long long>(rng() % 4);
      w[j] = x;
      total += x;
    }
    if (total == 0) continue;
    for (auto& [j, v] : w) v /= total;
    const auto p = MessageProfile::make(d, ell, w);
    const Code code = build_mdcsr_separate(d + 1, d, ell, p);
    EXPECT_EQ(achieved_profile(code), p);
    const auto got = normalized_point(code), want = separate_coding_point(d, ell, p);
    EXPECT_EQ(got.alpha_bar, want.alpha_bar);
    EXPECT_EQ(got.beta_bar, want.beta_bar);
  }
}

TEST(Codes, ExtraShareExposesCorruption) {
  const Code code = build_pm_mbr(5, 3, 4, 1);
  SymbolSource src(3);
  auto shares = code.encode(code.random_bundle(src));
  shares[4].payload[1] += Element(1);
  EXPECT_THROW(code.recover(3, shares), CorruptShares);
  std::vector<NodeShare> clean(shares.begin(), shares.begin() + 4);
  EXPECT_NO_THROW(code.recover(3, clean));
}

TEST(Codes, SecrecyNeedsEllBelowK) {
  try {
    build_src(4, 2, 3, 2, 1);
    FAIL() << "expected CodeError";
  } catch (const CodeError& e) {
    EXPECT_NE(std::string(e.what()).find("secrecy impossible"), std::string::npos);
  }
  EXPECT_THROW(Code(CodeSpec{4, 3, 2, {{2, 3, 1}}}), CodeError);
}

TEST(Codes, MalformedSpecsRejected) {
  EXPECT_THROW(build_pm_mbr(3, 2, 3, 1), CodeError);  // d >= n
  EXPECT_THROW(build_pm_mbr(3, 0, 2, 1), CodeError);
  EXPECT_THROW(build_pm_mbr(3, 2, 2, 0), CodeError);
  EXPECT_THROW(Code(CodeSpec{4, 3, 0, {}}), CodeError);
  EXPECT_THROW(Code(CodeSpec{4, 3, 0, {{3, 6, 1}, {2, 5, 1}}}), CodeError);
  EXPECT_THROW(Code(CodeSpec{4, 3, 0, {{3, 5, 1}}}), CodeError);
  EXPECT_THROW(Code(CodeSpec{300, 3, 0, {{3, 6, 1}}}), CodeError);
}

TEST(Codes, OperationErrors) {
  const Code code = build_pm_mbr(4, 2, 3, 1);
  SymbolSource src(1);
  const auto b = code.random_bundle(src);
  const auto shares = code.encode(b);
  EXPECT_THROW(code.repair_extract(shares[0], 1), CodeError);
  EXPECT_THROW(code.repair_extract(shares[0], 9), CodeError);
  EXPECT_THROW(code.regeneration_plan(1, {2, 3}), CodeError);
  EXPECT_THROW(code.regeneration_plan(1, {2, 2, 3}), CodeError);
  EXPECT_THROW(code.regeneration_plan(1, {1, 2, 3}), CodeError);
  EXPECT_THROW(code.recover(2, std::span(shares).first(1)), CodeError);
  EXPECT_THROW(code.recover(3, shares), CodeError);  // no level 3 in this code
  std::vector<NodeShare> dup{shares[0], shares[0]};
  EXPECT_THROW(code.recover(2, dup), CodeError);
  MessageBundle bad = b;
  bad.messages.begin()->second.pop_back();
  EXPECT_THROW(code.encode(bad), CodeError);
}

TEST(Codes, SymbolSourceIsLittleEndianOverTheEngine) {
  SymbolSource src(42);
  std::mt19937_64 ref(42);
  for (int w = 0; w < 4; ++w) {
    const auto word = ref();
    for (int i = 0; i < 8; ++i) ASSERT_EQ(src.next().value(), static_cast<std::uint8_t>(word >> (8 * i)));
  }
  SymbolSource a(9), b(9);
  EXPECT_EQ(a.take(100), b.take(100));
}

TEST(Codes, EavesdropperViewIsEveryDownloadToTheSet) {
  const Code code = build_src(4, 3, 3, 1, 1);
  const auto v = eavesdropper_view(code, {2});
  EXPECT_EQ(to_string(v), "S[1->2],S[3->2],S[4->2]");
  EXPECT_THROW(eavesdropper_view(code, {1, 2}), CodeError);
  EXPECT_THROW(eavesdropper_view(code, {7}), CodeError);
}

}  // namespace

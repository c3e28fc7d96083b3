#pragma once

// Product-matrix MBR codes, their key-padded secure variant, and the
// separate-coding composite that stacks one secure code per message level.
//
// Every code is a list of levels. Level j is an (n, j, d, ell) secure code
// repeated over beta_j independent stripes. A stripe holds a symmetric d x d
// matrix
//
//     M = [ S   T ]      S: j x j symmetric, T: j x (d - j)
//         [ T^t 0 ]
//
// whose free entries (r, c), r <= c, r < j, are key symbols when r < ell and
// message symbols otherwise. Node i stores psi_i^t M, where psi_i is row i of
// an n x d Vandermonde matrix; helper h repairs node f by sending
// psi_h^t M psi_f. Shares and packets concatenate levels in increasing order,
// stripes within a level, so alpha = d * sum(beta_j) and beta = sum(beta_j).

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rglab/bounds.hpp"
#include "rglab/matrix.hpp"
#include "rglab/variables.hpp"

namespace rglab {

using Symbols = std::vector<Element>;

class CodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shares do not agree with any codeword.
class CorruptShares : public CodeError {
 public:
  CorruptShares() : CodeError("corrupt shares") {}
};

struct LevelSpec {
  int level = 0;            // j: number of nodes that decode this level
  int message_symbols = 0;  // B_j
  int beta = 0;             // beta_j, one packet symbol per stripe
  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

struct CodeSpec {
  int n = 0;
  int d = 0;
  int ell = 0;
  std::vector<LevelSpec> levels;  // increasing level, every B_j > 0
  std::uint8_t field_id = gf256::kFieldId;
  friend bool operator==(const CodeSpec&, const CodeSpec&) = default;
};

struct NodeShare {
  int node = 0;  // 1-based
  Symbols payload;
  friend bool operator==(const NodeShare&, const NodeShare&) = default;
};

struct RepairPacket {
  int helper = 0;
  int target = 0;
  Symbols payload;
  friend bool operator==(const RepairPacket&, const RepairPacket&) = default;
};

struct MessageBundle {
  std::map<int, Symbols> messages;  // level -> B_j symbols
  Symbols key;
  friend bool operator==(const MessageBundle&, const MessageBundle&) = default;
};

/// Deterministic byte stream over mt19937_64 (whose output is fixed by the standard).
class SymbolSource {
 public:
  explicit SymbolSource(std::uint64_t seed) : engine_(seed) {}
  Element next() {
    if (left_ == 0) {
      word_ = engine_();
      left_ = 8;
    }
    const auto b = static_cast<std::uint8_t>(word_ & 0xFF);
    word_ >>= 8;
    --left_;
    return Element(b);
  }
  Symbols take(std::size_t count) {
    Symbols out(count);
    for (auto& e : out) e = next();
    return out;
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

namespace detail {

/// Positions of key and message entries inside one stripe's message matrix.
struct StripeLayout {
  std::vector<std::pair<int, int>> key_entries;
  std::vector<std::pair<int, int>> message_entries;

  StripeLayout(int d, int level, int ell) {
    for (int r = 0; r < level; ++r)
      for (int c = r; c < d; ++c) (r < ell ? key_entries : message_entries).emplace_back(r, c);
  }
};

}  // namespace detail

class Code;

/// Precomputed decoder for one level from a fixed node list.
class RecoveryPlan {
 public:
  /// Message block of the level (B_j symbols). Throws CorruptShares when the
  /// shares of all planned nodes are not consistent with a single codeword.
  Symbols recover(std::span<const std::span<const Element>> payloads) const;
  const std::vector<int>& nodes() const { return nodes_; }

 private:
  friend class Code;
  const Code* code_ = nullptr;
  std::size_t level_index_ = 0;
  std::vector<int> nodes_;
  Matrix phi_inv_;  // inverse of the first-j-columns block of the first j nodes
  Matrix delta_;    // remaining columns of those rows
};

/// Precomputed repair decoder for one (target, helper set).
class RegenerationPlan {
 public:
  Symbols regenerate(std::span<const std::span<const Element>> packet_payloads) const;
  const std::vector<int>& helpers() const { return helpers_; }
  int target() const { return target_; }

 private:
  friend class Code;
  const Code* code_ = nullptr;
  int target_ = 0;
  std::vector<int> helpers_;
  Matrix psi_inv_;
};

class Code {
 public:
  explicit Code(CodeSpec spec) : spec_(std::move(spec)) {
    const int n = spec_.n, d = spec_.d, ell = spec_.ell;
    if (spec_.field_id != gf256::kFieldId) throw CodeError("unsupported field id");
    if (d < 1 || d >= n) throw CodeError("code needs 1 <= d < n");
    if (n > static_cast<int>(gf256::kOrder) - 1) throw CodeError("code needs n <= 255");
    if (ell < 0) throw CodeError("ell must be nonnegative");
    if (spec_.levels.empty()) throw CodeError("code needs at least one message level");
    int prev = 0;
    for (const auto& lv : spec_.levels) {
      if (lv.level <= prev) throw CodeError("levels must be strictly increasing");
      prev = lv.level;
      if (lv.level > d) throw CodeError("level exceeds d");
      if (lv.level <= ell) throw CodeError("secrecy impossible: ell >= k for level " + std::to_string(lv.level));
      if (lv.beta < 1) throw CodeError("beta must be positive");
      if (lv.message_symbols != t_coeff(d, lv.level, ell) * lv.beta)
        throw CodeError("level " + std::to_string(lv.level) + ": B must equal T(d, j, ell) * beta");
    }
    std::vector<Element> points;
    for (int i = 1; i <= n; ++i) points.emplace_back(static_cast<std::uint8_t>(i));
    psi_ = vandermonde(n, d, points);
    int share_off = 0, packet_off = 0, key_off = 0;
    for (const auto& lv : spec_.levels) {
      Level l{lv, detail::StripeLayout(d, lv.level, ell), share_off, packet_off, key_off};
      share_off += d * lv.beta;
      packet_off += lv.beta;
      key_off += static_cast<int>(l.layout.key_entries.size()) * lv.beta;
      levels_.push_back(std::move(l));
    }
    alpha_ = share_off;
    beta_ = packet_off;
    key_size_ = key_off;
  }

  const CodeSpec& spec() const { return spec_; }
  int n() const { return spec_.n; }
  int d() const { return spec_.d; }
  int ell() const { return spec_.ell; }
  int alpha() const { return alpha_; }
  int beta() const { return beta_; }
  int key_size() const { return key_size_; }
  const Matrix& psi() const { return psi_; }

  std::vector<int> levels() const {
    std::vector<int> out;
    for (const auto& l : levels_) out.push_back(l.spec.level);
    return out;
  }
  int top_level() const { return levels_.back().spec.level; }
  bool has_level(int j) const { return find_level(j) != nullptr; }
  int message_size(int level) const {
    const Level* l = find_level(level);
    return l ? l->spec.message_symbols : 0;
  }
  int total_message_size() const {
    int s = 0;
    for (const auto& l : levels_) s += l.spec.message_symbols;
    return s;
  }

  MessageBundle zero_bundle() const {
    MessageBundle b;
    for (const auto& l : levels_) b.messages[l.spec.level] = Symbols(l.spec.message_symbols);
    b.key = Symbols(key_size_);
    return b;
  }

  /// Messages then key, both drawn from `src` in level order.
  MessageBundle random_bundle(SymbolSource& src) const {
    MessageBundle b;
    for (const auto& l : levels_) b.messages[l.spec.level] = src.take(l.spec.message_symbols);
    b.key = src.take(key_size_);
    return b;
  }

  std::vector<NodeShare> encode(const MessageBundle& bundle) const {
    check_bundle(bundle);
    std::vector<NodeShare> shares(n());
    for (int i = 0; i < n(); ++i) shares[i] = {i + 1, Symbols(alpha_)};
    encode_into(bundle, shares);
    return shares;
  }

  /// Writes each node's share into shares[i].payload (sized alpha). Used by bulk paths.
  void encode_into(const MessageBundle& bundle, std::span<NodeShare> shares) const {
    const int d = spec_.d;
    Matrix m(d, d);
    for (const auto& l : levels_) {
      const auto& msg = bundle.messages.at(l.spec.level);
      for (int s = 0; s < l.spec.beta; ++s) {
        fill_stripe(l, s, msg, bundle.key, m);
        for (int i = 0; i < n(); ++i) {
          auto out = std::span(shares[i].payload).subspan(l.share_offset + s * d, d);
          stripe_row(i, m, out);
        }
      }
    }
  }

  RepairPacket repair_extract(const NodeShare& helper, int target) const {
    check_node(helper.node);
    check_node(target);
    if (helper.node == target) throw CodeError("repair helper and target must differ");
    if (static_cast<int>(helper.payload.size()) != alpha_) throw CodeError("share length mismatch");
    RepairPacket p{helper.node, target, Symbols(beta_)};
    const int d = spec_.d;
    for (const auto& l : levels_)
      for (int s = 0; s < l.spec.beta; ++s) {
        Element acc;
        for (int c = 0; c < d; ++c) acc += helper.payload[l.share_offset + s * d + c] * psi_(target - 1, c);
        p.payload[l.packet_offset + s] = acc;
      }
    return p;
  }

  RegenerationPlan regeneration_plan(int target, std::vector<int> helpers) const {
    check_node(target);
    if (static_cast<int>(helpers.size()) != spec_.d)
      throw CodeError("regeneration needs exactly d = " + std::to_string(spec_.d) + " helpers");
    std::set<int> seen;
    for (int h : helpers) {
      check_node(h);
      if (h == target) throw CodeError("helper equals target");
      if (!seen.insert(h).second) throw CodeError("duplicate helper");
    }
    std::vector<std::size_t> rows;
    for (int h : helpers) rows.push_back(static_cast<std::size_t>(h - 1));
    RegenerationPlan plan;
    plan.code_ = this;
    plan.target_ = target;
    plan.helpers_ = std::move(helpers);
    plan.psi_inv_ = invert(psi_.select_rows(rows));
    return plan;
  }

  NodeShare regenerate(int target, std::span<const RepairPacket> packets) const {
    std::vector<int> helpers;
    std::vector<std::span<const Element>> payloads;
    for (const auto& p : packets) {
      if (p.target != target) throw CodeError("packet addressed to a different target");
      if (static_cast<int>(p.payload.size()) != beta_) throw CodeError("packet length mismatch");
      helpers.push_back(p.helper);
      payloads.emplace_back(p.payload);
    }
    const auto plan = regeneration_plan(target, std::move(helpers));
    return {target, plan.regenerate(payloads)};
  }

  RecoveryPlan recovery_plan(int level, std::vector<int> nodes) const {
    const Level* l = find_level(level);
    if (!l) throw CodeError("level " + std::to_string(level) + " carries no message");
    if (static_cast<int>(nodes.size()) < level)
      throw CodeError("level " + std::to_string(level) + " needs " + std::to_string(level) + " shares, got " +
                      std::to_string(nodes.size()));
    std::set<int> seen;
    for (int v : nodes) {
      check_node(v);
      if (!seen.insert(v).second) throw CodeError("duplicate node in recovery set");
    }
    std::vector<std::size_t> rows;
    for (int i = 0; i < level; ++i) rows.push_back(static_cast<std::size_t>(nodes[i] - 1));
    const Matrix sub = psi_.select_rows(rows);
    RecoveryPlan plan;
    plan.code_ = this;
    plan.level_index_ = static_cast<std::size_t>(l - levels_.data());
    plan.nodes_ = std::move(nodes);
    plan.phi_inv_ = invert(sub.select_cols(0, level));
    plan.delta_ = sub.select_cols(level, spec_.d - level);
    return plan;
  }

  /// Level-j message block from at least j shares of distinct nodes. All
  /// given shares are checked against the decoded codeword.
  Symbols recover(int level, std::span<const NodeShare> shares) const {
    std::vector<int> nodes;
    std::vector<std::span<const Element>> payloads;
    for (const auto& s : shares) {
      if (static_cast<int>(s.payload.size()) != alpha_) throw CodeError("share length mismatch");
      nodes.push_back(s.node);
      payloads.emplace_back(s.payload);
    }
    return recovery_plan(level, std::move(nodes)).recover(payloads);
  }

 private:
  friend class RecoveryPlan;
  friend class RegenerationPlan;

  struct Level {
    LevelSpec spec;
    detail::StripeLayout layout;
    int share_offset;
    int packet_offset;
    int key_offset;
  };

  const Level* find_level(int j) const {
    for (const auto& l : levels_)
      if (l.spec.level == j) return &l;
    return nullptr;
  }

  void check_node(int i) const {
    if (i < 1 || i > spec_.n) throw CodeError("node index " + std::to_string(i) + " out of range");
  }

  void check_bundle(const MessageBundle& b) const {
    if (b.messages.size() != levels_.size()) throw CodeError("bundle level count mismatch");
    for (const auto& l : levels_) {
      auto it = b.messages.find(l.spec.level);
      if (it == b.messages.end() || static_cast<int>(it->second.size()) != l.spec.message_symbols)
        throw CodeError("bundle size mismatch on level " + std::to_string(l.spec.level));
    }
    if (static_cast<int>(b.key.size()) != key_size_) throw CodeError("bundle key size mismatch");
  }

  void fill_stripe(const Level& l, int s, std::span<const Element> msg, std::span<const Element> key,
                   Matrix& m) const {
    const std::size_t kb = l.layout.key_entries.size(), mb = l.layout.message_entries.size();
    m = Matrix(spec_.d, spec_.d);
    for (std::size_t e = 0; e < kb; ++e) {
      const auto [r, c] = l.layout.key_entries[e];
      m(r, c) = m(c, r) = key[l.key_offset + s * kb + e];
    }
    for (std::size_t e = 0; e < mb; ++e) {
      const auto [r, c] = l.layout.message_entries[e];
      m(r, c) = m(c, r) = msg[s * mb + e];
    }
  }

  /// out = psi_i^t * m
  void stripe_row(int i, const Matrix& m, std::span<Element> out) const {
    std::fill(out.begin(), out.end(), Element{});
    for (int r = 0; r < spec_.d; ++r) {
      const Element p = psi_(i, r);
      auto mrow = m.row(r);
      for (int c = 0; c < spec_.d; ++c) out[c] += p * mrow[c];
    }
  }

  CodeSpec spec_;
  std::vector<Level> levels_;
  Matrix psi_;
  int alpha_ = 0;
  int beta_ = 0;
  int key_size_ = 0;
};

inline Symbols RecoveryPlan::recover(std::span<const std::span<const Element>> payloads) const {
  const Code& code = *code_;
  const auto& l = code.levels_[level_index_];
  const int d = code.d(), j = l.spec.level;
  if (payloads.size() != nodes_.size()) throw CodeError("payload count does not match the plan");
  for (const auto& p : payloads)
    if (static_cast<int>(p.size()) != code.alpha()) throw CodeError("share length mismatch");
  const std::size_t mb = l.layout.message_entries.size();
  Symbols out(l.spec.message_symbols);
  Matrix y_left(j, j), y_right(j, d - j), m(d, d);
  Symbols row(d);
  for (int s = 0; s < l.spec.beta; ++s) {
    const int off = l.share_offset + s * d;
    for (int r = 0; r < j; ++r)
      for (int c = 0; c < d; ++c) (c < j ? y_left(r, c) : y_right(r, c - j)) = payloads[r][off + c];
    // Y = [Phi S + Delta T^t, Phi T]
    const Matrix t = phi_inv_ * y_right;
    const Matrix s_blk = phi_inv_ * (y_left + delta_ * t.transpose());
    m = Matrix(d, d);
    for (int r = 0; r < j; ++r) {
      for (int c = r; c < j; ++c) m(r, c) = m(c, r) = s_blk(r, c);
      for (int c = j; c < d; ++c) m(r, c) = m(c, r) = t(r, c - j);
    }
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      code.stripe_row(nodes_[k] - 1, m, row);
      if (!std::equal(row.begin(), row.end(), payloads[k].begin() + off)) throw CorruptShares();
    }
    for (std::size_t e = 0; e < mb; ++e) {
      const auto [r, c] = l.layout.message_entries[e];
      out[s * mb + e] = m(r, c);
    }
  }
  return out;
}

inline Symbols RegenerationPlan::regenerate(std::span<const std::span<const Element>> packet_payloads) const {
  const Code& code = *code_;
  const int d = code.d();
  if (static_cast<int>(packet_payloads.size()) != d) throw CodeError("regeneration needs exactly d packets");
  for (const auto& p : packet_payloads)
    if (static_cast<int>(p.size()) != code.beta()) throw CodeError("packet length mismatch");
  Symbols share(code.alpha());
  for (const auto& l : code.levels_)
    for (int s = 0; s < l.spec.beta; ++s) {
      // psi_H (M psi_f) = packets, and psi_f^t M = (M psi_f)^t by symmetry.
      for (int r = 0; r < d; ++r) {
        Element acc;
        for (int c = 0; c < d; ++c) acc += psi_inv_(r, c) * packet_payloads[c][l.packet_offset + s];
        share[l.share_offset + s * d + r] = acc;
      }
    }
  return share;
}

// ---- builders --------------------------------------------------------------

/// (n, k, d, ell) secure regenerating code at the SRK point.
inline Code build_src(int n, int k, int d, int ell, int beta) {
  if (ell >= k) throw CodeError("secrecy impossible: need ell < k");
  if (k < 1 || k > d || d >= n) throw CodeError("need 1 <= k <= d < n");
  if (beta < 1) throw CodeError("beta must be positive");
  CodeSpec spec{n, d, ell, {{k, static_cast<int>(t_coeff(d, k, ell) * beta), beta}}};
  return Code(std::move(spec));
}

/// (n, k, d) product-matrix MBR code.
inline Code build_pm_mbr(int n, int k, int d, int beta) { return build_src(n, k, d, 0, beta); }

/// Smallest symbol counts realising the profile exactly: beta_j = L * w_j / T(d, j, ell).
inline CodeSpec integerize_profile(int n, const MessageProfile& profile) {
  const int d = profile.d(), ell = profile.ell();
  BigInt scale = 1;
  for (int j : profile.active_levels()) {
    const Rational per_beta = profile.weight(j) / Rational(t_coeff(d, j, ell));
    scale = boost::multiprecision::lcm(scale, BigInt(boost::multiprecision::denominator(per_beta)));
  }
  CodeSpec spec{n, d, ell, {}};
  for (int j : profile.active_levels()) {
    const Rational beta = Rational(scale) * profile.weight(j) / Rational(t_coeff(d, j, ell));
    const BigInt b = boost::multiprecision::numerator(beta);
    if (b > 1 << 15) throw CodeError("profile needs too many symbols per level");
    const int bj = b.convert_to<int>();
    spec.levels.push_back({j, static_cast<int>(t_coeff(d, j, ell)) * bj, bj});
  }
  return spec;
}

/// One (n, j, d, ell) secure code per level with nonzero weight, shares concatenated.
inline Code build_mdcsr_separate(int n, int d, int ell, const MessageProfile& profile) {
  if (profile.d() != d || profile.ell() != ell) throw CodeError("profile disagrees with (d, ell)");
  if (profile.active_levels().empty()) throw CodeError("profile has no nonzero level");
  return Code(integerize_profile(n, profile));
}

/// (alpha / sum B, beta / sum B) of a built code.
inline RatePoint normalized_point(const Code& code) {
  const Rational total(code.total_message_size());
  return {Rational(code.alpha()) / total, Rational(code.beta()) / total};
}

/// Profile realised by a built code: B_j / sum B.
inline MessageProfile achieved_profile(const Code& code) {
  std::map<int, Rational> w;
  const Rational total(code.total_message_size());
  for (int j : code.levels()) w[j] = Rational(code.message_size(j)) / total;
  return MessageProfile::make(code.d(), code.ell(), std::move(w));
}

/// Every repair packet that node i could download, for each i in the set.
inline VarSet eavesdropper_view(const Code& code, const std::set<int>& eavesdropped) {
  if (static_cast<int>(eavesdropped.size()) != code.ell())
    throw CodeError("eavesdropper set must have exactly ell = " + std::to_string(code.ell()) + " nodes");
  for (int i : eavesdropped)
    if (i < 1 || i > code.n()) throw CodeError("eavesdropped node out of range");
  return downloads_to(code.n(), eavesdropped);
}

}  // namespace rglab

#pragma once

// Instance-level checks of the converse machinery for symmetrical
// (n = d + 1) codes: the upper-triangular collections U(t, s), the
// functional-dependence lemma, the exchange lemma with its tau partition and
// induction invariant, the corollaries and propositions, and the final bound
// chains. Entropies are averaged over all node relabellings so that every
// check runs against a symmetrical entropy function.

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rglab/bounds.hpp"
#include "rglab/codes.hpp"
#include "rglab/entropy.hpp"

namespace rglab {

// ---- variable collections --------------------------------------------------

namespace sets {

inline VarSet shares(int first, int last) {
  VarSet out;
  for (int i = first; i <= last; ++i) out.insert(Var::share(i));
  return out;
}

/// S_{B->j}
template <typename Range>
VarSet packets_into(const Range& helpers, int target) {
  VarSet out;
  for (int h : helpers)
    if (h != target) out.insert(Var::packet(h, target));
  return out;
}

/// S_{i->B}
template <typename Range>
VarSet packets_from(int helper, const Range& targets) {
  VarSet out;
  for (int t : targets)
    if (t != helper) out.insert(Var::packet(helper, t));
  return out;
}

inline std::vector<int> range(int first, int last) {
  std::vector<int> out;
  for (int i = first; i <= last; ++i) out.push_back(i);
  return out;
}

/// S_{->[first:last]}: everything downloadable to those nodes.
inline VarSet downloads(int n, int first, int last) { return downloads_to(n, range(first, last)); }

/// Underline S_{->[first:last]}: packets from lower-indexed nodes.
inline VarSet from_below(int first, int last) {
  VarSet out;
  for (int j = first; j <= last; ++j)
    for (int h = 1; h < j; ++h) out.insert(Var::packet(h, j));
  return out;
}

/// Overline S_{->[first:last]}: packets from higher-indexed nodes.
inline VarSet from_above(int n, int first, int last) {
  VarSet out;
  for (int j = first; j <= last; ++j)
    for (int h = j + 1; h <= n; ++h) out.insert(Var::packet(h, j));
  return out;
}

/// U(t, s) = (W_[1:t], overline S_{->[t+1:s]}).
inline VarSet upper(int n, int t, int s) {
  if (s < 0 || s > n || t < 0 || t > s)
    throw std::out_of_range("U(" + std::to_string(t) + "," + std::to_string(s) + ") out of range for n = " +
                            std::to_string(n));
  return set_union(shares(1, t), from_above(n, t + 1, s));
}

/// M^(m): registered messages of level <= m (lower levels are constants).
inline VarSet messages_up_to(const LinearSystem& sys, int m) {
  VarSet out;
  for (const auto& v : sys.message_names())
    if (v.a <= m) out.insert(v);
  return out;
}

}  // namespace sets

struct VarSetPattern {
  enum class Kind { kUpper, kMessagesUpTo, kShares, kFromAbove, kFromBelow, kPacketsInto, kDownloads, kCustom };

  Kind kind = Kind::kCustom;
  int t = 0;      // U: t; ranges: first node
  int s = 0;      // U: s; ranges: last node; M^(m): m
  int target = 0; // packets_into
  std::vector<int> nodes;
  VarSet custom;

  static VarSetPattern upper(int t, int s) { return make(Kind::kUpper, t, s); }
  static VarSetPattern upper(int s) { return make(Kind::kUpper, 0, s); }
  static VarSetPattern messages_up_to(int m) { return make(Kind::kMessagesUpTo, 0, m); }
  static VarSetPattern shares(int first, int last) { return make(Kind::kShares, first, last); }
  static VarSetPattern from_above(int first, int last) { return make(Kind::kFromAbove, first, last); }
  static VarSetPattern from_below(int first, int last) { return make(Kind::kFromBelow, first, last); }
  static VarSetPattern downloads(int first, int last) { return make(Kind::kDownloads, first, last); }
  static VarSetPattern packets_into(std::vector<int> helpers, int target) {
    VarSetPattern p = make(Kind::kPacketsInto, 0, 0);
    p.nodes = std::move(helpers);
    p.target = target;
    return p;
  }
  static VarSetPattern of(VarSet v) {
    VarSetPattern p = make(Kind::kCustom, 0, 0);
    p.custom = std::move(v);
    return p;
  }

 private:
  static VarSetPattern make(Kind k, int t, int s) {
    VarSetPattern p;
    p.kind = k;
    p.t = t;
    p.s = s;
    return p;
  }
};

inline VarSet resolve_pattern(const LinearSystem& sys, const VarSetPattern& p) {
  const int n = sys.nodes();
  auto check_range = [&](int first, int last) {
    if (first < 1 || last > n) throw std::out_of_range("node range out of bounds");
  };
  switch (p.kind) {
    case VarSetPattern::Kind::kUpper:
      return sets::upper(n, p.t, p.s);
    case VarSetPattern::Kind::kMessagesUpTo:
      return sets::messages_up_to(sys, p.s);
    case VarSetPattern::Kind::kShares:
      if (p.t <= p.s) check_range(p.t, p.s);
      return sets::shares(p.t, p.s);
    case VarSetPattern::Kind::kFromAbove:
      if (p.t <= p.s) check_range(p.t, p.s);
      return sets::from_above(n, p.t, p.s);
    case VarSetPattern::Kind::kFromBelow:
      if (p.t <= p.s) check_range(p.t, p.s);
      return sets::from_below(p.t, p.s);
    case VarSetPattern::Kind::kDownloads:
      if (p.t <= p.s) check_range(p.t, p.s);
      return sets::downloads(n, p.t, p.s);
    case VarSetPattern::Kind::kPacketsInto:
      check_range(p.target, p.target);
      for (int h : p.nodes) check_range(h, h);
      return sets::packets_into(p.nodes, p.target);
    case VarSetPattern::Kind::kCustom:
      for (const auto& v : p.custom) sys.generator(v);
      return p.custom;
  }
  throw std::invalid_argument("unknown pattern kind");
}

inline Rational symmetrized_entropy(const LinearSystem& sys, const VarSetPattern& p) {
  return symmetrized_entropy(sys, resolve_pattern(sys, p));
}

// ---- tau partition ---------------------------------------------------------

struct TauPartition {
  int d = 0, m = 0, i = 0, i_prime = 0, j = 0;
  int s = 0;
  int r = 0;
  std::vector<int> a;  // a[t - 1] = a_t for t in [1 : d + 1 - j]
  std::vector<std::vector<int>> tau;  // tau[q] for q in [0 : s]

  /// Union of tau_0 .. tau_upto.
  std::vector<int> prefix_union(int upto) const {
    std::vector<int> out;
    for (int q = 0; q <= upto; ++q) out.insert(out.end(), tau[q].begin(), tau[q].end());
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline void check_exchange_range(int d, int m, int i, int ip, int j, bool allow_top) {
  const int j_max = allow_top ? m - i + ip + 1 : std::min(m, m - i + ip + 1);
  if (m < 1 || m > d - 1 || i < 0 || i > m - 1 || ip < 0 || ip > i || j < ip + 1 || j > j_max)
    throw std::out_of_range("parameters (d=" + std::to_string(d) + ", m=" + std::to_string(m) +
                            ", i=" + std::to_string(i) + ", i'=" + std::to_string(ip) + ", j=" + std::to_string(j) +
                            ") outside the admissible range");
}

/// Splits d+1-j = s(d-m) + r and distributes the a_t into r-sized then
/// (d-m)-sized blocks.
inline TauPartition build_tau(int d, int m, int i, int ip, int j) {
  check_exchange_range(d, m, i, ip, j, false);
  TauPartition tp;
  tp.d = d, tp.m = m, tp.i = i, tp.i_prime = ip, tp.j = j;
  const int width = d - m;
  tp.s = (d - j) / width;
  tp.r = (d + 1 - j) - tp.s * width;
  for (int t = 1; t <= d + 1 - j; ++t) {
    if (t <= i - ip) tp.a.push_back(t + ip);
    else if (t <= m - j + 1) tp.a.push_back(t + j - 1);
    else tp.a.push_back(t + j);
  }
  tp.tau.resize(tp.s + 1);
  for (int t = 1; t <= tp.r; ++t) tp.tau[0].push_back(tp.a[t - 1]);
  for (int q = 1; q <= tp.s; ++q)
    for (int t = tp.r + 1 + (q - 1) * width; t <= tp.r + q * width; ++t) tp.tau[q].push_back(tp.a[t - 1]);
  return tp;
}

/// The decomposition identity plus the three partition properties and monotone a_t.
inline bool verify_tau(const TauPartition& tp, std::string* why = nullptr) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  const int d = tp.d, m = tp.m, i = tp.i, ip = tp.i_prime, j = tp.j;
  if (tp.s < 1 || tp.r < 1 || tp.r > d - m || d + 1 - j != tp.s * (d - m) + tp.r) return fail("decomposition");
  for (std::size_t t = 1; t < tp.a.size(); ++t)
    if (tp.a[t] <= tp.a[t - 1]) return fail("a_t not increasing");
  std::set<int> seen;
  for (const auto& blk : tp.tau)
    for (int v : blk)
      if (!seen.insert(v).second) return fail("tau blocks overlap");
  std::set<int> lower;
  for (int q = 0; q < tp.s; ++q) lower.insert(tp.tau[q].begin(), tp.tau[q].end());
  std::set<int> want_lower;
  for (int v = ip + 1; v <= i; ++v) want_lower.insert(v);
  for (int v = i + j - ip; v <= m; ++v) want_lower.insert(v);
  if (lower != want_lower) return fail("tau_0..tau_{s-1} union");
  std::set<int> top(tp.tau[tp.s].begin(), tp.tau[tp.s].end());
  std::set<int> want_top;
  for (int v = m + 2; v <= d + 1; ++v) want_top.insert(v);
  if (top != want_top) return fail("tau_s");
  return true;
}

// ---- reports ---------------------------------------------------------------

struct CheckReport {
  enum class Relation { kGeq, kEq };

  std::string tag;
  std::string params;
  Rational lhs;
  Rational rhs;
  Rational slack;
  Relation relation = Relation::kGeq;
  bool pass = false;

  static CheckReport make(std::string tag, std::string params, Rational lhs, Rational rhs,
                          Relation rel = Relation::kGeq) {
    CheckReport c{std::move(tag), std::move(params), lhs, rhs, lhs - rhs, rel, false};
    c.pass = rel == Relation::kEq ? c.slack == 0 : c.slack >= 0;
    return c;
  }
};

inline std::string to_text(const CheckReport& c) {
  std::ostringstream os;
  os << c.tag << " " << c.params << " lhs=" << to_string(c.lhs) << " rhs=" << to_string(c.rhs)
     << " slack=" << to_string(c.slack) << " " << (c.relation == CheckReport::Relation::kEq ? "[==] " : "[>=] ")
     << (c.pass ? "PASS" : "FAIL");
  return os.str();
}

inline nlohmann::ordered_json to_json(const CheckReport& c) {
  nlohmann::ordered_json j;
  j["tag"] = c.tag;
  j["params"] = c.params;
  j["lhs"] = to_string(c.lhs);
  j["rhs"] = to_string(c.rhs);
  j["slack"] = to_string(c.slack);
  j["relation"] = c.relation == CheckReport::Relation::kEq ? "==" : ">=";
  j["pass"] = c.pass;
  return j;
}

/// Sizes needed by the rate-dependent checks, in symbols.
struct RateParams {
  int n = 0, d = 0, ell = 0;
  int alpha = 0, beta = 0;
  std::map<int, int> message_sizes;  // B_j; absent levels are zero

  static RateParams from(const CodeSpec& spec) {
    RateParams p{spec.n, spec.d, spec.ell, 0, 0, {}};
    for (const auto& lv : spec.levels) {
      p.alpha += spec.d * lv.beta;
      p.beta += lv.beta;
      p.message_sizes[lv.level] = lv.message_symbols;
    }
    return p;
  }
  int b(int j) const {
    auto it = message_sizes.find(j);
    return it == message_sizes.end() ? 0 : it->second;
  }
  int total() const {
    int s = 0;
    for (const auto& [j, v] : message_sizes) s += v;
    return s;
  }
};

inline std::string params_str(std::initializer_list<std::pair<const char*, int>> kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += ",";
    out += std::string(k) + "=" + std::to_string(v);
  }
  return out;
}

// ---- checker ---------------------------------------------------------------

/// Runs the individual checks against one registered n = d + 1 system,
/// sharing a rank cache across all of them.
class ProofChecker {
 public:
  ProofChecker(const LinearSystem& sys, int d) : sys_(&sys), oracle_(sys), d_(d) {
    if (sys.nodes() != d + 1)
      throw std::invalid_argument("U-pattern checks need n = d + 1 (got n = " + std::to_string(sys.nodes()) +
                                  ", d = " + std::to_string(d) + ")");
  }

  int d() const { return d_; }
  int n() const { return d_ + 1; }
  EntropyOracle& oracle() { return oracle_; }

  VarSet u(int t, int s) const { return sets::upper(n(), t, s); }
  VarSet mess(int m) const { return sets::messages_up_to(*sys_, m); }
  Rational hs(const VarSet& a) { return oracle_.h_sym(a); }
  Rational hs(const VarSet& a, const VarSet& given) { return oracle_.h_sym(a, given); }

  CheckReport lemma1(int t, int s) {
    if (s < 1 || s > n() || t < 0 || t > s - 1)
      throw std::out_of_range("lemma1 needs s in [1:n] and t in [0:s-1]");
    const VarSet target = set_union(sets::from_below(t + 1, s), sets::shares(t + 1, s));
    return CheckReport::make("lemma1", params_str({{"t", t}, {"s", s}}), hs(target, u(t, s)), 0,
                             CheckReport::Relation::kEq);
  }

  /// H(U(t1, s)) >= H(U(t2, s)) for t1 <= t2 <= s - 1.
  CheckReport lemma1_monotone(int t1, int t2, int s) {
    if (s < 1 || s > n() || t1 < 0 || t1 > t2 || t2 > s - 1) throw std::out_of_range("lemma1-mono range");
    return CheckReport::make("lemma1-mono", params_str({{"t1", t1}, {"t2", t2}, {"s", s}}), hs(u(t1, s)),
                             hs(u(t2, s)));
  }

  CheckReport exchange(int m, int i, int ip, int j) {
    check_exchange_range(d_, m, i, ip, j, true);
    const VarSet cond = mess(m);
    const Rational c = Rational(d_ + 1 - j) / Rational(d_ - m);
    const Rational lhs = c * hs(u(i, m), cond) + hs(u(ip, j), cond);
    const Rational rhs = c * hs(u(i, m + 1), cond) + hs(u(ip, j - 1), cond);
    return CheckReport::make("exchange", params_str({{"m", m}, {"i", i}, {"i'", ip}, {"j", j}}), lhs, rhs,
                             j == m + 1 ? CheckReport::Relation::kEq : CheckReport::Relation::kGeq);
  }

  std::vector<CheckReport> corollaries(int ell, int m) {
    if (ell < 0 || ell > d_ - 1 || m < ell + 1 || m > d_ - 1)
      throw std::out_of_range("corollaries need ell in [0:d-1] and m in [ell+1:d-1]");
    const VarSet cond = mess(m);
    const Rational tm(t_coeff(d_, m, ell)), tm1(t_coeff(d_, m + 1, ell));
    const Rational h_m = hs(u(0, m), cond), h_m1 = hs(u(0, m + 1), cond), h_l = hs(u(0, ell), cond);
    const std::string p = params_str({{"l", ell}, {"m", m}});
    std::vector<CheckReport> out;
    out.push_back(CheckReport::make("coro1", p, h_m / tm, h_m1 / tm1 + (1 / tm - 1 / tm1) * h_l));
    const Rational w = Rational(d_ - m) / tm;
    out.push_back(CheckReport::make("coro2", p, hs(u(1, m), cond) + w * h_m, hs(u(1, m + 1), cond) + w * h_l));
    return out;
  }

  std::vector<CheckReport> propositions(const RateParams& rp) {
    validate(rp);
    const int d = d_, ell = rp.ell;
    const Rational dl(d - ell);
    auto tinv_sum = [&](int upto) {
      Rational s = 0;
      for (int j = ell + 1; j <= upto; ++j) s += Rational(rp.b(j)) / Rational(t_coeff(d, j, ell));
      return s;
    };
    const Rational h_l1 = hs(u(0, ell + 1)), h_l = hs(u(0, ell));
    std::vector<CheckReport> out;
    for (int m = ell + 1; m <= d; ++m) {
      const Rational tm(t_coeff(d, m, ell));
      out.push_back(CheckReport::make("prop1-EG", params_str({{"m", m}}), h_l1 / dl,
                                      tinv_sum(m) + hs(u(0, m), mess(m)) / tm + (1 / dl - 1 / tm) * h_l));
    }
    out.push_back(CheckReport::make("prop1", "", h_l1 / dl, tinv_sum(d) + h_l / dl));

    const VarSet top_to_low = sets::packets_from(d + 1, sets::range(1, ell));
    const Rational h_top = hs(top_to_low);
    out.push_back(CheckReport::make("prop2-STE2", "", h_top + Rational(ell) * h_l,
                                    Rational(ell) * hs(set_union(u(0, ell), {Var::packet(d + 1, ell + 1)}))));
    out.push_back(CheckReport::make("prop2", "", h_top + Rational(d * (d - ell) - ell) * Rational(rp.beta) +
                                                     Rational(d) * h_l,
                                    Rational(d) * h_l1));

    for (int m = ell + 1; m <= d - 1; ++m) {
      const Rational w = Rational(d - m) / dl;
      out.push_back(CheckReport::make("prop3-JH", params_str({{"m", m}}), hs(u(1, m)) + w * h_l1,
                                      Rational(d - m) * tinv_sum(m) + hs(u(1, m + 1)) + w * h_l));
    }
    const Rational tdd_l(t_coeff(d, d, ell)), tdd_l1(t_coeff(d, d, ell + 1));
    out.push_back(CheckReport::make("prop3", "", hs(u(1, ell + 1)) + tdd_l1 / dl * h_l1,
                                    tdd_l * tinv_sum(d) + tdd_l / dl * h_l));
    return out;
  }

  /// Normalized point of the code against the outer-bound pair; empty when no message is stored.
  std::vector<CheckReport> final_bounds(const RateParams& rp) {
    validate(rp);
    const int total = rp.total();
    if (total == 0) return {};
    std::map<int, Rational> w;
    for (const auto& [j, b] : rp.message_sizes)
      if (b > 0) w[j] = Rational(b) / Rational(total);
    const auto profile = MessageProfile::make(rp.d, rp.ell, std::move(w));
    const RatePoint pt{Rational(rp.alpha) / Rational(total), Rational(rp.beta) / Rational(total)};
    std::vector<BoundTag> tags{BoundTag::kB1, BoundTag::kB2};
    if (rp.ell > 0) {
      tags = {BoundTag::kB3, BoundTag::kB4};
      if (profile.is_single_level()) tags.insert(tags.end(), {BoundTag::kB5, BoundTag::kB6});
    }
    std::vector<CheckReport> out;
    for (const BoundTag tag : tags) {
      const BoundLine line = bound_line(tag, rp.d, rp.ell, profile);
      out.push_back(CheckReport::make("final-" + to_string(tag), "",
                                      line.c_alpha * pt.alpha_bar + line.c_beta * pt.beta_bar, line.rhs));
    }
    return out;
  }

  CheckReport qq_induction(int m, int i, int ip, int j, int p) {
    const TauPartition tp = build_tau(d_, m, i, ip, j);
    if (p < 1 || p > tp.s) throw std::out_of_range("qq induction needs p in [1:s]");
    const VarSet cond = mess(m);
    const Rational rp(p);
    const Rational lhs = rp * hs(u(i, m), cond) + hs(u(ip, j), cond);
    VarSet tail = set_union(sets::shares(1, ip), sets::downloads(n(), i + 1, i + j - ip - 1));
    tail = set_union(tail, sets::packets_into(tp.prefix_union(tp.s - p), m + 1));
    const Rational rhs = rp * hs(u(i, m + 1), cond) + hs(tail, cond);
    return CheckReport::make("qq1", params_str({{"m", m}, {"i", i}, {"i'", ip}, {"j", j}, {"p", p}}), lhs, rhs);
  }

  /// Han's inequality on the packets into node m+1 from [m+2:d+1], conditioned
  /// on the set used in the final step of the exchange argument.
  std::vector<CheckReport> han(int m, int i, int ip, int j) {
    check_exchange_range(d_, m, i, ip, j, false);
    std::vector<VarSet> items;
    for (int h = m + 2; h <= d_ + 1; ++h) items.push_back({Var::packet(h, m + 1)});
    VarSet given = set_union(sets::shares(1, ip), sets::downloads(n(), i + 1, i + j - ip - 1));
    given = set_union(given, mess(m));
    std::vector<CheckReport> out;
    for (std::size_t r = 1; r <= items.size(); ++r) {
      const HanCheck hc = han_subset_check(oracle_, items, given, r);
      out.push_back(CheckReport::make(
          "han", params_str({{"m", m}, {"i", i}, {"i'", ip}, {"j", j}, {"r", static_cast<int>(r)}}), hc.average,
          hc.bound));
    }
    return out;
  }

 private:
  void validate(const RateParams& rp) {
    if (rp.n != sys_->nodes() || rp.d != d_) throw std::invalid_argument("spec/system mismatch: (n, d) differ");
    if (rp.ell < 0 || rp.ell > d_ - 1) throw std::invalid_argument("spec/system mismatch: ell out of range");
    for (const auto& v : sys_->message_names())
      if (oracle_.h({v}) != Rational(rp.b(v.a)))
        throw std::invalid_argument("spec/system mismatch: H(" + to_string(v) + ") differs from B");
    for (const auto& [j, b] : rp.message_sizes)
      if (b > 0 && !sys_->contains(Var::message(j)))
        throw std::invalid_argument("spec/system mismatch: level " + std::to_string(j) + " not registered");
  }

  const LinearSystem* sys_;
  EntropyOracle oracle_;
  int d_;
};

// Free-function forms of the individual checks.

inline CheckReport check_lemma1(const LinearSystem& sys, int d, int t, int s) {
  return ProofChecker(sys, d).lemma1(t, s);
}
inline CheckReport check_exchange(const LinearSystem& sys, int d, int m, int i, int ip, int j) {
  return ProofChecker(sys, d).exchange(m, i, ip, j);
}
inline std::vector<CheckReport> check_corollaries(const LinearSystem& sys, int d, int ell, int m) {
  return ProofChecker(sys, d).corollaries(ell, m);
}
inline std::vector<CheckReport> check_propositions(const LinearSystem& sys, const RateParams& rp) {
  return ProofChecker(sys, rp.d).propositions(rp);
}
inline std::vector<CheckReport> check_final_bounds(const LinearSystem& sys, const RateParams& rp) {
  return ProofChecker(sys, rp.d).final_bounds(rp);
}
inline std::vector<CheckReport> check_propositions(const LinearSystem& sys, const CodeSpec& spec) {
  return check_propositions(sys, RateParams::from(spec));
}
inline std::vector<CheckReport> check_final_bounds(const LinearSystem& sys, const CodeSpec& spec) {
  return check_final_bounds(sys, RateParams::from(spec));
}
inline CheckReport check_qq_induction(const LinearSystem& sys, int d, int m, int i, int ip, int j, int p) {
  return ProofChecker(sys, d).qq_induction(m, i, ip, j, p);
}

// ---- suite -----------------------------------------------------------------

struct SuiteReport {
  CodeSpec spec;
  std::vector<CheckReport> checks;
  Rational secrecy_index;
  Rational symmetry_deviation;  // diagnostic only, before symmetrization

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return secrecy_index == 0;
  }
  std::size_t failures() const {
    std::size_t f = 0;
    for (const auto& c : checks) f += c.pass ? 0 : 1;
    return f;
  }
};

/// Every (m, i, i', j) accepted by the exchange lemma for this d.
inline std::vector<std::array<int, 4>> exchange_tuples(int d) {
  std::vector<std::array<int, 4>> out;
  for (int m = 1; m <= d - 1; ++m)
    for (int i = 0; i <= m - 1; ++i)
      for (int ip = 0; ip <= i; ++ip)
        for (int j = ip + 1; j <= m - i + ip + 1; ++j) out.push_back({m, i, ip, j});
  return out;
}

inline SuiteReport run_suite(const CodeSpec& spec) {
  if (spec.n != spec.d + 1)
    throw std::invalid_argument("the verification suite needs n = d + 1 (got n = " + std::to_string(spec.n) +
                                ", d = " + std::to_string(spec.d) + ")");
  const Code code(spec);
  const LinearSystem sys = register_system(code);
  ProofChecker pc(sys, spec.d);
  const int d = spec.d, n = spec.n;
  const RateParams rp = RateParams::from(spec);

  SuiteReport rep;
  rep.spec = spec;
  auto& out = rep.checks;

  std::vector<VarSet> probe;
  for (int s = 1; s <= n; ++s)
    for (int t = 0; t <= s; ++t) probe.push_back(pc.u(t, s));
  rep.symmetry_deviation = pc.oracle().symmetry_deviation(probe);

  for (int s = 1; s <= n; ++s)
    for (int t = 0; t <= s - 1; ++t) out.push_back(pc.lemma1(t, s));
  for (int s = 1; s <= n; ++s)
    for (int t1 = 0; t1 <= s - 1; ++t1)
      for (int t2 = t1 + 1; t2 <= s - 1; ++t2) out.push_back(pc.lemma1_monotone(t1, t2, s));
  for (const auto& [m, i, ip, j] : exchange_tuples(d)) out.push_back(pc.exchange(m, i, ip, j));
  for (const auto& [m, i, ip, j] : exchange_tuples(d)) {
    if (j > m) continue;
    const TauPartition tp = build_tau(d, m, i, ip, j);
    std::string why;
    const bool ok = verify_tau(tp, &why);
    out.push_back(CheckReport::make("tau", params_str({{"m", m}, {"i", i}, {"i'", ip}, {"j", j}}), ok ? 0 : 1, 0,
                                    CheckReport::Relation::kEq));
    for (int p = 1; p <= tp.s; ++p) out.push_back(pc.qq_induction(m, i, ip, j, p));
    for (auto& h : pc.han(m, i, ip, j)) out.push_back(std::move(h));
  }
  for (int l = 0; l <= d - 1; ++l)
    for (int m = l + 1; m <= d - 1; ++m)
      for (auto& c : pc.corollaries(l, m)) out.push_back(std::move(c));
  for (auto& c : pc.propositions(rp)) out.push_back(std::move(c));
  for (auto& c : pc.final_bounds(rp)) out.push_back(std::move(c));

  rep.secrecy_index = secrecy_index(sys, spec.ell);
  out.push_back(CheckReport::make("secrecy", params_str({{"l", spec.ell}}), rep.secrecy_index, 0,
                                  CheckReport::Relation::kEq));
  return rep;
}

inline std::string describe(const CodeSpec& spec) {
  std::ostringstream os;
  os << "n=" << spec.n << " d=" << spec.d << " l=" << spec.ell << " levels=";
  for (std::size_t k = 0; k < spec.levels.size(); ++k) {
    const auto& lv = spec.levels[k];
    os << (k ? ";" : "") << "j" << lv.level << ":B" << lv.message_symbols << ":beta" << lv.beta;
  }
  return os.str();
}

inline std::string to_text(const SuiteReport& r) {
  std::ostringstream os;
  os << "suite " << describe(r.spec) << "\n";
  for (const auto& c : r.checks) os << to_text(c) << "\n";
  os << "symmetry_deviation " << to_string(r.symmetry_deviation) << "\n";
  os << "secrecy_index " << to_string(r.secrecy_index) << "\n";
  os << "checks " << r.checks.size() << " failures " << r.failures() << " => " << (r.all_pass() ? "PASS" : "FAIL")
     << "\n";
  return os.str();
}

inline nlohmann::ordered_json to_json(const SuiteReport& r) {
  nlohmann::ordered_json j;
  j["spec"] = describe(r.spec);
  auto& arr = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) arr.push_back(to_json(c));
  j["symmetry_deviation"] = to_string(r.symmetry_deviation);
  j["secrecy_index"] = to_string(r.secrecy_index);
  j["failures"] = r.failures();
  j["all_pass"] = r.all_pass();
  return j;
}

/// Named instances accepted by the CLI and the acceptance suite.
inline std::optional<CodeSpec> preset_spec(const std::string& name) {
  if (name == "mbr-211") return build_pm_mbr(2, 1, 1, 1).spec();
  if (name == "mbr-322") return build_pm_mbr(3, 2, 2, 1).spec();
  if (name == "mbr-433") return build_pm_mbr(4, 3, 3, 1).spec();
  if (name == "src-3221") return build_src(3, 2, 2, 1, 1).spec();
  if (name == "src-4331") return build_src(4, 3, 3, 1, 1).spec();
  if (name == "mdcsr-4331")
    return integerize_profile(4, MessageProfile::make(3, 1, {{2, Rational(1, 2)}, {3, Rational(1, 2)}}));
  return std::nullopt;
}

inline std::vector<std::string> preset_names() {
  return {"mbr-211", "mbr-322", "mbr-433", "src-3221", "src-4331", "mdcsr-4331"};
}

}  // namespace rglab

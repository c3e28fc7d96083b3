#pragma once

// Closed-form rate objects for multilevel diversity coding with secure
// regeneration: T-coefficients, MBR/SRK corner points, outer-bound half-planes
// and their intersections, all in exact rational arithmetic.

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rglab/rational.hpp"

namespace rglab {

/// Sum over t in [ell+1, k] of (d + 1 - t).
inline std::int64_t t_coeff(int d, int k, int ell) {
  if (ell < 0 || ell > k || k > d)
    throw std::invalid_argument("t_coeff requires 0 <= ell <= k <= d (got d=" + std::to_string(d) +
                                ", k=" + std::to_string(k) + ", ell=" + std::to_string(ell) + ")");
  std::int64_t sum = 0;
  for (int t = ell + 1; t <= k; ++t) sum += d + 1 - t;
  return sum;
}

/// Normalized message rates for levels ell+1..d; weights sum to one.
class MessageProfile {
 public:
  /// `weights` maps level -> rate. Missing levels are zero.
  static MessageProfile make(int d, int ell, std::map<int, Rational> weights) {
    if (d < 1) throw std::invalid_argument("profile: d must be positive");
    if (ell < 0 || ell >= d) throw std::invalid_argument("profile: need 0 <= ell < d");
    Rational total = 0;
    for (const auto& [j, w] : weights) {
      if (j < 1 || j > d) throw std::invalid_argument("profile: level " + std::to_string(j) + " outside [1, d]");
      if (w < 0) throw std::invalid_argument("profile: negative weight on level " + std::to_string(j));
      if (j <= ell && w != 0)
        throw std::invalid_argument("profile: level " + std::to_string(j) + " <= ell must carry zero weight");
      total += w;
    }
    if (total != 1) throw std::invalid_argument("profile: weights sum to " + to_string(total) + ", expected 1");
    MessageProfile p;
    p.d_ = d;
    p.ell_ = ell;
    for (int j = ell + 1; j <= d; ++j) {
      auto it = weights.find(j);
      p.weights_[j] = it == weights.end() ? Rational(0) : it->second;
    }
    return p;
  }

  /// One weight per level 1..d, in order.
  static MessageProfile from_levels(int d, int ell, const std::vector<Rational>& per_level) {
    if (static_cast<int>(per_level.size()) != d)
      throw std::invalid_argument("profile: expected " + std::to_string(d) + " weights, got " +
                                  std::to_string(per_level.size()));
    std::map<int, Rational> w;
    for (int j = 1; j <= d; ++j) w[j] = per_level[j - 1];
    return make(d, ell, std::move(w));
  }

  static MessageProfile single_level(int d, int ell, int k) {
    if (k <= ell || k > d) throw std::invalid_argument("profile: single level must lie in [ell+1, d]");
    return make(d, ell, {{k, Rational(1)}});
  }

  int d() const { return d_; }
  int ell() const { return ell_; }
  const std::map<int, Rational>& weights() const { return weights_; }
  Rational weight(int j) const {
    auto it = weights_.find(j);
    return it == weights_.end() ? Rational(0) : it->second;
  }

  std::vector<int> active_levels() const {
    std::vector<int> out;
    for (const auto& [j, w] : weights_)
      if (w != 0) out.push_back(j);
    return out;
  }
  bool is_single_level() const { return active_levels().size() == 1; }

  /// Sum_j B_j / T(d, j, ell).
  Rational inverse_t_sum() const {
    Rational s = 0;
    for (const auto& [j, w] : weights_)
      if (w != 0) s += w / Rational(t_coeff(d_, j, ell_));
    return s;
  }

  friend bool operator==(const MessageProfile&, const MessageProfile&) = default;

 private:
  int d_ = 0;
  int ell_ = 0;
  std::map<int, Rational> weights_;
};

struct RatePoint {
  Rational alpha_bar;
  Rational beta_bar;
  friend bool operator==(const RatePoint&, const RatePoint&) = default;
};

inline std::string to_string(const RatePoint& p) {
  return "(" + to_string(p.alpha_bar) + ", " + to_string(p.beta_bar) + ")";
}

enum class BoundTag { kB1 = 1, kB2, kB3, kB4, kB5, kB6, kB7 };

inline std::string to_string(BoundTag t) { return "b" + std::to_string(static_cast<int>(t)); }

inline BoundTag parse_bound_tag(std::string_view s) {
  if (s.size() == 2 && (s[0] == 'b' || s[0] == 'B') && s[1] >= '1' && s[1] <= '7')
    return static_cast<BoundTag>(s[1] - '0');
  throw std::invalid_argument("unknown bound family '" + std::string(s) + "'");
}

/// Half-plane c_alpha * alpha_bar + c_beta * beta_bar >= rhs.
struct BoundLine {
  Rational c_alpha;
  Rational c_beta;
  Rational rhs;
  BoundTag tag;

  Rational slack(const RatePoint& p) const { return c_alpha * p.alpha_bar + c_beta * p.beta_bar - rhs; }
  bool contains(const RatePoint& p) const { return slack(p) >= 0; }
  friend bool operator==(const BoundLine&, const BoundLine&) = default;
};

/// e.g. "b6: alpha + 29 beta >= 7/3".
inline std::string to_text(const BoundLine& l) {
  auto term = [](const Rational& c, const char* name) {
    return c == 1 ? std::string(name) : to_string(c) + " " + name;
  };
  std::string lhs;
  if (l.c_alpha != 0) lhs = term(l.c_alpha, "alpha");
  if (l.c_beta != 0) lhs += (lhs.empty() ? "" : " + ") + term(l.c_beta, "beta");
  return to_string(l.tag) + ": " + lhs + " >= " + to_string(l.rhs);
}

inline RatePoint mbr_point(const MessageProfile& profile) {
  if (profile.ell() != 0) throw std::invalid_argument("mbr_point: profile must have ell = 0");
  const Rational s = profile.inverse_t_sum();
  return {Rational(profile.d()) * s, s};
}

inline RatePoint srk_point(int d, int ell, int k) {
  if (ell >= k) throw std::invalid_argument("srk_point: secrecy impossible unless ell < k");
  const Rational t(t_coeff(d, k, ell));
  return {Rational(d) / t, Rational(1) / t};
}

inline BoundLine bound_line(BoundTag family, int d, int ell, const MessageProfile& profile) {
  if (profile.d() != d || profile.ell() != ell)
    throw std::invalid_argument("bound_line: (d, ell) disagree with the profile");
  const Rational s = profile.inverse_t_sum();
  const Rational rd(d), rl(ell);
  switch (family) {
    case BoundTag::kB1:
    case BoundTag::kB2:
    case BoundTag::kB7:
      if (ell != 0) throw std::invalid_argument("bound_line: " + to_string(family) + " applies only at ell = 0");
      break;
    case BoundTag::kB5:
    case BoundTag::kB6:
      if (!profile.is_single_level())
        throw std::invalid_argument("bound_line: " + to_string(family) + " needs a single-level profile");
      break;
    default:
      break;
  }
  switch (family) {
    case BoundTag::kB1:
      return {0, 1, s, family};
    case BoundTag::kB2:
      return {1, rd * (rd - 1) / 2, rd * (rd + 1) / 2 * s, family};
    case BoundTag::kB3:
    case BoundTag::kB5:
      return {0, 1, s, family};
    case BoundTag::kB4:
    case BoundTag::kB6:
      return {1, rd * (rd - rl) - rl, (rd - rl) * (rd + 1) * s, family};
    case BoundTag::kB7:
      return {1, rd * rd, rd * (rd + 1) * s, family};
  }
  throw std::invalid_argument("bound_line: unknown family");
}

inline RatePoint intersect_lines(const BoundLine& l1, const BoundLine& l2) {
  const Rational det = l1.c_alpha * l2.c_beta - l2.c_alpha * l1.c_beta;
  if (det == 0) throw std::invalid_argument("intersect_lines: lines are parallel");
  return {(l1.rhs * l2.c_beta - l2.rhs * l1.c_beta) / det, (l1.c_alpha * l2.rhs - l2.c_alpha * l1.rhs) / det};
}

/// Superposition of per-level SRK points weighted by the profile.
inline RatePoint separate_coding_point(int d, int ell, const MessageProfile& profile) {
  if (profile.d() != d || profile.ell() != ell)
    throw std::invalid_argument("separate_coding_point: (d, ell) disagree with the profile");
  RatePoint p{0, 0};
  for (int j : profile.active_levels()) {
    const RatePoint c = srk_point(d, ell, j);
    p.alpha_bar += profile.weight(j) * c.alpha_bar;
    p.beta_bar += profile.weight(j) * c.beta_bar;
  }
  return p;
}

/// Which outer bounds are reported for a given problem: the MDC-R pair plus
/// its weakened form at ell = 0, the SRC pair for a single secure level, and
/// the general pair otherwise.
inline std::vector<BoundTag> applicable_bounds(const MessageProfile& profile) {
  if (profile.ell() == 0) return {BoundTag::kB1, BoundTag::kB2, BoundTag::kB7};
  if (profile.is_single_level()) return {BoundTag::kB5, BoundTag::kB6};
  return {BoundTag::kB3, BoundTag::kB4};
}

struct Intersection {
  BoundTag first;
  BoundTag second;
  RatePoint point;
};

struct RegionReport {
  int n = 0;
  int d = 0;
  int ell = 0;
  MessageProfile profile;
  std::vector<BoundLine> lines;  // sorted by tag
  std::vector<Intersection> intersections;
  RatePoint mbr_point;
  RatePoint separate_coding_point;
  bool verdict_holds = false;
  std::vector<BoundTag> tight;  // lines met with equality by the separate-coding point
  std::optional<RatePoint> msr_annotation;  // quoted constant, never computed
};

inline RegionReport region_report(int n, int d, int ell, const MessageProfile& profile) {
  if (n <= d) throw std::invalid_argument("region_report: need d < n");
  RegionReport r;
  r.n = n;
  r.d = d;
  r.ell = ell;
  r.profile = profile;
  for (BoundTag t : applicable_bounds(profile)) r.lines.push_back(bound_line(t, d, ell, profile));
  std::sort(r.lines.begin(), r.lines.end(), [](const auto& a, const auto& b) { return a.tag < b.tag; });
  for (std::size_t i = 0; i < r.lines.size(); ++i)
    for (std::size_t j = i + 1; j < r.lines.size(); ++j) {
      const Rational det =
          r.lines[i].c_alpha * r.lines[j].c_beta - r.lines[j].c_alpha * r.lines[i].c_beta;
      if (det == 0) continue;
      r.intersections.push_back({r.lines[i].tag, r.lines[j].tag, intersect_lines(r.lines[i], r.lines[j])});
    }
  const Rational s = profile.inverse_t_sum();
  r.mbr_point = {Rational(d) * s, s};
  r.separate_coding_point = separate_coding_point(d, ell, profile);
  r.verdict_holds = r.separate_coding_point == r.mbr_point;
  for (const auto& l : r.lines) {
    const Rational sl = l.slack(r.separate_coding_point);
    if (sl < 0) r.verdict_holds = false;
    if (sl == 0) r.tight.push_back(l.tag);
  }
  // Both lines of the primary pair must be tight.
  if (r.lines.size() >= 2 && !(r.lines[0].slack(r.separate_coding_point) == 0 &&
                               r.lines[1].slack(r.separate_coding_point) == 0))
    r.verdict_holds = false;
  return r;
}

// ---- serialization -------------------------------------------------------

inline nlohmann::ordered_json to_json(const RatePoint& p) {
  return nlohmann::ordered_json::array({to_string(p.alpha_bar), to_string(p.beta_bar)});
}

inline nlohmann::ordered_json to_json(const BoundLine& l) {
  nlohmann::ordered_json j;
  j["tag"] = to_string(l.tag);
  j["c_alpha"] = to_string(l.c_alpha);
  j["c_beta"] = to_string(l.c_beta);
  j["rhs"] = to_string(l.rhs);
  j["text"] = to_text(l);
  return j;
}

inline nlohmann::ordered_json to_json(const RegionReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["d"] = r.d;
  j["ell"] = r.ell;
  auto& prof = j["profile"] = nlohmann::ordered_json::object();
  for (const auto& [lvl, w] : r.profile.weights()) prof[std::to_string(lvl)] = to_string(w);
  auto& lines = j["lines"] = nlohmann::ordered_json::array();
  for (const auto& l : r.lines) lines.push_back(to_json(l));
  auto& xs = j["intersections"] = nlohmann::ordered_json::array();
  for (const auto& x : r.intersections) {
    nlohmann::ordered_json e;
    e["lines"] = {to_string(x.first), to_string(x.second)};
    e["point"] = to_json(x.point);
    xs.push_back(e);
  }
  j["mbr_point"] = to_json(r.mbr_point);
  j["separate_coding_point"] = to_json(r.separate_coding_point);
  nlohmann::ordered_json v;
  v["holds"] = r.verdict_holds;
  auto& tight = v["tight"] = nlohmann::ordered_json::array();
  for (BoundTag t : r.tight) tight.push_back(to_string(t));
  j["verdict"] = v;
  if (r.msr_annotation) j["msr_point_annotation"] = to_json(*r.msr_annotation);
  return j;
}

inline std::string to_text(const RegionReport& r) {
  std::ostringstream os;
  os << "region n=" << r.n << " d=" << r.d << " l=" << r.ell << "\n";
  os << "profile";
  for (const auto& [lvl, w] : r.profile.weights()) os << " B" << lvl << "=" << to_string(w);
  os << "\n";
  for (const auto& l : r.lines) os << to_text(l) << "\n";
  for (const auto& x : r.intersections)
    os << "intersect " << to_string(x.first) << " " << to_string(x.second) << " = " << to_string(x.point) << "\n";
  os << "mbr_point = " << to_string(r.mbr_point) << "\n";
  os << "separate_coding_point = " << to_string(r.separate_coding_point) << "\n";
  if (r.msr_annotation) os << "msr_point (annotation only) = " << to_string(*r.msr_annotation) << "\n";
  os << "verdict: " << (r.verdict_holds ? "HOLDS" : "FAILS") << " (tight:";
  for (BoundTag t : r.tight) os << " " << to_string(t);
  os << ")\n";
  return os.str();
}

/// Plot samples: every bound line over alpha_bar in [0, 2 * mbr alpha], plus the corner points.
inline std::string to_csv(const RegionReport& r, int samples = 20) {
  std::ostringstream os;
  os << "series,alpha_bar,beta_bar,alpha_dec,beta_dec\n";
  auto row = [&](const std::string& series, const Rational& a, const Rational& b) {
    os << series << "," << to_string(a) << "," << to_string(b) << "," << std::fixed << std::setprecision(9)
       << a.convert_to<double>() << "," << b.convert_to<double>() << "\n";
  };
  const Rational span = Rational(2) * r.mbr_point.alpha_bar;
  for (const auto& l : r.lines) {
    for (int t = 0; t <= samples; ++t) {
      const Rational a = span * t / samples;
      const Rational b = l.c_alpha == 0 ? l.rhs / l.c_beta : (l.rhs - l.c_alpha * a) / l.c_beta;
      row(to_string(l.tag), a, b);
    }
  }
  row("mbr_point", r.mbr_point.alpha_bar, r.mbr_point.beta_bar);
  row("separate_coding_point", r.separate_coding_point.alpha_bar, r.separate_coding_point.beta_bar);
  if (r.msr_annotation) row("msr_point_annotation", r.msr_annotation->alpha_bar, r.msr_annotation->beta_bar);
  return os.str();
}

}  // namespace rglab

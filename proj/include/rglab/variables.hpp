#pragma once

// Names of the random variables of a storage code: messages M<j>, the key K,
// node contents W<i> and repair packets S[<from>-><to>]. Node indices are 1-based.

#include <algorithm>
#include <cctype>
#include <compare>
#include <iterator>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rglab {

struct Var {
  enum class Kind { kMessage, kKey, kShare, kPacket };

  Kind kind = Kind::kKey;
  int a = 0;  // level for messages, node for shares, helper for packets
  int b = 0;  // target node for packets

  static Var message(int level) { return {Kind::kMessage, level, 0}; }
  static Var key() { return {Kind::kKey, 0, 0}; }
  static Var share(int node) { return {Kind::kShare, node, 0}; }
  static Var packet(int helper, int target) { return {Kind::kPacket, helper, target}; }

  bool is_node_indexed() const { return kind == Kind::kShare || kind == Kind::kPacket; }

  friend auto operator<=>(const Var&, const Var&) = default;
  friend bool operator==(const Var&, const Var&) = default;
};

using VarSet = std::set<Var>;

inline std::string to_string(const Var& v) {
  switch (v.kind) {
    case Var::Kind::kMessage: return "M" + std::to_string(v.a);
    case Var::Kind::kKey: return "K";
    case Var::Kind::kShare: return "W" + std::to_string(v.a);
    case Var::Kind::kPacket: return "S[" + std::to_string(v.a) + "->" + std::to_string(v.b) + "]";
  }
  return "?";
}

inline std::string to_string(const VarSet& s) {
  std::string out;
  for (const auto& v : s) {
    if (!out.empty()) out += ",";
    out += to_string(v);
  }
  return out;
}

namespace detail {
inline int parse_index(std::string_view s, std::string_view whole) {
  if (s.empty() || s.size() > 6) throw std::invalid_argument("bad variable name '" + std::string(whole) + "'");
  int v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("bad variable name '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
  }
  if (v < 1) throw std::invalid_argument("bad variable name '" + std::string(whole) + "'");
  return v;
}
}  // namespace detail

inline Var parse_var(std::string_view s) {
  if (s == "K") return Var::key();
  if (s.size() >= 2 && s[0] == 'M') return Var::message(detail::parse_index(s.substr(1), s));
  if (s.size() >= 2 && s[0] == 'W') return Var::share(detail::parse_index(s.substr(1), s));
  if (s.size() >= 7 && s.substr(0, 2) == "S[" && s.back() == ']') {
    const auto body = s.substr(2, s.size() - 3);
    const auto arrow = body.find("->");
    if (arrow != std::string_view::npos)
      return Var::packet(detail::parse_index(body.substr(0, arrow), s), detail::parse_index(body.substr(arrow + 2), s));
  }
  throw std::invalid_argument("bad variable name '" + std::string(s) + "'");
}

/// Comma-separated names; whitespace around names is ignored; empty input is the empty set.
inline VarSet parse_var_set(std::string_view s) {
  VarSet out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    auto tok = s.substr(pos, comma - pos);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    if (!tok.empty()) out.insert(parse_var(tok));
    else if (comma != s.size() || pos != 0) throw std::invalid_argument("empty name in variable list");
    pos = comma + 1;
  }
  return out;
}

/// Applies a node relabelling; perm[i - 1] is the image of node i. Messages and the key are fixed.
inline Var permute(const Var& v, std::span<const int> perm) {
  switch (v.kind) {
    case Var::Kind::kShare: return Var::share(perm[v.a - 1]);
    case Var::Kind::kPacket: return Var::packet(perm[v.a - 1], perm[v.b - 1]);
    default: return v;
  }
}

inline VarSet permute(const VarSet& s, std::span<const int> perm) {
  VarSet out;
  for (const auto& v : s) out.insert(permute(v, perm));
  return out;
}

/// All repair packets addressed to any node in `targets`, from every other node of [1:n].
template <typename Range>
VarSet downloads_to(int n, const Range& targets) {
  VarSet out;
  for (int i : targets)
    for (int h = 1; h <= n; ++h)
      if (h != i) out.insert(Var::packet(h, i));
  return out;
}

inline VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline VarSet set_intersection(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

}  // namespace rglab

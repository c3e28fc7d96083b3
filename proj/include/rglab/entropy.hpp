#pragma once

// Entropy oracle for linear schemes. Every variable is G x for a generator
// matrix G and a uniform source vector x = (messages || key), so the joint
// entropy of a set of variables is the rank of their stacked generators,
// measured in field symbols.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rglab/codes.hpp"
#include "rglab/matrix.hpp"
#include "rglab/rational.hpp"
#include "rglab/variables.hpp"

namespace rglab {

class UnknownVariable : public std::invalid_argument {
 public:
  explicit UnknownVariable(const Var& v) : std::invalid_argument("unknown variable " + to_string(v)) {}
};

class LinearSystem {
 public:
  LinearSystem(std::size_t source_dim, int nodes) : source_dim_(source_dim), nodes_(nodes) {}

  void add_message(Var v, Matrix g) { add(v, std::move(g)); messages_.insert(v); }
  void add_key(Var v, Matrix g) { add(v, std::move(g)); keys_.insert(v); }
  void add(Var v, Matrix g) {
    if (g.rows() > 0 && g.cols() != source_dim_)
      throw std::invalid_argument("generator for " + to_string(v) + " has wrong column count");
    if (g.rows() == 0) g = Matrix(0, source_dim_);
    registry_[v] = std::move(g);
  }

  std::size_t source_dim() const { return source_dim_; }
  int nodes() const { return nodes_; }
  const std::map<Var, Matrix>& registry() const { return registry_; }
  const VarSet& message_names() const { return messages_; }
  const VarSet& key_names() const { return keys_; }
  bool contains(const Var& v) const { return registry_.count(v) != 0; }

  const Matrix& generator(const Var& v) const {
    auto it = registry_.find(v);
    if (it == registry_.end()) throw UnknownVariable(v);
    return it->second;
  }

  VarSet all_names() const {
    VarSet out;
    for (const auto& [v, g] : registry_) out.insert(v);
    return out;
  }

  Matrix stacked(const VarSet& vars) const {
    std::size_t rows = 0;
    for (const auto& v : vars) rows += generator(v).rows();
    std::vector<Element> data;
    data.reserve(rows * source_dim_);
    for (const auto& v : vars) {
      const auto& g = generator(v).data();
      data.insert(data.end(), g.begin(), g.end());
    }
    return Matrix(rows, source_dim_, std::move(data));
  }

 private:
  std::size_t source_dim_;
  int nodes_;
  std::map<Var, Matrix> registry_;
  VarSet messages_;
  VarSet keys_;
};

/// Unrolls a code into generator matrices over (messages by level || key):
/// M<j> and K select source coordinates, W<i> reproduces encode, and
/// S[h->i] reproduces repair_extract, for every ordered node pair.
inline LinearSystem register_system(const Code& code) {
  const std::size_t msg_dim = static_cast<std::size_t>(code.total_message_size());
  const std::size_t dim = msg_dim + static_cast<std::size_t>(code.key_size());
  LinearSystem sys(dim, code.n());

  std::size_t off = 0;
  for (int j : code.levels()) {
    Matrix g(code.message_size(j), dim);
    for (std::size_t r = 0; r < g.rows(); ++r) g(r, off + r) = Element(1);
    off += g.rows();
    sys.add_message(Var::message(j), std::move(g));
  }
  if (code.key_size() > 0) {
    Matrix g(code.key_size(), dim);
    for (std::size_t r = 0; r < g.rows(); ++r) g(r, msg_dim + r) = Element(1);
    sys.add_key(Var::key(), std::move(g));
  }

  // Column e of every generator is the code's response to the e-th unit source vector.
  std::vector<Matrix> w(code.n(), Matrix(code.alpha(), dim));
  std::map<std::pair<int, int>, Matrix> s;
  for (std::size_t e = 0; e < dim; ++e) {
    MessageBundle b = code.zero_bundle();
    std::size_t pos = e;
    bool placed = false;
    for (int j : code.levels()) {
      auto& blk = b.messages[j];
      if (pos < blk.size()) {
        blk[pos] = Element(1);
        placed = true;
        break;
      }
      pos -= blk.size();
    }
    if (!placed) b.key[pos] = Element(1);
    const auto shares = code.encode(b);
    for (int i = 0; i < code.n(); ++i) {
      for (int r = 0; r < code.alpha(); ++r) w[i](r, e) = shares[i].payload[r];
      for (int t = 1; t <= code.n(); ++t) {
        if (t == i + 1) continue;
        auto [it, fresh] = s.try_emplace({i + 1, t}, code.beta(), dim);
        const auto pkt = code.repair_extract(shares[i], t);
        for (int r = 0; r < code.beta(); ++r) it->second(r, e) = pkt.payload[r];
      }
    }
  }
  for (int i = 0; i < code.n(); ++i) sys.add(Var::share(i + 1), std::move(w[i]));
  for (auto& [key, g] : s) sys.add(Var::packet(key.first, key.second), std::move(g));
  return sys;
}

inline Rational joint_entropy(const LinearSystem& sys, const VarSet& vars) {
  if (vars.empty()) return 0;
  return Rational(static_cast<long long>(rank(sys.stacked(vars))));
}

inline Rational cond_entropy(const LinearSystem& sys, const VarSet& a, const VarSet& b) {
  return joint_entropy(sys, set_union(a, b)) - joint_entropy(sys, b);
}

inline Rational mutual_information(const LinearSystem& sys, const VarSet& a, const VarSet& b) {
  return joint_entropy(sys, a) + joint_entropy(sys, b) - joint_entropy(sys, set_union(a, b));
}

inline bool is_deterministic_given(const LinearSystem& sys, const VarSet& a, const VarSet& b) {
  return cond_entropy(sys, a, b) == 0;
}

/// All permutations of [1:n] in lexicographic order; perm[i - 1] is the image of node i.
inline std::vector<std::vector<int>> node_permutations(int n) {
  if (n > 8) throw std::invalid_argument("symmetrization limited to n <= 8 nodes");
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Caching front end used for heavy query workloads (proof checks, property
/// sweeps). Not safe to share between threads.
class EntropyOracle {
 public:
  explicit EntropyOracle(const LinearSystem& sys) : sys_(&sys) {}

  const LinearSystem& system() const { return *sys_; }

  Rational h(const VarSet& a) {
    if (a.empty()) return 0;
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
    Rational v = joint_entropy(*sys_, a);
    cache_.emplace(a, v);
    return v;
  }
  Rational h(const VarSet& a, const VarSet& given) { return h(set_union(a, given)) - h(given); }
  Rational mi(const VarSet& a, const VarSet& b) { return h(a) + h(b) - h(set_union(a, b)); }

  /// Average of H over every relabelling of the storage nodes.
  Rational h_sym(const VarSet& a) {
    if (a.empty()) return 0;
    const auto& perms = permutations();
    Rational sum = 0;
    for (const auto& p : perms) sum += h(permute(a, p));
    return sum / Rational(static_cast<long long>(perms.size()));
  }
  Rational h_sym(const VarSet& a, const VarSet& given) { return h_sym(set_union(a, given)) - h_sym(given); }

  const std::vector<std::vector<int>>& permutations() {
    if (perms_.empty()) perms_ = node_permutations(sys_->nodes());
    return perms_;
  }

  /// max over permutations and the given sets of |H(pi(A)) - H(A)|.
  Rational symmetry_deviation(const std::vector<VarSet>& sets) {
    Rational worst = 0;
    for (const auto& a : sets) {
      const Rational base = h(a);
      for (const auto& p : permutations()) worst = std::max(worst, abs(h(permute(a, p)) - base));
    }
    return worst;
  }

 private:
  const LinearSystem* sys_;
  std::map<VarSet, Rational> cache_;
  std::vector<std::vector<int>> perms_;
};

inline Rational symmetrized_entropy(const LinearSystem& sys, const VarSet& a) {
  EntropyOracle o(sys);
  return o.h_sym(a);
}

/// max over ell-subsets E of I(all messages; every repair download to E). Zero
/// exactly when the repair secrecy requirement holds.
inline Rational secrecy_index(const LinearSystem& sys, int ell) {
  const int n = sys.nodes();
  if (ell < 0 || ell >= n) throw std::invalid_argument("secrecy_index needs 0 <= ell < n");
  if (ell == 0) return 0;
  EntropyOracle o(sys);
  const VarSet msgs = sys.message_names();
  Rational worst = 0;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + ell, true);
  do {
    std::vector<int> e;
    for (int i = 0; i < n; ++i)
      if (pick[i]) e.push_back(i + 1);
    worst = std::max(worst, o.mi(msgs, downloads_to(n, e)));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return worst;
}

struct HanCheck {
  std::size_t r = 0;
  std::size_t total = 0;
  Rational average;  // mean of H(X_T | C) over |T| = r
  Rational bound;    // (r / N) H(X_all | C)
  bool holds() const { return average >= bound; }
};

/// Han's subset inequality on one collection: the mean r-subset conditional
/// entropy is at least r/N of the whole collection's.
inline HanCheck han_subset_check(EntropyOracle& oracle, const std::vector<VarSet>& items, const VarSet& given,
                                 std::size_t r) {
  const std::size_t total = items.size();
  if (r < 1 || r > total) throw std::invalid_argument("han_subset_check: need 1 <= r <= N");
  VarSet all;
  for (const auto& it : items) all.insert(it.begin(), it.end());
  HanCheck out{r, total, 0, Rational(static_cast<long long>(r)) / Rational(static_cast<long long>(total)) *
                                oracle.h(all, given)};
  std::vector<bool> pick(total, false);
  std::fill(pick.begin(), pick.begin() + r, true);
  Rational sum = 0;
  long long count = 0;
  do {
    VarSet sub;
    for (std::size_t i = 0; i < total; ++i)
      if (pick[i]) sub.insert(items[i].begin(), items[i].end());
    sum += oracle.h(sub, given);
    ++count;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  out.average = sum / Rational(count);
  return out;
}

}  // namespace rglab

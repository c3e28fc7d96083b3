#pragma once

// Reference implementations the library is checked against. None of these
// touch the log/antilog tables or the row-reduction code.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "rglab/entropy.hpp"
#include "rglab/matrix.hpp"

namespace oracle {

/// Shift-and-add product modulo x^8 + x^4 + x^3 + x^2 + 1.
inline std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  unsigned acc = 0, x = a;
  for (int bit = 0; bit < 8; ++bit) {
    if (b & (1u << bit)) acc ^= x;
    x <<= 1;
    if (x & 0x100) x ^= 0x11D;
  }
  return static_cast<std::uint8_t>(acc);
}

inline std::uint8_t inv(std::uint8_t a) {
  for (unsigned b = 1; b < 256; ++b)
    if (mul(a, static_cast<std::uint8_t>(b)) == 1) return static_cast<std::uint8_t>(b);
  return 0;
}

using Grid = std::vector<std::vector<std::uint8_t>>;

inline Grid grid(const rglab::Matrix& m) {
  Grid g(m.rows(), std::vector<std::uint8_t>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) g[r][c] = m(r, c).value();
  return g;
}

/// Leibniz expansion; characteristic 2 so every sign is +.
inline std::uint8_t det(const Grid& g) {
  const std::size_t n = g.size();
  if (n == 0) return 1;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::uint8_t sum = 0;
  do {
    std::uint8_t term = 1;
    for (std::size_t i = 0; i < n && term; ++i) term = mul(term, g[i][p[i]]);
    sum ^= term;
  } while (std::next_permutation(p.begin(), p.end()));
  return sum;
}

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) s.push_back(i);
    out.push_back(s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

/// Largest k with a nonzero k x k minor. Exponential; small matrices only.
inline std::size_t rank_by_minors(const Grid& g) {
  const std::size_t rows = g.size(), cols = rows ? g[0].size() : 0;
  for (std::size_t k = std::min(rows, cols); k > 0; --k)
    for (const auto& rs : subsets(rows, k))
      for (const auto& cs : subsets(cols, k)) {
        Grid sub(k, std::vector<std::uint8_t>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub[i][j] = g[rs[i]][cs[j]];
        if (det(sub)) return k;
      }
  return 0;
}

/// Entropy of a set of variables, in symbols, by enumerating every source
/// vector and counting distinct outputs (a linear image of size 256^r).
/// Only feasible for source dimension <= 2.
inline int entropy_by_enumeration(const rglab::LinearSystem& sys, const rglab::VarSet& vars) {
  const std::size_t dim = sys.source_dim();
  const std::size_t total = std::size_t{1} << (8 * dim);
  std::vector<const rglab::Matrix*> gens;
  for (const auto& v : vars) gens.push_back(&sys.generator(v));
  std::set<std::vector<std::uint8_t>> images;
  std::vector<std::uint8_t> x(dim);
  for (std::size_t code = 0; code < total; ++code) {
    for (std::size_t i = 0; i < dim; ++i) x[i] = static_cast<std::uint8_t>(code >> (8 * i));
    std::vector<std::uint8_t> y;
    for (const auto* g : gens)
      for (std::size_t r = 0; r < g->rows(); ++r) {
        std::uint8_t acc = 0;
        for (std::size_t c = 0; c < dim; ++c) acc ^= mul((*g)(r, c).value(), x[c]);
        y.push_back(acc);
      }
    images.insert(std::move(y));
  }
  int r = 0;
  for (std::size_t size = images.size(); size > 1; size >>= 8) ++r;
  return r;
}

inline rglab::Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  rglab::Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rglab::Element(static_cast<std::uint8_t>(rng()));
  return m;
}

/// Uniform random subset of `pool`.
template <typename T>
std::set<T> random_subset(std::mt19937_64& rng, const std::set<T>& pool) {
  std::set<T> out;
  for (const auto& v : pool)
    if (rng() & 1) out.insert(v);
  return out;
}

}  // namespace oracle

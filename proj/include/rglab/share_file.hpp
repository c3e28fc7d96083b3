#pragma once

// On-disk node shares and the byte-level file codec used by the CLI.
//
// Layout (all integers little-endian):
//   "RGL1"  u16 n  u16 d  u16 ell  u16 level_count
//   level_count x (u16 j  u16 B_j  u16 beta_j)
//   u8 field_id  u16 node  u32 payload_len  payload
//   optional trailer: "RGLX"  u64 seed  u64 original_length
//
// A file of L bytes is cut into ceil(L / sum B) bundles; each bundle fills the
// message blocks in level order and is zero padded at the end. Keys come from
// SymbolSource(seed). A node payload is the concatenation of its per-bundle shares.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rglab/codes.hpp"

namespace rglab {

using Bytes = std::vector<std::uint8_t>;

class ShareFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ShareTrailer {
  std::uint64_t seed = 0;
  std::uint64_t original_length = 0;
  friend bool operator==(const ShareTrailer&, const ShareTrailer&) = default;
};

struct ShareFile {
  CodeSpec spec;
  int node = 0;
  Bytes payload;
  std::optional<ShareTrailer> trailer;
  friend bool operator==(const ShareFile&, const ShareFile&) = default;
};

namespace detail {

class Writer {
 public:
  void raw(const char* s, std::size_t n) { out_.insert(out_.end(), s, s + n); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(long long v, const char* what) {
    if (v < 0 || v > 0xFFFF) throw ShareFormatError(std::string(what) + " does not fit in 16 bits");
    uint(static_cast<std::uint64_t>(v), 2);
  }
  void u32(std::uint64_t v) {
    if (v > 0xFFFFFFFFull) throw ShareFormatError("payload does not fit in 32-bit length");
    uint(v, 4);
  }
  void u64(std::uint64_t v) { uint(v, 8); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  Bytes take() { return std::move(out_); }

 private:
  void uint(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  bool magic(const char* m) {
    need(4);
    const bool ok = std::memcmp(in_.data() + pos_, m, 4) == 0;
    pos_ += 4;
    return ok;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(uint(1)); }
  int u16() { return static_cast<int>(uint(2)); }
  std::uint64_t u32() { return uint(4); }
  std::uint64_t u64() { return uint(8); }
  std::span<const std::uint8_t> bytes(std::uint64_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t left() const { return in_.size() - pos_; }

 private:
  void need(std::uint64_t n) const {
    if (n > left()) throw ShareFormatError("truncated share file");
  }
  std::uint64_t uint(int width) {
    need(width);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += width;
    return v;
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Bytes serialize(const ShareFile& f) {
  detail::Writer w;
  w.raw("RGL1", 4);
  w.u16(f.spec.n, "n");
  w.u16(f.spec.d, "d");
  w.u16(f.spec.ell, "ell");
  w.u16(static_cast<long long>(f.spec.levels.size()), "level count");
  for (const auto& lv : f.spec.levels) {
    w.u16(lv.level, "level");
    w.u16(lv.message_symbols, "B_j");
    w.u16(lv.beta, "beta_j");
  }
  w.u8(f.spec.field_id);
  w.u16(f.node, "node index");
  w.u32(f.payload.size());
  w.bytes(f.payload);
  if (f.trailer) {
    w.raw("RGLX", 4);
    w.u64(f.trailer->seed);
    w.u64(f.trailer->original_length);
  }
  return w.take();
}

inline ShareFile parse_share_file(std::span<const std::uint8_t> in) {
  detail::Reader r(in);
  if (!r.magic("RGL1")) throw ShareFormatError("bad magic");
  ShareFile f;
  f.spec.n = r.u16();
  f.spec.d = r.u16();
  f.spec.ell = r.u16();
  const int count = r.u16();
  for (int k = 0; k < count; ++k) {
    LevelSpec lv;
    lv.level = r.u16();
    lv.message_symbols = r.u16();
    lv.beta = r.u16();
    f.spec.levels.push_back(lv);
  }
  f.spec.field_id = r.u8();
  if (f.spec.field_id != gf256::kFieldId) throw ShareFormatError("unknown field id");
  f.node = r.u16();
  const auto len = r.u32();
  const auto body = r.bytes(len);
  f.payload.assign(body.begin(), body.end());
  if (r.left() != 0) {
    if (!r.magic("RGLX")) throw ShareFormatError("trailing garbage after payload");
    ShareTrailer t;
    t.seed = r.u64();
    t.original_length = r.u64();
    f.trailer = t;
    if (r.left() != 0) throw ShareFormatError("trailing garbage after trailer");
  }
  return f;
}

inline Bytes read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  Bytes out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + p.string());
  return out;
}

inline void write_file(const std::filesystem::path& p, std::span<const std::uint8_t> data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + p.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + p.string());
}

// ---- file codec ------------------------------------------------------------

inline std::uint64_t bundle_count(const Code& code, std::uint64_t length) {
  const auto per = static_cast<std::uint64_t>(code.total_message_size());
  return (length + per - 1) / per;
}

/// One ShareFile per node, in node order.
inline std::vector<ShareFile> encode_bytes(const Code& code, std::span<const std::uint8_t> data, std::uint64_t seed) {
  const std::uint64_t bundles = bundle_count(code, data.size());
  const int n = code.n(), alpha = code.alpha();
  std::vector<ShareFile> files(n);
  for (int i = 0; i < n; ++i) {
    files[i].spec = code.spec();
    files[i].node = i + 1;
    files[i].payload.reserve(bundles * alpha);
    files[i].trailer = ShareTrailer{seed, data.size()};
  }
  SymbolSource keys(seed);
  MessageBundle b = code.zero_bundle();
  std::vector<NodeShare> shares(n);
  for (int i = 0; i < n; ++i) shares[i] = {i + 1, Symbols(alpha)};
  std::size_t pos = 0;
  for (std::uint64_t k = 0; k < bundles; ++k) {
    for (int j : code.levels())
      for (auto& e : b.messages[j]) e = Element(pos < data.size() ? data[pos++] : 0);
    for (auto& e : b.key) e = keys.next();
    code.encode_into(b, shares);
    for (int i = 0; i < n; ++i)
      for (const auto& e : shares[i].payload) files[i].payload.push_back(e.value());
  }
  return files;
}

inline Symbols to_symbols(std::span<const std::uint8_t> b) {
  Symbols out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = Element(b[i]);
  return out;
}

/// Rebuilds the target payload from d helper payloads (helper node -> payload bytes).
inline Bytes regenerate_bytes(const Code& code, int target, const std::vector<int>& helpers,
                              const std::vector<std::span<const std::uint8_t>>& helper_payloads) {
  const auto plan = code.regeneration_plan(target, helpers);
  const std::size_t alpha = code.alpha();
  if (helper_payloads.size() != helpers.size()) throw CodeError("helper payload count mismatch");
  const std::size_t len = helper_payloads.front().size();
  for (const auto& p : helper_payloads)
    if (p.size() != len || len % alpha != 0) throw CodeError("helper payload length mismatch");
  Bytes out;
  out.reserve(len);
  std::vector<NodeShare> shares(helpers.size());
  std::vector<Symbols> packets(helpers.size());
  std::vector<std::span<const Element>> views(helpers.size());
  for (std::size_t off = 0; off < len; off += alpha) {
    for (std::size_t h = 0; h < helpers.size(); ++h) {
      shares[h] = {helpers[h], to_symbols(helper_payloads[h].subspan(off, alpha))};
      packets[h] = code.repair_extract(shares[h], target).payload;
      views[h] = packets[h];
    }
    for (const auto& e : plan.regenerate(views)) out.push_back(e.value());
  }
  return out;
}

/// Decodes the original bytes from the payloads of at least top-level-many nodes.
/// Throws CorruptShares when the payloads are inconsistent.
inline Bytes recover_bytes(const Code& code, const std::vector<int>& nodes,
                           const std::vector<std::span<const std::uint8_t>>& payloads, std::uint64_t length) {
  const std::size_t alpha = code.alpha();
  if (payloads.size() != nodes.size()) throw CodeError("payload count mismatch");
  const std::uint64_t bundles = bundle_count(code, length);
  for (const auto& p : payloads)
    if (p.size() != bundles * alpha) throw CodeError("payload length does not match the recorded file length");
  std::vector<RecoveryPlan> plans;
  for (int j : code.levels()) plans.push_back(code.recovery_plan(j, nodes));
  Bytes out;
  out.reserve(bundles * code.total_message_size());
  std::vector<Symbols> shares(nodes.size());
  std::vector<std::span<const Element>> views(nodes.size());
  for (std::uint64_t k = 0; k < bundles; ++k) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      shares[i] = to_symbols(payloads[i].subspan(k * alpha, alpha));
      views[i] = shares[i];
    }
    for (const auto& plan : plans)
      for (const auto& e : plan.recover(views)) out.push_back(e.value());
  }
  out.resize(length);
  return out;
}

}  // namespace rglab

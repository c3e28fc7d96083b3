#pragma once

// Command-line front end. run_cli() is the whole program minus main(), so the
// test suites can drive every subcommand in-process.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rglab/bounds.hpp"
#include "rglab/codes.hpp"
#include "rglab/entropy.hpp"
#include "rglab/proofkit.hpp"
#include "rglab/share_file.hpp"

namespace rglab::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kIo = 3 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Reported when a repair cycle or suite check disagrees with expectations.
class VerifyFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::optional<int> n, d, ell, k, beta;
  std::string profile;
  bool normalize = false;
  std::uint64_t seed = 1;
  std::string format = "text";
  std::string out_dir;
  std::string preset;
  std::string input;
  int fail_node = 1;
  std::string corrupt;
  std::string entropy;
  std::string given;
  std::string family;
};

inline std::vector<Rational> parse_profile_list(const std::string& s) {
  std::vector<Rational> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = s.find(',', pos);
    const auto tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      out.push_back(parse_rational(tok));
    } catch (const std::exception& e) {
      throw UsageError("bad profile entry '" + tok + "': " + e.what());
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline std::string to_string_list(const std::vector<int>& v) {
  std::string out;
  for (int x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
  return "{" + out + "}";
}

inline int require(const std::optional<int>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing ") + flag);
  return *v;
}

inline MessageProfile profile_from(const CliConfig& c) {
  const int d = require(c.d, "--d"), ell = c.ell.value_or(0);
  auto w = parse_profile_list(c.profile);
  if (static_cast<int>(w.size()) != d)
    throw UsageError("--profile needs exactly d = " + std::to_string(d) + " entries, got " + std::to_string(w.size()));
  if (c.normalize) {
    Rational total = 0;
    for (const auto& x : w) total += x;
    if (total <= 0) throw UsageError("--profile sums to zero");
    for (auto& x : w) x /= total;
  }
  try {
    return MessageProfile::from_levels(d, ell, w);
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad profile: ") + e.what());
  }
}

/// --profile selects a separate-coding code; otherwise --k (default d) a single-level one.
inline CodeSpec spec_from(const CliConfig& c) {
  if (!c.preset.empty()) {
    auto s = preset_spec(c.preset);
    if (!s) throw UsageError("unknown preset '" + c.preset + "'");
    return *s;
  }
  const int n = require(c.n, "--n"), d = require(c.d, "--d"), ell = c.ell.value_or(0);
  if (!c.profile.empty()) {
    CodeSpec spec = integerize_profile(n, profile_from(c));
    const int scale = c.beta.value_or(1);
    if (scale < 1) throw UsageError("--beta must be positive");
    for (auto& lv : spec.levels) {
      lv.beta *= scale;
      lv.message_symbols *= scale;
    }
    Code check(spec);
    return spec;
  }
  const int k = c.k.value_or(d);
  return build_src(n, k, d, ell, c.beta.value_or(1)).spec();
}

inline std::filesystem::path share_path(const std::filesystem::path& dir, int node) {
  return dir / ("node_" + std::to_string(node) + ".rgl");
}

// ---- subcommands -----------------------------------------------------------

inline int cmd_bounds(const CliConfig& c, std::ostream& out) {
  const auto profile = profile_from(c);
  std::vector<BoundTag> tags;
  if (!c.family.empty()) {
    try {
      tags.push_back(parse_bound_tag(c.family));
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  } else {
    tags = applicable_bounds(profile);
  }
  std::vector<BoundLine> lines;
  for (auto t : tags) lines.push_back(bound_line(t, profile.d(), profile.ell(), profile));
  if (c.format == "json") {
    auto j = nlohmann::ordered_json::array();
    for (const auto& l : lines) j.push_back(to_json(l));
    out << j.dump(2) << "\n";
  } else {
    for (const auto& l : lines) out << to_text(l) << "\n";
  }
  return kOk;
}

inline int cmd_region(const CliConfig& c, std::ostream& out) {
  CliConfig cfg = c;
  if (c.preset == "fig1") {
    cfg.n = 4, cfg.d = 3, cfg.ell = 0, cfg.profile = "0,1/3,2/3";
  } else if (c.preset == "fig2") {
    cfg.n = 7, cfg.d = 6, cfg.ell = 1, cfg.profile = "0,0,0,0,0,1";
  } else if (!c.preset.empty()) {
    throw UsageError("unknown region preset '" + c.preset + "' (fig1, fig2)");
  }
  RegionReport rep = region_report(require(cfg.n, "--n"), require(cfg.d, "--d"), cfg.ell.value_or(0), profile_from(cfg));
  if (c.preset == "fig1") rep.msr_annotation = RatePoint{Rational(7, 18), Rational(11, 36)};
  if (c.format == "json") out << to_json(rep).dump(2) << "\n";
  else if (c.format == "csv") out << to_csv(rep);
  else out << to_text(rep);
  return kOk;
}

inline int cmd_encode(const CliConfig& c, std::ostream& out) {
  const Code code(spec_from(c));
  if (c.out_dir.empty()) throw UsageError("encode needs --out-dir");
  const Bytes data = read_file(c.input);
  std::filesystem::create_directories(c.out_dir);
  const auto files = encode_bytes(code, data, c.seed);
  for (const auto& f : files) {
    const auto p = share_path(c.out_dir, f.node);
    write_file(p, serialize(f));
    out << "wrote " << p.filename().string() << " (" << f.payload.size() << " payload bytes)\n";
  }
  return kOk;
}

inline std::optional<std::size_t> first_difference(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  const auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  if (ia == a.end() && ib == b.end()) return std::nullopt;
  return static_cast<std::size_t>(ia - a.begin());
}

/// Parses and cross-checks one share file against the code that wrote it.
inline ShareFile load_share(const std::filesystem::path& p, const Code& code, int node, std::uint64_t seed,
                            std::uint64_t length) {
  const Bytes raw = read_file(p);
  ShareFile f;
  try {
    f = parse_share_file(raw);
  } catch (const ShareFormatError& e) {
    throw VerifyFailure(p.filename().string() + ": malformed share (" + e.what() + ")");
  }
  if (f.spec != code.spec() || f.node != node)
    throw VerifyFailure(p.filename().string() + ": header disagrees with the code");
  if (!f.trailer || f.trailer->seed != seed || f.trailer->original_length != length)
    throw VerifyFailure(p.filename().string() + ": seed/length record disagrees");
  if (f.payload.size() != bundle_count(code, length) * code.alpha())
    throw VerifyFailure(p.filename().string() + ": payload length disagrees");
  return f;
}

inline int cmd_repair_cycle(const CliConfig& c, std::ostream& out) {
  const Code code(spec_from(c));
  const int n = code.n(), target = c.fail_node;
  if (target < 1 || target > n) throw UsageError("--fail must name a node in [1:n]");

  const Bytes data = read_file(c.input);
  const bool temp_dir = c.out_dir.empty();
  const std::filesystem::path dir =
      temp_dir ? std::filesystem::temp_directory_path() /
                     ("rglab-cycle-" + std::to_string(c.seed) + "-" +
                      std::to_string(std::hash<std::string>{}(std::filesystem::absolute(c.input).string())))
               : std::filesystem::path(c.out_dir);
  struct Cleanup {
    std::filesystem::path p;
    bool on;
    ~Cleanup() {
      std::error_code ec;
      if (on) std::filesystem::remove_all(p, ec);
    }
  } cleanup{dir, temp_dir};
  std::filesystem::create_directories(dir);

  for (const auto& f : encode_bytes(code, data, c.seed)) write_file(share_path(dir, f.node), serialize(f));

  if (!c.corrupt.empty()) {
    const auto colon = c.corrupt.find(':');
    if (colon == std::string::npos) throw UsageError("--corrupt expects NODE:OFFSET");
    int node = 0;
    std::size_t offset = 0;
    try {
      node = std::stoi(c.corrupt.substr(0, colon));
      offset = std::stoull(c.corrupt.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("--corrupt expects NODE:OFFSET");
    }
    if (node < 1 || node > n) throw UsageError("--corrupt node out of range");
    Bytes raw = read_file(share_path(dir, node));
    if (offset >= raw.size()) throw UsageError("--corrupt offset beyond the share file");
    raw[offset] ^= 0x5A;
    write_file(share_path(dir, node), raw);
  }

  const auto target_path = share_path(dir, target);
  const Bytes lost = read_file(target_path);
  std::filesystem::remove(target_path);

  std::vector<int> helpers;
  for (int h = 1; h <= n && static_cast<int>(helpers.size()) < code.d(); ++h)
    if (h != target) helpers.push_back(h);
  std::vector<ShareFile> helper_files;
  for (int h : helpers) helper_files.push_back(load_share(share_path(dir, h), code, h, c.seed, data.size()));
  std::vector<std::span<const std::uint8_t>> views;
  for (const auto& f : helper_files) views.emplace_back(f.payload);

  ShareFile rebuilt{code.spec(), target, {}, ShareTrailer{c.seed, data.size()}};
  if (!views.empty() && !views.front().empty()) rebuilt.payload = regenerate_bytes(code, target, helpers, views);
  const Bytes rebuilt_raw = serialize(rebuilt);
  if (auto at = first_difference(rebuilt_raw, lost))
    throw VerifyFailure("regenerated node " + std::to_string(target) + " differs at byte offset " + std::to_string(*at));
  write_file(target_path, rebuilt_raw);
  out << "regenerated node " << target << " from helpers";
  for (int h : helpers) out << " " << h;
  out << ": identical\n";

  std::vector<ShareFile> all;
  for (int i = 1; i <= n; ++i) all.push_back(load_share(share_path(dir, i), code, i, c.seed, data.size()));

  const int k = code.top_level();
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  std::size_t subsets = 0;
  do {
    std::vector<int> nodes;
    std::vector<std::span<const std::uint8_t>> payloads;
    for (int i = 0; i < n; ++i)
      if (pick[i]) {
        nodes.push_back(i + 1);
        payloads.emplace_back(all[i].payload);
      }
    Bytes got;
    try {
      got = recover_bytes(code, nodes, payloads, data.size());
    } catch (const CorruptShares&) {
      throw VerifyFailure("recovery from nodes " + to_string_list(nodes) + " found inconsistent shares");
    }
    if (auto at = first_difference(got, data))
      throw VerifyFailure("recovery from nodes " + to_string_list(nodes) + " differs at byte offset " +
                          std::to_string(*at));
    ++subsets;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  out << "recovered " << data.size() << " bytes from all " << subsets << " subsets of " << k << " nodes: identical\n";
  return kOk;
}

inline int cmd_verify(const CliConfig& c, std::ostream& out) {
  if (c.preset.empty() && c.n && c.d && *c.n != *c.d + 1)
    throw UsageError("verify needs n = d + 1 (symmetrical instances only); got n = " + std::to_string(*c.n) +
                     ", d = " + std::to_string(*c.d));
  const CodeSpec spec = spec_from(c);
  const SuiteReport rep = run_suite(spec);
  if (c.format == "json") out << to_json(rep).dump(2) << "\n";
  else out << to_text(rep);
  return rep.all_pass() ? kOk : kVerifyFailed;
}

inline int cmd_secrecy_check(const CliConfig& c, std::ostream& out) {
  const Code code(spec_from(c));
  const LinearSystem sys = register_system(code);
  if (!c.entropy.empty()) {
    VarSet a, b;
    try {
      a = parse_var_set(c.entropy);
      b = parse_var_set(c.given);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    EntropyOracle o(sys);
    Rational h, hs;
    try {
      h = o.h(a, b);
      hs = o.h_sym(a, b);
    } catch (const UnknownVariable& e) {
      throw UsageError(e.what());
    }
    const std::string label = "H(" + to_string(a) + (b.empty() ? "" : " | " + to_string(b)) + ")";
    if (c.format == "json") {
      nlohmann::ordered_json j;
      j["query"] = label;
      j["entropy"] = to_string(h);
      j["symmetrized"] = to_string(hs);
      out << j.dump(2) << "\n";
    } else {
      out << label << " = " << to_string(h) << " (symmetrized " << to_string(hs) << ")\n";
    }
    return kOk;
  }
  const Rational idx = secrecy_index(sys, code.ell());
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["spec"] = describe(code.spec());
    j["secrecy_index"] = to_string(idx);
    j["secure"] = idx == 0;
    out << j.dump(2) << "\n";
  } else {
    out << "spec " << describe(code.spec()) << "\n";
    out << "secrecy_index " << to_string(idx) << " => " << (idx == 0 ? "SECURE" : "LEAKS") << "\n";
  }
  return idx == 0 ? kOk : kVerifyFailed;
}

// ---- driver ----------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Storage/bandwidth bounds, secure regenerating codes, and converse checks"};
  app.require_subcommand(1);
  CliConfig c;

  auto add_spec_flags = [&](CLI::App* s) {
    s->add_option("--n", c.n, "number of storage nodes");
    s->add_option("--d", c.d, "repair degree");
    s->add_option("--l", c.ell, "eavesdropped node count");
    s->add_option("--k", c.k, "recovery threshold (single-level codes)");
    s->add_option("--beta", c.beta, "stripes per level");
    s->add_option("--profile", c.profile, "message fractions for levels 1..d, e.g. 0,1/3,2/3");
    s->add_flag("--normalize", c.normalize, "scale --profile to sum to one");
    s->add_option("--seed", c.seed, "key/RNG seed");
    s->add_option("--format", c.format, "text | json | csv")->check(CLI::IsMember({"text", "json", "csv"}));
  };

  auto* bounds = app.add_subcommand("bounds", "print outer-bound lines for a profile");
  add_spec_flags(bounds);
  bounds->add_option("--family", c.family, "single family b1..b7");
  auto* region = app.add_subcommand("region", "bound lines, corner points and plot data");
  add_spec_flags(region);
  region->add_option("--preset", c.preset, "fig1 | fig2");
  auto* encode = app.add_subcommand("encode", "encode a file into n share files");
  add_spec_flags(encode);
  encode->add_option("--preset", c.preset, "named code");
  encode->add_option("--out-dir", c.out_dir, "directory for share files");
  encode->add_option("input", c.input, "input file")->required();
  auto* cycle = app.add_subcommand("repair-cycle", "encode, fail one node, regenerate, recover");
  add_spec_flags(cycle);
  cycle->add_option("--preset", c.preset, "named code");
  cycle->add_option("--out-dir", c.out_dir, "keep share files here (default: temporary)");
  cycle->add_option("--fail", c.fail_node, "node to fail (1-based)");
  cycle->add_option("--corrupt", c.corrupt, "flip a byte of a share file before repair: NODE:OFFSET");
  cycle->add_option("input", c.input, "input file")->required();
  auto* verify = app.add_subcommand("verify", "run the converse check suite on a symmetrical code");
  add_spec_flags(verify);
  verify->add_option("--preset", c.preset, "mbr-211 | mbr-322 | mbr-433 | src-3221 | src-4331 | mdcsr-4331");
  auto* secrecy = app.add_subcommand("secrecy-check", "leakage to every ell-node eavesdropper, or one entropy query");
  add_spec_flags(secrecy);
  secrecy->add_option("--preset", c.preset, "named code");
  secrecy->add_option("--entropy", c.entropy, "variables, e.g. W1,S[2->1]");
  secrecy->add_option("--given", c.given, "conditioning variables");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (bounds->parsed()) return cmd_bounds(c, out);
    if (region->parsed()) return cmd_region(c, out);
    if (encode->parsed()) return cmd_encode(c, out);
    if (cycle->parsed()) return cmd_repair_cycle(c, out);
    if (verify->parsed()) return cmd_verify(c, out);
    if (secrecy->parsed()) return cmd_secrecy_check(c, out);
  } catch (const VerifyFailure& e) {
    err << "FAIL: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace rglab::cli

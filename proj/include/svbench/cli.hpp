#pragma once

// Command-line front end.  Every command writes one JSON report:
//   {schema_version, tool_version, command, input, config, warnings, result}

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svbench/bounds.hpp"
#include "svbench/cache.hpp"
#include "svbench/covers.hpp"
#include "svbench/dcomplex.hpp"
#include "svbench/homology.hpp"
#include "svbench/hypconst.hpp"
#include "svbench/io.hpp"
#include "svbench/manifold.hpp"
#include "svbench/pi1.hpp"
#include "svbench/simplify.hpp"

#ifndef SVBENCH_VERSION
#define SVBENCH_VERSION "0.0.0"
#endif

namespace svbench::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = SVBENCH_VERSION;
inline constexpr const char* kCacheEnv = "SVBENCH_CACHE_DIR";
inline constexpr unsigned kMaxIndex = 16;
inline constexpr unsigned kMinPrecision = 10;
inline constexpr unsigned kMaxPrecision = 1000;

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"validate", "homology", "pi1",    "subgroups", "cover",
                                          "simplify", "bounds",   "stable", "growth",    "hyp"};
  return c;
}

inline std::string usage() {
  std::string s = "usage: svbench <command> [input] [options]\ncommands:";
  for (const auto& c : commands()) s += " " + c;
  return s + "\nrun 'svbench <command> --help' for the options of a command\n";
}

struct RunConfig {
  std::string command;
  std::string input;
  std::vector<unsigned> primes{2, 3, 5};
  unsigned max_index = kDefaultIndexCeiling;
  int depth = 0;
  std::uint64_t seed = 0;
  std::size_t max_steps = SearchConfig{}.max_steps;
  unsigned precision = kDefaultDigits;
  std::string cache_dir;
  std::string out;
  // per command
  unsigned index = 2;
  std::size_t position = 0;
  std::size_t max_count = SIZE_MAX;
  std::string sv;
  std::string volume;
  int n = 3;
  std::string eps, a, delta, eta;
};

namespace detail {

inline bool is_prime(unsigned p) {
  if (p < 2) return false;
  for (unsigned q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

inline bool looks_decimal(const std::string& s) {
  static const std::regex re(R"(^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$)");
  return std::regex_match(s, re);
}

inline Real parse_real(const std::string& s, const char* what) {
  if (!looks_decimal(s)) throw PreconditionError(std::string(what) + ": not a number: " + s);
  return Real(s);
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Session {
  RunConfig cfg;
  std::vector<std::string> warnings;
  std::optional<Cache> cache;

  SearchConfig search() const {
    SearchConfig s;
    s.seed = cfg.seed;
    s.max_steps = cfg.max_steps;
    return s;
  }

  std::optional<nlohmann::json> cache_get(const std::string& key) {
    if (!cache) return std::nullopt;
    auto hit = cache->get(key);
    if (!cache->warning().empty()) warnings.push_back(cache->warning());
    return hit;
  }
  void cache_put(const std::string& key, const nlohmann::json& payload) {
    if (!cache) return;
    try {
      cache->put(key, payload);
    } catch (const std::exception& e) {
      warnings.push_back(std::string("cache write failed: ") + e.what());
    }
  }

  // Simplification always runs on the canonical relabeling, so isomorphic
  // inputs give the same result whether or not it comes from the cache.
  nlohmann::json simplified(const DeltaComplex& K, const SearchConfig& s) {
    const DeltaComplex C = canonical_relabeling(K);
    const std::string key = cache_key(C, "simplify", to_json(s));
    if (auto hit = cache_get(key)) return *hit;
    auto res = simplify(C, s);
    nlohmann::json payload = to_json(res);
    payload["best"] = to_json(res.best);
    cache_put(key, payload);
    return payload;
  }

  Simplifier simplifier() {
    return [this](const DeltaComplex& K, const SearchConfig& s) {
      return simplified(K, s).at("best_size").get<std::size_t>();
    };
  }

  SubgroupChain chain(const DeltaComplex& K) {
    ChainStrategy strategy;
    strategy.index_ceiling = cfg.max_index;
    auto c = subgroup_chain(K, cfg.depth, strategy);
    if (c.truncated) warnings.push_back(c.note);
    return c;
  }

  StableSequence stable(const DeltaComplex& K) {
    return stable_sequence(K, chain(K), search(), simplifier());
  }
};

struct Input {
  DeltaComplex complex;
  nlohmann::json info;
};

inline Input load_input(const std::string& path) {
  if (path.empty()) throw PreconditionError("an input complex is required");
  const std::string text = read_text(path);
  Input in{parse_complex(text), nullptr};
  std::string id = std::filesystem::path(path).stem().string();
  auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_object() && doc.contains("name") && doc["name"].is_string())
    id = doc["name"].get<std::string>();
  in.info = {{"path", path},
             {"id", id},
             {"canonical_sha256", sha256_hex(canonical_encoding(in.complex))}};
  return in;
}

inline nlohmann::json validate_result(const DeltaComplex& K) {
  auto v = validate(K);
  std::vector<std::size_t> counts;
  for (int k = 0; k <= K.dimension(); ++k) counts.push_back(K.count(k));
  nlohmann::json out = {{"dimension", K.dimension()},
                        {"counts", counts},
                        {"euler_characteristic", euler_characteristic(K)},
                        {"pseudomanifold", v.is_pseudomanifold},
                        {"connected", v.is_connected},
                        {"orientable", v.orientation.has_value()},
                        {"diagnostics", v.diagnostics}};
  if (K.dimension() == 2 || K.dimension() == 3) out["closed_manifold"] = is_closed_manifold(K);
  else out["closed_manifold"] = nullptr;
  if (v.orientation) out["orientation"] = v.orientation->signs;
  return out;
}

inline nlohmann::json ledgers_json(const Ledgers& l, unsigned digits) {
  return {{"sv", to_json(l.sv, digits)}, {"isv", to_json(l.isv, digits)},
          {"stisv", to_json(l.stisv, digits)}};
}

inline nlohmann::json certificates_json(const Ledgers& l) {
  nlohmann::json out = nlohmann::json::object();
  auto one = [&](const char* name, const BoundLedger& b) {
    if (auto c = certify(b))
      out[name] = {{"value", to_string(c->value)},
                   {"lower", to_string(c->lower.provenance)},
                   {"upper", to_string(c->upper.provenance)}};
    else
      out[name] = nullptr;
  };
  one("sv", l.sv);
  one("isv", l.isv);
  one("stisv", l.stisv);
  return out;
}

inline nlohmann::json stable_rows(const StableSequence& s) {
  auto rows = nlohmann::json::array();
  for (const auto& l : s.levels)
    rows.push_back({{"d", l.index},
                    {"U", to_string(l.upper)},
                    {"ratio", to_string(l.ratio)},
                    {"provenance", to_string(l.source)}});
  return rows;
}

inline nlohmann::json run_command(Session& s) {
  const RunConfig& c = s.cfg;
  const unsigned digits = c.precision;
  if (c.command == "hyp") {
    HypParams p;
    p.n = c.n;
    p.digits = digits;
    if (!c.eps.empty()) p.eps = parse_real(c.eps, "--eps");
    if (!c.a.empty()) p.a = parse_real(c.a, "--a");
    if (!c.delta.empty()) p.delta = parse_real(c.delta, "--delta");
    if (!c.eta.empty()) p.eta = parse_real(c.eta, "--eta");
    if (p.delta) s.warnings.push_back("delta is recorded but enters no computed constant");
    if (p.n >= 4 && p.eps && p.eta)
      s.warnings.push_back("C_n needs v_n, which is only computed for n = 2, 3");
    if (p.a && p.n < 4) s.warnings.push_back("the angle window needs n >= 4");
    if ((p.eps || p.eta) && !(p.eps && p.a && p.eta))
      s.warnings.push_back("C_n needs all of eps, a and eta");
    nlohmann::json out = to_json(hyp_report(p), digits);
    if (!c.volume.empty() && (p.n == 2 || p.n == 3))
      out["gromov_thurston_sv"] =
          to_string(gromov_thurston_sv(parse_real(c.volume, "--volume"), p.n, digits), digits);
    return nlohmann::json{{"input", nullptr}, {"result", out}};
  }

  Input in = load_input(c.input);
  const DeltaComplex& K = in.complex;
  nlohmann::json result;
  if (c.command == "validate") {
    result = validate_result(K);
  } else if (c.command == "homology") {
    result = to_json(homology_profile(K, c.primes, digits), digits);
  } else if (c.command == "pi1") {
    auto p = presentation(K);
    result = {{"presentation", to_json(p)}, {"abelianization", to_json(abelianization(p))}};
  } else if (c.command == "subgroups" || c.command == "cover") {
    if (c.index > c.max_index)
      throw PreconditionError("--index exceeds --max-index");
    const std::size_t wanted = c.command == "cover" ? c.position + 1 : c.max_count;
    // records depend on the labeling, so the key is the exact serialization
    const std::string key =
        sha256_hex(serialize_complex(K) + "\nsubgroups\n" +
                   nlohmann::json{{"index", c.index},
                                  {"max_count", wanted == SIZE_MAX ? -1 : static_cast<long long>(wanted)}}
                       .dump());
    nlohmann::json records;
    if (auto hit = s.cache_get(key)) {
      records = *hit;
    } else {
      records = nlohmann::json::array();
      for (const auto& r : low_index_subgroups(presentation(K), c.index, c.max_index, wanted))
        records.push_back(to_json(r));
      s.cache_put(key, records);
    }
    if (c.command == "subgroups") {
      result = {{"index", c.index}, {"count", records.size()}, {"records", records}};
      if (wanted != SIZE_MAX && records.size() == wanted)
        s.warnings.push_back("stopped after --max-count records");
    } else {
      if (records.size() <= c.position)
        throw PreconditionError("--position " + std::to_string(c.position) + " but only " +
                                std::to_string(records.size()) + " subgroups of index " +
                                std::to_string(c.index));
      auto record = record_from_json(records[c.position]);
      auto cover = build_cover(K, record);
      result = {{"record", to_json(record)},
                {"degree", cover.degree},
                {"euler_characteristic", euler_characteristic(cover.complex)},
                {"base_euler_characteristic", euler_characteristic(K)},
                {"complex", to_json(cover.complex)}};
    }
  } else if (c.command == "simplify") {
    result = s.simplified(K, s.search());
    result["input_relabeling"] = "canonical";
    if (result.contains("note")) s.warnings.push_back(result["note"].get<std::string>());
  } else if (c.command == "stable" || c.command == "growth") {
    auto seq = s.stable(K);
    Ledgers l;
    post_stable(l, seq);
    result = to_json(seq);
    result["stable"] = stable_rows(seq);
    result["stisv"] = to_json(l.stisv, digits);
    if (c.command == "growth") {
      auto g = homology_growth_report(K, seq, c.primes);
      result["growth"] = to_json(g);
      if (g.violations) s.warnings.push_back("growth report has violations");
    }
  } else if (c.command == "bounds") {
    const auto h = homology_profile(K, c.primes, digits);
    Ledgers l = manifold_bounds(K, h);
    if (!c.sv.empty()) {
      if (c.sv.find_first_of(".eE") == std::string::npos)
        register_sv(l, parse_rational(c.sv), SvSource::user_input);
      else
        register_sv(l, parse_real(c.sv, "--sv"), SvSource::user_input);
    }
    if (!c.volume.empty()) {
      if (K.dimension() != 2 && K.dimension() != 3)
        throw PreconditionError("--volume needs a surface or a 3-manifold");
      register_sv(l, gromov_thurston_sv(parse_real(c.volume, "--volume"), K.dimension(), digits),
                  SvSource::gromov_thurston);
    }
    auto seq = s.stable(K);
    post_stable(l, seq);
    auto g = homology_growth_report(K, seq, c.primes);
    if (g.violations) s.warnings.push_back("growth report has violations");
    result = {{"manifold_id", in.info["id"]},
              {"dimension", K.dimension()},
              {"ledgers", ledgers_json(l, digits)},
              {"stable", stable_rows(seq)},
              {"best_stable_ratio", to_string(seq.best_ratio)},
              {"best_stable_ratio_label", "upper bound on stisv"},
              {"growth", to_json(g)},
              {"certificates", certificates_json(l)}};
  }
  return nlohmann::json{{"input", in.info}, {"result", result}};
}

inline nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json out = {{"precision", c.precision}};
  const std::string& m = c.command;
  if (m == "hyp") {
    out["n"] = c.n;
    for (auto [k, v] : {std::pair{"eps", &c.eps}, {"a", &c.a}, {"delta", &c.delta},
                        {"eta", &c.eta}, {"volume", &c.volume}})
      out[k] = v->empty() ? nlohmann::json(nullptr) : nlohmann::json(*v);
    return out;
  }
  if (m == "homology" || m == "growth" || m == "bounds") out["primes"] = c.primes;
  if (m == "subgroups" || m == "cover" || m == "stable" || m == "growth" || m == "bounds") {
    out["max_index"] = c.max_index;
  }
  if (m == "subgroups" || m == "cover") out["index"] = c.index;
  if (m == "subgroups" && c.max_count != SIZE_MAX) out["max_count"] = c.max_count;
  if (m == "cover") out["position"] = c.position;
  if (m == "simplify" || m == "stable" || m == "growth" || m == "bounds") {
    out["seed"] = c.seed;
    out["max_steps"] = c.max_steps;
  }
  if (m == "stable" || m == "growth" || m == "bounds") out["depth"] = c.depth;
  if (m == "bounds") {
    out["sv"] = c.sv.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.sv);
    out["volume"] = c.volume.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.volume);
  }
  return out;
}

inline void check_config(const RunConfig& c) {
  for (unsigned p : c.primes)
    if (!is_prime(p)) throw PreconditionError("--primes: " + std::to_string(p) + " is not prime");
  if (c.max_index < 1 || c.max_index > kMaxIndex)
    throw PreconditionError("--max-index must lie in [1, " + std::to_string(kMaxIndex) + "]");
  if (c.depth < 0 || c.depth > kDefaultDepthCeiling)
    throw PreconditionError("--depth must lie in [0, " + std::to_string(kDefaultDepthCeiling) + "]");
  if (c.precision < kMinPrecision || c.precision > kMaxPrecision)
    throw PreconditionError("--precision must lie in [" + std::to_string(kMinPrecision) + ", " +
                            std::to_string(kMaxPrecision) + "]");
  if (c.index < 1) throw PreconditionError("--index must be positive");
}

inline void write_output(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const auto tmp = std::filesystem::path(path + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace detail

// Exit status: 0 on success (warnings go in the report), 1 on input errors,
// 2 on an unknown or missing command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << usage();
    return 2;
  }
  const std::string& first = args.front();
  if (first == "-h" || first == "--help") {
    out << usage();
    return 0;
  }
  if (first == "--version") {
    out << kToolVersion << "\n";
    return 0;
  }
  const auto& cmds = commands();
  if (std::find(cmds.begin(), cmds.end(), first) == cmds.end()) {
    err << "svbench: unknown command '" << first << "'\n" << usage();
    return 2;
  }

  RunConfig cfg;
  cfg.command = first;
  if (const char* env = std::getenv(kCacheEnv)) cfg.cache_dir = env;

  CLI::App app{"svbench " + first, "svbench " + first};
  const bool needs_input = first != "hyp";
  if (needs_input) app.add_option("input", cfg.input, "complex document (JSON)")->required();
  app.add_option("--precision", cfg.precision, "decimal digits for reals");
  app.add_option("--out", cfg.out, "write the report here instead of stdout");
  app.add_option("--cache-dir", cfg.cache_dir, std::string("result cache (default $") + kCacheEnv + ")");
  if (first == "homology" || first == "growth" || first == "bounds")
    app.add_option("--primes", cfg.primes, "primes for mod-p ranks")->delimiter(',');
  if (first == "subgroups" || first == "cover" || first == "stable" || first == "growth" ||
      first == "bounds")
    app.add_option("--max-index", cfg.max_index, "index ceiling");
  if (first == "subgroups" || first == "cover") app.add_option("--index", cfg.index, "subgroup index");
  if (first == "subgroups") app.add_option("--max-count", cfg.max_count, "stop after this many");
  if (first == "cover") app.add_option("--position", cfg.position, "record position, 0-based");
  if (first == "simplify" || first == "stable" || first == "growth" || first == "bounds") {
    app.add_option("--seed", cfg.seed, "search seed");
    app.add_option("--max-steps", cfg.max_steps, "annealing steps");
  }
  if (first == "stable" || first == "growth" || first == "bounds")
    app.add_option("--depth", cfg.depth, "refinements of the cover chain");
  if (first == "bounds") {
    app.add_option("--sv", cfg.sv, "known simplicial volume (integer, p/q or decimal)");
    app.add_option("--volume", cfg.volume, "hyperbolic volume (Gromov-Thurston)");
  }
  if (first == "hyp") {
    app.add_option("--n", cfg.n, "dimension");
    app.add_option("--eps", cfg.eps);
    app.add_option("--a", cfg.a);
    app.add_option("--delta", cfg.delta);
    app.add_option("--eta", cfg.eta);
    app.add_option("--volume", cfg.volume, "hyperbolic volume (Gromov-Thurston)");
  }

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);  // CLI11 wants reverse order
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "svbench " << first << ": " << e.what() << "\n";
    return 1;
  }

  try {
    detail::check_config(cfg);
    PrecisionScope scope(cfg.precision + kGuardDigits);
    detail::Session s{cfg, {}, std::nullopt};
    if (!cfg.cache_dir.empty()) s.cache.emplace(cfg.cache_dir, kToolVersion);
    nlohmann::json body = detail::run_command(s);
    nlohmann::json report = {{"schema_version", kSchemaVersion},
                             {"tool_version", kToolVersion},
                             {"command", cfg.command},
                             {"input", body["input"]},
                             {"config", detail::config_json(cfg)},
                             {"warnings", s.warnings},
                             {"result", body["result"]}};
    const std::string text = report.dump(2) + "\n";
    if (cfg.out.empty()) out << text;
    else detail::write_output(cfg.out, text);
    return 0;
  } catch (const std::exception& e) {
    err << "svbench " << first << ": error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace svbench::cli

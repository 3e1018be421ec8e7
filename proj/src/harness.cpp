#include "rotor/harness.hpp"

#include <omp.h>
#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "rotor/errors.hpp"
#include "rotor/measure_lab.hpp"
#include "rotor/temporal.hpp"

namespace rotor {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join_path(const std::string& parent, const std::string& child) {
  if (child.empty()) return parent;
  if (parent.empty()) return child;
  return child[0] == '[' ? parent + child : parent + "." + child;
}

// Re-raise errors from nested parsers with the parent's path prepended.
template <class F>
auto under(const std::string& path, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    msg = msg.substr(std::min(msg.size(), e.path.size() + 2));
    throw ConfigError(join_path(path, e.path), msg);
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  } catch (const json::exception& e) {
    throw ConfigError(path, e.what());
  }
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(join_path(path, key), "missing");
  return j.at(key);
}

std::uint64_t as_u64(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && j.get<std::int64_t>() < 0 && !j.is_number_unsigned()))
    throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::int64_t as_pos_int(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 1) throw ConfigError(path, "expected an integer >= 1");
  return j.get<std::int64_t>();
}

BigInt as_bigint(const json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return BigInt(std::to_string(j.get<std::int64_t>()));
    if (j.is_string()) return parse_bigint(j.get<std::string>());
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "expected an integer or integer string");
}

Rational as_rational(const json& j, const std::string& path) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(BigInt(std::to_string(j.get<std::int64_t>())));
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "expected \"p/q\" or an integer");
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& path) {
  for (const auto& [k, v] : j.items())
    if (std::find_if(keys.begin(), keys.end(), [&](const char* s) { return k == s; }) == keys.end())
      throw ConfigError(join_path(path, k), "unknown field");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// Shortest round-trip form, so the same doubles always print the same bytes.
std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

// ---------------------------------------------------------------- specs

SawtoothCombo observable_from_spec(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "h") return SawtoothCombo::sawtooth();
    throw ConfigError(path, "unknown observable \"" + j.get<std::string>() + "\" (use \"h\" or {b, beta})");
  }
  if (!j.is_object()) throw ConfigError(path, "expected \"h\" or an object with b and beta");
  only_keys(j, {"b", "beta"}, path);
  return under(path, [&] { return SawtoothCombo::from_json(j); });
}

AlphaBuild alpha_from_spec(const json& j, const SawtoothCombo& f, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object with a \"kind\"");
  const json& kj = field(j, "kind", path);
  if (!kj.is_string()) throw ConfigError(join_path(path, "kind"), "expected a string");
  std::string kind = kj.get<std::string>();
  if (kind == "constant") {
    only_keys(j, {"kind", "a"}, path);
    BigInt a = as_bigint(field(j, "a", path), join_path(path, "a"));
    if (a < 1) throw ConfigError(join_path(path, "a"), "digit must be >= 1");
    return {constant_lazy(a), json()};
  }
  if (kind == "digits") {
    only_keys(j, {"kind", "digits", "exact"}, path);
    bool exact = false;
    if (j.contains("exact")) {
      if (!j["exact"].is_boolean()) throw ConfigError(join_path(path, "exact"), "expected a boolean");
      exact = j["exact"].get<bool>();
    }
    const json& d = field(j, "digits", path);
    if (!d.is_array() || d.empty()) throw ConfigError(join_path(path, "digits"), "expected a non-empty array");
    return {under(join_path(path, "digits"), [&] { return CfDigits::from_json(d, exact); }), json()};
  }
  if (kind == "rational") {
    only_keys(j, {"kind", "value"}, path);
    Rational v = as_rational(field(j, "value", path), join_path(path, "value"));
    if (v <= 0 || v >= 1) throw ConfigError(join_path(path, "value"), "alpha must lie in (0, 1)");
    return {expand_rational(v.get_num(), v.get_den()), json()};
  }
  if (kind == "gauss_random") {
    only_keys(j, {"kind", "len", "seed"}, path);
    auto len = as_pos_int(field(j, "len", path), join_path(path, "len"));
    std::uint64_t seed = j.contains("seed") ? as_u64(j["seed"], join_path(path, "seed")) : 0;
    return {gauss_random(std::size_t(len), seed), json()};
  }
  if (kind == "build_in_A") {
    only_keys(j, {"kind", "stages", "M", "search_budget", "filler", "seed", "eps0"}, path);
    std::size_t stages = j.contains("stages") ? std::size_t(as_pos_int(j["stages"], join_path(path, "stages"))) : 3;
    BigInt M = j.contains("M") ? as_bigint(j["M"], join_path(path, "M")) : BigInt(1);
    if (M < 1) throw ConfigError(join_path(path, "M"), "must be >= 1");
    std::size_t budget = j.contains("search_budget") ? as_u64(j["search_budget"], join_path(path, "search_budget")) : 1000;
    std::uint64_t seed = j.contains("seed") ? as_u64(j["seed"], join_path(path, "seed")) : 0;
    Filler filler = Filler::Ones;
    if (j.contains("filler")) {
      std::string s = j["filler"].is_string() ? j["filler"].get<std::string>() : "";
      if (s == "gauss") filler = Filler::Gauss;
      else if (s != "ones") throw ConfigError(join_path(path, "filler"), "expected \"ones\" or \"gauss\"");
    }
    double eps0 = default_eps0(f);
    if (j.contains("eps0")) {
      if (!j["eps0"].is_number() || j["eps0"].get<double>() < 0)
        throw ConfigError(join_path(path, "eps0"), "expected a non-negative number");
      eps0 = j["eps0"].get<double>();
    }
    return under(path, [&] {
      auto nset = syndetic_scan(f, eps0, 1000);
      auto built = build_in_A(nset, M, stages, budget, seed, filler);
      return AlphaBuild{built.digits, built.plan.to_json()};
    });
  }
  throw ConfigError(join_path(path, "kind"), "unknown kind \"" + kind + "\"");
}

Rational x_from_spec(const json& j, const std::string& path) {
  auto check = [&](const Rational& x) {
    if (x < 0 || x >= 1) throw ConfigError(path, "x must lie in [0, 1)");
    return x;
  };
  if (j.is_string()) return check(as_rational(j, path));
  if (!j.is_object()) throw ConfigError(path, "expected \"p/q\" or an object with a \"kind\"");
  const json& kj = field(j, "kind", path);
  std::string kind = kj.is_string() ? kj.get<std::string>() : "";
  if (kind == "rational") {
    only_keys(j, {"kind", "value"}, path);
    return check(as_rational(field(j, "value", path), join_path(path, "value")));
  }
  if (kind == "random") {
    only_keys(j, {"kind", "seed", "index"}, path);
    std::uint64_t seed = j.contains("seed") ? as_u64(j["seed"], join_path(path, "seed")) : 0;
    std::uint64_t index = j.contains("index") ? as_u64(j["index"], join_path(path, "index")) : 0;
    return random_x(seed, index);
  }
  throw ConfigError(join_path(path, "kind"), "unknown kind \"" + kind + "\"");
}

json alpha_spec_from_cli(const std::string& s) {
  auto parts = split(s, ':');
  const std::string& head = parts.empty() ? s : parts[0];
  auto arg = [&](std::size_t i) -> const std::string& {
    if (parts.size() <= i) throw ConfigError("alpha", "\"" + s + "\" needs more fields");
    return parts[i];
  };
  auto integer = [&](std::size_t i) {
    try {
      std::size_t pos = 0;
      long long v = std::stoll(arg(i), &pos);
      if (pos != arg(i).size()) throw std::invalid_argument("");
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("alpha", "\"" + arg(i) + "\" is not an integer");
    }
  };
  if (head == "golden") return {{"kind", "constant"}, {"a", 1}};
  if (head == "constant") return {{"kind", "constant"}, {"a", arg(1)}};
  if (head == "digits") {
    json d = json::array();
    for (const auto& t : split(arg(1), ',')) d.push_back(t);
    return {{"kind", "digits"}, {"digits", d}};
  }
  if (head == "rational") return {{"kind", "rational"}, {"value", arg(1)}};
  if (head == "gauss") {
    json j{{"kind", "gauss_random"}, {"len", integer(1)}};
    if (parts.size() > 2) j["seed"] = integer(2);
    return j;
  }
  if (head == "planted") {
    json j{{"kind", "build_in_A"}};
    if (parts.size() > 1) j["stages"] = integer(1);
    if (parts.size() > 2) j["M"] = integer(2);
    return j;
  }
  throw ConfigError("alpha", "unknown form \"" + s + "\"");
}

json observable_spec_from_cli(const std::string& s) {
  if (s == "h") return "h";
  json j = json::object();
  for (const auto& part : split(s, ';')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("observable", "expected key=values in \"" + part + "\"");
    std::string key = part.substr(0, eq);
    if (key != "b" && key != "beta") throw ConfigError("observable", "unknown key \"" + key + "\"");
    json arr = json::array();
    for (const auto& t : split(part.substr(eq + 1), ',')) arr.push_back(t);
    j[key] = arr;
  }
  return j;
}

json x_spec_from_cli(const std::string& s) {
  auto parts = split(s, ':');
  if (parts.size() == 3 && parts[0] == "random") {
    try {
      return {{"kind", "random"}, {"seed", std::stoull(parts[1])}, {"index", std::stoull(parts[2])}};
    } catch (const std::logic_error&) {
      throw ConfigError("x", "expected random:SEED:INDEX");
    }
  }
  return s;
}

// ---------------------------------------------------------------- digests, threads

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string config_digest(const json& config) { return sha256_hex(config.dump()); }

int configure_threads(std::optional<int> cli_threads) {
  std::optional<int> n = cli_threads;
  if (!n) {
    if (const char* env = std::getenv("ROTORLAB_THREADS")) {
      try {
        n = std::stoi(env);
      } catch (const std::logic_error&) {
        throw ConfigError("ROTORLAB_THREADS", std::string("not an integer: ") + env);
      }
    }
  }
  if (n) {
    if (*n < 1) throw ConfigError(cli_threads ? "--threads" : "ROTORLAB_THREADS", "must be >= 1");
    omp_set_num_threads(*n);
  }
  return omp_get_max_threads();
}

// ---------------------------------------------------------------- config

namespace {
const std::set<std::string> kTasks{"ensemble", "scan", "syndetic", "schedule"};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  only_keys(j, {"observable", "alpha", "x", "N", "guard", "grid", "tasks", "acceptance", "seed", "out_dir", "format"}, "");
  ExperimentConfig c;
  if (j.contains("seed")) c.seed = as_u64(j["seed"], "seed");
  if (j.contains("observable")) c.observable = j["observable"];
  c.alpha = j.contains("alpha") ? j["alpha"] : json{{"kind", "constant"}, {"a", 1}};
  c.x = j.contains("x") ? j["x"] : json{{"kind", "random"}, {"seed", c.seed}, {"index", 0}};
  if (j.contains("N")) c.N = as_pos_int(j["N"], "N");
  if (j.contains("guard")) {
    c.guard = as_bigint(j["guard"], "guard");
    if (c.guard < 1) throw ConfigError("guard", "must be >= 1");
  }
  if (j.contains("grid")) {
    if (!j["grid"].is_string()) throw ConfigError("grid", "expected a grid string");
    c.grid = j["grid"].get<std::string>();
    under("grid", [&] { return parse_grid(c.grid); });
  }
  if (j.contains("tasks")) {
    const json& t = j["tasks"];
    if (!t.is_array()) throw ConfigError("tasks", "expected an array");
    c.tasks.clear();
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::string p = "tasks[" + std::to_string(i) + "]";
      if (!t[i].is_string() || !kTasks.count(t[i].get<std::string>()))
        throw ConfigError(p, "expected one of ensemble, scan, syndetic, schedule");
      c.tasks.push_back(t[i].get<std::string>());
    }
  }
  if (j.contains("acceptance")) {
    if (!j["acceptance"].is_string()) throw ConfigError("acceptance", "expected a suite name");
    c.acceptance = j["acceptance"].get<std::string>();
    if (!c.acceptance.empty()) {
      try {
        parse_suite(c.acceptance);
      } catch (const ConfigError& e) {
        throw ConfigError("acceptance", "expected exact, statistical, measure or all");
      }
    }
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string() || j["out_dir"].get<std::string>().empty())
      throw ConfigError("out_dir", "expected a non-empty path");
    c.out_dir = j["out_dir"].get<std::string>();
  }
  if (j.contains("format")) {
    c.format = j["format"].is_string() ? j["format"].get<std::string>() : "";
    if (c.format != "csv" && c.format != "json") throw ConfigError("format", "expected \"csv\" or \"json\"");
  }
  // Structural checks of the nested specs; gauss_random and build_in_A are
  // cheap at configuration sizes.
  auto f = observable_from_spec(c.observable, "observable");
  alpha_from_spec(c.alpha, f, "alpha");
  x_from_spec(c.x, "x");
  return c;
}

json ExperimentConfig::to_json() const {
  return {{"observable", observable}, {"alpha", alpha}, {"x", x}, {"N", N}, {"guard", guard.get_str()},
          {"grid", grid}, {"tasks", tasks}, {"acceptance", acceptance}, {"seed", seed},
          {"out_dir", out_dir}, {"format", format}};
}

// ---------------------------------------------------------------- run

namespace {

struct Writer {
  fs::path dir;
  std::string digest;
  std::vector<std::string> files;

  void put(const std::string& name, const std::string& body) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw Error("cannot write " + (dir / name).string());
    os << body;
    files.push_back(name);
  }
  void csv(const std::string& name, const std::string& body) { put(name, "# config_digest=" + digest + "\n" + body); }
  void json_file(const std::string& name, json j) {
    j["config_digest"] = digest;
    put(name, j.dump(2) + "\n");
  }
};

std::vector<std::int64_t> default_grid(std::int64_t N) {
  std::vector<std::int64_t> g;
  for (double v = 10; v < double(N); v *= 1.5) g.push_back(std::int64_t(v));
  g.push_back(N);
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
  json canon = cfg.to_json();
  canon.erase("out_dir");  // where results land does not change them
  Writer w{cfg.out_dir, config_digest(canon), {}};
  fs::create_directories(w.dir);

  RunResult res;
  auto f = observable_from_spec(cfg.observable, "observable");
  auto alpha = alpha_from_spec(cfg.alpha, f, "alpha");
  Rational x = x_from_spec(cfg.x, "x");
  auto ctx = make_context(alpha.digits, BigInt(std::to_string(cfg.N)), cfg.guard);

  json tasks = json::object();
  std::optional<TemporalEnsemble> ens;
  auto ensure_ensemble = [&]() -> const TemporalEnsemble& {
    if (!ens) ens = ensemble(f, ctx, x, cfg.N);
    return *ens;
  };
  bool as_json = cfg.format == "json";

  for (const auto& t : cfg.tasks) {
    try {
      if (t == "ensemble") {
        const auto& e = ensure_ensemble();
        if (as_json) {
          w.json_file("ensemble.json", {{"N", cfg.N}, {"x", to_string(x)}, {"max_error_bound", to_string(e.max_error_bound)},
                                        {"values", e.values}});
        } else {
          std::string body = "n,S_n\n";
          for (std::size_t i = 0; i < e.values.size(); ++i) body += std::to_string(i + 1) + "," + num(e.values[i]) + "\n";
          w.csv("ensemble.csv", body);
        }
        tasks[t] = {{"ok", true}, {"mean", e.mean()}, {"max_error_bound", to_string(e.max_error_bound)}};
      } else if (t == "scan") {
        auto grid = cfg.grid.empty() ? default_grid(cfg.N) : parse_grid(cfg.grid);
        for (auto n : grid)
          if (n > cfg.N) throw DomainError("grid point " + std::to_string(n) + " exceeds N = " + std::to_string(cfg.N));
        auto rows = scan_values(ensure_ensemble().values, grid);
        if (as_json) {
          json arr = json::array();
          for (const auto& r : rows)
            arr.push_back({{"N", r.N}, {"A_star", r.star.A}, {"B_star", r.star.B}, {"degenerate", r.star.degenerate},
                           {"ks_u01", r.ks_u01}, {"ks_gauss", r.ks_gauss}, {"ks_conv", r.ks_conv}});
          w.json_file("scan.json", {{"rows", arr}});
        } else {
          w.csv("scan.csv", scan_csv(rows));
        }
        tasks[t] = {{"ok", true}, {"rows", rows.size()}};
      } else if (t == "syndetic") {
        auto rep = syndetic_scan(f, default_eps0(f), 1000);
        if (as_json) w.json_file("syndetic.json", rep.to_json());
        else w.csv("syndetic.csv", rep.to_csv());
        tasks[t] = {{"ok", true}, {"max_gap", rep.max_gap}, {"lower_density", rep.lower_density_estimate}};
      } else if (t == "schedule") {
        if (alpha.plan.is_null()) throw DomainError("schedule needs an alpha of kind build_in_A");
        json entries = json::array();
        std::string body = "k,n_k,q_nk,L_k,N_k,mu,A_k,B_k,status\n";
        const auto& stages = alpha.plan["stages"];
        for (std::size_t k = 1; k <= stages.size(); ++k) {
          const auto& st = stages[k - 1];
          std::size_t n_k = st["n_k"].get<std::size_t>();
          try {
            auto e = schedule_thm_uniform(f, ctx, x, k, n_k, parse_bigint(st["r_k"].get<std::string>()));
            entries.push_back(e.to_json());
            body += std::to_string(k) + "," + std::to_string(n_k) + "," + e.q_nk.get_str() + "," + e.L_k.get_str() + "," +
                    e.N_k.get_str() + "," + to_string(e.mu) + "," + to_string(e.A_k) + "," + to_string(e.B_k) + ",ok\n";
          } catch (const Error& err) {
            entries.push_back({{"k", k}, {"n_k", n_k}, {"error", err.what()}});
            body += std::to_string(k) + "," + std::to_string(n_k) + ",,,,,,,\"" + err.what() + "\"\n";
          }
        }
        if (as_json) w.json_file("schedule.json", {{"entries", entries}});
        else w.csv("schedule.csv", body);
        tasks[t] = {{"ok", true}, {"entries", entries.size()}};
      }
    } catch (const std::exception& e) {
      tasks[t] = {{"ok", false}, {"error", e.what()}};
      res.ok = false;
    }
  }

  json acceptance = json::array();
  if (!cfg.acceptance.empty()) {
    Suite s = parse_suite(cfg.acceptance);
    std::vector<CriterionResult> results;
    std::vector<json> rows;
    if (s == Suite::Measure || s == Suite::All) {
      auto m = run_measure_battery(rows);
      results.insert(results.end(), m.begin(), m.end());
    }
    if (s != Suite::Measure) {
      auto c = run_criteria(s);
      results.insert(results.begin(), c.begin(), c.end());
    }
    std::string body = "id,suite,name,passed,seed\n";
    for (const auto& r : results) {
      acceptance.push_back({{"id", r.id}, {"suite", r.suite}, {"name", r.name}, {"passed", r.passed},
                            {"detail", r.detail}, {"seed", r.seed}});
      body += std::to_string(r.id) + "," + r.suite + ",\"" + r.name + "\"," + (r.passed ? "1" : "0") + "," +
              std::to_string(r.seed) + "\n";
      if (r.suite == "exact" && !r.passed) res.ok = false;
    }
    if (as_json) w.json_file("acceptance.json", {{"results", acceptance}});
    else w.csv("acceptance.csv", body);
    if (!rows.empty()) w.json_file("measure_rows.json", {{"rows", rows}});
  }

  res.summary = {{"config_digest", w.digest}, {"config", canon}, {"context", ctx.to_json()},
                 {"x", to_string(x)}, {"tasks", tasks}, {"ok", res.ok}};
  if (!alpha.plan.is_null()) res.summary["plan"] = alpha.plan;
  if (!acceptance.empty()) res.summary["acceptance"] = acceptance;
  w.json_file("summary.json", res.summary);

  json manifest = json::array();
  std::vector<std::string> sorted = w.files;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& name : sorted) {
    std::ifstream is(w.dir / name, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    manifest.push_back({{"path", name}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
  }
  w.json_file("manifest.json", {{"files", manifest}});
  res.files = w.files;
  return res;
}

// ---------------------------------------------------------------- verify

Suite parse_suite(const std::string& s) {
  if (s == "exact") return Suite::Exact;
  if (s == "statistical") return Suite::Statistical;
  if (s == "measure") return Suite::Measure;
  if (s == "all") return Suite::All;
  throw ConfigError("suite", "expected exact, statistical, measure or all; got \"" + s + "\"");
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS " : "FAIL ");
  if (r.id > 0) os << "[" << std::setw(2) << r.id << "] ";
  else os << "[ m] ";
  os << r.name << " (" << r.suite << ", seed " << r.seed << ", " << std::fixed << std::setprecision(2) << r.seconds
     << " s): " << r.detail;
  return os.str();
}

int verify(Suite suite, std::ostream& out, const std::string& out_dir, const FaultInjection& fault) {
  auto sink = [&](const CriterionResult& r) { out << format_line(r) << std::endl; };
  std::vector<CriterionResult> results;
  std::vector<json> rows;
  if (suite != Suite::Measure) results = run_criteria(suite, fault, sink);
  if (suite == Suite::Measure || suite == Suite::All) {
    auto m = run_measure_battery(rows, sink);
    results.insert(results.end(), m.begin(), m.end());
  }
  std::size_t passed = 0;
  bool exact_failed = false;
  for (const auto& r : results) {
    passed += r.passed;
    if (r.suite == "exact" && !r.passed) exact_failed = true;
  }
  out << passed << "/" << results.size() << " passed" << std::endl;

  if (!out_dir.empty()) {
    json canon{{"suite", suite == Suite::Exact ? "exact" : suite == Suite::Statistical ? "statistical"
                         : suite == Suite::Measure ? "measure" : "all"},
               {"tamper_cylinder", fault.tamper_cylinder}};
    Writer w{out_dir, config_digest(canon), {}};
    fs::create_directories(w.dir);
    std::string body = "id,suite,name,passed,seed,detail\n";
    for (const auto& r : results) {
      std::string detail = r.detail;
      std::replace(detail.begin(), detail.end(), '"', '\'');
      body += std::to_string(r.id) + "," + r.suite + ",\"" + r.name + "\"," + (r.passed ? "1" : "0") + "," +
              std::to_string(r.seed) + ",\"" + detail + "\"\n";
    }
    w.csv("verify_report.csv", body);
    if (!rows.empty()) {
      w.json_file("measure_rows.json", {{"rows", rows}});
      std::string sum = "op,params,mean,stderr,n,seed\n";
      for (const auto& r : rows) {
        std::string params = r["params"].dump();
        std::replace(params.begin(), params.end(), '"', '\'');
        sum += r["op"].get<std::string>() + ",\"" + params + "\"," + num(r["mean"].get<double>()) + "," +
               num(r["stderr"].get<double>()) + "," + std::to_string(r["n"].get<std::uint64_t>()) + "," +
               std::to_string(r["seed"].get<std::uint64_t>()) + "\n";
      }
      w.csv("measure_summary.csv", sum);
    }
  }
  return exact_failed ? 1 : 0;
}

}  // namespace rotor

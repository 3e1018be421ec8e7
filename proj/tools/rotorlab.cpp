// rotorlab: command-line front end. Subcommands mirror the library modules;
// `run` executes a JSON experiment config and `verify` the acceptance battery.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "rotor/errors.hpp"
#include "rotor/harness.hpp"
#include "rotor/measure_lab.hpp"
#include "rotor/temporal.hpp"

using namespace rotor;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<int> threads;
  std::string format = "csv";
};

// A file holding JSON, else the short command-line form. A bare JSON array of
// digits is accepted for alpha.
json alpha_arg(const std::string& s) {
  if (fs::is_regular_file(s)) {
    std::ifstream is(s);
    json j;
    try {
      j = json::parse(is);
    } catch (const json::exception& e) {
      throw ConfigError("alpha", s + ": " + e.what());
    }
    return j.is_array() ? json{{"kind", "digits"}, {"digits", j}} : j;
  }
  return alpha_spec_from_cli(s);
}

json observable_arg(const std::string& s) {
  if (fs::is_regular_file(s)) {
    std::ifstream is(s);
    try {
      return json::parse(is);
    } catch (const json::exception& e) {
      throw ConfigError("observable", s + ": " + e.what());
    }
  }
  return observable_spec_from_cli(s);
}

std::string cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

// Writes to stdout, or to <out>/<name>.<format> when --out is set. The request
// (subcommand and its arguments) is digested into the header row.
void emit(const Globals& g, const std::string& name, const json& request, json payload,
          const std::string& csv_body = "") {
  std::string digest = config_digest(request);
  std::string text;
  if (g.format == "json") {
    payload["config_digest"] = digest;
    text = payload.dump(2) + "\n";
  } else {
    text = "# config_digest=" + digest + "\n";
    if (!csv_body.empty()) {
      text += csv_body;
    } else {
      text += "key,value\n";
      for (const auto& [k, v] : payload.items()) text += k + "," + cell(v) + "\n";
    }
  }
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(g.out);
  fs::path p = fs::path(g.out) / (name + "." + g.format);
  std::ofstream(p, std::ios::binary) << text;
  std::cerr << "wrote " << p.string() << "\n";
}

json rows_to_json(const std::vector<ScanRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"N", r.N}, {"A_star", r.star.A}, {"B_star", r.star.B}, {"degenerate", r.star.degenerate},
                   {"ks_u01", r.ks_u01}, {"ks_gauss", r.ks_gauss}, {"ks_conv", r.ks_conv}});
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotorlab: Birkhoff sums of sawtooth observables over circle rotations"};
  app.require_subcommand(0, 1);
  Globals g;
  std::optional<int> threads;
  app.add_option("--config", g.config, "experiment config (JSON); runs it when no subcommand is given");
  app.add_option("--seed", g.seed, "base seed for random streams");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--threads", threads, "OpenMP threads (fallback: ROTORLAB_THREADS)")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.fallthrough();

  std::function<int()> action;
  std::string alpha_s = "golden", f_s = "h", x_s;
  std::string n_s = "1000";
  std::string guard_s;

  auto ctx_for = [&](const CfDigits& d, const BigInt& n_max) {
    return guard_s.empty() ? make_context(d, n_max) : make_context(d, n_max, parse_bigint(guard_s));
  };
  auto load = [&] {
    auto f = observable_from_spec(observable_arg(f_s), "observable");
    auto a = alpha_from_spec(alpha_arg(alpha_s), f, "alpha");
    return std::make_pair(f, a);
  };
  auto x_or_random = [&]() {
    return x_s.empty() ? random_x(g.seed, 0) : x_from_spec(x_spec_from_cli(x_s), "x");
  };
  auto base_request = [&](const std::string& cmd) {
    return json{{"cmd", cmd}, {"alpha", alpha_s}, {"f", f_s}, {"x", x_s}, {"n", n_s}, {"guard", guard_s},
                {"seed", g.seed}};
  };

  // ------------------------------------------------------------ run
  auto* run_cmd = app.add_subcommand("run", "execute an experiment config");
  run_cmd->add_option("config", g.config, "config path");
  auto do_run = [&]() -> int {
    std::ifstream is(g.config);
    if (!is) throw ConfigError("config", "cannot open " + g.config);
    json j;
    try {
      j = json::parse(is);
    } catch (const json::exception& e) {
      throw ConfigError("config", e.what());
    }
    if (!g.out.empty()) j["out_dir"] = g.out;
    if (app.count("--seed") && !j.contains("seed")) j["seed"] = g.seed;
    if (app.count("--format")) j["format"] = g.format;
    auto cfg = ExperimentConfig::from_json(j);
    auto res = run(cfg);
    for (const auto& f : res.files) std::cout << (fs::path(cfg.out_dir) / f).string() << "\n";
    std::cout << (res.ok ? "ok" : "completed with failures (see summary.json)") << "\n";
    if (res.summary.contains("acceptance"))
      for (const auto& r : res.summary["acceptance"])
        if (r["suite"] == "exact" && !r["passed"].get<bool>()) return 1;
    return 0;
  };
  run_cmd->callback([&] { action = do_run; });

  // ------------------------------------------------------------ cf
  auto* cf = app.add_subcommand("cf", "continued fractions and Ostrowski numeration");
  cf->require_subcommand(1);
  {
    auto* ex = cf->add_subcommand("expand", "digits of a rational p/q");
    static std::string value;
    ex->add_option("value", value, "p/q")->required();
    ex->callback([&] {
      action = [&] {
        Rational v = parse_rational(value);
        auto d = expand_rational(v.get_num(), v.get_den());
        json p{{"value", to_string(v)}, {"digits", d.to_json()}};
        emit(g, "cf_expand", {{"cmd", "cf expand"}, {"value", value}}, p);
        return 0;
      };
    });
    auto* cv = cf->add_subcommand("convergents", "p_k/q_k for k <= upto");
    static std::size_t upto = 10;
    cv->add_option("--alpha", alpha_s, "alpha spec or digits file");
    cv->add_option("--upto", upto);
    cv->callback([&] {
      action = [&] {
        auto d = alpha_from_spec(alpha_arg(alpha_s), SawtoothCombo::sawtooth()).digits;
        auto conv = convergents(d, upto);
        std::string body = "k,p,q\n";
        json arr = json::array();
        for (const auto& c : conv) {
          body += std::to_string(c.index) + "," + c.p.get_str() + "," + c.q.get_str() + "\n";
          arr.push_back({{"k", c.index}, {"p", c.p.get_str()}, {"q", c.q.get_str()}});
        }
        emit(g, "convergents", {{"cmd", "cf convergents"}, {"alpha", alpha_s}, {"upto", upto}}, {{"convergents", arr}},
             body);
        return 0;
      };
    });
    auto* os = cf->add_subcommand("ostrowski", "Ostrowski digits of n");
    os->add_option("--alpha", alpha_s, "alpha spec or digits file");
    os->add_option("--n", n_s, "non-negative integer")->required();
    os->callback([&] {
      action = [&] {
        auto d = alpha_from_spec(alpha_arg(alpha_s), SawtoothCombo::sawtooth()).digits;
        BigInt n = parse_bigint(n_s);
        auto rep = ostrowski_encode(n, d);
        json b = json::array();
        for (const auto& v : rep.b) b.push_back(v.get_str());
        emit(g, "ostrowski", {{"cmd", "cf ostrowski"}, {"alpha", alpha_s}, {"n", n_s}},
             {{"n", n_s}, {"b", b}, {"decoded", ostrowski_decode(rep, d).get_str()},
              {"valid", ostrowski_violation(rep, d).empty()}});
        return 0;
      };
    });
    auto* cy = cf->add_subcommand("cylinder", "cylinder set of a digit prefix");
    static std::string digits;
    cy->add_option("digits", digits, "comma-separated digits")->required();
    cy->callback([&] {
      action = [&] {
        auto d = alpha_from_spec(alpha_spec_from_cli("digits:" + digits), SawtoothCombo::sawtooth()).digits;
        auto c = cylinder(d.take(d.available()));
        emit(g, "cylinder", {{"cmd", "cf cylinder"}, {"digits", digits}},
             {{"interval", c.interval.to_string()}, {"measure", to_string(c.measure)}});
        return 0;
      };
    });
  }

  // ------------------------------------------------------------ observable
  auto* ob = app.add_subcommand("observable", "sawtooth combinations and the syndetic set");
  {
    static double eps0 = -1;
    static std::int64_t n_max = 1000;
    ob->add_option("--f", f_s, "\"h\", \"b=...;beta=...\" or a JSON file");
    ob->add_option("--eps0", eps0, "threshold on D(beta n); default half the maximum");
    ob->add_option("--nmax", n_max)->check(CLI::PositiveNumber);
    ob->callback([&] {
      action = [&] {
        auto f = observable_from_spec(observable_arg(f_s));
        double e = eps0 >= 0 ? eps0 : default_eps0(f);
        auto rep = syndetic_scan(f, e, n_max);
        json p = rep.to_json();
        p["variation"] = to_string(variation(f));
        p["l2_norm_sq"] = to_string(l2_norm_sq(f));
        emit(g, "syndetic", {{"cmd", "observable"}, {"f", f_s}, {"eps0", e}, {"nmax", n_max}}, p, rep.to_csv());
        return 0;
      };
    });
  }

  // ------------------------------------------------------------ birkhoff
  auto* bk = app.add_subcommand("birkhoff", "certified S_n(alpha, x)");
  {
    static bool naive = false;
    bk->add_option("--alpha", alpha_s, "alpha spec or digits file");
    bk->add_option("--f", f_s, "observable");
    bk->add_option("--x", x_s, "p/q or random:SEED:INDEX (default random:<seed>:0)");
    bk->add_option("--n", n_s, "number of terms")->required();
    bk->add_option("--guard", guard_s, "surrogate guard factor (default 2^32)");
    bk->add_flag("--naive", naive, "direct enumeration instead of the floor-sum route");
    bk->callback([&] {
      action = [&] {
        auto [f, a] = load();
        BigInt n = parse_bigint(n_s);
        if (n < 0) throw ConfigError("n", "must be >= 0");
        auto ctx = ctx_for(a.digits, n);
        Rational x = x_or_random();
        auto r = naive ? sum_naive(f, ctx, x, n) : sum_fast(f, ctx, x, n);
        json p = r.to_json();
        p["x"] = to_string(x);
        p["n"] = n_s;
        p["route"] = naive ? "naive" : "fast";
        auto req = base_request("birkhoff");
        req["naive"] = naive;
        emit(g, "birkhoff", req, p);
        return 0;
      };
    });
  }

  // ------------------------------------------------------------ temporal
  auto* tp = app.add_subcommand("temporal", "temporal distributions of S_n at a fixed x");
  tp->require_subcommand(1);
  {
    static std::string grid = "geometric:10:1000:1.5";
    static std::size_t stages = 3;
    auto common = [&](CLI::App* c) {
      c->add_option("--alpha", alpha_s, "alpha spec or digits file");
      c->add_option("--f", f_s, "observable");
      c->add_option("--x", x_s, "p/q or random:SEED:INDEX");
      c->add_option("--guard", guard_s, "surrogate guard factor");
    };
    auto* en = tp->add_subcommand("ensemble", "S_1..S_N");
    common(en);
    en->add_option("--N", n_s, "horizon");
    en->callback([&] {
      action = [&] {
        auto [f, a] = load();
        std::int64_t N = std::stoll(n_s);
        if (N < 1) throw ConfigError("N", "must be >= 1");
        auto ctx = ctx_for(a.digits, BigInt(n_s));
        auto e = ensemble(f, ctx, x_or_random(), N);
        std::string body = "n,S_n\n";
        for (std::size_t i = 0; i < e.values.size(); ++i) body += std::to_string(i + 1) + "," + json(e.values[i]).dump() + "\n";
        emit(g, "ensemble", base_request("temporal ensemble"),
             {{"x", to_string(e.x)}, {"max_error_bound", to_string(e.max_error_bound)}, {"values", e.values}}, body);
        return 0;
      };
    });
    auto* sc = tp->add_subcommand("scan", "star normalization and KS distances over a grid of N");
    common(sc);
    sc->add_option("--grid", grid, "geometric:A:B:R, linear:A:B:STEP or list:N1,N2,...");
    sc->callback([&] {
      action = [&] {
        auto [f, a] = load();
        auto pts = parse_grid(grid);
        auto ctx = ctx_for(a.digits, BigInt(std::to_string(*std::max_element(pts.begin(), pts.end()))));
        auto rows = scan_tdlt(f, ctx, x_or_random(), pts);
        auto req = base_request("temporal scan");
        req["grid"] = grid;
        emit(g, "scan", req, {{"rows", rows_to_json(rows)}}, scan_csv(rows));
        return 0;
      };
    });
    auto* sch = tp->add_subcommand("schedule", "N_k, A_k, B_k for a planted alpha");
    sch->add_option("--f", f_s, "observable");
    sch->add_option("--x", x_s, "p/q or random:SEED:INDEX");
    sch->add_option("--stages", stages)->check(CLI::PositiveNumber);
    sch->callback([&] {
      action = [&] {
        auto f = observable_from_spec(observable_arg(f_s));
        auto a = alpha_from_spec(json{{"kind", "build_in_A"}, {"stages", stages}}, f);
        auto ctx = make_context(a.digits, 1000000);
        Rational x = x_or_random();
        json entries = json::array();
        std::string body = "k,n_k,q_nk,L_k,N_k,mu,A_k,B_k,status\n";
        for (std::size_t k = 1; k <= stages; ++k) {
          const auto& st = a.plan["stages"][k - 1];
          std::size_t n_k = st["n_k"].get<std::size_t>();
          try {
            auto e = schedule_thm_uniform(f, ctx, x, k, n_k, parse_bigint(st["r_k"].get<std::string>()));
            entries.push_back(e.to_json());
            body += std::to_string(k) + "," + std::to_string(n_k) + "," + e.q_nk.get_str() + "," + e.L_k.get_str() +
                    "," + e.N_k.get_str() + "," + to_string(e.mu) + "," + to_string(e.A_k) + "," + to_string(e.B_k) +
                    ",ok\n";
          } catch (const Error& err) {
            entries.push_back({{"k", k}, {"error", err.what()}});
            body += std::to_string(k) + "," + std::to_string(n_k) + ",,,,,,," + cell(std::string(err.what())) + "\n";
          }
        }
        emit(g, "schedule", {{"cmd", "temporal schedule"}, {"f", f_s}, {"x", to_string(x)}, {"stages", stages}},
             {{"plan", a.plan}, {"entries", entries}}, body);
        return 0;
      };
    });
  }

  // ------------------------------------------------------------ alpha
  auto* al = app.add_subcommand("alpha", "construct rotation numbers");
  al->require_subcommand(1);
  {
    static std::size_t stages = 3, budget = 1000, len = 50;
    static std::string M = "1", filler = "ones";
    auto* b = al->add_subcommand("build", "greedy construction in A(N, M)");
    b->add_option("--f", f_s, "observable defining the syndetic set");
    b->add_option("--stages", stages)->check(CLI::PositiveNumber);
    b->add_option("--M", M, "largest multiplier r");
    b->add_option("--budget", budget, "fillers allowed per stage");
    b->add_option("--filler", filler)->check(CLI::IsMember({"ones", "gauss"}));
    b->callback([&] {
      action = [&] {
        auto f = observable_from_spec(observable_arg(f_s));
        json spec{{"kind", "build_in_A"}, {"stages", stages}, {"M", M}, {"search_budget", budget},
                  {"filler", filler}, {"seed", g.seed}};
        auto a = alpha_from_spec(spec, f);
        std::size_t shown = a.plan["stages"].back()["n_k"].get<std::size_t>() + 4;
        json p{{"plan", a.plan}, {"digits", a.digits.to_json(shown)}};
        std::string body = "k,n_k,r_k,a_planted,L_k,q_nk\n";
        std::size_t k = 1;
        for (const auto& st : a.plan["stages"])
          body += std::to_string(k++) + "," + st["n_k"].dump() + "," + st["r_k"].get<std::string>() + "," +
                  st["a_planted"].get<std::string>() + "," + st["L_k"].get<std::string>() + "," +
                  st["q_nk"].get<std::string>() + "\n";
        emit(g, "alpha_build", {{"cmd", "alpha build"}, {"f", f_s}, {"spec", spec}}, p, body);
        return 0;
      };
    });
    auto* gr = al->add_subcommand("gauss", "Gauss-measure random digits");
    gr->add_option("--len", len)->check(CLI::PositiveNumber);
    gr->callback([&] {
      action = [&] {
        auto d = gauss_random(len, g.seed);
        std::string body = "i,a_i\n";
        for (std::size_t i = 1; i <= len; ++i) body += std::to_string(i) + "," + d.a(i).get_str() + "\n";
        emit(g, "alpha_gauss", {{"cmd", "alpha gauss"}, {"len", len}, {"seed", g.seed}}, {{"digits", d.to_json()}},
             body);
        return 0;
      };
    });
  }

  // ------------------------------------------------------------ measure
  auto* ms = app.add_subcommand("measure", "Monte-Carlo and exact measure estimates");
  ms->require_subcommand(1);
  {
    static std::size_t n_index = 6, k = 8, k2 = 11;
    static std::string eps1 = "1/10", interval_lo = "1/10", interval_hi = "9/10";
    static std::uint64_t samples = 10000, trials = 1000, horizon = 10000;
    static std::int64_t N = 2000;
    static double D = 1.0;
    auto* ma = ms->add_subcommand("mass", "mes{|S_{q_n}| >= eps1}");
    ma->add_option("--alpha", alpha_s);
    ma->add_option("--f", f_s);
    ma->add_option("--n-index", n_index);
    ma->add_option("--eps1", eps1);
    ma->add_option("--samples", samples);
    ma->callback([&] {
      action = [&] {
        auto [f, a] = load();
        auto ctx = make_context(a.digits, convergents(a.digits, n_index)[n_index].q);
        auto nset = syndetic_scan(f, default_eps0(f), 1000);
        auto e = mass_above(f, ctx, n_index, parse_rational(eps1), samples, g.seed, nset,
                            choose_m(nset.lower_density_estimate));
        json params{{"alpha", alpha_s}, {"f", f_s}, {"n_index", n_index}, {"eps1", eps1}};
        emit(g, "mass", {{"cmd", "measure mass"}, {"params", params}, {"samples", samples}, {"seed", g.seed}},
             e.to_row("mass_above", params));
        return 0;
      };
    });
    auto* co = ms->add_subcommand("coprime", "coprime pairs with m/n in I");
    co->add_option("--N", N)->check(CLI::PositiveNumber);
    co->add_option("--lo", interval_lo);
    co->add_option("--hi", interval_hi);
    co->callback([&] {
      action = [&] {
        auto c = coprime_density(N, RationalInterval::open(parse_rational(interval_lo), parse_rational(interval_hi)));
        emit(g, "coprime", {{"cmd", "measure coprime"}, {"N", N}, {"lo", interval_lo}, {"hi", interval_hi}},
             {{"count", c.count}, {"asymptotic", c.asymptotic}, {"ratio", c.ratio}});
        return 0;
      };
    });
    auto* su = ms->add_subcommand("sullivan", "p_k = min(1/2, 1/k) with pairwise dependence D");
    su->add_option("--D", D);
    su->add_option("--horizon", horizon);
    su->add_option("--trials", trials);
    su->callback([&] {
      action = [&] {
        auto r = sullivan_sim([](std::uint64_t j) { return std::min(0.5, 1.0 / double(j)); }, D, horizon, trials,
                              g.seed);
        json params{{"D", D}, {"horizon", horizon}, {"k0", r.k0}};
        json row = r.estimate.to_row("sullivan_sim", params);
        row["lower_bound"] = r.lower_bound;
        emit(g, "sullivan", {{"cmd", "measure sullivan"}, {"params", params}, {"trials", trials}, {"seed", g.seed}},
             row);
        return 0;
      };
    });
    auto* dv = ms->add_subcommand("dv", "Diamond-Vaaler statistic");
    dv->add_option("--alpha", alpha_s);
    dv->add_option("--k", k);
    dv->callback([&] {
      action = [&] {
        auto d = alpha_from_spec(alpha_arg(alpha_s), SawtoothCombo::sawtooth()).digits;
        emit(g, "dv", {{"cmd", "measure dv"}, {"alpha", alpha_s}, {"k", k}},
             {{"alpha", alpha_s}, {"k", k}, {"value", diamond_vaaler(d, k)}});
        return 0;
      };
    });
    auto* gb = ms->add_subcommand("gibbs", "block ratio probe, depth <= 4, digits <= 4");
    gb->callback([&] {
      action = [&] {
        auto r = gibbs_probe(4, 4);
        emit(g, "gibbs", {{"cmd", "measure gibbs"}},
             {{"G", r.G}, {"min_ratio", r.min_ratio}, {"max_ratio", r.max_ratio}, {"G_by_depth", r.G_by_depth},
              {"pairs", r.pairs}});
        return 0;
      };
    });
    auto* ak = ms->add_subcommand("ak", "mes(A_k cap I), exact union");
    ak->add_option("--f", f_s);
    ak->add_option("--k", k);
    ak->add_option("--lo", interval_lo);
    ak->add_option("--hi", interval_hi);
    ak->callback([&] {
      action = [&] {
        auto f = observable_from_spec(observable_arg(f_s));
        auto nset = syndetic_scan(f, default_eps0(f), 1000);
        auto r = a_k_measure(nset, PsiSpec{}, choose_m(nset.lower_density_estimate), k,
                             RationalInterval::open(parse_rational(interval_lo), parse_rational(interval_hi)));
        emit(g, "a_k", {{"cmd", "measure ak"}, {"f", f_s}, {"k", k}, {"lo", interval_lo}, {"hi", interval_hi}},
             r.to_json());
        return 0;
      };
    });
    auto* qi = ms->add_subcommand("quasi", "joint measure ratio of A_k1 and A_k2");
    qi->add_option("--f", f_s);
    qi->add_option("--k1", k);
    qi->add_option("--k2", k2);
    qi->add_option("--lo", interval_lo);
    qi->add_option("--hi", interval_hi);
    qi->callback([&] {
      action = [&] {
        auto f = observable_from_spec(observable_arg(f_s));
        auto nset = syndetic_scan(f, default_eps0(f), 1000);
        auto r = quasi_independence(nset, PsiSpec{}, choose_m(nset.lower_density_estimate), k, k2,
                                    RationalInterval::open(parse_rational(interval_lo), parse_rational(interval_hi)));
        emit(g, "quasi",
             {{"cmd", "measure quasi"}, {"f", f_s}, {"k1", k}, {"k2", k2}, {"lo", interval_lo}, {"hi", interval_hi}},
             r.to_json());
        return 0;
      };
    });
  }

  // ------------------------------------------------------------ verify
  auto* vf = app.add_subcommand("verify", "acceptance battery");
  {
    static std::string suite = "exact", fault;
    vf->add_option("--suite", suite)->check(CLI::IsMember({"exact", "statistical", "measure", "all"}));
    vf->add_option("--inject-fault", fault, "deliberately break an invariant")->check(CLI::IsMember({"cylinder"}));
    vf->callback([&] {
      action = [&] {
        FaultInjection fi;
        fi.tamper_cylinder = fault == "cylinder";
        return verify(parse_suite(suite), std::cout, g.out, fi);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    configure_threads(threads);
    if (!action) {
      if (g.config.empty()) {
        std::cout << app.help();
        return 2;
      }
      action = do_run;
    }
    return action();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

#include "app.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "gradcoh/replay.hpp"
#include "gradcoh/special.hpp"
#include "gradcoh/version.hpp"
#include "gradcoh/window.hpp"

namespace gradcoh::app {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kBuiltinAlgebras = {"witt", "virasoro", "sl2_slice"};

bool builtin(const std::string& name) {
  return std::find(kBuiltinAlgebras.begin(), kBuiltinAlgebras.end(), name) != kBuiltinAlgebras.end();
}

std::string resolve_algebra(const std::string& name, const fs::path& base) {
  if (builtin(name)) return name;
  fs::path p(name);
  if (p.is_relative()) p = base / p;
  return p.lexically_normal().string();
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const fs::path tmp = p.string() + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
  }
  fs::rename(tmp, p);
}

template <typename T>
T get(const nlohmann::json& obj, const char* key, const T& fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError("unknown key " + where + "." + k);
  }
}

ModulePtr make_module(const std::string& algebra, const std::string& module) {
  return module_of(algebra_by_name(algebra), parse_module_kind(module));
}

ojson record(const WindowReport& rep, bool stable, bool timings) {
  ojson j;
  j["algebra"] = rep.algebra;
  j["module"] = rep.module;
  j["q"] = rep.q;
  j["d"] = rep.d;
  j["r"] = rep.r;
  j["h"] = rep.h;
  j["dim_Z_proj"] = rep.dim_Z_proj;
  j["dim_B_proj"] = rep.dim_B_proj;
  j["stable"] = stable;
  j["elapsed_ms"] = timings ? rep.elapsed_ms : 0.0;
  j["engine_version"] = kEngineVersion;
  return j;
}

WindowReport from_record(const nlohmann::json& j) {
  WindowReport rep;
  rep.algebra = j.at("algebra").get<std::string>();
  rep.module = j.at("module").get<std::string>();
  rep.q = j.at("q").get<int>();
  rep.d = j.at("d").get<std::int64_t>();
  rep.r = j.at("r").get<std::int64_t>();
  rep.h = j.at("h").get<std::size_t>();
  rep.dim_Z_proj = j.at("dim_Z_proj").get<std::size_t>();
  rep.dim_B_proj = j.at("dim_B_proj").get<std::size_t>();
  rep.elapsed_ms = j.at("elapsed_ms").get<double>();
  return rep;
}

std::optional<std::vector<WindowReport>> cache_load(const fs::path& file, const std::string& canonical,
                                                    std::ostream& log) {
  std::error_code ec;
  if (!fs::exists(file, ec)) return std::nullopt;
  try {
    const auto doc = nlohmann::json::parse(read_file(file));
    if (doc.at("key").get<std::string>() != canonical) {
      log << "cache: key collision or stale entry in " << file.string() << ", recomputing\n";
      return std::nullopt;
    }
    std::vector<WindowReport> out;
    for (const auto& j : doc.at("records")) {
      if (j.at("engine_version").get<std::string>() != kEngineVersion) return std::nullopt;
      out.push_back(from_record(j));
    }
    return out;
  } catch (const std::exception& e) {
    log << "cache: ignoring unreadable entry " << file.string() << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

void print_table(const std::vector<ojson>& rows, std::ostream& out) {
  out << std::left << std::setw(12) << "algebra" << std::setw(14) << "module" << std::right << std::setw(3) << "q"
      << std::setw(4) << "d" << std::setw(4) << "r" << std::setw(4) << "h" << "  stable\n";
  for (const auto& j : rows) {
    out << std::left << std::setw(12) << j.at("algebra").get<std::string>() << std::setw(14)
        << j.at("module").get<std::string>() << std::right << std::setw(3) << j.at("q").get<int>() << std::setw(4)
        << j.at("d").get<std::int64_t>() << std::setw(4) << j.at("r").get<std::int64_t>() << std::setw(4)
        << j.at("h").get<std::size_t>() << "  " << (j.at("stable").get<bool>() ? "yes" : "no") << "\n";
  }
}

}  // namespace

// ------------------------------------------------------------------ config

RunConfig parse_config(const nlohmann::json& doc, const fs::path& base_dir) {
  reject_unknown(doc,
                 {"algebra", "module", "radii", "max_abs_degree", "cases", "replay", "out", "cache", "seed", "jobs"},
                 "config");
  RunConfig cfg;
  cfg.base_dir = base_dir;
  const auto algebra = get<std::string>(doc, "algebra", "witt", "config");
  const auto module = get<std::string>(doc, "module", "adjoint", "config");
  cfg.max_abs_degree = get<std::int64_t>(doc, "max_abs_degree", 3, "config");
  if (cfg.max_abs_degree < 0 || cfg.max_abs_degree > 16) throw ConfigError("max_abs_degree must be in [0, 16]");

  cfg.radii = get<std::vector<std::int64_t>>(doc, "radii", {}, "config");
  for (std::size_t i = 0; i < cfg.radii.size(); ++i) {
    if (cfg.radii[i] < 1) throw ConfigError("radii must be positive");
    if (i && cfg.radii[i] <= cfg.radii[i - 1]) throw ConfigError("radii must be strictly ascending");
  }

  if (doc.contains("cases")) {
    if (!doc["cases"].is_array()) throw ConfigError("cases must be an array");
    for (std::size_t i = 0; i < doc["cases"].size(); ++i) {
      const auto& c = doc["cases"][i];
      const std::string where = "cases[" + std::to_string(i) + "]";
      reject_unknown(c, {"algebra", "module", "q", "d", "expect"}, where);
      if (!c.contains("q") || !c.contains("d")) throw ConfigError(where + " needs q and d");
      ScanCase sc;
      sc.algebra = resolve_algebra(get<std::string>(c, "algebra", algebra, where), base_dir);
      sc.module = get<std::string>(c, "module", module, where);
      sc.q = get<int>(c, "q", 0, where);
      sc.d = get<std::int64_t>(c, "d", 0, where);
      if (c.contains("expect")) sc.expect = get<std::size_t>(c, "expect", 0, where);
      if (sc.q < 0 || sc.q > 4) throw ConfigError(where + ".q must be in [0, 4]");
      if (sc.d < -cfg.max_abs_degree || sc.d > cfg.max_abs_degree) {
        throw ConfigError(where + ".d exceeds max_abs_degree " + std::to_string(cfg.max_abs_degree));
      }
      try {
        make_module(sc.algebra, sc.module);
      } catch (const std::exception& e) {
        throw ConfigError(where + ": " + e.what());
      }
      cfg.cases.push_back(std::move(sc));
    }
  }
  if (!cfg.cases.empty() && cfg.radii.size() < 2) throw ConfigError("scans need at least two radii");

  if (doc.contains("replay")) {
    const auto& r = doc["replay"];
    reject_unknown(r, {"lemma", "h1", "fuks", "gv", "radius", "fuks_radius", "gv_radius", "fixtures"}, "replay");
    auto& t = cfg.replay;
    t.lemma = get<bool>(r, "lemma", t.lemma, "replay");
    t.h1 = get<bool>(r, "h1", t.h1, "replay");
    t.fuks = get<bool>(r, "fuks", t.fuks, "replay");
    t.gv = get<bool>(r, "gv", t.gv, "replay");
    t.radius = get<std::int64_t>(r, "radius", t.radius, "replay");
    t.fuks_radius = get<std::int64_t>(r, "fuks_radius", t.fuks_radius, "replay");
    t.gv_radius = get<std::int64_t>(r, "gv_radius", t.gv_radius, "replay");
    t.fixtures = get<int>(r, "fixtures", t.fixtures, "replay");
    if (t.radius < 1 || t.fuks_radius < 1 || t.gv_radius < 1) throw ConfigError("replay radii must be positive");
    if (t.fixtures < 1 || t.fixtures > 1000) throw ConfigError("replay.fixtures must be in [1, 1000]");
  }
  cfg.algebra = resolve_algebra(algebra, base_dir);
  cfg.module = module;
  try {
    make_module(cfg.algebra, cfg.module);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  cfg.out_dir = get<std::string>(doc, "out", "out", "config");
  if (doc.contains("cache")) cfg.cache_dir = fs::path(get<std::string>(doc, "cache", "", "config"));
  cfg.seed = get<std::uint64_t>(doc, "seed", 0, "config");
  const auto jobs = get<long>(doc, "jobs", 1, "config");
  if (jobs < 1 || jobs > 256) throw ConfigError("jobs must be in [1, 256]");
  cfg.jobs = static_cast<unsigned>(jobs);
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

// ------------------------------------------------------------------- cache

std::string canonical_cache_string(const ScanCase& c, const std::vector<std::int64_t>& radii) {
  std::ostringstream os;
  os << "gradcoh-scan|engine=" << kEngineVersion << "|scheme=r,2r,4r|algebra=" << c.algebra;
  if (!builtin(c.algebra)) os << "|table=" << hex64(fnv1a(read_file(c.algebra)));
  os << "|module=" << c.module << "|q=" << c.q << "|d=" << c.d << "|radii=";
  for (std::size_t i = 0; i < radii.size(); ++i) os << (i ? "," : "") << radii[i];
  return os.str();
}

std::string cache_key(const ScanCase& c, const std::vector<std::int64_t>& radii) {
  return hex64(fnv1a(canonical_cache_string(c, radii)));
}

// -------------------------------------------------------------------- scan

int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  if (cfg.cases.empty()) {
    log << "error: config has no cases to scan\n";
    return kConfigError;
  }
  struct CaseState {
    std::string canonical;
    std::string key;
    std::vector<WindowReport> reports;
    bool from_cache = false;
  };
  std::vector<CaseState> states(cfg.cases.size());
  struct Task {
    std::size_t case_index;
    std::size_t radius_index;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < cfg.cases.size(); ++i) {
    auto& st = states[i];
    st.canonical = canonical_cache_string(cfg.cases[i], cfg.radii);
    st.key = hex64(fnv1a(st.canonical));
    st.reports.resize(cfg.radii.size());
    if (cfg.cache_dir) {
      if (auto hit = cache_load(*cfg.cache_dir / (st.key + ".json"), st.canonical, log);
          hit && hit->size() == cfg.radii.size()) {
        st.reports = std::move(*hit);
        st.from_cache = true;
        continue;
      }
    }
    for (std::size_t j = 0; j < cfg.radii.size(); ++j) tasks.push_back({i, j});
  }

  std::vector<ModulePtr> modules;
  for (const auto& c : cfg.cases) modules.push_back(make_module(c.algebra, c.module));

  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const auto& task = tasks[t];
      const auto& c = cfg.cases[task.case_index];
      try {
        states[task.case_index].reports[task.radius_index] =
            windowed_h(*modules[task.case_index], c.q, c.d, WindowSpec{cfg.radii[task.radius_index]});
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (!errors[t]) continue;
    const auto& c = cfg.cases[tasks[t].case_index];
    try {
      std::rethrow_exception(errors[t]);
    } catch (const WindowInconsistency& e) {
      log << "error: " << c.algebra << " " << c.module << " q=" << c.q << " d=" << c.d << ": " << e.what() << "\n";
      return kWindowError;
    } catch (const std::exception& e) {
      log << "error: " << c.algebra << " " << c.module << " q=" << c.q << " d=" << c.d << ": " << e.what() << "\n";
      return kMismatch;
    }
  }

  std::string jsonl;
  std::string csv = "algebra,module,q,d,r,h,stable\n";
  std::vector<ojson> rows;
  bool mismatch = false;
  for (std::size_t i = 0; i < cfg.cases.size(); ++i) {
    const auto& c = cfg.cases[i];
    auto& st = states[i];
    const auto scan = stabilization_verdict(st.reports);
    for (const auto& rep : scan.reports) {
      const auto j = record(rep, scan.stable, cfg.timings);
      jsonl += j.dump() + "\n";
      csv += rep.algebra + "," + rep.module + "," + std::to_string(rep.q) + "," + std::to_string(rep.d) + "," +
             std::to_string(rep.r) + "," + std::to_string(rep.h) + "," + (scan.stable ? "true" : "false") + "\n";
      rows.push_back(j);
    }
    std::string status = "no expectation";
    if (c.expect) {
      const bool ok = scan.stable && scan.value == c.expect;
      status = std::string(ok ? "ok" : "MISMATCH") + " (expected " + std::to_string(*c.expect) + ")";
      mismatch = mismatch || !ok;
    }
    log << scan.reports.front().algebra << " " << scan.reports.front().module << " q=" << c.q << " d=" << c.d << ": "
        << scan.verdict() << ", " << status << (st.from_cache ? " [cache " : " [computed ") << st.key << "]\n";

    if (cfg.cache_dir && !st.from_cache) {
      ojson entry;
      entry["key"] = st.canonical;
      entry["records"] = ojson::array();
      for (const auto& rep : scan.reports) entry["records"].push_back(record(rep, scan.stable, true));
      write_file(*cfg.cache_dir / (st.key + ".json"), entry.dump(2) + "\n");
    }
  }

  write_file(cfg.out_dir / "report.jsonl", jsonl);
  write_file(cfg.out_dir / "summary.csv", csv);
  print_table(rows, out);
  return mismatch ? kMismatch : kOk;
}

// ------------------------------------------------------------------ replay

int cmd_replay(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const auto& t = cfg.replay;
  if ((t.lemma || t.h1) && t.radius < 8) {
    log << "error: replay needs window radius >= 8, got " << t.radius << "\n";
    return kWindowError;
  }
  std::string lines;
  auto emit = [&](ojson j) { lines += j.dump() + "\n"; };
  bool failed = false;
  auto witt_adj = module_of(witt(), ModuleKind::Adjoint);

  auto residual_json = [](const std::vector<Residual>& rs) {
    ojson arr = ojson::array();
    for (const auto& r : rs) {
      ojson tuple = ojson::array();
      for (auto x : r.tuple) tuple.push_back(to_string(x));
      arr.push_back({{"tuple", tuple}, {"value", to_string(r.value)}, {"reason", r.reason}});
    }
    return arr;
  };

  try {
    for (int k = 0; k < t.fixtures && t.lemma; ++k) {
      const std::uint64_t seed = cfg.seed + k;
      auto fx = random_coboundary_fixture(witt_adj, 3, 0, 4 * t.radius, seed);
      auto rep = replay_h3(fx.psi, t.radius);
      for (const auto& e : rep.state.log) {
        ojson j{{"stage", "normalize"}, {"seed", seed}};
        j.update(to_json(e));
        emit(j);
      }
      for (const auto& e : rep.certificate.log) {
        ojson j{{"stage", "vanish"}, {"seed", seed}};
        j.update(to_json(e));
        emit(j);
      }
      const bool ok = rep.certificate.ok() && rep.state.condition_failures.empty();
      failed = failed || !ok;
      emit({{"stage", "summary"},
            {"pipeline", "degree-zero 3-cocycle"},
            {"seed", seed},
            {"radius", t.radius},
            {"phi_assigned", rep.state.phi->assigned()},
            {"conditions_checked", rep.state.conditions_checked},
            {"condition_failures", rep.state.condition_failures.size()},
            {"certified", rep.certificate.certified},
            {"certified_radius", rep.certificate.certified_radius},
            {"checked_levels", rep.certificate.checked_levels},
            {"residuals", residual_json(rep.certificate.residuals)},
            {"ok", ok}});
      out << "normalize + vanish, seed " << seed << ": " << (ok ? "ok" : "FAILED") << ", certified radius "
          << rep.certificate.certified_radius << "\n";
    }

    for (int k = 0; k < t.fixtures && t.h1; ++k) {
      const std::uint64_t seed = cfg.seed + k;
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<long> num(-20, 20), den(1, 9);
      const long a = num(rng);
      const Rational c = frac(a, den(rng));
      auto psi = std::make_shared<HomogeneousCochain>(witt_adj, 1, 0, 2 * t.radius);
      for (std::int64_t i = -2 * t.radius; i <= 2 * t.radius; ++i) psi->set({BasisId::indexed(i)}, c * i);
      auto cert = h1_replay(psi, t.radius);
      for (const auto& e : cert.log) {
        ojson j{{"stage", "h1"}, {"seed", seed}};
        j.update(to_json(e));
        emit(j);
      }
      failed = failed || !cert.ok();
      emit({{"stage", "summary"},
            {"pipeline", "degree-zero 1-cocycle"},
            {"seed", seed},
            {"radius", t.radius},
            {"scale", to_string(c)},
            {"certified_radius", cert.certified_radius},
            {"residuals", residual_json(cert.residuals)},
            {"ok", cert.ok()}});
      out << "first cohomology ladder, seed " << seed << ": " << (cert.ok() ? "ok" : "FAILED") << ", certified radius "
          << cert.certified_radius << "\n";
    }

    if (t.fuks) {
      auto mod = make_module(cfg.algebra, cfg.module);
      std::uint64_t seed = cfg.seed;
      bool all = true;
      for (int q = 1; q <= 3; ++q) {
        for (std::int64_t d : {-2, -1, 1, 2}) {
          for (int k = 0; k < t.fixtures; ++k, ++seed) {
            auto fx = random_coboundary_fixture(mod, q, d, 2 * t.fuks_radius, seed);
            auto psi = differential(*fx.chi, 2 * t.fuks_radius);
            auto res = fuks_homotopy(psi);
            all = all && res.residual_zero;
            emit({{"stage", "fuks"},
                  {"algebra", mod->algebra().name()},
                  {"module", mod->name()},
                  {"q", q},
                  {"d", d},
                  {"seed", seed},
                  {"inner_radius", res.inner_radius},
                  {"residual_zero", res.residual_zero}});
          }
        }
      }
      failed = failed || !all;
      out << "degree-shift homotopy: " << (all ? "ok" : "FAILED") << "\n";
    }

    if (t.gv) {
      GVCocycle gv(1);
      for (const auto& alg : {witt(), virasoro()}) {
        const auto c = gv_as_cochain(gv, alg, 2 * t.gv_radius);
        const bool cocycle = certify_cocycle(c, t.gv_radius).ok;
        const bool noncob = certify_noncoboundary(c, t.gv_radius);
        const auto value = gv_value(gv, 1, 0, -1);
        const bool ok = cocycle && noncob && value == -2;
        failed = failed || !ok;
        emit({{"stage", "gv"},
              {"algebra", alg->name()},
              {"radius", t.gv_radius},
              {"certify_cocycle", cocycle},
              {"certify_noncoboundary", noncob},
              {"value_e1_e0_em1", to_string(value)},
              {"support", "nonzero only when k = -(n+m)"}});
        out << "godbillon-vey on " << alg->name() << ": cocycle " << (cocycle ? "yes" : "no") << ", noncoboundary "
            << (noncob ? "yes" : "no") << "\n";
      }
    }
  } catch (const WindowTooSmall& e) {
    log << "error: " << e.what() << "\n";
    return kWindowError;
  } catch (const ReplayFailure& e) {
    log << "error: " << e.what() << "\n";
    write_file(cfg.out_dir / "replay.jsonl", lines);
    return kMismatch;
  }

  write_file(cfg.out_dir / "replay.jsonl", lines);
  return failed ? kMismatch : kOk;
}

// -------------------------------------------------------------------- show

int cmd_show(const std::string& target, const std::optional<fs::path>& cache_dir, std::ostream& out,
             std::ostream& log) {
  std::vector<ojson> rows;
  std::error_code ec;
  try {
    if (fs::is_regular_file(target, ec)) {
      std::istringstream in(read_file(target));
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty()) rows.push_back(ojson::parse(line));
      }
    } else if (cache_dir && fs::is_regular_file(*cache_dir / (target + ".json"), ec)) {
      const auto doc = ojson::parse(read_file(*cache_dir / (target + ".json")));
      for (const auto& j : doc.at("records")) rows.push_back(j);
    } else {
      log << "error: no report or cache entry named " << target << "\n";
      return kConfigError;
    }
    print_table(rows, out);
  } catch (const std::exception& e) {
    log << "error: cannot read " << target << ": " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}

}  // namespace gradcoh::app

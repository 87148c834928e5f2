// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "app.hpp"
#include "dense_cohomology.hpp"
#include "dense_oracle.hpp"
#include "gradcoh/replay.hpp"
#include "gradcoh/special.hpp"
#include "gradcoh/window.hpp"
#include "printed_forms.hpp"

using namespace gradcoh;
namespace fs = std::filesystem;

namespace {

BasisId e(std::int64_t n) { return BasisId::indexed(n); }

Tuple tup(const std::vector<long>& ns) {
  Tuple out;
  for (auto n : ns) out.push_back(e(n));
  return out;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

HomogeneousCochain random_cochain(std::mt19937& rng, const ModulePtr& mod, int q, std::int64_t d,
                                  std::int64_t radius, std::optional<std::int64_t> domain = std::nullopt) {
  HomogeneousCochain c(mod, q, d, domain);
  const auto& alg = mod->algebra();
  for (const auto& t : sorted_tuples(alg.window_basis(radius), q))
    for (auto w : mod->targets(tuple_degree(alg, t) + d)) c.set(t, w, printed::random_rational(rng));
  return c;
}

// ------------------------------------------------------------------ 1

Outcome dimension_table() {
  struct Row {
    AlgebraPtr alg;
    ModuleKind kind;
    int q;
    int d;
    std::size_t expect;
  };
  const auto W = witt();
  const auto V = virasoro();
  const auto T = ModuleKind::Trivial;
  const auto A = ModuleKind::Adjoint;
  std::vector<Row> rows = {{W, T, 0, 0, 1}, {W, A, 0, 0, 0}, {W, A, 1, 0, 0}, {W, T, 1, 0, 0}, {W, A, 2, 0, 0},
                           {W, T, 2, 0, 1}, {W, A, 3, 0, 0}, {W, T, 3, 0, 1}, {V, A, 0, 0, 1}, {V, A, 1, 0, 0},
                           {V, A, 2, 0, 0}, {V, A, 3, 0, 1}, {V, T, 3, 0, 1}};
  for (auto alg : {W, V})
    for (int q = 1; q <= 3; ++q)
      for (int d : {-3, -2, -1, 1, 2, 3}) rows.push_back({alg, A, q, d, 0});

  Outcome out;
  for (const auto& row : rows) {
    auto mod = module_of(row.alg, row.kind);
    auto scan = stabilization_scan(*mod, row.q, row.d, {4, 5, 6, 7});
    if (!scan.stable || scan.value != row.expect) {
      out.fail(row.alg->name() + " " + mod->name() + " q=" + std::to_string(row.q) + " d=" + std::to_string(row.d) +
               ": " + scan.verdict() + ", expected " + std::to_string(row.expect));
    }
  }
  if (out.pass) out.detail = std::to_string(rows.size()) + " scans stable at the expected value, radii 4..7";
  return out;
}

// ------------------------------------------------------------------ 2

Outcome delta_squared() {
  std::mt19937 rng(2);
  std::vector<ModulePtr> modules{module_of(witt(), ModuleKind::Adjoint), module_of(witt(), ModuleKind::Trivial),
                                 module_of(virasoro(), ModuleKind::Adjoint), module_of(virasoro(), ModuleKind::Trivial),
                                 module_of(virasoro(), ModuleKind::WittQuotient)};
  std::uniform_int_distribution<int> qd(0, 2), dd(-3, 3);
  Outcome out;
  std::size_t checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& mod = modules[trial % modules.size()];
    const int q = qd(rng);
    const int d = dd(rng);
    // Variables at 4r so that delta(delta c) is defined on the whole radius r = 5.
    auto c = random_cochain(rng, mod, q, d, 20, 20);
    auto ddc = differential(differential(c, 10), 5);
    for (const auto& t : sorted_tuples(mod->algebra().window_basis(5), q + 2))
      for (auto w : mod->targets(tuple_degree(mod->algebra(), t) + d)) {
        ++checked;
        if (ddc.at(CochainKey{t, w}) != 0) out.fail("nonzero at " + to_string(CochainKey{t, w}));
      }
  }
  if (out.pass) out.detail = "100 cochains, " + std::to_string(checked) + " coefficients of delta(delta c) zero";
  return out;
}

// ------------------------------------------------------------------ 3

Outcome printed_forms() {
  auto adj = module_of(witt(), ModuleKind::Adjoint);
  std::mt19937 rng(3);
  Outcome out;
  for (int trial = 0; trial < 100; ++trial) {
    auto v = printed::distinct(rng, 4, 15);
    auto f2 = expand_differential(*adj, 2, 0, tup({v[0], v[1], v[2]}));
    if (f2.size() != 1 || printed::to_map(f2[0].second) != printed::delta2(v[0], v[1], v[2]))
      out.fail("2-cochain display differs at trial " + std::to_string(trial));
    auto f3 = expand_differential(*adj, 3, 0, tup({v[0], v[1], v[2], v[3]}));
    if (f3.size() != 1 || printed::to_map(f3[0].second) != printed::delta3(v[0], v[1], v[2], v[3]))
      out.fail("3-cochain display differs at trial " + std::to_string(trial));
  }
  if (out.pass) out.detail = "100 tuples, both expansions coefficient-identical";
  return out;
}

// ------------------------------------------------------------------ 4

Outcome proof_replay() {
  Outcome out;
  auto adj = module_of(witt(), ModuleKind::Adjoint);
  std::int64_t worst = 1 << 20;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto fx = random_coboundary_fixture(adj, 3, 0, 32, seed);
    auto rep = replay_h3(fx.psi, 8);
    if (!rep.state.condition_failures.empty()) out.fail("normalization conditions fail, seed " + std::to_string(seed));
    if (!rep.certificate.ok()) out.fail("nonzero residual, seed " + std::to_string(seed));
    if (rep.certificate.certified_radius < 4) out.fail("certified radius below 4, seed " + std::to_string(seed));
    worst = std::min(worst, rep.certificate.certified_radius);
  }

  std::mt19937 rng(4);
  for (int k = 0; k < 20; ++k) {
    const auto c = printed::random_rational(rng);
    auto psi = std::make_shared<HomogeneousCochain>(adj, 1, 0, 16);
    for (std::int64_t i = -16; i <= 16; ++i) psi->set(tup({i}), c * i);
    auto cert = h1_replay(psi, 8);
    if (!cert.ok() || cert.certified_radius != 8) out.fail("first cohomology replay fails, fixture " + std::to_string(k));
  }

  std::vector<ModulePtr> modules{adj, module_of(virasoro(), ModuleKind::Adjoint)};
  int fuks = 0;
  for (std::int64_t d : {-2, -1, 1, 2}) {
    for (int k = 0; k < 20; ++k) {
      const auto& mod = modules[k % 2];
      const int q = 1 + k % 3;
      auto chi = random_cochain(rng, mod, q - 1, d, 10);
      auto res = fuks_homotopy(differential(chi, 10));
      ++fuks;
      if (!res.residual_zero) out.fail("homotopy residual, d=" + std::to_string(d) + " fixture " + std::to_string(k));
    }
  }
  if (out.pass) {
    out.detail = "20 normalize+vanish fixtures (min certified radius " + std::to_string(worst) +
                 "), 20 first-cohomology fixtures, " + std::to_string(fuks) + " homotopy fixtures";
  }
  return out;
}

// ------------------------------------------------------------------ 5

Outcome godbillon_vey() {
  Outcome out;
  for (const Rational& A : {Rational(1), frac(-3, 7)}) {
    GVCocycle gv(A);
    if (gv_value(gv, 1, 0, -1) != -2 * A) out.fail("GV(e1,e0,e-1) != -2A");
    for (auto alg : {witt(), virasoro()}) {
      auto c = gv_as_cochain(gv, alg, 12);
      if (!certify_cocycle(c, 6).ok) out.fail("not a cocycle on " + alg->name());
      if (!certify_noncoboundary(c, 6)) out.fail("coboundary on " + alg->name());
    }
    const auto span = class_span_increase(gv_as_cochain(gv, witt(), 12), 6);
    if (span != 1) out.fail("span increase " + std::to_string(span));
  }
  if (out.pass) out.detail = "cocycle and noncoboundary on witt and virasoro at r=6, value -2A, span +1";
  return out;
}

// ------------------------------------------------------------------ 6

Outcome sl2_oracle() {
  Outcome out;
  auto adj = module_of(sl2_slice(), ModuleKind::Adjoint);
  for (int q = 0; q <= 2; ++q) {
    const auto full = full_cohomology(*adj, q);
    const auto dense = oracle::dense_cohomology(*adj, q);
    if (full != 0 || dense != 0) out.fail("H^" + std::to_string(q) + " nonzero");
    for (int r = 1; r <= 4; ++r) {
      std::size_t windowed = 0;
      for (int d = -6; d <= 6; ++d) windowed += windowed_h(*adj, q, d, WindowSpec{r}).h;
      if (windowed != full) out.fail("window r=" + std::to_string(r) + " disagrees at q=" + std::to_string(q));
    }
  }
  if (out.pass) out.detail = "H^0 = H^1 = H^2 = 0, dense oracle and windows r=1..4 agree";
  return out;
}

// ------------------------------------------------------------------ 7

Outcome linear_algebra() {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> size(1, 12), entry(-9, 9), coin(0, 2);
  Outcome out;
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = size(rng), cols = size(rng);
    std::vector<std::vector<Rational>> d(rows, std::vector<Rational>(cols));
    std::vector<std::vector<mpz_class>> z(rows, std::vector<mpz_class>(cols));
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        const int v = (trial % 2 == 0 && coin(rng) != 0) ? 0 : entry(rng);
        d[r][c] = v;
        z[r][c] = v;
      }
    if (trial % 3 == 0 && rows > 2) {
      for (int c = 0; c < cols; ++c) {
        d[rows - 1][c] = 3 * d[0][c] - d[1][c];
        z[rows - 1][c] = 3 * z[0][c] - z[1][c];
      }
    }
    const auto m = SparseMatrix::from_dense(d);
    const auto expected = oracle::bareiss_rank(z);
    if (oracle::dense_rank(d) != expected || rank(m) != expected) out.fail("rank differs at trial " + std::to_string(trial));
    auto kernel = kernel_basis(m);
    if (kernel.size() + expected != static_cast<std::size_t>(cols)) out.fail("kernel size at trial " + std::to_string(trial));
    for (const auto& v : kernel)
      if (!m.multiply(v).empty()) out.fail("kernel vector not annihilated at trial " + std::to_string(trial));
    if (!kernel.empty()) {
      std::vector<std::vector<Rational>> k(kernel.size(), std::vector<Rational>(cols));
      for (std::size_t i = 0; i < kernel.size(); ++i)
        for (const auto& [c, v] : kernel[i].entries()) k[i][c] = v;
      if (oracle::dense_rank(k) != kernel.size()) out.fail("dependent kernel basis at trial " + std::to_string(trial));
    }
  }
  if (out.pass) out.detail = "200 matrices up to 12x12 match Gaussian and Bareiss elimination";
  return out;
}

// ------------------------------------------------------------------ 8

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  Outcome out;
  const auto dir = fs::temp_directory_path() / "gradcoh_acceptance";
  fs::remove_all(dir);
  auto cfg = app::parse_config(nlohmann::json::parse(R"({
    "algebra": "witt", "module": "adjoint", "radii": [4, 5],
    "cases": [{"q": 1, "d": 0, "expect": 0}, {"q": 2, "d": 1, "expect": 0}, {"module": "trivial", "q": 3, "d": 0, "expect": 1},
              {"algebra": "virasoro", "q": 3, "d": 0}]
  })"));
  std::ostringstream sink;
  cfg.out_dir = dir / "first";
  const int a = app::cmd_scan(cfg, sink, sink);
  cfg.out_dir = dir / "second";
  cfg.jobs = 3;
  const int b = app::cmd_scan(cfg, sink, sink);
  if (a != 0 || b != 0) out.fail("scan exit codes " + std::to_string(a) + ", " + std::to_string(b));
  for (const char* name : {"report.jsonl", "summary.csv"}) {
    const auto x = slurp(dir / "first" / name);
    if (x.empty() || x != slurp(dir / "second" / name)) out.fail(std::string(name) + " differs between runs");
  }
  fs::remove_all(dir);
  if (out.pass) out.detail = "report.jsonl and summary.csv byte-identical across two runs";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"dimension table", dimension_table}, {"delta squared", delta_squared},
      {"printed expansions", printed_forms}, {"proof replay", proof_replay},
      {"godbillon-vey", godbillon_vey},      {"sl2 oracle", sl2_oracle},
      {"linear algebra", linear_algebra},    {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o.fail(std::string("exception: ") + ex.what());
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s (%lld ms)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                static_cast<long long>(ms));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

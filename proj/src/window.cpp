#include "gradcoh/window.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>

namespace gradcoh {

namespace {

struct KeyHash {
  std::size_t operator()(const CochainKey& key) const {
    std::size_t h = BasisIdHash()(key.target);
    for (auto x : key.tuple) h = h * 1000003u ^ BasisIdHash()(x);
    return h;
  }
};

}  // namespace

std::vector<CochainKey> cochain_keys(const GradedModule& mod, int q, std::int64_t d,
                                     const std::vector<BasisId>& basis) {
  std::vector<CochainKey> keys;
  for (auto& t : sorted_tuples(basis, q)) {
    for (auto w : mod.targets(tuple_degree(mod.algebra(), t) + d)) keys.push_back({t, w});
  }
  return keys;
}

DifferentialMatrix differential_matrix(const GradedModule& mod, int q, std::int64_t d,
                                       const std::vector<BasisId>& row_basis, const std::vector<BasisId>& col_basis) {
  DifferentialMatrix out;
  out.col_keys = cochain_keys(mod, q, d, col_basis);
  std::unordered_map<CochainKey, Index, KeyHash> column;
  column.reserve(out.col_keys.size());
  for (Index i = 0; i < out.col_keys.size(); ++i) column.emplace(out.col_keys[i], i);

  out.matrix = SparseMatrix(0, out.col_keys.size());
  for (const auto& t : sorted_tuples(row_basis, q + 1)) {
    for (auto& [w, form] : expand_differential(mod, q, d, t)) {
      SparseEntries row;
      row.reserve(form.size());
      for (auto& [key, c] : form) {
        auto it = column.find(key);
        if (it == column.end()) {
          throw WindowInconsistency("window inconsistency: row " + to_string(CochainKey{t, w}) + " references " +
                                    to_string(key) + " outside the variable window");
        }
        row.emplace_back(it->second, std::move(c));
      }
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      out.matrix.append_row(std::move(row));
      out.row_keys.push_back({t, w});
    }
  }
  return out;
}

SparseMatrix assemble_cocycle_system(const GradedModule& mod, int q, std::int64_t d, const WindowSpec& w) {
  const auto& alg = mod.algebra();
  return differential_matrix(mod, q, d, alg.window_basis(w.constraint_radius()), alg.window_basis(w.variable_radius()))
      .matrix;
}

std::vector<SparseVector> assemble_coboundary_generators(const GradedModule& mod, int q, std::int64_t d,
                                                         const WindowSpec& w) {
  if (q < 1) throw std::invalid_argument("coboundary generators need q >= 1");
  const auto& alg = mod.algebra();
  auto dm = differential_matrix(mod, q - 1, d, alg.window_basis(w.variable_radius()),
                                alg.window_basis(w.generator_radius()));
  auto t = dm.matrix.transposed();
  std::vector<SparseVector> out;
  out.reserve(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) out.push_back(SparseVector::from_entries(t.cols(), t.row(i)));
  return out;
}

WindowReport windowed_h(const GradedModule& mod, int q, std::int64_t d, const WindowSpec& w) {
  if (q < 0) throw std::invalid_argument("negative q");
  if (w.r < 0) throw std::invalid_argument("negative radius");
  const auto start = std::chrono::steady_clock::now();
  const auto& alg = mod.algebra();

  WindowReport rep;
  rep.algebra = alg.name();
  rep.module = mod.name();
  rep.q = q;
  rep.d = d;
  rep.r = w.r;

  const auto inner_basis = alg.window_basis(w.constraint_radius());
  const auto var_basis = alg.window_basis(w.variable_radius());
  auto system = differential_matrix(mod, q, d, inner_basis, var_basis);
  const auto& keys = system.col_keys;

  std::vector<std::uint8_t> cls(keys.size());
  std::vector<std::size_t> inner_rows;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const bool inner = within(keys[i].tuple, w.constraint_radius());
    cls[i] = inner ? 1 : 0;
    if (inner) inner_rows.push_back(i);
  }
  rep.constraint_rows = system.matrix.rows();
  rep.variable_cols = keys.size();
  rep.inner_cols = inner_rows.size();

  // Outer columns are pivoted first, so the class-0 pivot count is the rank
  // of the outer block and dim pi(Z) = n_inner - rank C + rank C_outer.
  Eliminator elim(system.matrix, std::move(cls));
  elim.run();
  rep.dim_Z_proj = rep.inner_cols - elim.rank() + elim.pivots_in_class(0);

  if (q >= 1) {
    auto gens = differential_matrix(mod, q - 1, d, var_basis, alg.window_basis(w.generator_radius()));
    if (gens.row_keys != keys) throw std::logic_error("generator rows out of step with cocycle columns");
    rep.generators = gens.matrix.cols();
    const auto product = system.matrix.multiply(gens.matrix);
    for (std::size_t r = 0; r < product.rows(); ++r) {
      if (!product.row(r).empty()) {
        throw WindowInconsistency("window inconsistency: coboundary of " + to_string(gens.col_keys[product.row(r)[0].first]) +
                                  " violates the cocycle condition at " + to_string(system.row_keys[r]));
      }
    }
    rep.dim_B_proj = rank(gens.matrix.select_rows(inner_rows));
  }
  if (rep.dim_B_proj > rep.dim_Z_proj) {
    throw WindowInconsistency("window inconsistency: projected coboundaries exceed projected cocycles");
  }
  rep.h = rep.dim_Z_proj - rep.dim_B_proj;
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string ScanResult::verdict() const {
  if (stable) return "stable at " + std::to_string(*value);
  return "not stable";
}

ScanResult stabilization_verdict(std::vector<WindowReport> reports) {
  ScanResult out;
  out.reports = std::move(reports);
  const std::size_t n = out.reports.size();
  if (n == 0) return out;
  const std::size_t tail = (n + 1) / 2;
  const auto v = out.reports.back().h;
  out.stable = std::all_of(out.reports.end() - tail, out.reports.end(), [&](const auto& r) { return r.h == v; });
  if (out.stable) out.value = v;
  return out;
}

ScanResult stabilization_scan(const GradedModule& mod, int q, std::int64_t d, const std::vector<std::int64_t>& radii) {
  if (radii.size() < 2) throw std::invalid_argument("stabilization scan needs at least two radii");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (radii[i] <= radii[i - 1]) throw std::invalid_argument("radii must be strictly ascending");
  }
  std::vector<WindowReport> reports;
  for (auto r : radii) reports.push_back(windowed_h(mod, q, d, WindowSpec{r}));
  return stabilization_verdict(std::move(reports));
}

std::size_t full_cohomology(const GradedModule& mod, int q) {
  const auto& alg = mod.algebra();
  const auto basis = alg.finite_basis();
  if (!basis) throw std::invalid_argument("full_cohomology needs a finite algebra, got " + alg.name());
  if (q < 0) return 0;

  std::int64_t lo = 0, hi = 0;
  for (auto x : *basis) {
    lo = std::min(lo, alg.degree(x));
    hi = std::max(hi, alg.degree(x));
  }
  const std::int64_t n = static_cast<std::int64_t>(basis->size());
  const std::int64_t span = (hi - lo) * (n + 1) + 1;

  std::size_t total = 0;
  for (std::int64_t d = -span; d <= span; ++d) {
    auto cocycle = differential_matrix(mod, q, d, *basis, *basis);
    const std::size_t z = cocycle.col_keys.size() - rank(cocycle.matrix);
    std::size_t b = 0;
    if (q >= 1) b = rank(differential_matrix(mod, q - 1, d, *basis, *basis).matrix);
    total += z - b;
  }
  return total;
}

}  // namespace gradcoh

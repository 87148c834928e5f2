#include "gradcoh/special.hpp"

#include <stdexcept>

#include "gradcoh/window.hpp"

namespace gradcoh {

GVCocycle::GVCocycle(Rational A) : A_(std::move(A)) {
  if (is_zero(A_)) throw std::invalid_argument("GV normalization A must be nonzero");
}

Rational gv_value(const GVCocycle& gv, std::int64_t n, std::int64_t m, std::int64_t k) {
  if (k != -(n + m)) return 0;
  return gv.A() * Rational((m - n) * (2 * m + n) * (m + 2 * n));
}

HomogeneousCochain gv_as_cochain(const GVCocycle& gv, const AlgebraPtr& alg, std::int64_t radius) {
  HomogeneousCochain c(module_of(alg, ModuleKind::Trivial), 3, 0, radius);
  for (const auto& t : sorted_tuples(alg->window_basis(radius), 3)) {
    if (!t[0].is_indexed() || !t[1].is_indexed() || !t[2].is_indexed()) continue;
    if (t[0].n + t[1].n + t[2].n != 0) continue;
    c.set(t, BasisId::unit(), gv_value(gv, t[0].n, t[1].n, t[2].n));
  }
  return c;
}

HomogeneousCochain alpha_as_cochain(const AlgebraPtr& alg, std::int64_t radius) {
  HomogeneousCochain c(module_of(alg, ModuleKind::Trivial), 2, 0, radius);
  for (const auto& t : sorted_tuples(alg->window_basis(radius), 2)) {
    if (!t[0].is_indexed() || !t[1].is_indexed() || t[0].n + t[1].n != 0) continue;
    c.set(t, BasisId::unit(), alpha(t[0].n, t[1].n));
  }
  return c;
}

CocycleCheck certify_cocycle(const HomogeneousCochain& c, std::int64_t radius) {
  const auto& mod = c.module();
  CocycleCheck out;
  for (const auto& t : sorted_tuples(mod.algebra().window_basis(radius), c.arity() + 1)) {
    for (const auto& [w, form] : expand_differential(mod, c.arity(), c.degree(), t)) {
      Rational sum = 0;
      for (const auto& [key, k] : form) {
        auto v = c.coefficient(key);
        if (!v) throw UndefinedReference(key);
        sum += k * *v;
      }
      if (!is_zero(sum)) {
        out.ok = false;
        out.failing = CochainKey{t, w};
        return out;
      }
    }
  }
  return out;
}

namespace {

struct InnerProblem {
  SparseMatrix generators;  // rows: inner q-keys, cols: (q-1)-keys within 2r
  SparseVector target;      // c on the inner q-keys
  std::vector<CochainKey> keys;
};

InnerProblem inner_problem(const HomogeneousCochain& c, std::int64_t radius) {
  if (c.arity() < 1) throw std::invalid_argument("coboundary questions need q >= 1");
  const auto& mod = c.module();
  const auto& alg = mod.algebra();
  auto dm = differential_matrix(mod, c.arity() - 1, c.degree(), alg.window_basis(radius), alg.window_basis(2 * radius));
  InnerProblem p{std::move(dm.matrix), SparseVector(dm.row_keys.size()), std::move(dm.row_keys)};
  for (Index i = 0; i < p.keys.size(); ++i) {
    auto v = c.coefficient(p.keys[i]);
    if (!v) throw UndefinedReference(p.keys[i]);
    p.target.set(i, *v);
  }
  return p;
}

}  // namespace

bool NoncoboundaryCheck::noncoboundary() const {
  if (solvable) return false;
  return !coboundaries_vanish_at_sl2 || *coboundaries_vanish_at_sl2;
}

NoncoboundaryCheck check_noncoboundary(const HomogeneousCochain& c, std::int64_t radius) {
  auto p = inner_problem(c, radius);
  NoncoboundaryCheck out;
  out.solvable = solve(p.generators, p.target).has_value();

  const Tuple sl2{BasisId::indexed(-1), BasisId::indexed(0), BasisId::indexed(1)};
  for (Index i = 0; i < p.keys.size(); ++i) {
    if (p.keys[i].tuple != sl2 || p.keys[i].target != BasisId::unit()) continue;
    out.value_at_sl2 = p.target.at(i);
    out.coboundaries_vanish_at_sl2 = p.generators.row(i).empty();
  }
  return out;
}

bool certify_noncoboundary(const HomogeneousCochain& c, std::int64_t radius) {
  return check_noncoboundary(c, radius).noncoboundary();
}

std::size_t class_span_increase(const HomogeneousCochain& c, std::int64_t radius) {
  auto p = inner_problem(c, radius);
  const std::size_t before = rank(p.generators);
  SparseMatrix extended(p.generators.rows(), p.generators.cols() + 1);
  const Index extra = static_cast<Index>(p.generators.cols());
  for (std::size_t r = 0; r < p.generators.rows(); ++r) {
    SparseEntries row = p.generators.row(r);
    auto v = p.target.at(static_cast<Index>(r));
    if (!is_zero(v)) row.emplace_back(extra, v);
    extended.set_row(r, std::move(row));
  }
  return rank(extended) - before;
}

AlphaCheck virasoro_alpha_report(std::int64_t radius) {
  AlphaCheck out;
  auto a = alpha_as_cochain(witt(), 2 * radius);
  out.cocycle = certify_cocycle(a, radius).ok;
  out.noncoboundary = certify_noncoboundary(a, radius);
  out.h2 = windowed_h(*module_of(witt(), ModuleKind::Trivial), 2, 0, WindowSpec{radius}).h;
  out.span_increase = class_span_increase(a, radius);
  return out;
}

bool virasoro_alpha_check() {
  for (std::int64_t r = 2; r <= 8; ++r) {
    if (!virasoro_alpha_report(r).ok()) return false;
  }
  return true;
}

}  // namespace gradcoh

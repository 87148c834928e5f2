#include "gradcoh/replay.hpp"

#include <algorithm>
#include <random>

#include "gradcoh/sparse.hpp"
#include "gradcoh/special.hpp"

namespace gradcoh {

namespace {

BasisId e(std::int64_t n) { return BasisId::indexed(n); }

Tuple tup(std::initializer_list<std::int64_t> ns) {
  Tuple out;
  for (auto n : ns) out.push_back(e(n));
  return out;
}

nlohmann::ordered_json tuple_json(const Tuple& t) {
  auto out = nlohmann::ordered_json::array();
  for (auto x : t) {
    if (x.is_indexed()) {
      out.push_back(x.n);
    } else {
      out.push_back(to_string(x));
    }
  }
  return out;
}

std::string tuple_text(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += to_string(t[i]);
  }
  return out + ")";
}

// Canonical key of a tuple whose target degree has exactly one basis element.
std::optional<CochainKey> single_key(const GradedModule& mod, std::int64_t d, const Tuple& tuple, int* sign = nullptr) {
  auto ts = canonicalize(tuple);
  if (sign) *sign = ts.sign;
  if (ts.sign == 0) return std::nullopt;
  const auto targets = mod.targets(tuple_degree(mod.algebra(), ts.sorted) + d);
  if (targets.size() != 1) throw std::invalid_argument("replay needs a unique target for " + tuple_text(tuple));
  return CochainKey{std::move(ts.sorted), targets.front()};
}

class CoboundarySource final : public CoefficientSource {
 public:
  CoboundarySource(std::shared_ptr<HomogeneousCochain> chi)
      : chi_(std::move(chi)), diff_(*chi_, chi_->module_ptr(), chi_->arity(), chi_->degree()) {}
  std::optional<Rational> coefficient(const CochainKey& key) const override { return diff_.coefficient(key); }

 private:
  std::shared_ptr<HomogeneousCochain> chi_;
  DifferentialSource diff_;
};

void require_radius(std::int64_t r) {
  if (r < 8) throw WindowTooSmall("replay needs window radius >= 8, got " + std::to_string(r));
}

}  // namespace

nlohmann::ordered_json to_json(const ReplayLogEntry& entry) {
  nlohmann::ordered_json out;
  out["step"] = entry.step;
  out["anchor"] = entry.anchor;
  out["tuple"] = tuple_json(entry.tuple);
  if (!entry.equation.empty()) out["equation"] = tuple_json(entry.equation);
  out["value"] = to_string(entry.value);
  return out;
}

// ------------------------------------------------------------------ sources

std::optional<Rational> WindowedSource::coefficient(const CochainKey& key) const {
  if (!within(key.tuple, radius_)) return std::nullopt;
  return inner_->coefficient(key);
}

std::optional<Rational> CachedSource::coefficient(const CochainKey& key) const {
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto v = inner_->coefficient(key);
  cache_.emplace(key, v);
  return v;
}

ResidualSource::ResidualSource(std::shared_ptr<const CoefficientSource> psi, std::shared_ptr<const CoefficientSource> phi,
                               ModulePtr mod, int q, std::int64_t d)
    : psi_(std::move(psi)), phi_(std::move(phi)), mod_(std::move(mod)), q_(q), d_(d) {
  if (q_ < 1) throw std::invalid_argument("residual needs arity >= 1");
}

std::optional<Rational> ResidualSource::coefficient(const CochainKey& key) const {
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  std::optional<Rational> out = psi_->coefficient(key);
  if (out) {
    for (const auto& [w, form] : expand_differential(*mod_, q_ - 1, d_, key.tuple)) {
      if (w != key.target) continue;
      auto v = gradcoh::apply(form, *phi_);
      if (!v) {
        out.reset();
      } else {
        *out -= *v;
      }
    }
  }
  cache_.emplace(key, out);
  return out;
}

CoboundaryFixture random_coboundary_fixture(const ModulePtr& mod, int psi_arity, std::int64_t d,
                                            std::int64_t chi_radius, std::uint64_t seed) {
  if (psi_arity < 1) throw std::invalid_argument("fixture arity must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 5);
  auto chi = std::make_shared<HomogeneousCochain>(mod, psi_arity - 1, d);
  const auto& alg = mod->algebra();
  for (const auto& tuple : sorted_tuples(alg.window_basis(chi_radius), psi_arity - 1)) {
    for (auto w : mod->targets(tuple_degree(alg, tuple) + d)) {
      const long a = num(rng);
      const long b = den(rng);
      chi->set(tuple, w, frac(a, b));
    }
  }
  CoboundaryFixture out;
  out.chi = chi;
  out.psi = std::make_shared<CachedSource>(std::make_shared<CoboundarySource>(chi));
  return out;
}

// ------------------------------------------------------------ degree shift

FuksResult fuks_homotopy(const HomogeneousCochain& psi) {
  const auto d = psi.degree();
  const int q = psi.arity();
  if (d == 0) throw std::invalid_argument("fuks_homotopy needs a nonzero degree");
  if (q < 1) throw std::invalid_argument("fuks_homotopy needs arity >= 1");
  if (!psi.domain_radius()) throw std::invalid_argument("fuks_homotopy needs a cochain with a domain radius");
  const auto outer = *psi.domain_radius();
  const auto inner = outer / 2;

  auto check = certify_cocycle(psi, inner);
  if (!check.ok) throw ReplayFailure("not a cocycle at " + to_string(*check.failing));

  const auto& mod = psi.module();
  const auto& alg = mod.algebra();
  FuksResult out{HomogeneousCochain(psi.module_ptr(), q - 1, d, outer), inner, false};
  const Rational scale = Rational(-1) / Rational(d);
  for (const auto& x : sorted_tuples(alg.window_basis(outer), q - 1)) {
    if (std::find(x.begin(), x.end(), e(0)) != x.end()) continue;
    Tuple args{e(0)};
    args.insert(args.end(), x.begin(), x.end());
    for (const auto& [w, c] : evaluate(psi, args).terms()) out.phi.set(x, w, scale * c);
  }

  const auto dphi = differential(out.phi, inner);
  out.residual_zero = true;
  for (const auto& x : sorted_tuples(alg.window_basis(inner), q)) {
    for (auto w : mod.targets(tuple_degree(alg, x) + d)) {
      CochainKey key{x, w};
      if (psi.at(key) != dphi.at(key)) out.residual_zero = false;
    }
  }
  return out;
}

// ------------------------------------------------------------ normalization

bool PhiTable::in_box(std::int64_t a, std::int64_t b) const {
  return a >= -box_ && a <= box_ && b >= -box_ && b <= box_;
}

bool PhiTable::normalized(std::int64_t a, std::int64_t b) {
  if (a > b) std::swap(a, b);
  return a == 1 || b == 1 || (a == -1 && b == 2);
}

std::optional<Rational> PhiTable::value(std::int64_t a, std::int64_t b) const {
  if (a == b || normalized(a, b)) return Rational(0);
  const bool flip = a > b;
  if (flip) std::swap(a, b);
  auto it = values_.find({a, b});
  if (it == values_.end()) return std::nullopt;
  return flip ? Rational(-it->second) : it->second;
}

void PhiTable::assign(std::int64_t a, std::int64_t b, const Rational& v) {
  if (a == b || normalized(a, b)) throw std::logic_error("assigning a normalized phi coefficient");
  if (a > b) {
    values_[{b, a}] = -v;
  } else {
    values_[{a, b}] = v;
  }
}

std::optional<Rational> PhiTable::coefficient(const CochainKey& key) const {
  if (key.tuple.size() != 2 || !key.tuple[0].is_indexed() || !key.tuple[1].is_indexed()) return std::nullopt;
  const auto a = key.tuple[0].n;
  const auto b = key.tuple[1].n;
  if (key.target != e(a + b)) return Rational(0);
  return value(a, b);
}

HomogeneousCochain PhiTable::to_cochain() const {
  HomogeneousCochain out(mod_, 2, 0);
  for (const auto& [ab, v] : values_) out.set(tup({ab.first, ab.second}), v);
  return out;
}

namespace {

class Normalizer {
 public:
  Normalizer(NormalizationState& state, ModulePtr mod) : s_(state), mod_(std::move(mod)) {}

  // Solves delta(phi)(eq) = psi(eq) for phi(a, b). Returns false when the
  // equation reaches outside the box or the psi window.
  bool solve(const std::string& anchor, std::int64_t a, std::int64_t b, const Tuple& eq) {
    auto& phi = *s_.phi;
    if (!phi.in_box(a, b)) return skip();
    Rational rhs;
    try {
      rhs = evaluate(*s_.psi, *mod_, 0, eq).coeff(e(tuple_degree(mod_->algebra(), eq)));
    } catch (const UndefinedReference&) {
      return skip();
    }
    const auto forms = expand_differential(*mod_, 2, 0, eq);
    int sign = 0;
    const auto target = single_key(*mod_, 0, tup({a, b}), &sign);
    Rational pivot = 0;
    for (const auto& [key, c] : forms.front().second) {
      if (key == *target) {
        pivot = c;
        continue;
      }
      const auto x = key.tuple[0].n;
      const auto y = key.tuple[1].n;
      if (!phi.in_box(x, y)) return skip();
      auto v = phi.value(x, y);
      if (!v) {
        throw ReplayFailure("phi" + tuple_text(key.tuple) + " used before it was assigned (" + anchor + ")");
      }
      rhs -= c * *v;
    }
    if (is_zero(pivot)) {
      throw ReplayFailure("division by zero guard: phi" + tuple_text(tup({a, b})) + " has no coefficient in " +
                          tuple_text(eq));
    }
    const Rational canonical = rhs / pivot;
    phi.assign(target->tuple[0].n, target->tuple[1].n, canonical);
    s_.log.push_back({s_.log.size(), anchor, tup({a, b}), eq, sign * canonical});
    return true;
  }

 private:
  bool skip() {
    ++s_.skipped;
    return false;
  }

  NormalizationState& s_;
  ModulePtr mod_;
};

}  // namespace

NormalizationState lemma1_normalize(std::shared_ptr<const CoefficientSource> psi, std::int64_t r,
                                    const ReplayOptions& opts) {
  require_radius(r);
  if (opts.box_factor < 1) throw std::invalid_argument("box factor must be >= 1");
  auto mod = module_of(witt(), ModuleKind::Adjoint);
  NormalizationState s;
  s.radius = r;
  s.box = opts.box_factor * r;
  const auto B = s.box;
  s.psi = std::make_shared<WindowedSource>(std::move(psi), B);
  s.phi = std::make_shared<PhiTable>(mod, B);
  Normalizer n(s, mod);

  // Both indices nonpositive: the condition at (i, j, 1).
  for (std::int64_t i = 0; i >= -B; --i)
    for (std::int64_t j = i - 1; j >= -B; --j) n.solve("nonpositive pairs", i, j, tup({i, j, 1}));

  // phi(i, 2) for i <= 0 through the conditions at (i, 2, -1) and one pivot.
  n.solve("pivot phi(-4,2)", -4, 2, tup({-3, 2, -1}));
  for (std::int64_t i = -4; i - 1 >= -B; --i) n.solve("phi(.,2) ladder", i - 1, 2, tup({i, 2, -1}));
  n.solve("pivot phi(2,-2)", 2, -2, tup({-4, 2, -2}));
  n.solve("phi(.,2) ladder", -3, 2, tup({-2, 2, -1}));
  n.solve("pivot phi(0,2)", 0, 2, tup({0, 2, -1}));

  // Mixed signs: climb in j with the condition at (i, j, 1).
  for (std::int64_t i = 0; i >= -B; --i)
    for (std::int64_t j = 2; j + 1 <= B; ++j) n.solve("mixed pairs", i, j + 1, tup({i, j, 1}));

  // Both indices positive: the condition at (i, j, -1).
  for (std::int64_t i = 2; i <= B; ++i)
    for (std::int64_t j = i + 1; j <= B; ++j) n.solve("positive pairs", i, j, tup({i, j, -1}));

  s.psi_prime = std::make_shared<ResidualSource>(s.psi, s.phi, mod, 3, 0);

  auto check = [&](const Tuple& t) {
    auto key = single_key(*mod, 0, t);
    if (!key) return;
    auto v = s.psi_prime->coefficient(*key);
    if (!v) return;
    ++s.conditions_checked;
    if (!is_zero(*v)) s.condition_failures.push_back(key->tuple);
  };
  for (std::int64_t i = -r; i <= 0; ++i)
    for (std::int64_t j = -r; j <= r; ++j) check(tup({i, j, 1}));
  for (std::int64_t i = 1; i <= r; ++i)
    for (std::int64_t j = i + 1; j <= r; ++j) check(tup({i, j, -1}));
  for (std::int64_t i = -r; i <= r; ++i) check(tup({i, -1, 2}));
  check(tup({-4, 2, -2}));
  return s;
}

// ------------------------------------------------------------- vanishing

std::vector<ReplayStep> h3_level_plan(std::int64_t M) {
  std::vector<ReplayStep> plan;
  auto step = [&](const char* anchor, Tuple target, std::vector<Tuple> eqs) {
    plan.push_back({anchor, std::move(target), std::move(eqs)});
  };

  // Normalized conditions; equations reach sums of two indices.
  const auto H = 2 * M;
  for (std::int64_t i = -H; i <= 0; ++i)
    for (std::int64_t j = -H; j <= H; ++j) step("normalized", tup({i, j, 1}), {});
  for (std::int64_t i = 2; i <= H; ++i)
    for (std::int64_t j = i + 1; j <= H; ++j) step("normalized", tup({i, j, -1}), {});
  for (std::int64_t i = -H; i <= H; ++i) step("normalized", tup({i, -1, 2}), {});
  step("normalized", tup({-4, 2, -2}), {});

  // Level 0.
  for (std::int64_t i = -1; i >= -M; --i)
    for (std::int64_t j = i - 1; j >= -M; --j) step("level 0, nonpositive", tup({i, j, 0}), {tup({i, j, 0, 1})});
  for (std::int64_t i = -3; i - 1 >= -M; --i) step("level 0, two-zero ladder", tup({i - 1, 2, 0}), {tup({i, 2, 0, -1})});
  step("level 0, pivot", tup({2, -2, 0}), {tup({-4, 2, -2, 0})});
  step("level 0, two-zero ladder", tup({-3, 2, 0}), {tup({-2, 2, 0, -1})});
  for (std::int64_t i = -1; i >= -M; --i)
    for (std::int64_t j = 2; j + 1 <= M; ++j) step("level 0, mixed", tup({i, j + 1, 0}), {tup({i, j, 0, 1})});
  for (std::int64_t i = 1; i <= M; ++i)
    for (std::int64_t j = i + 1; j <= M; ++j) step("level 0, positive", tup({i, j, 0}), {tup({i, j, 0, -1})});

  // Levels 1 and -1.
  for (std::int64_t i = -2; i >= -M; --i)
    for (std::int64_t j = i - 1; j >= -M; --j) step("level -1, nonpositive", tup({i, j, -1}), {tup({i, j, 1, -1})});
  for (std::int64_t i = -2; i >= -M; --i)
    for (std::int64_t j = 2; j + 1 <= M; ++j) step("level -1, mixed", tup({i, j + 1, -1}), {tup({i, j, 1, -1})});
  for (std::int64_t i = 2; i <= M; ++i)
    for (std::int64_t j = i + 1; j <= M; ++j) step("level 1, positive", tup({i, j, 1}), {tup({i, j, 1, -1})});

  // All indices nonpositive: level -2, then downward in the third index.
  for (std::int64_t i = -3; i >= -M; --i)
    for (std::int64_t j = i - 1; j >= -M; --j) step("level -2, nonpositive", tup({i, j, -2}), {tup({i, j, -2, 1})});
  for (std::int64_t k = -2; k - 1 >= -M; --k)
    for (std::int64_t i = 0; i >= -M; --i)
      for (std::int64_t j = i - 1; j >= -M; --j)
        step("nonpositive, descending level", tup({k - 1, i, j}), {tup({i, j, k, -1})});

  // Mixed signs.
  step("level -2, mixed pivot", tup({-3, 2, -2}), {tup({-3, 2, -2, -1})});
  for (std::int64_t j = 2; j + 1 <= M; ++j) step("level -2, row -3", tup({j + 1, -3, -2}), {tup({-3, j, -2, 1})});
  step("level 2, pivot", tup({-2, 3, 2}),
       {tup({-2, 3, 2, -1}), tup({-3, 3, 2, -1}), tup({-4, 3, 2, -1}), tup({-3, 3, 2, -2})});
  for (std::int64_t i = -2; i - 1 >= -M; --i) step("level 2, column 3", tup({i - 1, 3, 2}), {tup({i, 3, 2, -1})});
  for (std::int64_t i = -4; i >= -M; --i) {
    step("level -2, row pivot", tup({i, 2, -2}),
         {tup({i, 2, -2, 1}), tup({i, 3, -2, 1}), tup({i, 4, -2, 1}), tup({i, 3, -2, 2})});
    for (std::int64_t j = 2; j + 1 <= M; ++j) step("level -2, row", tup({i, j + 1, -2}), {tup({i, j, -2, 1})});
  }
  for (std::int64_t j = 4; j <= M; ++j) {
    step("level 2, column pivot", tup({-2, j, 2}),
         {tup({-2, j, 2, -1}), tup({-3, j, 2, -1}), tup({-4, j, 2, -1}), tup({-3, j, 2, -2})});
    for (std::int64_t i = -2; i - 1 >= -M; --i) step("level 2, column", tup({i - 1, j, 2}), {tup({i, j, 2, -1})});
  }
  for (std::int64_t k = 2; k + 1 <= M; ++k)
    for (std::int64_t i = 0; i >= -M; --i)
      for (std::int64_t j = 1; j <= M; ++j) step("mixed, ascending level", tup({k + 1, i, j}), {tup({i, j, k, 1})});
  for (std::int64_t k = -2; k - 1 >= -M; --k)
    for (std::int64_t i = 0; i >= -M; --i)
      for (std::int64_t j = 1; j <= M; ++j) step("mixed, descending level", tup({k - 1, i, j}), {tup({i, j, k, -1})});

  // All indices positive.
  for (std::int64_t i = 3; i <= M; ++i)
    for (std::int64_t j = i + 1; j <= M; ++j) step("level 2, positive", tup({i, j, 2}), {tup({i, j, 2, -1})});
  for (std::int64_t k = 2; k + 1 <= M; ++k)
    for (std::int64_t i = 1; i <= M; ++i)
      for (std::int64_t j = i + 1; j <= M; ++j)
        step("positive, ascending level", tup({k + 1, i, j}), {tup({i, j, k, 1})});
  return plan;
}

VanishCertificate level_vanish_check(const CoefficientSource& psi, const ModulePtr& mod, int q,
                                     const std::vector<ReplayStep>& plan, std::int64_t radius) {
  VanishCertificate cert;
  std::set<CochainKey> zero;

  auto certify = [&](const ReplayStep& st, const CochainKey& key, const Rational& value, const Tuple& eq) {
    if (!is_zero(value)) {
      cert.residuals.push_back({key.tuple, value, "nonzero residual"});
      return;
    }
    zero.insert(key);
    ++cert.certified;
    if (std::find(cert.checked_levels.begin(), cert.checked_levels.end(), st.anchor) == cert.checked_levels.end()) {
      cert.checked_levels.push_back(st.anchor);
    }
    cert.log.push_back({cert.log.size(), st.anchor, st.target, eq, value});
  };

  for (const auto& st : plan) {
    const auto target = single_key(*mod, 0, st.target);
    if (!target || zero.count(*target)) continue;

    if (st.equations.empty()) {
      auto v = psi.coefficient(*target);
      if (!v) {
        ++cert.skipped;
        continue;
      }
      certify(st, *target, *v, {});
      continue;
    }

    std::vector<LinearForm> rows;
    bool defined = true;
    bool consistent = true;
    for (const auto& eq : st.equations) {
      for (auto& [w, form] : expand_differential(*mod, q, 0, eq)) {
        auto v = gradcoh::apply(form, psi);
        if (!v) {
          defined = false;
          break;
        }
        if (!is_zero(*v)) {
          cert.residuals.push_back({eq, *v, "not a cocycle"});
          consistent = false;
        }
        std::erase_if(form, [&](const auto& term) { return zero.count(term.first) > 0; });
        rows.push_back(std::move(form));
      }
      if (!defined) break;
    }
    if (!defined) {
      ++cert.skipped;
      continue;
    }
    if (!consistent) continue;

    std::map<CochainKey, Index> unknown;
    for (const auto& row : rows)
      for (const auto& [key, c] : row) unknown.emplace(key, 0);
    if (!unknown.count(*target)) {
      ++cert.unresolved;
      continue;
    }
    Index next = 0;
    for (auto& [key, idx] : unknown) idx = next++;
    SparseMatrix m(0, unknown.size());
    for (const auto& row : rows) {
      SparseEntries entries;
      for (const auto& [key, c] : row) entries.emplace_back(unknown.at(key), c);
      m.append_row(std::move(entries));
    }
    const auto base = rank(m);
    m.append_row({{unknown.at(*target), Rational(1)}});
    if (rank(m) != base) {
      ++cert.unresolved;
      continue;
    }
    certify(st, *target, *psi.coefficient(*target), st.equations.front());
  }

  const auto& alg = mod->algebra();
  for (std::int64_t s = 0; s <= radius; ++s) {
    bool all = true;
    for (const auto& t : sorted_tuples(alg.window_basis(s), q)) {
      auto key = single_key(*mod, 0, t);
      if (key && !zero.count(*key)) {
        all = false;
        break;
      }
    }
    if (!all) break;
    cert.certified_radius = s;
  }
  return cert;
}

H3Replay replay_h3(std::shared_ptr<const CoefficientSource> psi, std::int64_t r, const ReplayOptions& opts) {
  H3Replay out{lemma1_normalize(std::move(psi), r, opts), {}};
  out.certificate =
      level_vanish_check(*out.state.psi_prime, module_of(witt(), ModuleKind::Adjoint), 3, h3_level_plan(2 * r), r);
  return out;
}

VanishCertificate h1_replay(std::shared_ptr<const CoefficientSource> psi, std::int64_t r) {
  require_radius(r);
  auto mod = module_of(witt(), ModuleKind::Adjoint);
  auto windowed = std::make_shared<WindowedSource>(std::move(psi), 2 * r);
  auto c1 = windowed->coefficient(CochainKey{tup({1}), e(1)});
  if (!c1) throw std::invalid_argument("psi(e_1) is not defined");
  auto phi = std::make_shared<HomogeneousCochain>(mod, 0, 0);
  phi->set(Tuple{}, e(0), *c1);
  ResidualSource residual(windowed, phi, mod, 1, 0);

  std::vector<ReplayStep> plan;
  plan.push_back({"normalized", tup({1}), {}});
  plan.push_back({"degree zero", tup({0}), {tup({0, 1})}});
  for (std::int64_t i = -1; i >= -r; --i) plan.push_back({"negative ladder", tup({i}), {tup({i, 1})}});
  plan.push_back({"pivot", tup({2}), {tup({2, 1}), tup({3, 1}), tup({4, 1}), tup({3, 2})}});
  for (std::int64_t i = 2; i + 1 <= r; ++i) plan.push_back({"positive ladder", tup({i + 1}), {tup({i, 1})}});
  return level_vanish_check(residual, mod, 1, plan, r);
}

}  // namespace gradcoh

#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "gradcoh/cochain.hpp"
#include "printed_forms.hpp"

using namespace gradcoh;

namespace {

BasisId e(std::int64_t n) { return BasisId::indexed(n); }
Tuple tup(std::initializer_list<std::int64_t> ns) {
  Tuple out;
  for (auto n : ns) out.push_back(e(n));
  return out;
}

// Random cochain on the full window of radius `radius`.
HomogeneousCochain random_cochain(std::mt19937& rng, const ModulePtr& mod, int q, std::int64_t d,
                                  std::int64_t radius) {
  HomogeneousCochain c(mod, q, d, radius);
  for (const auto& t : sorted_tuples(mod->algebra().window_basis(radius), q)) {
    for (auto w : mod->targets(tuple_degree(mod->algebra(), t) + d)) c.set(t, w, printed::random_rational(rng));
  }
  return c;
}

}  // namespace

TEST_CASE("canonicalize") {
  auto a = canonicalize(tup({3, 1}));
  CHECK(a.sorted == tup({1, 3}));
  CHECK(a.sign == -1);
  CHECK(canonicalize(tup({1, 1, 2})).sign == 0);
  auto b = canonicalize(tup({2, -1, 0}));
  CHECK(b.sorted == tup({-1, 0, 2}));
  CHECK(b.sign == 1);
  auto c = canonicalize({BasisId::central(), e(100)});
  CHECK(c.sorted == Tuple{e(100), BasisId::central()});
  CHECK(c.sign == -1);

  // Brute force over all permutations of small tuples.
  std::vector<long> base{-2, 0, 3, 5};
  std::sort(base.begin(), base.end());
  do {
    Tuple t;
    for (long n : base) t.push_back(e(n));
    CHECK(canonicalize(t).sign == printed::inversion_sign(base));
  } while (std::next_permutation(base.begin(), base.end()));
}

TEST_CASE("evaluate") {
  auto adj = module_of(witt(), ModuleKind::Adjoint);
  HomogeneousCochain psi(adj, 3, 0);
  psi.set(tup({1, 2, 3}), 5);
  CHECK(evaluate(psi, tup({1, 2, 3})) == LinearCombination(e(6), 5));
  CHECK(evaluate(psi, tup({2, 1, 3})) == LinearCombination(e(6), -5));
  CHECK(evaluate(psi, tup({1, 1, 3})).empty());
  CHECK(evaluate(psi, tup({1, 2, 4})).empty());

  std::vector<long> idx{1, 2, 3};
  do {
    Tuple t;
    for (long n : idx) t.push_back(e(n));
    CHECK(evaluate(psi, t) == LinearCombination(e(6), 5 * printed::inversion_sign(idx)));
  } while (std::next_permutation(idx.begin(), idx.end()));

  HomogeneousCochain bounded(adj, 1, 0, 2);
  CHECK_THROWS_AS(evaluate(bounded, tup({3})), UndefinedReference);
  CHECK_THROWS_AS(bounded.set(tup({3}), 1), std::invalid_argument);

  auto triv = module_of(witt(), ModuleKind::Trivial);
  HomogeneousCochain t2(triv, 2, 0);
  t2.set(tup({-1, 1}), 3);
  CHECK_THROWS_AS(t2.set(tup({1, 2}), 1), std::invalid_argument);
  t2.set(tup({1, 2}), 0);
  CHECK(evaluate(t2, tup({1, -1})) == LinearCombination(BasisId::unit(), -3));
}

TEST_CASE("differential at q=0") {
  auto adj = module_of(witt(), ModuleKind::Adjoint);
  HomogeneousCochain phi(adj, 0, 0);
  phi.set({}, 1);
  auto dphi = differential(phi, 5);
  CHECK(evaluate(dphi, tup({3})) == LinearCombination(e(3), 3));
  for (int n = -5; n <= 5; ++n) CHECK(dphi.at({tup({n}), e(n)}) == n);

  HomogeneousCochain zero(adj, 2, 1, 8);
  CHECK(differential(zero).is_zero());
  CHECK(differential(zero).arity() == 3);
  CHECK(differential(zero).degree() == 1);
}

TEST_CASE("differential matches the printed expansions") {
  auto adj = module_of(witt(), ModuleKind::Adjoint);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto v = printed::distinct(rng, 4, 12);
    auto f2 = expand_differential(*adj, 2, 0, tup({v[0], v[1], v[2]}));
    REQUIRE(f2.size() == 1);
    CHECK(f2[0].first == e(v[0] + v[1] + v[2]));
    CHECK(printed::to_map(f2[0].second) == printed::delta2(v[0], v[1], v[2]));

    auto f3 = expand_differential(*adj, 3, 0, tup({v[0], v[1], v[2], v[3]}));
    REQUIRE(f3.size() == 1);
    CHECK(printed::to_map(f3[0].second) == printed::delta3(v[0], v[1], v[2], v[3]));
  }
}

TEST_CASE("delta squared vanishes") {
  std::mt19937 rng(5);
  std::vector<ModulePtr> modules{module_of(witt(), ModuleKind::Adjoint), module_of(witt(), ModuleKind::Trivial),
                                 module_of(virasoro(), ModuleKind::Adjoint),
                                 module_of(virasoro(), ModuleKind::WittQuotient)};
  std::uniform_int_distribution<int> qd(0, 2), dd(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto& mod = modules[trial % modules.size()];
    const int q = qd(rng);
    const int d = dd(rng);
    auto c = random_cochain(rng, mod, q, d, 12);
    auto dd_c = differential(differential(c));
    CHECK(dd_c.arity() == q + 2);
    CHECK(dd_c.is_zero());
  }
}

TEST_CASE("lazy differential agrees with the stored one") {
  std::mt19937 rng(9);
  auto mod = module_of(virasoro(), ModuleKind::Adjoint);
  auto c = random_cochain(rng, mod, 2, 0, 8);
  auto dc = differential(c);
  DifferentialSource lazy(c, mod, 2, 0);
  for (const auto& t : sorted_tuples(virasoro()->window_basis(4), 3)) {
    for (auto w : mod->targets(tuple_degree(*virasoro(), t))) {
      CochainKey key{t, w};
      CHECK(lazy.coefficient(key) == dc.at(key));
    }
  }
  CHECK_FALSE(lazy.coefficient({tup({-8, 7, 8}), e(7)}).has_value());
}

TEST_CASE("undefined references are reported") {
  auto adj = module_of(witt(), ModuleKind::Adjoint);
  HomogeneousCochain c(adj, 2, 0, 4);
  CHECK_THROWS_AS(differential(c, 3), UndefinedReference);
  CHECK_NOTHROW(differential(c, 2));
}

TEST_CASE("decompose") {
  auto adj = module_of(witt(), ModuleKind::Adjoint);
  RawCochain raw;
  LinearCombination value(e(3), 1);
  value.add(e(4), 1);
  raw[tup({1, 2})] = value;
  auto parts = decompose(adj, 2, raw);
  REQUIRE(parts.size() == 2);
  CHECK(parts.at(0).at({tup({1, 2}), e(3)}) == 1);
  CHECK(parts.at(1).at({tup({1, 2}), e(4)}) == 1);

  RawCochain homog;
  homog[tup({-1, 2})] = LinearCombination(e(1), 7);
  homog[tup({0, 5})] = LinearCombination(e(5), 2);
  parts = decompose(adj, 2, homog);
  REQUIRE(parts.size() == 1);
  CHECK(parts.begin()->first == 0);
  CHECK(parts.at(0).coefficients().size() == 2);

  CHECK(decompose(adj, 2, {}).empty());

  // Recombining the parts reproduces the input.
  std::mt19937 rng(3);
  RawCochain mixed;
  for (int a = -3; a <= 3; ++a)
    for (int b = a + 1; b <= 3; ++b) {
      LinearCombination lc;
      for (int s = -2; s <= 2; ++s) lc.add(e(a + b + s), printed::random_rational(rng));
      mixed[tup({a, b})] = lc;
    }
  RawCochain back;
  for (const auto& [d, part] : decompose(adj, 2, mixed)) {
    for (const auto& [key, c] : part.coefficients()) back[key.tuple].add(key.target, c);
  }
  CHECK(back == mixed);
}

TEST_CASE("json round trip") {
  std::mt19937 rng(2);
  auto mod = module_of(virasoro(), ModuleKind::Adjoint);
  auto c = random_cochain(rng, mod, 2, 0, 3);
  auto doc = to_json(c);
  CHECK(doc.at("coefficients").contains("-1,1|t"));
  auto back = cochain_from_json(doc, mod);
  CHECK(back.coefficients() == c.coefficients());
  CHECK(back.domain_radius() == c.domain_radius());
}

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradcoh/module.hpp"
#include "json.hpp"

namespace gradcoh {

using Tuple = std::vector<BasisId>;

// One coefficient slot of a homogeneous cochain: the value on a strictly
// sorted tuple, paired with one module basis element of the target degree.
struct CochainKey {
  Tuple tuple;
  BasisId target;

  friend auto operator<=>(const CochainKey&, const CochainKey&) = default;
};

std::string to_string(const CochainKey& key);

struct TupleSign {
  Tuple sorted;
  int sign = 0;  // 0 iff the tuple has a repeated entry
};

TupleSign canonicalize(Tuple tuple);

// Strictly increasing tuples of length q drawn from a sorted basis.
std::vector<Tuple> sorted_tuples(const std::vector<BasisId>& basis, int q);

// True when every Indexed entry lies in [-radius, radius].
bool within(const Tuple& tuple, std::int64_t radius);

std::int64_t tuple_degree(const GradedAlgebra& alg, const Tuple& tuple);

class UndefinedReference : public std::runtime_error {
 public:
  explicit UndefinedReference(const CochainKey& key)
      : std::runtime_error("undefined reference " + to_string(key)), key_(key) {}
  const CochainKey& key() const { return key_; }

 private:
  CochainKey key_;
};

// Read access to cochain coefficients on canonical keys; nullopt means the
// coefficient is not known (outside the stored domain).
class CoefficientSource {
 public:
  virtual ~CoefficientSource() = default;
  virtual std::optional<Rational> coefficient(const CochainKey& key) const = 0;
};

class HomogeneousCochain final : public CoefficientSource {
 public:
  // Without a domain radius the cochain is finitely supported: every key not
  // stored is zero. With one, keys whose tuple leaves the radius are undefined.
  HomogeneousCochain(ModulePtr mod, int q, std::int64_t d, std::optional<std::int64_t> domain_radius = std::nullopt);

  int arity() const { return q_; }
  std::int64_t degree() const { return d_; }
  const GradedModule& module() const { return *mod_; }
  const ModulePtr& module_ptr() const { return mod_; }
  std::optional<std::int64_t> domain_radius() const { return domain_radius_; }

  // Value on `tuple` (any order) toward `target`; the alternating sign is
  // applied. Throws on repeats, a wrong target degree or a tuple outside the
  // domain.
  void set(const Tuple& tuple, BasisId target, const Rational& value);
  // Same, for modules with a single basis element of the target degree.
  void set(const Tuple& tuple, const Rational& value);
  void add(const Tuple& tuple, BasisId target, const Rational& value);

  // Stored value on a canonical key (zero when absent).
  Rational at(const CochainKey& key) const;
  std::optional<Rational> coefficient(const CochainKey& key) const override;
  bool defined(const Tuple& sorted_tuple) const;

  const std::map<CochainKey, Rational>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

 private:
  ModulePtr mod_;
  int q_;
  std::int64_t d_;
  std::optional<std::int64_t> domain_radius_;
  std::map<CochainKey, Rational> coeffs_;
};

// psi(tuple) as a module element for a degree-d q-cochain read through `src`.
// Throws UndefinedReference if a needed coefficient is unknown.
LinearCombination evaluate(const CoefficientSource& src, const GradedModule& mod, std::int64_t d, const Tuple& tuple);
LinearCombination evaluate(const HomogeneousCochain& c, const Tuple& tuple);

// Sorted linear form in q-cochain coefficients.
using LinearForm = std::vector<std::pair<CochainKey, Rational>>;

// The differential of a generic degree-d q-cochain at the (q+1)-tuple `tuple`
// (taken in the given order), one linear form per target basis element.
std::vector<std::pair<BasisId, LinearForm>> expand_differential(const GradedModule& mod, int q, std::int64_t d,
                                                                const Tuple& tuple);

// Value of a linear form; nullopt if some coefficient is unknown.
std::optional<Rational> apply(const LinearForm& form, const CoefficientSource& src);

// delta c on all sorted (q+1)-tuples within `radius`. Throws UndefinedReference.
HomogeneousCochain differential(const HomogeneousCochain& c, std::int64_t radius);
// Uses half the domain radius of c, which keeps every reference defined.
HomogeneousCochain differential(const HomogeneousCochain& c);

// Lazily computed delta of another source.
class DifferentialSource final : public CoefficientSource {
 public:
  DifferentialSource(const CoefficientSource& inner, ModulePtr mod, int inner_q, std::int64_t d)
      : inner_(inner), mod_(std::move(mod)), q_(inner_q), d_(d) {}
  std::optional<Rational> coefficient(const CochainKey& key) const override;

 private:
  const CoefficientSource& inner_;
  ModulePtr mod_;
  int q_;
  std::int64_t d_;
};

// A not necessarily homogeneous cochain: sorted tuple -> module element.
using RawCochain = std::map<Tuple, LinearCombination>;

// Splits raw into homogeneous parts by degree (deg(target) - deg(tuple)).
std::map<std::int64_t, HomogeneousCochain> decompose(const ModulePtr& mod, int q, const RawCochain& raw);

// {"algebra", "module", "q", "d", "domain_radius"?, "coefficients": {"i,j,k": "p/q"}}
// A key carries a "|target" suffix when the target degree has several basis elements.
nlohmann::json to_json(const HomogeneousCochain& c);
HomogeneousCochain cochain_from_json(const nlohmann::json& doc, const ModulePtr& mod);

}  // namespace gradcoh

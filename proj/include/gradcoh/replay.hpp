#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradcoh/cochain.hpp"
#include "json.hpp"

namespace gradcoh {

class WindowTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for "not a cocycle", "division by zero guard" and ordering faults.
class ReplayFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReplayLogEntry {
  std::size_t step = 0;
  std::string anchor;
  Tuple tuple;        // coefficient that was assigned or certified
  Tuple equation;     // tuple of the condition that produced it (empty for hypotheses)
  Rational value;
};
using ReplayLog = std::vector<ReplayLogEntry>;

nlohmann::ordered_json to_json(const ReplayLogEntry& entry);

// ------------------------------------------------------------------ sources

// Restricts another source to keys whose tuple lies within a radius.
class WindowedSource final : public CoefficientSource {
 public:
  WindowedSource(std::shared_ptr<const CoefficientSource> inner, std::int64_t radius)
      : inner_(std::move(inner)), radius_(radius) {}
  std::optional<Rational> coefficient(const CochainKey& key) const override;

 private:
  std::shared_ptr<const CoefficientSource> inner_;
  std::int64_t radius_;
};

// Memoizes another source. Not thread safe.
class CachedSource final : public CoefficientSource {
 public:
  explicit CachedSource(std::shared_ptr<const CoefficientSource> inner) : inner_(std::move(inner)) {}
  std::optional<Rational> coefficient(const CochainKey& key) const override;

 private:
  std::shared_ptr<const CoefficientSource> inner_;
  mutable std::map<CochainKey, std::optional<Rational>> cache_;
};

// psi - delta(phi) for a (q-1)-cochain phi, memoized.
class ResidualSource final : public CoefficientSource {
 public:
  ResidualSource(std::shared_ptr<const CoefficientSource> psi, std::shared_ptr<const CoefficientSource> phi,
                 ModulePtr mod, int q, std::int64_t d);
  std::optional<Rational> coefficient(const CochainKey& key) const override;

 private:
  std::shared_ptr<const CoefficientSource> psi_;
  std::shared_ptr<const CoefficientSource> phi_;
  ModulePtr mod_;
  int q_;
  std::int64_t d_;
  mutable std::map<CochainKey, std::optional<Rational>> cache_;
};

// psi = delta(chi) for a random finitely supported chi.
struct CoboundaryFixture {
  std::shared_ptr<HomogeneousCochain> chi;
  std::shared_ptr<const CoefficientSource> psi;  // arity chi.arity() + 1
};

// chi has independent random rational coefficients (numerators in [-9, 9],
// denominators in [1, 5]) on every key within chi_radius.
CoboundaryFixture random_coboundary_fixture(const ModulePtr& mod, int psi_arity, std::int64_t d,
                                            std::int64_t chi_radius, std::uint64_t seed);

// ------------------------------------------------------------ degree shift

struct FuksResult {
  HomogeneousCochain phi;
  std::int64_t inner_radius = 0;
  bool residual_zero = false;
};

// phi(x_1..x_{q-1}) = -(1/d) psi(e_0, x_1..x_{q-1}); checks psi - delta(phi)
// on the inner window (half the domain radius of psi). Throws ReplayFailure
// ("not a cocycle") if psi violates an inner cocycle condition.
FuksResult fuks_homotopy(const HomogeneousCochain& psi);

// ------------------------------------------------------------ normalization

// Degree-zero adjoint 2-cochain of the Witt algebra under construction, with
// the normalization phi_{i,1} = 0 and phi_{-1,2} = 0 built in.
class PhiTable final : public CoefficientSource {
 public:
  PhiTable(ModulePtr mod, std::int64_t box) : mod_(std::move(mod)), box_(box) {}

  std::int64_t box() const { return box_; }
  bool in_box(std::int64_t a, std::int64_t b) const;
  static bool normalized(std::int64_t a, std::int64_t b);
  std::optional<Rational> value(std::int64_t a, std::int64_t b) const;
  void assign(std::int64_t a, std::int64_t b, const Rational& v);
  std::size_t assigned() const { return values_.size(); }

  std::optional<Rational> coefficient(const CochainKey& key) const override;
  // Assigned values as a cochain (finitely supported).
  HomogeneousCochain to_cochain() const;

 private:
  ModulePtr mod_;
  std::int64_t box_;
  std::map<std::pair<std::int64_t, std::int64_t>, Rational> values_;  // a < b
};

struct ReplayOptions {
  // phi is built on indices within box_factor * r; psi is read on the same range.
  std::int64_t box_factor = 4;
};

struct NormalizationState {
  std::int64_t radius = 0;
  std::int64_t box = 0;
  std::shared_ptr<const CoefficientSource> psi;
  std::shared_ptr<PhiTable> phi;
  std::shared_ptr<const CoefficientSource> psi_prime;
  ReplayLog log;
  std::size_t skipped = 0;  // recurrence steps left out because they leave the box
  // Normalized conditions on psi', checked on triples within `radius`.
  std::size_t conditions_checked = 0;
  std::vector<Tuple> condition_failures;
};

// Builds phi following the normalization recurrences (nonpositive pairs, the
// pivot chain through phi_{.,2}, mixed pairs, positive pairs) so that
// psi' = psi - delta(phi) satisfies the normalized conditions. psi is a
// degree-zero adjoint 3-cocycle of the Witt algebra. Throws WindowTooSmall
// when r < 8 and ReplayFailure on a vanishing recurrence denominator.
NormalizationState lemma1_normalize(std::shared_ptr<const CoefficientSource> psi, std::int64_t r,
                                    const ReplayOptions& opts = {});

// ------------------------------------------------------------- vanishing

// A deduction: `target` is forced to zero by the conditions at `equations`
// once already-certified coefficients are removed. No equations means the
// target is a hypothesis, accepted after a numerical check.
struct ReplayStep {
  std::string anchor;
  Tuple target;
  std::vector<Tuple> equations;
};

struct Residual {
  Tuple tuple;
  Rational value;
  std::string reason;  // "nonzero residual" or "not a cocycle"
};

struct VanishCertificate {
  std::vector<std::string> checked_levels;
  std::int64_t certified_radius = -1;
  std::size_t certified = 0;
  std::size_t skipped = 0;     // steps with a coefficient outside the known range
  std::size_t unresolved = 0;  // steps whose equations did not isolate the target
  std::vector<Residual> residuals;
  ReplayLog log;

  bool ok() const { return residuals.empty(); }
};

// Deduction plan for a normalized degree-zero 3-cocycle: level 0, levels 1
// and -1, then levels 2 and -2 and induction on the third index, with indices
// bounded by `radius`.
std::vector<ReplayStep> h3_level_plan(std::int64_t radius);

// Walks the plan on psi (q-cochain, degree 0, module mod). Targets are
// checked numerically; the certified radius is the largest s such that every
// q-tuple within s is certified.
VanishCertificate level_vanish_check(const CoefficientSource& psi, const ModulePtr& mod, int q,
                                     const std::vector<ReplayStep>& plan, std::int64_t radius);

// Normalization followed by the level plan on radius r.
struct H3Replay {
  NormalizationState state;
  VanishCertificate certificate;
};
H3Replay replay_h3(std::shared_ptr<const CoefficientSource> psi, std::int64_t r, const ReplayOptions& opts = {});

// Degree-zero adjoint 1-cocycle of the Witt algebra: normalize psi_1 = 0 with
// phi = psi_1 e_0, then the j = 1 ladder and the pivot forcing psi_2 = 0.
VanishCertificate h1_replay(std::shared_ptr<const CoefficientSource> psi, std::int64_t r);

}  // namespace gradcoh

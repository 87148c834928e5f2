#pragma once

#include <cstdint>
#include <optional>

#include "gradcoh/cochain.hpp"

namespace gradcoh {

// Godbillon-Vey 3-cocycle with trivial coefficients, scaled by A != 0.
class GVCocycle {
 public:
  explicit GVCocycle(Rational A = 1);
  const Rational& A() const { return A_; }

 private:
  Rational A_;
};

// A(m-n)(2m+n)(m+2n) if k = -(n+m), else 0.
Rational gv_value(const GVCocycle& gv, std::int64_t n, std::int64_t m, std::int64_t k);

// GV on all sorted triples within `radius` for the trivial module of witt or
// virasoro; triples containing t are zero.
HomogeneousCochain gv_as_cochain(const GVCocycle& gv, const AlgebraPtr& alg, std::int64_t radius);

// Central extension cocycle as a degree-0 trivial 2-cochain of `alg`.
HomogeneousCochain alpha_as_cochain(const AlgebraPtr& alg, std::int64_t radius);

struct CocycleCheck {
  bool ok = true;
  std::optional<CochainKey> failing;  // first (q+1)-key where delta c != 0
};

// delta c = 0 at every (q+1)-tuple within radius. Throws UndefinedReference
// if c is not defined where the check needs it (within 2 * radius).
CocycleCheck certify_cocycle(const HomogeneousCochain& c, std::int64_t radius);

struct NoncoboundaryCheck {
  bool solvable = false;  // c restricted to the inner window lies in the coboundary span
  // When c has a (e_{-1}, e_0, e_1) coordinate: every coboundary vanishes there.
  std::optional<bool> coboundaries_vanish_at_sl2;
  std::optional<Rational> value_at_sl2;  // c at the sorted triple (-1, 0, 1)

  bool noncoboundary() const;
};

NoncoboundaryCheck check_noncoboundary(const HomogeneousCochain& c, std::int64_t radius);
bool certify_noncoboundary(const HomogeneousCochain& c, std::int64_t radius);

// Rank increase of the projected coboundary span (inner radius r) when c is
// adjoined as an extra generator: 1 when c represents a new class.
std::size_t class_span_increase(const HomogeneousCochain& c, std::int64_t radius);

struct AlphaCheck {
  bool cocycle = false;
  bool noncoboundary = false;
  std::size_t h2 = 0;
  std::size_t span_increase = 0;

  bool ok() const { return cocycle && noncoboundary && h2 == 1 && span_increase == 1; }
};

AlphaCheck virasoro_alpha_report(std::int64_t radius = 8);
// alpha is a non-trivial 2-cocycle of witt with trivial coefficients that
// spans the windowed second cohomology, for every radius from 2 to 8.
bool virasoro_alpha_check();

}  // namespace gradcoh

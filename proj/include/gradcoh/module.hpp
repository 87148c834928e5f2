#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gradcoh/algebra.hpp"

namespace gradcoh {

enum class ModuleKind { Trivial, Adjoint, WittQuotient };

std::string to_string(ModuleKind kind);
ModuleKind parse_module_kind(const std::string& text);

// Graded module over an algebra. The basis elements of a given degree are
// enumerated by targets(); for the infinite algebras there are at most two.
class GradedModule {
 public:
  GradedModule(AlgebraPtr alg, ModuleKind kind);

  const GradedAlgebra& algebra() const { return *alg_; }
  const AlgebraPtr& algebra_ptr() const { return alg_; }
  ModuleKind kind() const { return kind_; }
  std::string name() const { return to_string(kind_); }

  std::int64_t degree(BasisId v) const;
  // x . v
  LinearCombination action(BasisId x, BasisId v) const;
  // Module basis elements of degree g, sorted.
  std::vector<BasisId> targets(std::int64_t g) const;

 private:
  AlgebraPtr alg_;
  ModuleKind kind_;
  AlgebraPtr witt_;
};

using ModulePtr = std::shared_ptr<const GradedModule>;

// Throws std::invalid_argument for witt_quotient over anything but virasoro.
ModulePtr module_of(AlgebraPtr alg, ModuleKind kind);

}  // namespace gradcoh

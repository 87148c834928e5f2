#include "gradcoh/module.hpp"

#include <stdexcept>

namespace gradcoh {

std::string to_string(ModuleKind kind) {
  switch (kind) {
    case ModuleKind::Trivial:
      return "trivial";
    case ModuleKind::Adjoint:
      return "adjoint";
    case ModuleKind::WittQuotient:
      return "witt_quotient";
  }
  return "?";
}

ModuleKind parse_module_kind(const std::string& text) {
  if (text == "trivial") return ModuleKind::Trivial;
  if (text == "adjoint") return ModuleKind::Adjoint;
  if (text == "witt_quotient") return ModuleKind::WittQuotient;
  throw std::invalid_argument("unknown module kind '" + text + "'");
}

GradedModule::GradedModule(AlgebraPtr alg, ModuleKind kind) : alg_(std::move(alg)), kind_(kind) {
  if (kind_ == ModuleKind::WittQuotient) {
    if (alg_->name() != "virasoro") throw std::invalid_argument("witt_quotient requires the virasoro algebra");
    witt_ = witt();
  }
}

std::int64_t GradedModule::degree(BasisId v) const {
  switch (kind_) {
    case ModuleKind::Trivial:
      if (v != BasisId::unit()) throw std::invalid_argument("trivial module has only the unit");
      return 0;
    case ModuleKind::Adjoint:
      return alg_->degree(v);
    case ModuleKind::WittQuotient:
      return witt_->degree(v);
  }
  return 0;
}

LinearCombination GradedModule::action(BasisId x, BasisId v) const {
  switch (kind_) {
    case ModuleKind::Trivial:
      return {};
    case ModuleKind::Adjoint:
      return alg_->bracket(x, v);
    case ModuleKind::WittQuotient:
      if (!x.is_indexed()) return {};
      return witt_->bracket(x, v);
  }
  return {};
}

std::vector<BasisId> GradedModule::targets(std::int64_t g) const {
  switch (kind_) {
    case ModuleKind::Trivial:
      if (g == 0) return {BasisId::unit()};
      return {};
    case ModuleKind::Adjoint:
      return alg_->basis_of_degree(g);
    case ModuleKind::WittQuotient:
      return witt_->basis_of_degree(g);
  }
  return {};
}

ModulePtr module_of(AlgebraPtr alg, ModuleKind kind) { return std::make_shared<GradedModule>(std::move(alg), kind); }

}  // namespace gradcoh

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gradcoh/basis.hpp"

namespace gradcoh {

// A Z-graded Lie algebra given by a basis, a degree function and a bracket
// oracle. Infinite algebras expose finite windows of their basis.
class GradedAlgebra {
 public:
  virtual ~GradedAlgebra() = default;

  virtual std::string name() const = 0;
  virtual bool has_center() const = 0;
  virtual bool contains(BasisId x) const = 0;
  virtual std::int64_t degree(BasisId x) const = 0;
  virtual LinearCombination bracket(BasisId a, BasisId b) const = 0;

  // Basis elements whose Indexed label lies in [-radius, radius], plus the
  // center when present. Sorted.
  virtual std::vector<BasisId> window_basis(std::int64_t radius) const = 0;
  // All basis elements of degree g. Sorted.
  virtual std::vector<BasisId> basis_of_degree(std::int64_t g) const = 0;

  // Whole basis for finite algebras, nullopt otherwise.
  virtual std::optional<std::vector<BasisId>> finite_basis() const { return std::nullopt; }
};

using AlgebraPtr = std::shared_ptr<const GradedAlgebra>;

AlgebraPtr witt();
AlgebraPtr virasoro();
AlgebraPtr sl2_slice();

// Central extension cocycle of the Virasoro bracket: -(n^3-n)/12 when m = -n.
Rational alpha(std::int64_t n, std::int64_t m);

// Finite algebra from a structure-constant table. Validation (membership,
// antisymmetry, degree additivity, Jacobi on all triples) runs in the
// constructor; violations throw std::invalid_argument.
class TableAlgebra final : public GradedAlgebra {
 public:
  using Table = std::map<std::pair<BasisId, BasisId>, LinearCombination>;

  TableAlgebra(std::string name, std::map<BasisId, std::int64_t> degrees, Table brackets);

  std::string name() const override { return name_; }
  bool has_center() const override { return degrees_.count(BasisId::central()) > 0; }
  bool contains(BasisId x) const override { return degrees_.count(x) > 0; }
  std::int64_t degree(BasisId x) const override;
  LinearCombination bracket(BasisId a, BasisId b) const override;
  std::vector<BasisId> window_basis(std::int64_t radius) const override;
  std::vector<BasisId> basis_of_degree(std::int64_t g) const override;
  std::optional<std::vector<BasisId>> finite_basis() const override;

 private:
  std::string name_;
  std::map<BasisId, std::int64_t> degrees_;
  Table table_;
};

// Loads a TableAlgebra from JSON:
//   {"name": "...",
//    "basis": [{"id": "-1", "degree": -1}, ...],
//    "brackets": [{"a": "-1", "b": "1", "value": {"0": "2"}}, ...]}
// Brackets not listed (and not implied by antisymmetry) are zero.
AlgebraPtr load_algebra(const std::filesystem::path& path);
AlgebraPtr parse_algebra(const std::string& json_text);

// Looks up "witt", "virasoro", "sl2_slice", or a path to a JSON table.
AlgebraPtr algebra_by_name(const std::string& name);

}  // namespace gradcoh

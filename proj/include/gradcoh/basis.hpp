#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gradcoh/rational.hpp"

namespace gradcoh {

// A basis element: e_n, the central element t, or the unit of a
// one-dimensional module. Order: all Indexed ids by n, then Central, then Unit.
struct BasisId {
  enum class Kind : std::uint8_t { Indexed = 0, Central = 1, Unit = 2 };

  Kind kind = Kind::Indexed;
  std::int64_t n = 0;

  static constexpr BasisId indexed(std::int64_t n) { return {Kind::Indexed, n}; }
  static constexpr BasisId central() { return {Kind::Central, 0}; }
  static constexpr BasisId unit() { return {Kind::Unit, 0}; }

  bool is_indexed() const { return kind == Kind::Indexed; }

  friend constexpr auto operator<=>(const BasisId&, const BasisId&) = default;
};

// "5", "-3", "t" or "1" (unit is written "u").
std::string to_string(BasisId id);
// Inverse of to_string. Throws std::invalid_argument.
BasisId parse_basis_id(const std::string& text);

struct BasisIdHash {
  std::size_t operator()(BasisId id) const {
    return std::hash<std::int64_t>()(id.n * 4 + static_cast<std::int64_t>(id.kind));
  }
};

// Finite formal sum of basis elements with nonzero rational coefficients,
// kept sorted by BasisId.
class LinearCombination {
 public:
  using Term = std::pair<BasisId, Rational>;

  LinearCombination() = default;
  LinearCombination(BasisId id, const Rational& coeff) { add(id, coeff); }

  void add(BasisId id, const Rational& coeff);
  void add(const LinearCombination& other, const Rational& scale = 1);

  Rational coeff(BasisId id) const;
  const std::vector<Term>& terms() const& { return terms_; }
  // By value on temporaries so range-for over bracket(a, b).terms() is safe.
  std::vector<Term> terms() && { return std::move(terms_); }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  LinearCombination operator-() const;
  friend bool operator==(const LinearCombination&, const LinearCombination&) = default;

 private:
  std::vector<Term> terms_;
};

std::string to_string(const LinearCombination& lc);

}  // namespace gradcoh

#include "gradcoh/basis.hpp"

#include <algorithm>
#include <stdexcept>

namespace gradcoh {

std::string to_string(BasisId id) {
  switch (id.kind) {
    case BasisId::Kind::Indexed:
      return std::to_string(id.n);
    case BasisId::Kind::Central:
      return "t";
    case BasisId::Kind::Unit:
      return "u";
  }
  return "?";
}

BasisId parse_basis_id(const std::string& text) {
  if (text == "t") return BasisId::central();
  if (text == "u") return BasisId::unit();
  std::size_t used = 0;
  long long n = 0;
  try {
    n = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad basis id '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("bad basis id '" + text + "'");
  return BasisId::indexed(n);
}

void LinearCombination::add(BasisId id, const Rational& coeff) {
  if (is_zero(coeff)) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), id,
                             [](const Term& t, BasisId key) { return t.first < key; });
  if (it != terms_.end() && it->first == id) {
    it->second += coeff;
    if (is_zero(it->second)) terms_.erase(it);
  } else {
    terms_.emplace(it, id, coeff);
  }
}

void LinearCombination::add(const LinearCombination& other, const Rational& scale) {
  for (const auto& [id, c] : other.terms_) add(id, scale * c);
}

Rational LinearCombination::coeff(BasisId id) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), id,
                             [](const Term& t, BasisId key) { return t.first < key; });
  return (it != terms_.end() && it->first == id) ? it->second : Rational(0);
}

LinearCombination LinearCombination::operator-() const {
  LinearCombination out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

std::string to_string(const LinearCombination& lc) {
  if (lc.empty()) return "0";
  std::string out;
  for (const auto& [id, c] : lc.terms()) {
    if (!out.empty()) out += " + ";
    out += to_string(c) + "*" + (id.kind == BasisId::Kind::Indexed ? "e" + to_string(id) : to_string(id));
  }
  return out;
}

}  // namespace gradcoh

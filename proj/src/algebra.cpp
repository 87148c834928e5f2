#include "gradcoh/algebra.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gradcoh {

namespace {

void require_member(const GradedAlgebra& alg, BasisId x) {
  if (!alg.contains(x)) {
    throw std::invalid_argument("basis element " + to_string(x) + " not in " + alg.name());
  }
}

LinearCombination witt_bracket(std::int64_t n, std::int64_t m) {
  return LinearCombination(BasisId::indexed(n + m), Rational(m - n));
}

class Witt final : public GradedAlgebra {
 public:
  std::string name() const override { return "witt"; }
  bool has_center() const override { return false; }
  bool contains(BasisId x) const override { return x.is_indexed(); }
  std::int64_t degree(BasisId x) const override {
    require_member(*this, x);
    return x.n;
  }
  LinearCombination bracket(BasisId a, BasisId b) const override {
    require_member(*this, a);
    require_member(*this, b);
    return witt_bracket(a.n, b.n);
  }
  std::vector<BasisId> window_basis(std::int64_t radius) const override {
    std::vector<BasisId> out;
    for (std::int64_t n = -radius; n <= radius; ++n) out.push_back(BasisId::indexed(n));
    return out;
  }
  std::vector<BasisId> basis_of_degree(std::int64_t g) const override { return {BasisId::indexed(g)}; }
};

class Virasoro final : public GradedAlgebra {
 public:
  std::string name() const override { return "virasoro"; }
  bool has_center() const override { return true; }
  bool contains(BasisId x) const override { return x.kind != BasisId::Kind::Unit; }
  std::int64_t degree(BasisId x) const override {
    require_member(*this, x);
    return x.is_indexed() ? x.n : 0;
  }
  LinearCombination bracket(BasisId a, BasisId b) const override {
    require_member(*this, a);
    require_member(*this, b);
    if (!a.is_indexed() || !b.is_indexed()) return {};
    auto out = witt_bracket(a.n, b.n);
    out.add(BasisId::central(), alpha(a.n, b.n));
    return out;
  }
  std::vector<BasisId> window_basis(std::int64_t radius) const override {
    std::vector<BasisId> out;
    for (std::int64_t n = -radius; n <= radius; ++n) out.push_back(BasisId::indexed(n));
    out.push_back(BasisId::central());
    return out;
  }
  std::vector<BasisId> basis_of_degree(std::int64_t g) const override {
    if (g == 0) return {BasisId::indexed(0), BasisId::central()};
    return {BasisId::indexed(g)};
  }
};

class Sl2Slice final : public GradedAlgebra {
 public:
  std::string name() const override { return "sl2_slice"; }
  bool has_center() const override { return false; }
  bool contains(BasisId x) const override { return x.is_indexed() && x.n >= -1 && x.n <= 1; }
  std::int64_t degree(BasisId x) const override {
    require_member(*this, x);
    return x.n;
  }
  LinearCombination bracket(BasisId a, BasisId b) const override {
    require_member(*this, a);
    require_member(*this, b);
    return witt_bracket(a.n, b.n);
  }
  std::vector<BasisId> window_basis(std::int64_t radius) const override {
    std::vector<BasisId> out;
    for (std::int64_t n = -1; n <= 1; ++n) {
      if (n >= -radius && n <= radius) out.push_back(BasisId::indexed(n));
    }
    return out;
  }
  std::vector<BasisId> basis_of_degree(std::int64_t g) const override {
    if (g < -1 || g > 1) return {};
    return {BasisId::indexed(g)};
  }
  std::optional<std::vector<BasisId>> finite_basis() const override { return window_basis(1); }
};

}  // namespace

AlgebraPtr witt() {
  static const AlgebraPtr instance = std::make_shared<Witt>();
  return instance;
}

AlgebraPtr virasoro() {
  static const AlgebraPtr instance = std::make_shared<Virasoro>();
  return instance;
}

AlgebraPtr sl2_slice() {
  static const AlgebraPtr instance = std::make_shared<Sl2Slice>();
  return instance;
}

Rational alpha(std::int64_t n, std::int64_t m) {
  if (m != -n) return 0;
  return frac(-(n * n * n - n), 12);
}

// ------------------------------------------------------------ table algebra

TableAlgebra::TableAlgebra(std::string name, std::map<BasisId, std::int64_t> degrees, Table brackets)
    : name_(std::move(name)), degrees_(std::move(degrees)) {
  if (degrees_.empty()) throw std::invalid_argument("algebra '" + name_ + "' has an empty basis");
  for (const auto& [x, deg] : degrees_) {
    if (x.kind == BasisId::Kind::Unit) throw std::invalid_argument("'u' is reserved for module units");
    if (x.kind == BasisId::Kind::Central && deg != 0) {
      throw std::invalid_argument("central element must have degree 0");
    }
  }

  auto where = [](BasisId a, BasisId b) { return "[" + to_string(a) + "," + to_string(b) + "]"; };

  for (auto& [key, value] : brackets) {
    const auto [a, b] = key;
    if (!contains(a) || !contains(b)) throw std::invalid_argument("bracket " + where(a, b) + " uses unknown basis id");
    for (const auto& [y, c] : value.terms()) {
      if (!contains(y)) throw std::invalid_argument("bracket " + where(a, b) + " produces unknown basis id");
      if (degrees_.at(y) != degrees_.at(a) + degrees_.at(b)) {
        throw std::invalid_argument("bracket " + where(a, b) + " is not degree-additive");
      }
    }
    if (a == b && !value.empty()) throw std::invalid_argument("bracket " + where(a, b) + " must vanish");
    auto mirror = brackets.find({b, a});
    if (mirror != brackets.end() && !(mirror->second == -value)) {
      throw std::invalid_argument("bracket " + where(a, b) + " is not antisymmetric");
    }
    if (mirror == brackets.end() || a < b) {
      table_[{a, b}] = value;
      table_[{b, a}] = -value;
    }
  }
  if (has_center()) {
    const auto all = *finite_basis();
    for (auto x : all) {
      if (!bracket(BasisId::central(), x).empty()) throw std::invalid_argument("element t must be central");
    }
  }

  const auto basis = *finite_basis();
  for (auto a : basis) {
    for (auto b : basis) {
      for (auto c : basis) {
        LinearCombination sum;
        for (const auto& [y, k] : bracket(a, b).terms()) sum.add(bracket(y, c), k);
        for (const auto& [y, k] : bracket(b, c).terms()) sum.add(bracket(y, a), k);
        for (const auto& [y, k] : bracket(c, a).terms()) sum.add(bracket(y, b), k);
        if (!sum.empty()) {
          throw std::invalid_argument("Jacobi identity fails on (" + to_string(a) + "," + to_string(b) + "," +
                                      to_string(c) + ")");
        }
      }
    }
  }
}

std::int64_t TableAlgebra::degree(BasisId x) const {
  auto it = degrees_.find(x);
  if (it == degrees_.end()) throw std::invalid_argument("basis element " + to_string(x) + " not in " + name_);
  return it->second;
}

LinearCombination TableAlgebra::bracket(BasisId a, BasisId b) const {
  require_member(*this, a);
  require_member(*this, b);
  auto it = table_.find({a, b});
  return it == table_.end() ? LinearCombination{} : it->second;
}

std::vector<BasisId> TableAlgebra::window_basis(std::int64_t radius) const {
  std::vector<BasisId> out;
  for (const auto& [x, deg] : degrees_) {
    (void)deg;
    if (!x.is_indexed() || (x.n >= -radius && x.n <= radius)) out.push_back(x);
  }
  return out;
}

std::vector<BasisId> TableAlgebra::basis_of_degree(std::int64_t g) const {
  std::vector<BasisId> out;
  for (const auto& [x, deg] : degrees_) {
    if (deg == g) out.push_back(x);
  }
  return out;
}

std::optional<std::vector<BasisId>> TableAlgebra::finite_basis() const {
  std::vector<BasisId> out;
  for (const auto& [x, deg] : degrees_) {
    (void)deg;
    out.push_back(x);
  }
  return out;
}

// ------------------------------------------------------------- json loader

AlgebraPtr parse_algebra(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("algebra file: ") + e.what());
  }
  try {
    std::map<BasisId, std::int64_t> degrees;
    for (const auto& entry : doc.at("basis")) {
      auto id = parse_basis_id(entry.at("id").get<std::string>());
      if (!degrees.emplace(id, entry.at("degree").get<std::int64_t>()).second) {
        throw std::invalid_argument("duplicate basis id " + to_string(id));
      }
    }
    TableAlgebra::Table table;
    if (doc.contains("brackets")) {
      for (const auto& entry : doc.at("brackets")) {
        auto a = parse_basis_id(entry.at("a").get<std::string>());
        auto b = parse_basis_id(entry.at("b").get<std::string>());
        LinearCombination value;
        for (const auto& [k, v] : entry.at("value").items()) {
          value.add(parse_basis_id(k), parse_rational(v.get<std::string>()));
        }
        if (!table.emplace(std::make_pair(a, b), value).second) {
          throw std::invalid_argument("duplicate bracket [" + to_string(a) + "," + to_string(b) + "]");
        }
      }
    }
    return std::make_shared<TableAlgebra>(doc.value("name", std::string("custom")), std::move(degrees),
                                          std::move(table));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("algebra file: ") + e.what());
  }
}

AlgebraPtr load_algebra(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open algebra file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_algebra(buffer.str());
}

AlgebraPtr algebra_by_name(const std::string& name) {
  if (name == "witt") return witt();
  if (name == "virasoro") return virasoro();
  if (name == "sl2_slice") return sl2_slice();
  return load_algebra(name);
}

}  // namespace gradcoh

#include "gradcoh/cochain.hpp"

#include <algorithm>
#include <sstream>

namespace gradcoh {

std::string to_string(const CochainKey& key) {
  std::string out = "(";
  for (std::size_t i = 0; i < key.tuple.size(); ++i) {
    if (i) out += ",";
    out += to_string(key.tuple[i]);
  }
  return out + ")->" + to_string(key.target);
}

TupleSign canonicalize(Tuple tuple) {
  int sign = 1;
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    for (std::size_t j = i; j > 0 && tuple[j] < tuple[j - 1]; --j) {
      std::swap(tuple[j], tuple[j - 1]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    if (tuple[i] == tuple[i - 1]) return {std::move(tuple), 0};
  }
  return {std::move(tuple), sign};
}

std::vector<Tuple> sorted_tuples(const std::vector<BasisId>& basis, int q) {
  std::vector<Tuple> out;
  if (q < 0 || static_cast<std::size_t>(q) > basis.size()) return out;
  std::vector<std::size_t> idx(q);
  for (int i = 0; i < q; ++i) idx[i] = i;
  for (;;) {
    Tuple t(q);
    for (int i = 0; i < q; ++i) t[i] = basis[idx[i]];
    out.push_back(std::move(t));
    int i = q - 1;
    while (i >= 0 && idx[i] == basis.size() - q + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

bool within(const Tuple& tuple, std::int64_t radius) {
  return std::all_of(tuple.begin(), tuple.end(),
                     [&](BasisId x) { return !x.is_indexed() || (x.n >= -radius && x.n <= radius); });
}

std::int64_t tuple_degree(const GradedAlgebra& alg, const Tuple& tuple) {
  std::int64_t g = 0;
  for (auto x : tuple) g += alg.degree(x);
  return g;
}

// ------------------------------------------------------------------ cochain

HomogeneousCochain::HomogeneousCochain(ModulePtr mod, int q, std::int64_t d, std::optional<std::int64_t> domain_radius)
    : mod_(std::move(mod)), q_(q), d_(d), domain_radius_(domain_radius) {
  if (q_ < 0) throw std::invalid_argument("negative cochain arity");
}

void HomogeneousCochain::add(const Tuple& tuple, BasisId target, const Rational& value) {
  if (static_cast<int>(tuple.size()) != q_) throw std::invalid_argument("tuple length differs from arity");
  auto ts = canonicalize(tuple);
  if (ts.sign == 0) throw std::invalid_argument("tuple with repeated entries");
  if (!defined(ts.sorted)) throw std::invalid_argument("tuple outside the cochain domain");
  const auto g = tuple_degree(mod_->algebra(), ts.sorted) + d_;
  const auto targets = mod_->targets(g);
  if (std::find(targets.begin(), targets.end(), target) == targets.end()) {
    throw std::invalid_argument("target " + to_string(target) + " has the wrong degree for this cochain");
  }
  CochainKey key{std::move(ts.sorted), target};
  auto& slot = coeffs_[key];
  slot += ts.sign * value;
  if (gradcoh::is_zero(slot)) coeffs_.erase(key);
}

void HomogeneousCochain::set(const Tuple& tuple, BasisId target, const Rational& value) {
  auto ts = canonicalize(tuple);
  if (ts.sign != 0) coeffs_.erase(CochainKey{ts.sorted, target});
  add(tuple, target, value);
}

void HomogeneousCochain::set(const Tuple& tuple, const Rational& value) {
  const auto g = tuple_degree(mod_->algebra(), tuple) + d_;
  const auto targets = mod_->targets(g);
  if (targets.size() != 1) {
    if (targets.empty() && gradcoh::is_zero(value)) return;
    throw std::invalid_argument("target of degree " + std::to_string(g) + " is not unique");
  }
  set(tuple, targets.front(), value);
}

Rational HomogeneousCochain::at(const CochainKey& key) const {
  auto it = coeffs_.find(key);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

std::optional<Rational> HomogeneousCochain::coefficient(const CochainKey& key) const {
  if (!defined(key.tuple)) return std::nullopt;
  return at(key);
}

bool HomogeneousCochain::defined(const Tuple& sorted_tuple) const {
  return !domain_radius_ || within(sorted_tuple, *domain_radius_);
}

LinearCombination evaluate(const CoefficientSource& src, const GradedModule& mod, std::int64_t d,
                           const Tuple& tuple) {
  auto ts = canonicalize(tuple);
  if (ts.sign == 0) return {};
  LinearCombination out;
  const auto g = tuple_degree(mod.algebra(), ts.sorted) + d;
  for (auto w : mod.targets(g)) {
    CochainKey key{ts.sorted, w};
    auto v = src.coefficient(key);
    if (!v) throw UndefinedReference(key);
    out.add(w, ts.sign * *v);
  }
  return out;
}

LinearCombination evaluate(const HomogeneousCochain& c, const Tuple& tuple) {
  if (static_cast<int>(tuple.size()) != c.arity()) throw std::invalid_argument("tuple length differs from arity");
  return evaluate(c, c.module(), c.degree(), tuple);
}

// ------------------------------------------------------------- differential

std::vector<std::pair<BasisId, LinearForm>> expand_differential(const GradedModule& mod, int q, std::int64_t d,
                                                                const Tuple& tuple) {
  if (static_cast<int>(tuple.size()) != q + 1) throw std::invalid_argument("expand_differential: need q+1 entries");
  const auto& alg = mod.algebra();
  std::map<BasisId, std::map<CochainKey, Rational>> acc;
  for (auto w : mod.targets(tuple_degree(alg, tuple) + d)) acc[w];

  const std::size_t n = tuple.size();
  Tuple args;
  args.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int sign = (i + j + 1) % 2 == 0 ? 1 : -1;
      for (const auto& [y, c] : alg.bracket(tuple[i], tuple[j]).terms()) {
        args.assign(1, y);
        for (std::size_t k = 0; k < n; ++k) {
          if (k != i && k != j) args.push_back(tuple[k]);
        }
        auto ts = canonicalize(args);
        if (ts.sign == 0) continue;
        const auto g = tuple_degree(alg, ts.sorted) + d;
        for (auto w : mod.targets(g)) acc[w][CochainKey{ts.sorted, w}] += sign * ts.sign * c;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int sign = (i + 1) % 2 == 0 ? 1 : -1;
    args.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (k != i) args.push_back(tuple[k]);
    }
    auto ts = canonicalize(args);
    if (ts.sign == 0) continue;
    const auto g = tuple_degree(alg, ts.sorted) + d;
    for (auto w : mod.targets(g)) {
      for (const auto& [w2, a] : mod.action(tuple[i], w).terms()) {
        acc[w2][CochainKey{ts.sorted, w}] += sign * ts.sign * a;
      }
    }
  }

  std::vector<std::pair<BasisId, LinearForm>> out;
  for (auto& [w, terms] : acc) {
    LinearForm form;
    for (auto& [key, c] : terms) {
      if (!gradcoh::is_zero(c)) form.emplace_back(key, std::move(c));
    }
    out.emplace_back(w, std::move(form));
  }
  return out;
}

std::optional<Rational> apply(const LinearForm& form, const CoefficientSource& src) {
  Rational sum = 0;
  for (const auto& [key, c] : form) {
    auto v = src.coefficient(key);
    if (!v) return std::nullopt;
    sum += c * *v;
  }
  return sum;
}

HomogeneousCochain differential(const HomogeneousCochain& c, std::int64_t radius) {
  const auto& mod = c.module();
  HomogeneousCochain out(c.module_ptr(), c.arity() + 1, c.degree(), radius);
  for (const auto& tuple : sorted_tuples(mod.algebra().window_basis(radius), c.arity() + 1)) {
    for (const auto& [w, form] : expand_differential(mod, c.arity(), c.degree(), tuple)) {
      Rational sum = 0;
      for (const auto& [key, k] : form) {
        auto v = c.coefficient(key);
        if (!v) throw UndefinedReference(key);
        sum += k * *v;
      }
      if (!gradcoh::is_zero(sum)) out.set(tuple, w, sum);
    }
  }
  return out;
}

HomogeneousCochain differential(const HomogeneousCochain& c) {
  if (!c.domain_radius()) throw std::invalid_argument("differential: output radius required for unbounded cochains");
  return differential(c, *c.domain_radius() / 2);
}

std::optional<Rational> DifferentialSource::coefficient(const CochainKey& key) const {
  for (const auto& [w, form] : expand_differential(*mod_, q_, d_, key.tuple)) {
    if (w == key.target) return apply(form, inner_);
  }
  return Rational(0);
}

std::map<std::int64_t, HomogeneousCochain> decompose(const ModulePtr& mod, int q, const RawCochain& raw) {
  std::map<std::int64_t, HomogeneousCochain> parts;
  for (const auto& [tuple, value] : raw) {
    const auto deg = tuple_degree(mod->algebra(), tuple);
    for (const auto& [w, c] : value.terms()) {
      const auto d = mod->degree(w) - deg;
      auto it = parts.try_emplace(d, mod, q, d).first;
      it->second.add(tuple, w, c);
    }
  }
  std::erase_if(parts, [](const auto& p) { return p.second.is_zero(); });
  return parts;
}

// -------------------------------------------------------------- json

namespace {

std::string tuple_key(const Tuple& tuple) {
  std::string out;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ",";
    out += to_string(tuple[i]);
  }
  return out;
}

Tuple parse_tuple_key(const std::string& text) {
  Tuple out;
  if (text.empty()) return out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) out.push_back(parse_basis_id(part));
  return out;
}

}  // namespace

nlohmann::json to_json(const HomogeneousCochain& c) {
  nlohmann::json doc;
  doc["algebra"] = c.module().algebra().name();
  doc["module"] = c.module().name();
  doc["q"] = c.arity();
  doc["d"] = c.degree();
  if (c.domain_radius()) doc["domain_radius"] = *c.domain_radius();
  auto coeffs = nlohmann::json::object();
  for (const auto& [key, value] : c.coefficients()) {
    std::string name = tuple_key(key.tuple);
    const auto g = tuple_degree(c.module().algebra(), key.tuple) + c.degree();
    if (c.module().targets(g).size() > 1) name += "|" + to_string(key.target);
    coeffs[name] = to_string(value);
  }
  doc["coefficients"] = std::move(coeffs);
  return doc;
}

HomogeneousCochain cochain_from_json(const nlohmann::json& doc, const ModulePtr& mod) {
  try {
    std::optional<std::int64_t> radius;
    if (doc.contains("domain_radius")) radius = doc.at("domain_radius").get<std::int64_t>();
    HomogeneousCochain c(mod, doc.at("q").get<int>(), doc.at("d").get<std::int64_t>(), radius);
    for (const auto& [name, value] : doc.at("coefficients").items()) {
      const auto bar = name.find('|');
      const auto tuple = parse_tuple_key(name.substr(0, bar));
      const auto v = parse_rational(value.get<std::string>());
      if (bar == std::string::npos) {
        c.set(tuple, v);
      } else {
        c.set(tuple, parse_basis_id(name.substr(bar + 1)), v);
      }
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("cochain json: ") + e.what());
  }
}

}  // namespace gradcoh

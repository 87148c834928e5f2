#include "gradcoh/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>
#include <tuple>

namespace gradcoh {

namespace {

template <class Entries>
auto find_entry(Entries& row, Index c) {
  return std::lower_bound(row.begin(), row.end(), c,
                          [](const auto& e, Index key) { return e.first < key; });
}

void add_to(SparseEntries& row, Index c, const Rational& value) {
  if (is_zero(value)) return;
  auto it = find_entry(row, c);
  if (it != row.end() && it->first == c) {
    it->second += value;
    if (is_zero(it->second)) row.erase(it);
  } else {
    row.emplace(it, c, value);
  }
}

// row - factor * pivot. Reports columns that appeared or vanished.
SparseEntries axpy(const SparseEntries& row, const Rational& factor, const SparseEntries& pivot,
                   std::vector<Index>& gained, std::vector<Index>& lost) {
  SparseEntries out;
  out.reserve(row.size() + pivot.size());
  auto a = row.begin();
  auto b = pivot.begin();
  Rational tmp;
  while (a != row.end() || b != pivot.end()) {
    if (b == pivot.end() || (a != row.end() && a->first < b->first)) {
      out.push_back(*a++);
    } else if (a == row.end() || b->first < a->first) {
      tmp = -factor * b->second;
      out.emplace_back(b->first, tmp);
      gained.push_back(b->first);
      ++b;
    } else {
      tmp = a->second - factor * b->second;
      if (is_zero(tmp)) {
        lost.push_back(a->first);
      } else {
        out.emplace_back(a->first, tmp);
      }
      ++a;
      ++b;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- vectors

Rational SparseVector::at(Index i) const {
  auto it = find_entry(entries_, i);
  return (it != entries_.end() && it->first == i) ? it->second : Rational(0);
}

void SparseVector::add(Index i, const Rational& value) {
  if (i >= length_) throw std::out_of_range("SparseVector index out of range");
  add_to(entries_, i, value);
}

void SparseVector::set(Index i, const Rational& value) {
  if (i >= length_) throw std::out_of_range("SparseVector index out of range");
  auto it = find_entry(entries_, i);
  const bool present = it != entries_.end() && it->first == i;
  if (is_zero(value)) {
    if (present) entries_.erase(it);
  } else if (present) {
    it->second = value;
  } else {
    entries_.emplace(it, i, value);
  }
}

SparseVector SparseVector::from_entries(std::size_t length, SparseEntries entries) {
  SparseVector v(length);
  for (auto& [i, value] : entries) v.add(i, value);
  return v;
}

// --------------------------------------------------------------- matrices

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

Rational SparseMatrix::at(std::size_t r, Index c) const {
  const auto& row = rows_.at(r);
  auto it = find_entry(row, c);
  return (it != row.end() && it->first == c) ? it->second : Rational(0);
}

void SparseMatrix::add(std::size_t r, Index c, const Rational& value) {
  if (r >= rows_.size() || c >= cols_) throw std::out_of_range("SparseMatrix index out of range");
  add_to(rows_[r], c, value);
}

void SparseMatrix::set_row(std::size_t r, SparseEntries entries) {
  SparseEntries clean;
  for (auto& [c, value] : entries) {
    if (c >= cols_) throw std::out_of_range("SparseMatrix column out of range");
    add_to(clean, c, value);
  }
  rows_.at(r) = std::move(clean);
}

std::size_t SparseMatrix::append_row(SparseEntries entries) {
  rows_.emplace_back();
  set_row(rows_.size() - 1, std::move(entries));
  return rows_.size() - 1;
}

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix t(cols_, rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (const auto& [c, value] : rows_[r]) t.rows_[c].emplace_back(static_cast<Index>(r), value);
  }
  return t;
}

SparseMatrix SparseMatrix::select_rows(const std::vector<std::size_t>& keep) const {
  SparseMatrix out(0, cols_);
  out.rows_.reserve(keep.size());
  for (auto r : keep) out.rows_.push_back(rows_.at(r));
  return out;
}

SparseVector SparseMatrix::column(Index c) const {
  SparseVector v(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    auto value = at(r, c);
    if (!is_zero(value)) v.set(static_cast<Index>(r), value);
  }
  return v;
}

SparseVector SparseMatrix::multiply(const SparseVector& x) const {
  if (x.length() != cols_) throw std::invalid_argument("dimension mismatch in matrix-vector product");
  SparseVector y(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Rational acc = 0;
    auto a = rows_[r].begin();
    auto b = x.entries().begin();
    while (a != rows_[r].end() && b != x.entries().end()) {
      if (a->first < b->first) {
        ++a;
      } else if (b->first < a->first) {
        ++b;
      } else {
        acc += a->second * b->second;
        ++a;
        ++b;
      }
    }
    if (!is_zero(acc)) y.set(static_cast<Index>(r), acc);
  }
  return y;
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& other) const {
  if (other.rows() != cols_) throw std::invalid_argument("dimension mismatch in matrix product");
  SparseMatrix out(rows_.size(), other.cols());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    SparseEntries acc;
    for (const auto& [k, a] : rows_[r]) {
      for (const auto& [c, b] : other.rows_[k]) add_to(acc, c, a * b);
    }
    out.rows_[r] = std::move(acc);
  }
  return out;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Rational>>& dense) {
  const std::size_t cols = dense.empty() ? 0 : dense.front().size();
  SparseMatrix m(dense.size(), cols);
  for (std::size_t r = 0; r < dense.size(); ++r) {
    if (dense[r].size() != cols) throw std::invalid_argument("ragged dense matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!is_zero(dense[r][c])) m.rows_[r].emplace_back(static_cast<Index>(c), dense[r][c]);
    }
  }
  return m;
}

// ------------------------------------------------------------- elimination

Eliminator::Eliminator(const SparseMatrix& m)
    : Eliminator(m, std::vector<std::uint8_t>(m.cols(), 0)) {}

Eliminator::Eliminator(const SparseMatrix& m, std::vector<std::uint8_t> column_class)
    : cols_(m.cols()), class_(std::move(column_class)) {
  if (class_.size() != cols_) throw std::invalid_argument("column class size mismatch");
  rows_.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows_.push_back(m.row(r));
}

std::size_t Eliminator::pivots_in_class(std::uint8_t cls) const {
  return static_cast<std::size_t>(
      std::count_if(pivot_cols_.begin(), pivot_cols_.end(), [&](Index c) { return class_[c] == cls; }));
}

void Eliminator::run() {
  if (done_) return;
  done_ = true;

  const std::size_t n_rows = rows_.size();
  std::vector<char> active(n_rows, 1);
  std::vector<std::size_t> count(cols_, 0);
  // Lazily maintained: may hold stale or duplicate row ids; `count` is exact.
  std::vector<std::vector<std::uint32_t>> col_rows(cols_);

  std::uint8_t max_class = 0;
  for (auto cls : class_) {
    if (cls != kNeverPivot) max_class = std::max(max_class, cls);
  }
  // Per class: (count, column) ordered so begin() is the sparsest column.
  std::vector<std::set<std::pair<std::size_t, Index>>> queue(static_cast<std::size_t>(max_class) + 1);

  auto bump = [&](Index c, long delta) {
    const auto cls = class_[c];
    if (cls != kNeverPivot && count[c] > 0) queue[cls].erase({count[c], c});
    count[c] = static_cast<std::size_t>(static_cast<long>(count[c]) + delta);
    if (cls != kNeverPivot && count[c] > 0) queue[cls].insert({count[c], c});
  };

  for (std::size_t r = 0; r < n_rows; ++r) {
    if (rows_[r].empty()) {
      active[r] = 0;
      continue;
    }
    for (const auto& e : rows_[r]) {
      col_rows[e.first].push_back(static_cast<std::uint32_t>(r));
      ++count[e.first];
    }
  }
  for (Index c = 0; c < cols_; ++c) {
    if (class_[c] != kNeverPivot && count[c] > 0) queue[class_[c]].insert({count[c], c});
  }

  std::vector<std::uint32_t> stamp(n_rows, 0);
  std::uint32_t epoch = 0;
  std::vector<Index> gained, lost;
  std::vector<std::uint32_t> holders;

  for (;;) {
    std::size_t cls = 0;
    while (cls < queue.size() && queue[cls].empty()) ++cls;
    if (cls == queue.size()) break;
    const Index pc = queue[cls].begin()->second;

    // Collect the active rows holding column pc (deduplicated).
    ++epoch;
    holders.clear();
    auto& list = col_rows[pc];
    for (auto r : list) {
      if (!active[r] || stamp[r] == epoch) continue;
      auto it = find_entry(rows_[r], pc);
      if (it == rows_[r].end() || it->first != pc) continue;
      stamp[r] = epoch;
      holders.push_back(r);
    }
    list.clear();
    assert(holders.size() == count[pc]);

    // Pivot row: fewest entries, then smallest numerator magnitude, then lowest id.
    std::uint32_t best = holders.front();
    for (auto r : holders) {
      const auto& cand = rows_[r];
      const auto& cur = rows_[best];
      if (cand.size() != cur.size()) {
        if (cand.size() < cur.size()) best = r;
        continue;
      }
      const int cmp = mpz_cmpabs(find_entry(cand, pc)->second.get_num_mpz_t(),
                                 find_entry(cur, pc)->second.get_num_mpz_t());
      if (cmp < 0 || (cmp == 0 && r < best)) best = r;
    }

    SparseEntries pivot = std::move(rows_[best]);
    rows_[best].clear();
    active[best] = 0;
    for (const auto& e : pivot) bump(e.first, -1);

    const Rational inv = 1 / find_entry(pivot, pc)->second;
    for (auto& e : pivot) e.second *= inv;

    for (auto r : holders) {
      if (r == best) continue;
      const Rational factor = find_entry(rows_[r], pc)->second;
      gained.clear();
      lost.clear();
      rows_[r] = axpy(rows_[r], factor, pivot, gained, lost);
      for (auto c : lost) bump(c, -1);
      for (auto c : gained) {
        bump(c, +1);
        col_rows[c].push_back(r);
      }
      if (rows_[r].empty()) active[r] = 0;
    }
    assert(count[pc] == 0);

    pivot_rows_.push_back(std::move(pivot));
    pivot_cols_.push_back(pc);
  }

  for (std::size_t r = 0; r < n_rows; ++r) {
    if (!rows_[r].empty()) residual_.push_back(std::move(rows_[r]));
  }
  rows_.clear();
}

void Eliminator::back_substitute() {
  run();
  if (reduced_) return;
  reduced_ = true;
  const std::size_t k_count = pivot_rows_.size();
  for (std::size_t k = k_count; k-- > 0;) {
    const Index pc = pivot_cols_[k];
    for (std::size_t j = 0; j < k; ++j) {
      auto it = find_entry(pivot_rows_[j], pc);
      if (it == pivot_rows_[j].end() || it->first != pc) continue;
      const Rational factor = it->second;
      std::vector<Index> gained, lost;
      pivot_rows_[j] = axpy(pivot_rows_[j], factor, pivot_rows_[k], gained, lost);
    }
  }
}

// ----------------------------------------------------------- entry points

std::size_t rank(const SparseMatrix& m) {
  Eliminator e(m);
  e.run();
  return e.rank();
}

std::vector<SparseVector> kernel_basis(const SparseMatrix& m) {
  Eliminator e(m);
  e.back_substitute();

  const auto& pcs = e.pivot_columns();
  std::vector<char> is_pivot(m.cols(), 0);
  for (auto c : pcs) is_pivot[c] = 1;

  // For each free column, the pivot rows that mention it.
  std::vector<std::vector<std::pair<Index, Rational>>> mentions(m.cols());
  for (std::size_t k = 0; k < pcs.size(); ++k) {
    for (const auto& [c, value] : e.pivot_rows()[k]) {
      if (!is_pivot[c]) mentions[c].emplace_back(pcs[k], value);
    }
  }

  std::vector<SparseVector> basis;
  for (Index f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    SparseVector v(m.cols());
    v.set(f, 1);
    for (const auto& [pc, value] : mentions[f]) v.set(pc, -value);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<SparseVector> solve(const SparseMatrix& m, const SparseVector& b) {
  if (b.length() != m.rows()) throw std::invalid_argument("solve: right-hand side length mismatch");
  const Index rhs = static_cast<Index>(m.cols());
  SparseMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    SparseEntries row = m.row(r);
    auto value = b.at(static_cast<Index>(r));
    if (!is_zero(value)) row.emplace_back(rhs, value);
    aug.set_row(r, std::move(row));
  }
  std::vector<std::uint8_t> cls(m.cols() + 1, 0);
  cls[rhs] = Eliminator::kNeverPivot;

  Eliminator e(aug, std::move(cls));
  e.run();
  // Residual rows only carry right-hand-side entries; any one means 0 = b_r != 0.
  if (!e.residual_rows().empty()) return std::nullopt;
  e.back_substitute();

  SparseVector x(m.cols());
  for (std::size_t k = 0; k < e.pivot_columns().size(); ++k) {
    const auto& row = e.pivot_rows()[k];
    if (!row.empty() && row.back().first == rhs) x.set(e.pivot_columns()[k], row.back().second);
  }
  return x;
}

}  // namespace gradcoh

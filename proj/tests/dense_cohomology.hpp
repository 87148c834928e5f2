#pragma once

// Brute-force Chevalley-Eilenberg cohomology of a finite algebra: dense
// matrices over all alternating tuples and all module basis elements, no
// grading, no sparse code.

#include <map>
#include <vector>

#include "dense_oracle.hpp"
#include "gradcoh/module.hpp"

namespace oracle {

using gradcoh::BasisId;
using gradcoh::Rational;

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Dense matrix of delta_q: C^q -> C^{q+1}.
inline Dense dense_differential(const gradcoh::GradedModule& mod, const std::vector<BasisId>& basis,
                                const std::vector<BasisId>& mbasis, std::size_t q) {
  const auto& alg = mod.algebra();
  const auto src = subsets(basis.size(), q);
  const auto dst = subsets(basis.size(), q + 1);
  std::map<std::vector<std::size_t>, std::size_t> src_index;
  for (std::size_t i = 0; i < src.size(); ++i) src_index[src[i]] = i;
  std::map<BasisId, std::size_t> bpos, mpos;
  for (std::size_t i = 0; i < basis.size(); ++i) bpos[basis[i]] = i;
  for (std::size_t i = 0; i < mbasis.size(); ++i) mpos[mbasis[i]] = i;
  const std::size_t M = mbasis.size();

  // Column index of the coefficient psi(x_{idx}) -> module element v, with
  // the sign of sorting idx; returns false on repeats.
  auto locate = [&](std::vector<std::size_t> idx, std::size_t v, std::size_t& col, int& sign) {
    sign = 1;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        if (idx[a] == idx[b]) return false;
        if (idx[a] > idx[b]) sign = -sign;
      }
    std::sort(idx.begin(), idx.end());
    col = src_index.at(idx) * M + v;
    return true;
  };

  Dense mat(dst.size() * M, std::vector<Rational>(src.size() * M));
  for (std::size_t r = 0; r < dst.size(); ++r) {
    const auto& x = dst[r];
    // Bracket terms; positions a<b are 1-based a+1, b+1.
    for (std::size_t a = 0; a < x.size(); ++a)
      for (std::size_t b = a + 1; b < x.size(); ++b) {
        const int s = ((a + 1) + (b + 1) + 1) % 2 == 0 ? 1 : -1;
        for (const auto& [y, c] : alg.bracket(basis[x[a]], basis[x[b]]).terms()) {
          std::vector<std::size_t> idx{bpos.at(y)};
          for (std::size_t k = 0; k < x.size(); ++k)
            if (k != a && k != b) idx.push_back(x[k]);
          for (std::size_t v = 0; v < M; ++v) {
            std::size_t col;
            int sign;
            if (locate(idx, v, col, sign)) mat[r * M + v][col] += s * sign * c;
          }
        }
      }
    // Action terms.
    for (std::size_t a = 0; a < x.size(); ++a) {
      const int s = (a + 1) % 2 == 0 ? 1 : -1;
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < x.size(); ++k)
        if (k != a) idx.push_back(x[k]);
      for (std::size_t v = 0; v < M; ++v) {
        std::size_t col;
        int sign;
        if (!locate(idx, v, col, sign)) continue;
        for (const auto& [w, c] : mod.action(basis[x[a]], mbasis[v]).terms()) {
          mat[r * M + mpos.at(w)][col] += s * sign * c;
        }
      }
    }
  }
  return mat;
}

inline std::size_t dense_cohomology(const gradcoh::GradedModule& mod, std::size_t q) {
  const auto basis = *mod.algebra().finite_basis();
  std::vector<BasisId> mbasis;
  if (mod.kind() == gradcoh::ModuleKind::Trivial) {
    mbasis.push_back(BasisId::unit());
  } else {
    mbasis = basis;
  }
  const std::size_t dim = subsets(basis.size(), q).size() * mbasis.size();
  const std::size_t rank_q = dense_rank(dense_differential(mod, basis, mbasis, q));
  const std::size_t rank_prev = q == 0 ? 0 : dense_rank(dense_differential(mod, basis, mbasis, q - 1));
  return dim - rank_q - rank_prev;
}

}  // namespace oracle

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradcoh/cochain.hpp"
#include "gradcoh/sparse.hpp"

namespace gradcoh {

// Constraints at radius r, cochain variables at 2r, coboundary sources at 4r.
struct WindowSpec {
  std::int64_t r = 1;

  std::int64_t constraint_radius() const { return r; }
  std::int64_t variable_radius() const { return 2 * r; }
  std::int64_t generator_radius() const { return 4 * r; }
};

class WindowInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical coefficient keys of degree-d q-cochains on tuples drawn from
// `basis` (sorted tuples, then targets).
std::vector<CochainKey> cochain_keys(const GradedModule& mod, int q, std::int64_t d, const std::vector<BasisId>& basis);

struct DifferentialMatrix {
  SparseMatrix matrix;
  std::vector<CochainKey> row_keys;  // (q+1)-cochain keys
  std::vector<CochainKey> col_keys;  // q-cochain keys
};

// Matrix of delta_q on degree-d cochains: rows at (q+1)-tuples from
// `row_basis`, columns at q-keys from `col_basis`. Throws WindowInconsistency
// if a row references a key outside the columns.
DifferentialMatrix differential_matrix(const GradedModule& mod, int q, std::int64_t d,
                                       const std::vector<BasisId>& row_basis, const std::vector<BasisId>& col_basis);

// Cocycle conditions at (q+1)-tuples within r on q-cochains within 2r.
SparseMatrix assemble_cocycle_system(const GradedModule& mod, int q, std::int64_t d, const WindowSpec& w);

// delta_{q-1} of each basis (q-1)-cochain within 4r, as a vector over the
// q-keys within 2r (ordered as the cocycle system columns). Requires q >= 1.
std::vector<SparseVector> assemble_coboundary_generators(const GradedModule& mod, int q, std::int64_t d,
                                                         const WindowSpec& w);

struct WindowReport {
  std::string algebra;
  std::string module;
  int q = 0;
  std::int64_t d = 0;
  std::int64_t r = 0;
  std::size_t dim_Z_proj = 0;
  std::size_t dim_B_proj = 0;
  std::size_t h = 0;
  std::size_t constraint_rows = 0;
  std::size_t variable_cols = 0;
  std::size_t inner_cols = 0;
  std::size_t generators = 0;
  double elapsed_ms = 0;
};

// h = dim pi(Z) - dim pi(B) where pi projects onto keys within r.
// Throws WindowInconsistency if some coboundary generator violates a
// cocycle condition of the window.
WindowReport windowed_h(const GradedModule& mod, int q, std::int64_t d, const WindowSpec& w);

struct ScanResult {
  std::vector<WindowReport> reports;
  bool stable = false;
  std::optional<std::size_t> value;  // set when stable

  std::string verdict() const;
};

// Runs windowed_h per radius. Stable iff the last ceil(n/2) values agree.
// radii must be strictly ascending with at least two entries.
ScanResult stabilization_scan(const GradedModule& mod, int q, std::int64_t d, const std::vector<std::int64_t>& radii);
ScanResult stabilization_verdict(std::vector<WindowReport> reports);

// Exact dim H^q summed over all degrees, for finite algebras.
// Throws std::invalid_argument for infinite algebras.
std::size_t full_cohomology(const GradedModule& mod, int q);

}  // namespace gradcoh

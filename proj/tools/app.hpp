#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace gradcoh::app {

enum ExitCode : int {
  kOk = 0,
  kMismatch = 1,      // expectation mismatch, nonzero residual, failed certification
  kConfigError = 2,   // unreadable or invalid config, missing report
  kWindowError = 3,   // window inconsistency, window too small
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanCase {
  std::string algebra;
  std::string module;
  int q = 0;
  std::int64_t d = 0;
  std::optional<std::size_t> expect;
};

struct ReplayToggles {
  bool lemma = true;
  bool h1 = true;
  bool fuks = true;
  bool gv = true;
  std::int64_t radius = 8;
  std::int64_t fuks_radius = 5;
  std::int64_t gv_radius = 6;
  int fixtures = 1;
};

struct RunConfig {
  std::filesystem::path base_dir;  // relative algebra paths resolve here
  std::string algebra = "witt";     // defaults for cases; also the degree-shift fixtures
  std::string module = "adjoint";
  std::vector<ScanCase> cases;
  std::vector<std::int64_t> radii;
  std::int64_t max_abs_degree = 3;
  ReplayToggles replay;
  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> cache_dir;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  bool timings = false;  // real elapsed_ms in reports; off keeps reports byte-stable
};

RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

// Content key of one scan case: engine version, window scheme, algebra (plus
// table contents for file algebras), module, q, d and the radii list.
std::string canonical_cache_string(const ScanCase& c, const std::vector<std::int64_t>& radii);
std::string cache_key(const ScanCase& c, const std::vector<std::int64_t>& radii);

// Each returns an ExitCode; progress and diagnostics go to `log`.
int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_replay(const RunConfig& cfg, std::ostream& out, std::ostream& log);
// `target` is a report path (JSON lines) or a cache key looked up in cache_dir.
int cmd_show(const std::string& target, const std::optional<std::filesystem::path>& cache_dir, std::ostream& out,
             std::ostream& log);

}  // namespace gradcoh::app

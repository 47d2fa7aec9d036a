#ifndef CULIFT_EXPERIMENT_HPP
#define CULIFT_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "culift/matrix.hpp"
#include "culift/morphism.hpp"
#include "culift/region.hpp"

namespace culift::experiment {

struct IntRange {
  std::int64_t lo = 1;
  std::int64_t hi = 1;
};

struct GridSpec {
  std::string shape = "mixed";  // disk, segment, annulus, or mixed (rotates by instance id)
  double h = 0.032;             // covering radius of the sample grid
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 0;  // 0: the suite's default count
  IntRange n_range{1, 64};
  IntRange atom_range{1, 32};
  std::vector<double> delta_list{0.05, 0.1, 0.2};  // fractions of the region diameter
  GridSpec grid;
  std::filesystem::path out;
  std::size_t threads = 1;

  /// Throws std::invalid_argument on a malformed config.
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

/// mt19937_64 with hand-rolled draws, so values do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                                    // [0, 1)
  std::int64_t integer(std::int64_t lo, std::int64_t hi);  // inclusive
  double normal();
  Complex in_disk(double radius);
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Per-trial seed; a pure function of (seed, suite, id).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view suite, std::uint64_t id);

/// disk: unit disk; annulus: 1/2 <= |z| <= 1; segment: [-1, 1]. All with
/// covering radius at most h.
RegionPtr make_region(std::string_view shape, double h);

/// `atoms` distinct grid points, each moved by at most `jitter`, sharing
/// `mass` as a random composition.
RankMeasure random_measure(Rng& rng, const RegionPtr& region, std::uint64_t n, std::uint64_t mass, std::size_t atoms,
                           double jitter = 0.0);
CMatrix random_unitary(Rng& rng, Eigen::Index n);
/// Spectrum in the disk of the given radius, with some repeated eigenvalues.
NormalMatrix random_normal(Rng& rng, Eigen::Index n, double radius);

/// The basket used for functional-calculus continuity checks.
std::vector<ContinuousFunction> function_basket();

struct Row {
  std::uint64_t id = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> values;
  bool pass = false;
  std::string note;
  std::size_t covers = 0;
  std::size_t cover_failures = 0;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<std::string> columns;
  std::vector<Row> rows;

  std::size_t passed() const;
  std::size_t covers() const;
  std::size_t cover_failures() const;
  bool ok() const;
};

const std::vector<std::string>& suite_names();
std::size_t default_trials(std::string_view suite);

/// Runs every trial (or only `only_id`) of a suite. Rows come back ordered by
/// id whatever the thread count.
SuiteReport run_suite(std::string_view suite, const ExperimentConfig& config,
                      std::optional<std::uint64_t> only_id = std::nullopt);

void write_csv(const SuiteReport& report, std::ostream& out);
nlohmann::json summary_json(const SuiteReport& report);
/// Writes <dir>/<suite>.csv and <dir>/<suite>.json.
void write_report(const SuiteReport& report, const std::filesystem::path& dir);

/// Writes region.json plus seeded morphism_<i>.json and matrix_<i>.json files.
std::vector<std::filesystem::path> generate(const ExperimentConfig& config, const std::filesystem::path& dir);

std::string format_real(double v);

}  // namespace culift::experiment

#endif  // CULIFT_EXPERIMENT_HPP

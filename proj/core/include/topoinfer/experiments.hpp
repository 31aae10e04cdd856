#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "topoinfer/bounds.hpp"
#include "topoinfer/complex.hpp"
#include "topoinfer/geometry.hpp"

namespace topoinfer {

enum class ComplexKind { Rips, Cech };

/// Flat `key = value` file; `#` starts a comment.
///
///   model       model identifier, e.g. smallcircle-s2:rho=0.15      (required)
///   eps         density radius                                    (required)
///   p           target confidence in (0, 1)                       (required)
///   regime      clean | noisy                                     (default clean)
///   tube_r      tube radius, required for noisy
///   l_override  sample size; default is the bound's phi
///   trials      number of independent trials                      (default 100)
///   seed        64-bit seed                                       (default 0)
///   max_dim     highest homology dimension compared               (default dim M)
///   metric      ambient | intrinsic                               (default ambient)
///   output      report path prefix; no files when absent
///   complex     rips | cech                                       (default rips)
///   scale       complex scale                                     (default eps)
///   workers     trial threads, 0 = all cores                      (default 0)
///   budget      simplex budget per complex                        (default 5000000)
struct ExperimentConfig {
  ManifoldModel model = ManifoldModel::circle_r2();
  RegimeSpec regime = RegimeSpec::clean();
  double eps = 0;
  double p = 0;
  std::optional<std::size_t> l_override;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  int max_dim = -1;  // -1: dim M
  RipsMetric metric = RipsMetric::Ambient;
  std::string output;
  ComplexKind complex = ComplexKind::Rips;
  std::optional<double> scale;
  unsigned workers = 0;
  std::size_t budget = kDefaultSimplexBudget;

  int homology_dim() const noexcept { return max_dim < 0 ? model.dim() : max_dim; }
  double complex_scale() const noexcept { return scale.value_or(eps); }
};

/// Throws ConfigError with the offending line.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);

class InadmissibleConfig : public std::domain_error {
 public:
  explicit InadmissibleConfig(AdmissibilityReport report)
      : std::domain_error("configuration violates the admissibility conditions:\n" +
                          report.describe()),
        report_(std::move(report)) {}
  const AdmissibilityReport& report() const noexcept { return report_; }

 private:
  AdmissibilityReport report_;
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool dense = false;
  BettiVector betti;  // empty when the trial errored
  bool match = false;
  std::size_t simplices = 0;
  double wall_ms = 0;
  std::string error;
};

struct ExperimentReport {
  ExperimentConfig config;
  GeometricParams params;
  AdmissibilityReport admissibility;
  std::size_t phi = 0;
  std::size_t l = 0;
  double bound_eps = 0;    // radius the bound and the density check refer to
  CoverageBound bound;     // at l
  BettiVector reference;   // padded with zeros to homology_dim + 1
  std::vector<TrialRecord> trials;
  double empirical_density_rate = 0;
  double empirical_homology_rate = 0;
  double homology_threshold = 0;  // p - 3 sqrt(p(1-p)/trials)
  double density_threshold = 0;   // clamp(g) - 3 sqrt(0.25/trials)
  bool homology_ok = false;
  bool density_ok = false;
  bool pass = false;
  std::string timestamp;
};

/// Validates admissibility (throws InadmissibleConfig), runs the trials and, when
/// config.output is set, writes `<output>.report.json` and `<output>.trials.csv`.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Report as JSON. The timestamp is the only field that varies between identical runs.
std::string report_json(const ExperimentReport& report, bool include_timestamp = true);
void write_trials_csv(std::ostream& out, const ExperimentReport& report);
void write_report_files(const ExperimentReport& report);

std::string format_betti(const BettiVector& betti);

}  // namespace topoinfer

#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <random>
#include <string>

#include "dense_homology.hpp"
#include "topoinfer/bounds.hpp"
#include "topoinfer/complex.hpp"
#include "topoinfer/errors.hpp"
#include "topoinfer/experiments.hpp"
#include "topoinfer/geometry.hpp"
#include "topoinfer/sampling.hpp"

namespace topoinfer {
namespace {

using nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json admissibility_json(const AdmissibilityReport& report) {
  json checks = json::array();
  for (const Comparison& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"value", finite_or_null(c.value)},
                      {"relation", c.relation},
                      {"threshold", finite_or_null(c.threshold)},
                      {"ok", c.ok}});
  }
  json out = {{"ok", report.ok()}, {"checks", checks}};
  if (report.certificate) {
    out["certificate"] = {{"lambda", report.certificate->lambda},
                          {"kappa_max", report.certificate->kappa_max},
                          {"margin", report.certificate->margin},
                          {"certified", report.certificate->certified()}};
  }
  return out;
}

struct BoundArgs {
  std::string model;
  double eps = 0;
  double p = 0;
  std::string regime = "clean";
  std::optional<double> tube_r;
  std::optional<std::size_t> l;
  std::string volume = "expansion";
};

int run_bound(const BoundArgs& a, std::ostream& out) {
  const ManifoldModel model = ManifoldModel::parse(a.model);
  const bool noisy = a.regime == "noisy";
  if (noisy && !a.tube_r) throw ConfigError("bound", 0, "--tube-r is required for noisy");
  const RegimeSpec regime = noisy ? RegimeSpec::noisy(*a.tube_r) : RegimeSpec::clean();
  const GeometricParams base = geometric_params(model);
  const AdmissibilityReport adm = noisy ? check_noisy_admissibility(base, a.eps, *a.tube_r)
                                        : check_clean_admissibility(base, a.eps);
  const double bound_eps = noisy ? a.eps / 2.0 : a.eps;
  const bool exact = a.volume == "exact";

  json j = {{"model", model.id()},
            {"regime", regime.name()},
            {"eps", a.eps},
            {"bound_eps", bound_eps},
            {"p", a.p},
            {"volume", a.volume},
            {"admissibility", admissibility_json(adm)}};
  try {
    const GeometricParams params = noisy ? geometric_params(model, *a.tube_r) : base;
    const std::size_t phi = exact ? sample_size_exact(model, bound_eps, a.p, regime)
                                  : sample_size(params, bound_eps, a.p, regime);
    const std::size_t l = a.l.value_or(phi);
    const CoverageBound b =
        exact ? coverage_probability_lower_bound_exact(model, bound_eps, l, regime)
              : coverage_probability_lower_bound(params, bound_eps, l, regime);
    j["phi"] = phi;
    j["l"] = l;
    j["p_min"] = b.p_min;
    j["k_bound"] = b.k_bound;
    j["g_raw"] = b.g_raw;
    j["g"] = b.g();
  } catch (const std::domain_error& e) {
    j["error"] = e.what();
  } catch (const std::invalid_argument& e) {
    j["error"] = e.what();
  }
  out << j.dump(2) << '\n';
  return adm.ok() && !j.contains("error") ? 0 : kExitFail;
}

struct SampleArgs {
  std::string model;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::optional<double> tube_r;
  std::string output;
};

int run_sample(const SampleArgs& a, std::ostream& out) {
  const ManifoldModel model = ManifoldModel::parse(a.model);
  const SampleSet s =
      a.tube_r ? sample_tube(model, a.n, *a.tube_r, a.seed) : sample_uniform(model, a.n, a.seed);
  if (a.output.empty()) {
    write_sample_csv(out, s);
  } else {
    std::ofstream file(a.output);
    if (!file) throw ConfigError(a.output, 0, "cannot write");
    write_sample_csv(file, s);
  }
  return 0;
}

struct BettiArgs {
  std::string input;
  double scale = 0;
  std::optional<int> max_dim;
  std::string metric = "ambient";
  std::string complex = "rips";
  bool collapse = false;
  std::string complex_out;
};

int run_betti(const BettiArgs& a, std::ostream& out) {
  std::ifstream in(a.input);
  if (!in) throw ConfigError(a.input, 0, "cannot open sample file");
  const SampleSet s = read_sample_csv(in);
  const int hdim = a.max_dim.value_or(s.model.dim());
  if (hdim < 0 || hdim > kMaxComplexDim) throw ConfigError("betti", 0, "max-dim out of range");
  const int cdim = std::min(hdim + 1, kMaxComplexDim);
  const SimplicialComplex k =
      a.complex == "cech"
          ? build_cech_euclidean(s, a.scale, cdim)
          : build_rips(s, a.scale, cdim,
                       a.metric == "intrinsic" ? RipsMetric::Intrinsic : RipsMetric::Ambient,
                       RipsOptions{kDefaultSimplexBudget, a.collapse});
  if (!a.complex_out.empty()) {
    std::ofstream file(a.complex_out);
    if (!file) throw ConfigError(a.complex_out, 0, "cannot write");
    write_complex(file, k);
  }
  BettiVector betti = betti_numbers(k);
  betti.resize(hdim + 1, 0);
  out << format_betti(betti) << '\n';
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::optional<unsigned> workers;
  std::optional<std::string> output;
};

int run_experiment_cmd(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg = load_config(a.config);
  if (a.workers) cfg.workers = *a.workers;
  if (a.output) cfg.output = *a.output;
  ExperimentReport r;
  try {
    r = run_experiment(cfg);
  } catch (const InadmissibleConfig& e) {
    err << a.config << ": " << e.what();
    return kExitUsage;
  }
  out << "model              " << cfg.model.id() << '\n'
      << "regime             " << cfg.regime.name() << '\n'
      << "phi                " << r.phi << '\n'
      << "l                  " << r.l << '\n'
      << "bound g            " << r.bound.g() << '\n'
      << "density rate       " << r.empirical_density_rate << " (threshold "
      << r.density_threshold << ")\n"
      << "homology rate      " << r.empirical_homology_rate << " (threshold "
      << r.homology_threshold << ")\n"
      << "verdict            " << (r.pass ? "pass" : "fail") << '\n';
  if (!cfg.output.empty()) {
    out << "report             " << cfg.output << ".report.json\n";
  }
  return r.pass ? 0 : kExitFail;
}

struct OracleArgs {
  std::string check = "all";
  std::vector<std::string> models;
  std::optional<int> resolution;
  std::size_t cases = 200;
  std::uint64_t seed = 1;
};

int default_reach_resolution(const ManifoldModel& m) {
  switch (m.kind()) {
    case ModelKind::SphereR3: return 100;
    case ModelKind::TorusR4: return 50;
    default: return 400;
  }
}

bool oracle_reach(const OracleArgs& a, std::ostream& out) {
  std::vector<std::string> ids = a.models;
  if (ids.empty()) {
    ids = {"circle-r2", "sphere2-r3", "torus-r4", "smallcircle-s2:rho=0.15",
           "circle-h2:rho=0.5"};
  }
  bool ok = true;
  for (const auto& id : ids) {
    const ManifoldModel m = ManifoldModel::parse(id);
    const int res = a.resolution.value_or(default_reach_resolution(m));
    const double tau = geometric_params(m).tau;
    const double est = reach_estimate_bruteforce(m, res);
    const double rel = std::abs(est - tau) / tau;
    const bool pass = rel <= 0.05;
    ok = ok && pass;
    out << "reach  " << m.id() << "  resolution " << res << "  estimate " << est << "  tau "
        << tau << "  rel_err " << rel << (pass ? "  ok" : "  FAIL") << '\n';
  }
  return ok;
}

bool oracle_volume(std::ostream& out) {
  bool ok = true;
  const std::vector<ManifoldModel> models = {ManifoldModel::circle_r2(),
                                             ManifoldModel::sphere2_r3(),
                                             ManifoldModel::torus_r4()};
  for (const auto& m : models) {
    const GeometricParams g = geometric_params(m);
    for (double r = 0.05; r <= 0.3 + 1e-12; r += 0.05) {
      const double approx = ball_volume_lower_bound(m.dim(), r, g.s);
      const double exact = intrinsic_ball_volume(m, r);
      const double rel = std::abs(approx - exact) / exact;
      const bool pass = rel <= 0.01;
      ok = ok && pass;
      out << "volume  " << m.id() << "  r " << r << "  expansion " << approx << "  exact "
          << exact << "  rel_err " << rel << (pass ? "  ok" : "  FAIL") << '\n';
    }
  }
  return ok;
}

bool oracle_homology(const OracleArgs& a, std::ostream& out) {
  std::mt19937_64 rng(a.seed);
  std::uniform_int_distribution<std::uint32_t> vertices(1, 12);
  std::size_t agree = 0;
  for (std::size_t c = 0; c < a.cases; ++c) {
    const auto simplices = oracle::random_simplices(vertices(rng), kMaxComplexDim, rng);
    std::vector<std::vector<Vertex>> as_core(simplices.begin(), simplices.end());
    const SimplicialComplex k = SimplicialComplex::from_simplices(as_core, kMaxComplexDim);
    const BettiVector fast = betti_numbers(k);
    const std::vector<long long> slow = oracle::dense_betti(simplices, kMaxComplexDim);
    if (fast == slow) ++agree;
    else out << "homology  case " << c << "  sparse " << format_betti(fast) << "  dense "
             << format_betti(slow) << "  FAIL\n";
  }
  out << "homology  " << agree << "/" << a.cases << " random complexes agree with the dense oracle"
      << (agree == a.cases ? "  ok" : "  FAIL") << '\n';
  return agree == a.cases;
}

int run_oracle(const OracleArgs& a, std::ostream& out) {
  bool ok = true;
  if (a.check == "all" || a.check == "reach") ok = oracle_reach(a, out) && ok;
  if (a.check == "all" || a.check == "volume") ok = oracle_volume(out) && ok;
  if (a.check == "all" || a.check == "homology") ok = oracle_homology(a, out) && ok;
  return ok ? 0 : kExitFail;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homology inference from random samples of model manifolds"};
  app.require_subcommand(1);

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Sample-size bound and admissibility as JSON");
  bound_cmd->add_option("--model", bound.model, "Model identifier")->required();
  bound_cmd->add_option("--eps", bound.eps, "Density radius")->required();
  bound_cmd->add_option("--p", bound.p, "Target probability")->required();
  bound_cmd->add_option("--regime", bound.regime)->check(CLI::IsMember({"clean", "noisy"}));
  bound_cmd->add_option("--tube-r", bound.tube_r, "Tube radius (noisy regime)");
  bound_cmd->add_option("--l", bound.l, "Evaluate g at this l instead of phi");
  bound_cmd->add_option("--volume", bound.volume, "Ball volume source")
      ->check(CLI::IsMember({"expansion", "exact"}));

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Write a random sample as CSV");
  sample_cmd->add_option("--model", sample.model)->required();
  sample_cmd->add_option("--n", sample.n, "Number of points")->required();
  sample_cmd->add_option("--seed", sample.seed);
  sample_cmd->add_option("--tube-r", sample.tube_r, "Sample the tube of this radius");
  sample_cmd->add_option("-o,--output", sample.output, "Output file (default stdout)");

  BettiArgs betti;
  auto* betti_cmd = app.add_subcommand("betti", "Betti numbers of a complex on a sample CSV");
  betti_cmd->add_option("--input", betti.input)->required();
  betti_cmd->add_option("--scale", betti.scale)->required();
  betti_cmd->add_option("--max-dim", betti.max_dim, "Highest homology dimension");
  betti_cmd->add_option("--metric", betti.metric)
      ->check(CLI::IsMember({"ambient", "intrinsic"}));
  betti_cmd->add_option("--complex", betti.complex)->check(CLI::IsMember({"rips", "cech"}));
  betti_cmd->add_flag("--collapse", betti.collapse, "Strong-collapse the Rips graph first");
  betti_cmd->add_option("--complex-out", betti.complex_out, "Also write the complex here");

  ExperimentArgs experiment;
  auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment from a config file");
  exp_cmd->add_option("--config", experiment.config)->required();
  exp_cmd->add_option("--workers", experiment.workers);
  exp_cmd->add_option("--output", experiment.output, "Override the report prefix");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Run the brute-force validators");
  oracle_cmd->add_option("--check", oracle.check)
      ->check(CLI::IsMember({"all", "reach", "volume", "homology"}));
  oracle_cmd->add_option("--model", oracle.models, "Models for the reach check");
  oracle_cmd->add_option("--resolution", oracle.resolution);
  oracle_cmd->add_option("--cases", oracle.cases);
  oracle_cmd->add_option("--seed", oracle.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*bound_cmd) return run_bound(bound, out);
    if (*sample_cmd) return run_sample(sample, out);
    if (*betti_cmd) return run_betti(betti, out);
    if (*exp_cmd) return run_experiment_cmd(experiment, out, err);
    if (*oracle_cmd) return run_oracle(oracle, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}

}  // namespace topoinfer

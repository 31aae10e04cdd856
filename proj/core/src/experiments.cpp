#include "topoinfer/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "parallel.hpp"
#include "topoinfer/errors.hpp"
#include "topoinfer/sampling.hpp"

namespace topoinfer {
namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <class T>
T parse_number(const std::string& text, const std::string& key, const std::string& source,
               int line) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(source, line, "bad value for " + key + ": '" + text + "'");
  }
  return value;
}

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

TrialRecord run_trial(const ExperimentReport& report, std::size_t i) {
  const ExperimentConfig& cfg = report.config;
  const ManifoldModel& model = cfg.model;
  TrialRecord rec;
  rec.trial = i;
  rec.seed = trial_seed(cfg.seed, i);
  const auto start = std::chrono::steady_clock::now();

  const SampleSet sample = cfg.regime.is_noisy()
                               ? sample_tube(model, report.l, cfg.regime.tube_r, rec.seed)
                               : sample_uniform(model, report.l, rec.seed);
  const int res = density_resolution(model, report.bound_eps);
  rec.dense = cfg.regime.is_noisy() ? is_eps_dense_wrt_M(sample, model, report.bound_eps, res)
                                    : is_eps_dense_in_M(sample, model, report.bound_eps, res);

  const int hdim = cfg.homology_dim();
  const int cdim = std::min(hdim + 1, kMaxComplexDim);
  try {
    const SimplicialComplex k =
        cfg.complex == ComplexKind::Cech
            ? build_cech_euclidean(sample, cfg.complex_scale(), cdim, cfg.budget)
            : build_rips(sample, cfg.complex_scale(), cdim, cfg.metric,
                         RipsOptions{cfg.budget, /*collapse=*/true});
    rec.simplices = k.size();
    BettiVector betti = betti_numbers(k);
    betti.resize(hdim + 1, 0);
    rec.betti = std::move(betti);
    rec.match = rec.betti == report.reference;
  } catch (const SimplexBudgetExceeded& e) {
    rec.error = e.what();
    rec.match = false;
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
  return rec;
}

}  // namespace

std::string format_betti(const BettiVector& betti) {
  std::string out;
  for (std::size_t i = 0; i < betti.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(betti[i]);
  }
  return out;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig cfg;
  std::map<std::string, std::pair<std::string, int>> entries;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, lineno, "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(source, lineno, "empty key");
    if (value.empty()) throw ConfigError(source, lineno, "empty value for " + key);
    if (!entries.emplace(key, std::make_pair(value, lineno)).second) {
      throw ConfigError(source, lineno, "duplicate key " + key);
    }
  }

  std::string regime = "clean";
  std::optional<double> tube_r;
  int tube_line = 0;
  for (const auto& [key, entry] : entries) {
    const auto& [value, line] = entry;
    if (key == "model") {
      try {
        cfg.model = ManifoldModel::parse(value);
      } catch (const std::exception& e) {
        throw ConfigError(source, line, e.what());
      }
    } else if (key == "regime") {
      if (value != "clean" && value != "noisy") {
        throw ConfigError(source, line, "regime must be clean or noisy");
      }
      regime = value;
    } else if (key == "tube_r") {
      tube_r = parse_number<double>(value, key, source, line);
      tube_line = line;
    } else if (key == "eps") {
      cfg.eps = parse_number<double>(value, key, source, line);
      if (!(cfg.eps > 0.0)) throw ConfigError(source, line, "eps must be positive");
    } else if (key == "p") {
      cfg.p = parse_number<double>(value, key, source, line);
      if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw ConfigError(source, line, "p must lie in (0, 1)");
    } else if (key == "l_override") {
      cfg.l_override = parse_number<std::size_t>(value, key, source, line);
      if (*cfg.l_override < 1) throw ConfigError(source, line, "l_override must be >= 1");
    } else if (key == "trials") {
      cfg.trials = parse_number<std::size_t>(value, key, source, line);
      if (cfg.trials < 1) throw ConfigError(source, line, "trials must be >= 1");
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(value, key, source, line);
    } else if (key == "max_dim") {
      cfg.max_dim = parse_number<int>(value, key, source, line);
      if (cfg.max_dim < 0 || cfg.max_dim > kMaxComplexDim) {
        throw ConfigError(source, line, "max_dim must lie in [0, 3]");
      }
    } else if (key == "metric") {
      if (value == "ambient") cfg.metric = RipsMetric::Ambient;
      else if (value == "intrinsic") cfg.metric = RipsMetric::Intrinsic;
      else throw ConfigError(source, line, "metric must be ambient or intrinsic");
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "complex") {
      if (value == "rips") cfg.complex = ComplexKind::Rips;
      else if (value == "cech") cfg.complex = ComplexKind::Cech;
      else throw ConfigError(source, line, "complex must be rips or cech");
    } else if (key == "scale") {
      cfg.scale = parse_number<double>(value, key, source, line);
      if (!(*cfg.scale >= 0.0)) throw ConfigError(source, line, "scale must be nonnegative");
    } else if (key == "workers") {
      cfg.workers = parse_number<unsigned>(value, key, source, line);
    } else if (key == "budget") {
      cfg.budget = parse_number<std::size_t>(value, key, source, line);
    } else {
      throw ConfigError(source, line, "unknown key " + key);
    }
  }
  for (const char* required : {"model", "eps", "p"}) {
    if (!entries.count(required)) {
      throw ConfigError(source, 0, std::string("missing required key ") + required);
    }
  }
  if (regime == "noisy") {
    if (!tube_r) throw ConfigError(source, 0, "noisy regime needs tube_r");
    cfg.regime = RegimeSpec::noisy(*tube_r);
    if (cfg.metric == RipsMetric::Intrinsic) {
      throw ConfigError(source, entries.at("metric").second,
                        "intrinsic metric needs on-manifold samples (clean regime)");
    }
  } else if (tube_r) {
    throw ConfigError(source, tube_line, "tube_r is only meaningful for the noisy regime");
  }
  if (cfg.complex == ComplexKind::Cech) {
    if (cfg.model.ambient().kind != AmbientKind::Euclidean) {
      throw ConfigError(source, entries.at("complex").second,
                        "cech complex needs a Euclidean ambient");
    }
    if (cfg.metric == RipsMetric::Intrinsic) {
      throw ConfigError(source, entries.at("complex").second,
                        "cech complex uses the ambient metric");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  return parse_config(in, path);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport report;
  report.config = config;
  const bool noisy = config.regime.is_noisy();
  if (noisy && !(config.regime.tube_r > 0.0)) {
    throw InadmissibleConfig(check_noisy_admissibility(geometric_params(config.model),
                                                       config.eps, config.regime.tube_r));
  }
  const GeometricParams base = geometric_params(config.model);
  report.admissibility = noisy ? check_noisy_admissibility(base, config.eps, config.regime.tube_r)
                               : check_clean_admissibility(base, config.eps);
  if (!report.admissibility.ok()) throw InadmissibleConfig(report.admissibility);
  report.params = noisy ? geometric_params(config.model, config.regime.tube_r) : base;

  // The noisy sample must be eps/2-dense with respect to M; bound and check use eps/2.
  report.bound_eps = noisy ? config.eps / 2.0 : config.eps;
  report.phi = sample_size(report.params, report.bound_eps, config.p, config.regime);
  report.l = config.l_override.value_or(report.phi);
  report.bound =
      coverage_probability_lower_bound(report.params, report.bound_eps, report.l, config.regime);

  const int hdim = config.homology_dim();
  report.reference = betti_reference(config.model);
  report.reference.resize(hdim + 1, 0);

  report.trials.resize(config.trials);
  detail::parallel_for(config.trials, config.workers,
                       [&](std::size_t i) { report.trials[i] = run_trial(report, i); });

  const double n = static_cast<double>(config.trials);
  const auto dense = std::count_if(report.trials.begin(), report.trials.end(),
                                   [](const TrialRecord& r) { return r.dense; });
  const auto matched = std::count_if(report.trials.begin(), report.trials.end(),
                                     [](const TrialRecord& r) { return r.match; });
  report.empirical_density_rate = static_cast<double>(dense) / n;
  report.empirical_homology_rate = static_cast<double>(matched) / n;
  report.homology_threshold = config.p - 3.0 * std::sqrt(config.p * (1.0 - config.p) / n);
  report.density_threshold = report.bound.g() - 3.0 * std::sqrt(0.25 / n);
  report.homology_ok = report.empirical_homology_rate >= report.homology_threshold;
  report.density_ok = report.empirical_density_rate >= report.density_threshold;
  report.pass = report.homology_ok && report.density_ok;
  report.timestamp = now_utc();

  if (!config.output.empty()) write_report_files(report);
  return report;
}

std::string report_json(const ExperimentReport& report, bool include_timestamp) {
  const ExperimentConfig& c = report.config;
  json cfg = {
      {"model", c.model.id()},
      {"regime", c.regime.is_noisy() ? "noisy" : "clean"},
      {"eps", c.eps},
      {"p", c.p},
      {"trials", c.trials},
      {"seed", c.seed},
      {"max_dim", c.homology_dim()},
      {"metric", c.metric == RipsMetric::Intrinsic ? "intrinsic" : "ambient"},
      {"complex", c.complex == ComplexKind::Cech ? "cech" : "rips"},
      {"scale", c.complex_scale()},
      {"budget", c.budget},
  };
  cfg["tube_r"] = c.regime.is_noisy() ? json(c.regime.tube_r) : json(nullptr);
  cfg["l_override"] = c.l_override ? json(*c.l_override) : json(nullptr);

  const GeometricParams& g = report.params;
  json params = {
      {"m", g.m},
      {"n", g.n},
      {"tau", g.tau},
      {"eta", number_or_null(g.eta)},
      {"s", g.s},
      {"s_ambient", g.s_ambient},
      {"kappa_N_max", g.kappa_N_max},
      {"vol_M", g.vol_M},
      {"vol_tube", g.vol_tube ? json(*g.vol_tube) : json(nullptr)},
  };

  json checks = json::array();
  for (const Comparison& cmp : report.admissibility.checks) {
    checks.push_back({{"name", cmp.name},
                      {"value", number_or_null(cmp.value)},
                      {"relation", cmp.relation},
                      {"threshold", number_or_null(cmp.threshold)},
                      {"ok", cmp.ok}});
  }
  json admissibility = {{"ok", report.admissibility.ok()}, {"checks", checks}};
  if (const auto& cert = report.admissibility.certificate) {
    admissibility["certificate"] = {{"lambda", cert->lambda},
                                    {"kappa_max", cert->kappa_max},
                                    {"margin", cert->margin},
                                    {"certified", cert->certified()}};
  }

  json trials = json::array();
  for (const TrialRecord& t : report.trials) {
    json rec = {{"trial", t.trial},         {"seed", t.seed},
                {"dense", t.dense},         {"betti", t.betti},
                {"match", t.match},         {"simplices", t.simplices}};
    if (!t.error.empty()) rec["error"] = t.error;
    trials.push_back(std::move(rec));
  }

  json out = {
      {"config", cfg},
      {"params", params},
      {"admissibility", admissibility},
      {"phi", report.phi},
      {"l", report.l},
      {"bound_eps", report.bound_eps},
      {"bound_g", report.bound.g()},
      {"bound",
       {{"p_min", report.bound.p_min},
        {"k_bound", report.bound.k_bound},
        {"g_raw", report.bound.g_raw},
        {"g", report.bound.g()}}},
      {"betti_reference", report.reference},
      {"trials", trials},
      {"empirical_density_rate", report.empirical_density_rate},
      {"empirical_homology_rate", report.empirical_homology_rate},
      {"homology_threshold", report.homology_threshold},
      {"density_threshold", report.density_threshold},
      {"homology_ok", report.homology_ok},
      {"density_ok", report.density_ok},
      {"verdict", report.pass ? "pass" : "fail"},
  };
  if (include_timestamp) out["timestamp"] = report.timestamp;
  return out.dump(2) + "\n";
}

void write_trials_csv(std::ostream& out, const ExperimentReport& report) {
  out << "trial,seed,dense,betti,match,simplices,wall_ms\n";
  for (const TrialRecord& t : report.trials) {
    char ms[32];
    auto res = std::to_chars(ms, ms + sizeof ms, t.wall_ms, std::chars_format::fixed, 3);
    out << t.trial << ',' << t.seed << ',' << (t.dense ? 1 : 0) << ",\""
        << (t.error.empty() ? format_betti(t.betti) : "error") << "\"," << (t.match ? 1 : 0)
        << ',' << t.simplices << ',' << std::string_view(ms, res.ptr - ms) << '\n';
  }
}

void write_report_files(const ExperimentReport& report) {
  const std::string& prefix = report.config.output;
  {
    std::ofstream out(prefix + ".report.json");
    if (!out) throw std::runtime_error("cannot write " + prefix + ".report.json");
    out << report_json(report);
  }
  std::ofstream out(prefix + ".trials.csv");
  if (!out) throw std::runtime_error("cannot write " + prefix + ".trials.csv");
  write_trials_csv(out, report);
}

}  // namespace topoinfer

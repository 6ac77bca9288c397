// Command-line front end: wires JSON configs and flags to the library
// modules and writes all outputs atomically.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qwishart/blr.hpp"
#include "qwishart/io.hpp"
#include "qwishart/peak.hpp"
#include "qwishart/sampler.hpp"

using nlohmann::json;
using namespace qwishart;

namespace {

constexpr const char* kVersion = "0.1.0";

// Relative output paths are resolved against $QWISH_OUT_DIR when set.
std::string out_path(const std::string& path) {
  const char* dir = std::getenv("QWISH_OUT_DIR");
  if (!dir || !*dir || path.empty() || path.front() == '/') return path;
  std::string d(dir);
  if (d.back() != '/') d += '/';
  return d + path;
}

json load_config(const std::string& path, const std::vector<std::string>& required,
                 const std::vector<std::string>& optional) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("bad JSON in " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& k : required)
    if (!cfg.contains(k)) throw ConfigError("config missing required key \"" + k + "\"");
  for (const auto& [k, v] : cfg.items()) {
    bool known = std::find(required.begin(), required.end(), k) != required.end() ||
                 std::find(optional.begin(), optional.end(), k) != optional.end();
    if (!known) throw ConfigError("config has unknown key \"" + k + "\"");
  }
  return cfg;
}

Field parse_field(const std::string& s) {
  if (s == "real") return Field::Real;
  if (s == "complex") return Field::Complex;
  throw ConfigError("field must be \"real\" or \"complex\", got \"" + s + "\"");
}

ProposalStrategy parse_strategy(const std::string& s) {
  if (s == "interior-peak") return ProposalStrategy::InteriorPeak;
  if (s == "boundary-peak") return ProposalStrategy::BoundaryPeak;
  if (s == "two-wishart-mix") return ProposalStrategy::TwoWishartMix;
  throw ConfigError("unknown strategy \"" + s + "\"");
}

ClickRecord parse_clicks(const std::string& csv) {
  ClickRecord rec;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      rec.counts.push_back(std::stol(cell));
    } catch (const std::exception&) {
      throw ConfigError("bad click count \"" + cell + "\"");
    }
  }
  return rec;
}

ClickRecord clicks_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("\"clicks\" must be an array of counts");
  ClickRecord rec;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ConfigError("\"clicks\" entries must be integers");
    rec.counts.push_back(v.get<long>());
  }
  return rec;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      rows.push_back({m(i, j).real(), m(i, j).imag()});
  return rows;
}

json peak_to_json(const MlePeak& p) {
  return {{"bloch", {p.bloch.x, p.bloch.y, p.bloch.z}},
          {"spherical", {{"r", p.spherical.r}, {"theta", p.spherical.theta},
                         {"phi", p.spherical.phi}}},
          {"log_likelihood", p.log_likelihood_at_peak},
          {"on_boundary", p.on_boundary}};
}

void emit(const json& doc, const std::string& path) {
  std::string text = doc.dump(2) + "\n";
  if (!path.empty())
    write_text_atomic(out_path(path), text);
  else
    std::cout << text;
}

ProposalKnobs knobs_from_json(const json& cfg) {
  ProposalKnobs knobs;
  if (cfg.contains("N")) knobs.N = cfg["N"].get<int>();
  if (cfg.contains("alpha")) knobs.alpha = cfg["alpha"].get<double>();
  if (cfg.contains("mu_boundary")) knobs.mu_boundary = cfg["mu_boundary"].get<double>();
  if (cfg.contains("mu_interior")) knobs.mu_interior = cfg["mu_interior"].get<double>();
  if (cfg.contains("w_interior")) knobs.w_interior = cfg["w_interior"].get<double>();
  return knobs;
}

struct PipelineResult {
  std::vector<BlochVector> samples;
  RejectionReport report;
  double c = 0.0;
  double t_peak = 0.0, t_bound = 0.0, t_sample = 0.0;
};

PipelineResult run_pipeline(const Pom& pom, const ClickRecord& clicks,
                            ProposalStrategy strategy, const ProposalKnobs& knobs,
                            long n_accept, std::uint64_t seed, int workers,
                            double grid_resolution, double safety) {
  using clock = std::chrono::steady_clock;
  PipelineResult out;
  AffinePom ap(pom);
  TargetLogPdf target = [&ap, clicks](const BlochVector& b) {
    return ap.log_posterior(clicks, b);
  };

  auto t0 = clock::now();
  ProposalSpec spec = build_proposal(pom, clicks, strategy, knobs);
  Proposal proposal(std::move(spec));
  auto t1 = clock::now();
  out.c = estimate_bound(target, proposal, grid_resolution, safety);
  auto t2 = clock::now();
  out.samples = rejection_sample(target, proposal, out.c, n_accept, seed,
                                 &out.report, workers);
  auto t3 = clock::now();
  out.t_peak = std::chrono::duration<double>(t1 - t0).count();
  out.t_bound = std::chrono::duration<double>(t2 - t1).count();
  out.t_sample = std::chrono::duration<double>(t3 - t2).count();
  return out;
}

// ---- subcommand bodies ---------------------------------------------------

int cmd_density(Field field, int N, double mu, double resolution,
                const std::string& out) {
  WishartParams p = mu == 0.0 ? WishartParams::central(field, 2, N)
                              : WishartParams::axial(field, 2, N, mu);
  p.validate();
  std::ostringstream csv;
  csv.precision(17);
  csv << "x,y,z,log_density\n";
  const int n = static_cast<int>(std::floor(2.0 / resolution));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < (field == Field::Real ? 1 : n); ++j)
      for (int k = 0; k < n; ++k) {
        double x = -1.0 + (i + 0.5) * resolution;
        double y = field == Field::Real ? 0.0 : -1.0 + (j + 0.5) * resolution;
        double z = -1.0 + (k + 0.5) * resolution;
        if (x * x + y * y + z * z >= 1.0) continue;
        double v = log_density_value(p, bloch_to_rho(BlochVector(x, y, z)));
        csv << x << ',' << y << ',' << z << ',' << v << '\n';
      }
  if (out.empty())
    std::cout << csv.str();
  else
    write_text_atomic(out_path(out), csv.str());
  return 0;
}

int cmd_sample_wishart(Field field, int d, int N, double mu, long n,
                       std::uint64_t seed, int workers, const std::string& out) {
  if (n < 1) throw ConfigError("sample-wishart: --n >= 1 required");
  WishartParams p = mu == 0.0 ? WishartParams::central(field, d, N)
                              : WishartParams::axial(field, d, N, mu);
  p.validate();
  std::vector<DensityMatrix> states =
      sample_states_batch(p, static_cast<int>(n), seed, workers);
  if (d == 2) {
    std::vector<BlochVector> bloch;
    bloch.reserve(states.size());
    for (const auto& s : states) bloch.push_back(rho_to_bloch(s));
    write_bloch_csv(out_path(out), bloch);
  } else {
    write_states_jsonl(out_path(out), states);
  }
  return 0;
}

int cmd_fit_peak_radial(double r, double theta, double phi, int N, Field field,
                        const std::string& out) {
  double mu = fit_mean_radial(r, N, field);
  json doc = {{"mu", mu}, {"N", N}, {"field", field_name(field)}};
  BlochVector dir = from_spherical({r, theta, phi});
  if (dir.r() > 1e-12) {
    QubitProposal qp = build_qubit_proposal(dir, N, field);
    json rot = json::array();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) rot.push_back(qp.rotation(i, j));
    doc["rotation"] = rot;
  }
  emit(doc, out);
  return 0;
}

int cmd_fit_peak_stationary(const std::string& state_file, const std::string& m2_file,
                            int N, Field field, const std::string& out) {
  auto states = read_states_jsonl(state_file);
  if (states.size() != 1)
    throw ConfigError("fit-peak: --state-file must contain exactly one matrix");
  const DensityMatrix& rho_p = states.front();
  int d = rho_p.dim();
  Matrix M2 = Matrix::Zero(d, N);
  if (!m2_file.empty()) {
    auto m2s = read_states_jsonl(m2_file);
    if (m2s.size() != 1 || m2s.front().rho.rows() != d)
      throw ConfigError("fit-peak: --m2-file must contain one d x N matrix");
    M2 = m2s.front().rho;
    if (M2.cols() != N) throw ConfigError("fit-peak: M2 must have N columns");
  }
  StationarySolution sol = stationary_params(rho_p, M2, N, field);
  json doc = {{"Sigma1", matrix_to_json(sol.Sigma1)},
              {"M1", matrix_to_json(sol.M1)},
              {"residual", sol.residual}};
  emit(doc, out);
  return 0;
}

int cmd_mle(const std::string& pom_name, const std::string& clicks_csv,
            const std::string& out) {
  Pom pom = Pom::builtin(pom_name);
  ClickRecord clicks = parse_clicks(clicks_csv);
  clicks.validate(pom);
  MlePeak peak = mle(pom, clicks);
  emit(peak_to_json(peak), out);
  return 0;
}

int cmd_posterior_sample(const std::string& config_path, int workers) {
  json cfg = load_config(
      config_path, {"pom", "clicks", "strategy", "n_accept", "seed", "out_samples"},
      {"N", "alpha", "mu_boundary", "mu_interior", "w_interior", "out_report",
       "grid_resolution", "safety"});
  Pom pom = Pom::builtin(cfg["pom"].get<std::string>());
  ClickRecord clicks = clicks_from_json(cfg["clicks"]);
  clicks.validate(pom);
  long n_accept = cfg["n_accept"].get<long>();
  if (n_accept < 1) throw ConfigError("\"n_accept\" >= 1 required");
  auto res = run_pipeline(pom, clicks, parse_strategy(cfg["strategy"].get<std::string>()),
                          knobs_from_json(cfg), n_accept, cfg["seed"].get<std::uint64_t>(),
                          workers, cfg.value("grid_resolution", 0.01),
                          cfg.value("safety", 1.05));
  write_bloch_csv(out_path(cfg["out_samples"].get<std::string>()), res.samples);
  json report = {{"proposed", res.report.proposed},
                 {"accepted", res.report.accepted},
                 {"acceptance_rate", res.report.acceptance_rate},
                 {"bound_c", res.report.bound_c},
                 {"max_observed_ratio", res.report.max_observed_ratio},
                 {"wall_seconds", res.report.wall_seconds}};
  emit(report, cfg.value("out_report", std::string{}));
  return 0;
}

int cmd_blr(const std::string& config_path, const std::string& uniform_path,
            const std::string& posterior_path, const std::string& out, int workers) {
  json cfg = load_config(config_path, {"pom", "clicks"}, {"lambdas"});
  Pom pom = Pom::builtin(cfg["pom"].get<std::string>());
  ClickRecord clicks = clicks_from_json(cfg["clicks"]);
  clicks.validate(pom);
  std::vector<double> lambdas = default_lambda_grid();
  if (cfg.contains("lambdas")) lambdas = cfg["lambdas"].get<std::vector<double>>();
  BlrCurve curve = blr_curves(pom, clicks, read_bloch_csv(uniform_path),
                              read_bloch_csv(posterior_path), lambdas, workers);
  write_blr_csv(out_path(out), curve);
  return 0;
}

int cmd_bench_acceptance(const std::string& config_path, int workers) {
  json cfg = load_config(config_path,
                         {"pom", "clicks", "strategy", "n_proposals", "seed", "out"},
                         {"sweep", "grid_resolution", "safety"});
  Pom pom = Pom::builtin(cfg["pom"].get<std::string>());
  ClickRecord clicks = clicks_from_json(cfg["clicks"]);
  clicks.validate(pom);
  ProposalStrategy strategy = parse_strategy(cfg["strategy"].get<std::string>());
  long n_proposals = cfg["n_proposals"].get<long>();
  std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
  double grid_resolution = cfg.value("grid_resolution", 0.01);
  double safety = cfg.value("safety", 1.05);

  auto axis = [&](const char* key, double fallback) -> std::vector<double> {
    if (cfg.contains("sweep") && cfg["sweep"].contains(key))
      return cfg["sweep"][key].get<std::vector<double>>();
    return {fallback};
  };
  if (cfg.contains("sweep"))
    for (const auto& [k, v] : cfg["sweep"].items()) {
      (void)v;
      static const std::vector<std::string> keys = {"N", "alpha", "mu_boundary",
                                                    "mu_interior", "w_interior"};
      if (std::find(keys.begin(), keys.end(), k) == keys.end())
        throw ConfigError("sweep has unknown key \"" + k + "\"");
    }
  ProposalKnobs base;
  std::vector<double> Ns = axis("N", base.N);
  std::vector<double> alphas = axis("alpha", base.alpha);
  std::vector<double> mus_b = axis("mu_boundary", base.mu_boundary);
  std::vector<double> mus_i = axis("mu_interior", base.mu_interior);
  std::vector<double> ws = axis("w_interior", base.w_interior);

  AffinePom ap(pom);
  TargetLogPdf target = [&ap, clicks](const BlochVector& b) {
    return ap.log_posterior(clicks, b);
  };
  std::ostringstream csv;
  csv.precision(10);
  csv << "N,alpha,mu_boundary,mu_interior,w_interior,bound_c,acceptance_rate\n";
  double best_rate = -1.0;
  json best;
  for (double N : Ns)
    for (double alpha : alphas)
      for (double mu_b : mus_b)
        for (double mu_i : mus_i)
          for (double w : ws) {
            ProposalKnobs knobs;
            knobs.N = static_cast<int>(N);
            knobs.alpha = alpha;
            knobs.mu_boundary = mu_b;
            knobs.mu_interior = mu_i;
            knobs.w_interior = w;
            Proposal proposal(build_proposal(pom, clicks, strategy, knobs));
            double c = estimate_bound(target, proposal, grid_resolution, safety);
            double rate =
                measure_acceptance_rate(target, proposal, c, n_proposals, seed, workers);
            csv << knobs.N << ',' << alpha << ',' << mu_b << ',' << mu_i << ',' << w
                << ',' << c << ',' << rate << '\n';
            if (rate > best_rate) {
              best_rate = rate;
              best = {{"N", knobs.N},           {"alpha", alpha},
                      {"mu_boundary", mu_b},    {"mu_interior", mu_i},
                      {"w_interior", w},        {"bound_c", c},
                      {"acceptance_rate", rate}};
            }
          }
  write_text_atomic(out_path(cfg["out"].get<std::string>()), csv.str());
  std::cout << json({{"best", best}}).dump(2) << "\n";
  return 0;
}

int cmd_bench_time(const std::string& config_path, int workers) {
  json cfg = load_config(
      config_path, {"pom", "clicks", "strategy", "n_accept", "seed"},
      {"N", "alpha", "mu_boundary", "mu_interior", "w_interior", "out_samples",
       "out_report", "grid_resolution", "safety"});
  Pom pom = Pom::builtin(cfg["pom"].get<std::string>());
  ClickRecord clicks = clicks_from_json(cfg["clicks"]);
  clicks.validate(pom);
  long n_accept = cfg["n_accept"].get<long>();
  if (n_accept < 1) throw ConfigError("\"n_accept\" >= 1 required");
  auto res = run_pipeline(pom, clicks, parse_strategy(cfg["strategy"].get<std::string>()),
                          knobs_from_json(cfg), n_accept, cfg["seed"].get<std::uint64_t>(),
                          workers, cfg.value("grid_resolution", 0.01),
                          cfg.value("safety", 1.05));
  if (cfg.contains("out_samples"))
    write_bloch_csv(out_path(cfg["out_samples"].get<std::string>()), res.samples);
  double total = res.t_peak + res.t_bound + res.t_sample;
  json report = {{"stage_seconds",
                  {{"peak_and_proposal", res.t_peak},
                   {"bound_estimate", res.t_bound},
                   {"rejection_sample", res.t_sample}}},
                 {"total_seconds", total},
                 {"acceptance_rate", res.report.acceptance_rate},
                 {"bound_c", res.c},
                 {"samples_per_second",
                  static_cast<double>(res.report.accepted) / res.t_sample}};
  emit(report, cfg.value("out_report", std::string{}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-zero-mean quantum Wishart sampling and density toolkit"};
  app.set_version_flag("--version", std::string("qwish ") + kVersion +
                                        " (rng: " + kRngAlgorithm + ")");
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "worker threads (0 = logical cores)");

  // density
  auto* density = app.add_subcommand("density", "log-density on a Bloch grid -> CSV");
  std::string d_field = "complex", d_out;
  int d_N = 4;
  double d_mu = 0.0, d_res = 0.05;
  density->add_option("--field", d_field);
  density->add_option("--N", d_N)->required();
  density->add_option("--mu", d_mu);
  density->add_option("--resolution", d_res);
  density->add_option("--out", d_out);

  // sample-wishart
  auto* sw = app.add_subcommand("sample-wishart", "batch Wishart states -> CSV/JSONL");
  std::string sw_field = "complex", sw_out;
  int sw_d = 2, sw_N = 4;
  double sw_mu = 0.0;
  long sw_n = 1000;
  std::uint64_t sw_seed = 0;
  sw->add_option("--field", sw_field);
  sw->add_option("--d", sw_d);
  sw->add_option("--N", sw_N)->required();
  sw->add_option("--mu", sw_mu);
  sw->add_option("--n", sw_n)->required();
  sw->add_option("--seed", sw_seed);
  sw->add_option("--out", sw_out)->required();

  // fit-peak
  auto* fp = app.add_subcommand("fit-peak", "peak placement: radial mu or stationary params");
  std::string fp_field = "real", fp_state, fp_m2, fp_out;
  int fp_N = 4;
  double fp_r = -1.0, fp_theta = M_PI / 2.0, fp_phi = 0.0;
  fp->add_option("--r", fp_r);
  fp->add_option("--theta", fp_theta);
  fp->add_option("--phi", fp_phi);
  fp->add_option("--N", fp_N)->required();
  fp->add_option("--field", fp_field);
  fp->add_option("--state-file", fp_state);
  fp->add_option("--m2-file", fp_m2);
  fp->add_option("--out", fp_out);

  // mle
  auto* ml = app.add_subcommand("mle", "maximum-likelihood Bloch peak -> JSON");
  std::string ml_pom, ml_clicks, ml_out;
  ml->add_option("--pom", ml_pom)->required();
  ml->add_option("--clicks", ml_clicks)->required();
  ml->add_option("--out", ml_out);

  // posterior-sample
  auto* ps = app.add_subcommand("posterior-sample", "rejection-sample a posterior");
  std::string ps_config;
  ps->add_option("--config", ps_config)->required();

  // blr
  auto* blr = app.add_subcommand("blr", "size/credibility curves -> CSV");
  std::string blr_config, blr_uniform, blr_posterior, blr_out;
  blr->add_option("--config", blr_config)->required();
  blr->add_option("--uniform", blr_uniform)->required();
  blr->add_option("--posterior", blr_posterior)->required();
  blr->add_option("--out", blr_out)->required();

  // bench-acceptance
  auto* ba = app.add_subcommand("bench-acceptance", "acceptance-rate knob sweep -> CSV");
  std::string ba_config;
  ba->add_option("--config", ba_config)->required();

  // bench-time
  auto* bt = app.add_subcommand("bench-time", "full-pipeline timing report");
  std::string bt_config;
  bt->add_option("--config", bt_config)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json({{"error", "ConfigError"}, {"message", e.what()}}).dump() << "\n";
    return 2;
  }

  try {
    if (*density) return cmd_density(parse_field(d_field), d_N, d_mu, d_res, d_out);
    if (*sw)
      return cmd_sample_wishart(parse_field(sw_field), sw_d, sw_N, sw_mu, sw_n,
                                sw_seed, workers, sw_out);
    if (*fp) {
      if (!fp_state.empty())
        return cmd_fit_peak_stationary(fp_state, fp_m2, fp_N, parse_field(fp_field), fp_out);
      if (fp_r < 0.0) throw ConfigError("fit-peak: either --r or --state-file required");
      return cmd_fit_peak_radial(fp_r, fp_theta, fp_phi, fp_N, parse_field(fp_field), fp_out);
    }
    if (*ml) return cmd_mle(ml_pom, ml_clicks, ml_out);
    if (*ps) return cmd_posterior_sample(ps_config, workers);
    if (*blr) return cmd_blr(blr_config, blr_uniform, blr_posterior, blr_out, workers);
    if (*ba) return cmd_bench_acceptance(ba_config, workers);
    if (*bt) return cmd_bench_time(bt_config, workers);
  } catch (const ConfigError& e) {
    std::cerr << json({{"error", "ConfigError"}, {"message", e.what()}}).dump() << "\n";
    return 2;
  } catch (const UnboundedRatio& e) {
    std::cerr << json({{"error", "UnboundedRatio"}, {"message", e.what()}}).dump() << "\n";
    return 3;
  } catch (const RatioExceedsBound& e) {
    std::cerr << json({{"error", "RatioExceedsBound"}, {"message", e.what()}}).dump() << "\n";
    return 3;
  } catch (const NoRoot& e) {
    std::cerr << json({{"error", "NoRoot"}, {"message", e.what()}}).dump() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << json({{"error", "NumericError"}, {"message", e.what()}}).dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << json({{"error", "InternalError"}, {"message", e.what()}}).dump() << "\n";
    return 3;
  }
  return 0;
}

// Command-line front end: synthetic data generation, sampling probabilities,
// randomized FPCA/FLR, theory diagnostics, and the Monte Carlo benchmark.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "funss/bench.hpp"
#include "funss/diagnostics.hpp"
#include "funss/errors.hpp"
#include "funss/io.hpp"
#include "funss/parallel.hpp"
#include "funss/rflr.hpp"
#include "funss/rfpca.hpp"
#include "funss/simgen.hpp"
#include "funss/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct CommonDesign {
  std::string eigen = "ed";
  std::string score = "nu";
  int n = 2000;
  int l = 128;
  int k = 50;
};

void add_design_flags(CLI::App* cmd, CommonDesign* d) {
  cmd->add_option("--eigen", d->eigen, "eigenvalue schedule: ed or pd")->capture_default_str();
  cmd->add_option("--score", d->score, "score distribution: nu, mn or vn")
      ->capture_default_str();
  cmd->add_option("--n", d->n, "sample count")->capture_default_str();
  cmd->add_option("--l", d->l, "grid length")->capture_default_str();
  cmd->add_option("--k", d->k, "number of generating components")->capture_default_str();
}

funss::SimDesign to_design(const CommonDesign& d, std::uint64_t seed) {
  funss::SimDesign design;
  design.eigen_kind = funss::eigen_kind_from_string(d.eigen);
  design.score_kind = funss::score_kind_from_string(d.score);
  design.n = d.n;
  design.l = d.l;
  design.k = d.k;
  design.seed = seed;
  return design;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

funss::SamplingDistribution make_distribution(const funss::FunctionalDataset& ds,
                                              const std::string& method, int rank, double alpha,
                                              int c_pilot, std::uint64_t seed) {
  if (method == "unif") return funss::prob_uniform(ds.n());
  if (method == "impo") return funss::prob_impo(ds);
  if (method == "mixture") return funss::prob_mixture(ds, alpha);
  if (method == "funprinss-exact") {
    const funss::SpectralModel model = funss::fpca_full(ds, std::min(ds.n(), ds.l()));
    return funss::prob_funprinss_exact(ds, model, rank);
  }
  if (method == "funprinss") {
    return funss::estimate_funprinss(ds, c_pilot, rank, alpha, seed);
  }
  throw funss::ParameterError("unknown sampling method '" + method + "'");
}

void write_model_csv(const std::string& path, const funss::SpectralModel& model) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw funss::FormatError("cannot open '" + path + "' for writing");
  out << "rank,sigma_sq";
  for (int j = 0; j < model.grid().size(); ++j) out << ",theta_" << j;
  out << "\n";
  for (int r = 0; r < model.rank(); ++r) {
    out << (r + 1) << ',' << format_double(model.eigenvalues()(r));
    for (int j = 0; j < model.grid().size(); ++j) {
      out << ',' << format_double(model.eigenfunctions()(r, j));
    }
    out << "\n";
  }
}

void write_sidecar(const std::string& path, const nlohmann::json& j) {
  std::ofstream meta(path + ".json", std::ios::trunc);
  if (!meta) throw funss::FormatError("cannot open '" + path + ".json' for writing");
  meta << j.dump(2) << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"randomized functional PCA / regression with subspace sampling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(funss::kVersionString));
  // key = value config file; place --config before the subcommand and prefix
  // keys with the subcommand name ("bench.reps = 100" or a [bench] section).
  // Command-line flags override file values.
  app.set_config("--config", "", "read options from a key = value file");

  // simulate ---------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic dataset");
  CommonDesign sim_design;
  add_design_flags(simulate, &sim_design);
  std::uint64_t sim_seed = 0;
  std::string sim_out, sim_response_out;
  double sim_noise_sd = 1.0;
  simulate->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
  simulate->add_option("--out", sim_out, "output dataset (.fds binary or .csv)")->required();
  simulate->add_option("--response-out", sim_response_out,
                       "also generate a regression response into this CSV");
  simulate->add_option("--noise-sd", sim_noise_sd, "response noise level")
      ->capture_default_str();

  // probs ------------------------------------------------------------------
  auto* probs = app.add_subcommand("probs", "compute a sampling distribution");
  std::string probs_data, probs_method = "funprinss", probs_out;
  int probs_rank = 5, probs_c_pilot = 1000;
  double probs_alpha = 0.5;
  std::uint64_t probs_seed = 0;
  probs->add_option("--data", probs_data, "input dataset")->required();
  probs->add_option("--method", probs_method,
                    "unif | impo | mixture | funprinss | funprinss-exact")
      ->capture_default_str();
  probs->add_option("--rank", probs_rank, "subspace dimension R")->capture_default_str();
  probs->add_option("--alpha", probs_alpha, "mixture weight")->capture_default_str();
  probs->add_option("--c-pilot", probs_c_pilot, "pilot subsample size")->capture_default_str();
  probs->add_option("--seed", probs_seed, "RNG seed")->capture_default_str();
  probs->add_option("--out", probs_out, "output CSV (one probability per line)")->required();

  // fpca -------------------------------------------------------------------
  auto* fpca = app.add_subcommand("fpca", "full or randomized FPCA");
  std::string fpca_data, fpca_sampler = "funprinss", fpca_out;
  int fpca_c = 1000, fpca_rank = 5, fpca_c_pilot = 0;
  double fpca_alpha = 0.5;
  std::uint64_t fpca_seed = 0;
  fpca->add_option("--data", fpca_data, "input dataset")->required();
  fpca->add_option("--sampler", fpca_sampler,
                   "full | unif | impo | funprinss | funprinss-exact")
      ->capture_default_str();
  fpca->add_option("--c", fpca_c, "subsample size")->capture_default_str();
  fpca->add_option("--rank", fpca_rank, "number of eigenpairs R")->capture_default_str();
  fpca->add_option("--alpha", fpca_alpha, "pilot mixture weight")->capture_default_str();
  fpca->add_option("--c-pilot", fpca_c_pilot, "pilot size (0: reuse --c)")
      ->capture_default_str();
  fpca->add_option("--seed", fpca_seed, "RNG seed")->capture_default_str();
  fpca->add_option("--out", fpca_out, "output CSV of eigenpairs")->required();

  // flr --------------------------------------------------------------------
  auto* flr = app.add_subcommand("flr", "full or randomized functional linear regression");
  std::string flr_data, flr_response, flr_sampler = "funprinss", flr_out;
  int flr_c = 1000, flr_rank = 5, flr_c_pilot = 0;
  double flr_alpha = 0.5;
  std::uint64_t flr_seed = 0;
  flr->add_option("--data", flr_data, "input dataset")->required();
  flr->add_option("--response", flr_response, "response CSV")->required();
  flr->add_option("--sampler", flr_sampler, "full | unif | impo | funprinss | funprinss-exact")
      ->capture_default_str();
  flr->add_option("--c", flr_c, "subsample size")->capture_default_str();
  flr->add_option("--rank", flr_rank, "truncation rank R")->capture_default_str();
  flr->add_option("--alpha", flr_alpha, "pilot mixture weight")->capture_default_str();
  flr->add_option("--c-pilot", flr_c_pilot, "pilot size (0: reuse --c)")->capture_default_str();
  flr->add_option("--seed", flr_seed, "RNG seed")->capture_default_str();
  flr->add_option("--out", flr_out, "output CSV of the regression function")->required();

  // bench ------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "Monte Carlo sampler comparison");
  CommonDesign bench_design;
  add_design_flags(bench, &bench_design);
  std::string bench_task = "fpca", bench_out, bench_data, bench_response;
  std::vector<int> bench_c_list = {100, 300, 1000};
  std::vector<std::string> bench_samplers = {"unif", "impo", "funprinss"};
  int bench_reps = 200, bench_rank = 5, bench_c_pilot = 0;
  double bench_alpha = 0.5;
  std::uint64_t bench_seed = 0;
  bench->add_option("--task", bench_task, "fpca or flr")->capture_default_str();
  bench->add_option("--c-list", bench_c_list, "subsample sizes")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--samplers", bench_samplers, "subset of unif,impo,funprinss,funprinss-exact")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--reps", bench_reps, "replicates per cell")->capture_default_str();
  bench->add_option("--rank", bench_rank, "subspace dimension R")->capture_default_str();
  bench->add_option("--alpha", bench_alpha, "pilot mixture weight")->capture_default_str();
  bench->add_option("--c-pilot", bench_c_pilot, "pilot size (0: reuse each C)")
      ->capture_default_str();
  bench->add_option("--seed", bench_seed, "RNG seed")->capture_default_str();
  bench->add_option("--data", bench_data, "benchmark an existing dataset instead of --eigen/--score");
  bench->add_option("--response", bench_response, "response CSV for --task flr with --data");
  bench->add_option("--out", bench_out, "result table CSV")->required();

  // diag -------------------------------------------------------------------
  auto* diag = app.add_subcommand("diag", "spectrum statistics and theory-bound overlay");
  CommonDesign diag_design;
  add_design_flags(diag, &diag_design);
  std::string diag_data, diag_task = "fpca", diag_out;
  std::vector<int> diag_c_list = {1000, 5000, 10000};
  std::vector<double> diag_eps;
  int diag_rank = 5;
  double diag_beta = 1.0;
  std::uint64_t diag_seed = 0;
  diag->add_option("--data", diag_data, "dataset path (otherwise synthetic from the design)");
  diag->add_option("--task", diag_task, "fpca or flr bounds")->capture_default_str();
  diag->add_option("--rank", diag_rank, "subspace dimension R")->capture_default_str();
  diag->add_option("--beta", diag_beta, "near-exactness factor")->capture_default_str();
  diag->add_option("--c-list", diag_c_list, "subsample sizes")
      ->delimiter(',')
      ->capture_default_str();
  diag->add_option("--eps-grid", diag_eps, "explicit eps values (default: 3x threshold rule)")
      ->delimiter(',');
  diag->add_option("--seed", diag_seed, "RNG seed for the synthetic design")
      ->capture_default_str();
  diag->add_option("--out", diag_out, "result table CSV")->required();

  // preprocess ---------------------------------------------------------------
  auto* preprocess = app.add_subcommand("preprocess", "unit-norm scaling and centering");
  std::string pre_in, pre_out;
  bool pre_unit = false, pre_center = false;
  preprocess->add_option("--data", pre_in, "input dataset")->required();
  preprocess->add_option("--out", pre_out, "output dataset")->required();
  preprocess->add_flag("--unit-norm", pre_unit, "scale every row to unit weighted norm");
  preprocess->add_flag("--center", pre_center, "subtract the column mean");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (simulate->parsed()) {
    const funss::SimDesign design = to_design(sim_design, sim_seed);
    if (!sim_response_out.empty()) {
      const funss::RegressionData data = funss::synth_regression(design, sim_noise_sd);
      funss::write_dataset(sim_out, data.x);
      funss::write_response_csv(sim_response_out, data.y);
    } else {
      funss::write_dataset(sim_out, funss::synth_dataset(design));
    }
    return kExitOk;
  }

  if (probs->parsed()) {
    const funss::FunctionalDataset ds = funss::read_dataset(probs_data);
    const funss::SamplingDistribution dist =
        make_distribution(ds, probs_method, probs_rank, probs_alpha, probs_c_pilot, probs_seed);
    std::ofstream out(probs_out, std::ios::trunc);
    if (!out) throw funss::FormatError("cannot open '" + probs_out + "' for writing");
    out << "p\n";
    for (Eigen::Index i = 0; i < dist.probs.size(); ++i) {
      out << format_double(dist.probs(i)) << "\n";
    }
    return kExitOk;
  }

  if (fpca->parsed()) {
    funss::FunctionalDataset ds = funss::center(funss::read_dataset(fpca_data));
    funss::SpectralModel model = [&] {
      if (fpca_sampler == "full") return funss::fpca_full(ds, fpca_rank);
      const int c_pilot = fpca_c_pilot > 0 ? fpca_c_pilot : fpca_c;
      const funss::SamplingDistribution dist = make_distribution(
          ds, fpca_sampler, fpca_rank, fpca_alpha, c_pilot,
          funss::rng::derive_seed(fpca_seed, {1}));
      return funss::fpca_randomized(ds, dist, fpca_c, fpca_rank,
                                    funss::rng::derive_seed(fpca_seed, {2}));
    }();
    write_model_csv(fpca_out, model);
    nlohmann::json j;
    j["sampler"] = fpca_sampler;
    j["c"] = fpca_c;
    j["rank"] = model.rank();
    j["requested_rank"] = fpca_rank;
    j["truncated"] = model.truncated();
    j["seed"] = fpca_seed;
    j["fve"] = funss::fve(ds, model, model.rank());
    write_sidecar(fpca_out, j);
    return kExitOk;
  }

  if (flr->parsed()) {
    funss::FunctionalDataset ds = funss::center(funss::read_dataset(flr_data));
    funss::ResponseVector y = funss::center(funss::read_response_csv(flr_response));
    funss::RegressionFit fit = [&] {
      if (flr_sampler == "full") return funss::flr_full(ds, y, flr_rank);
      const int c_pilot = flr_c_pilot > 0 ? flr_c_pilot : flr_c;
      const funss::SamplingDistribution dist = make_distribution(
          ds, flr_sampler, flr_rank, flr_alpha, c_pilot, funss::rng::derive_seed(flr_seed, {1}));
      return funss::flr_randomized(ds, y, dist, flr_c, flr_rank,
                                   funss::rng::derive_seed(flr_seed, {2}));
    }();
    std::ofstream out(flr_out, std::ios::trunc);
    if (!out) throw funss::FormatError("cannot open '" + flr_out + "' for writing");
    out << "t,psi\n";
    for (int j = 0; j < ds.grid().size(); ++j) {
      out << format_double(ds.grid().points()(j)) << ',' << format_double(fit.psi(j)) << "\n";
    }
    nlohmann::json j;
    j["sampler"] = flr_sampler;
    j["c"] = flr_c;
    j["rank"] = fit.rank;
    j["seed"] = flr_seed;
    j["conditioning"] = fit.conditioning;
    write_sidecar(flr_out, j);
    return kExitOk;
  }

  if (bench->parsed()) {
    funss::ExperimentConfig config;
    config.design = to_design(bench_design, bench_seed);
    config.samplers = bench_samplers;
    config.c_list = bench_c_list;
    config.rank = bench_rank;
    config.replicates = bench_reps;
    config.seed = bench_seed;
    config.task = bench_task == "flr" ? funss::BenchTask::kFlr : funss::BenchTask::kFpca;
    if (bench_task != "flr" && bench_task != "fpca") {
      throw funss::ParameterError("bench: --task must be fpca or flr");
    }
    config.alpha = bench_alpha;
    config.c_pilot = bench_c_pilot;
    funss::ResultTable table;
    if (!bench_data.empty()) {
      const funss::FunctionalDataset x = funss::read_dataset(bench_data);
      if (config.task == funss::BenchTask::kFlr) {
        if (bench_response.empty()) {
          throw funss::ParameterError("bench: --task flr with --data needs --response");
        }
        const funss::ResponseVector y = funss::read_response_csv(bench_response);
        table = funss::run_experiment(config, x, &y);
      } else {
        table = funss::run_experiment(config, x, nullptr);
      }
    } else {
      table = funss::run_experiment(config);
    }
    funss::write_results(bench_out, table);
    funss::write_gnuplot_medians(bench_out + ".gp.dat", table);
    return kExitOk;
  }

  if (diag->parsed()) {
    funss::ExperimentConfig config;
    config.design = to_design(diag_design, diag_seed);
    config.c_list = diag_c_list;
    config.rank = diag_rank;
    config.seed = diag_seed;
    config.beta = diag_beta;
    config.task = diag_task == "flr" ? funss::BenchTask::kFlr : funss::BenchTask::kFpca;
    if (diag_task != "flr" && diag_task != "fpca") {
      throw funss::ParameterError("diag: --task must be fpca or flr");
    }
    funss::ResultTable table;
    funss::SpectrumStats stats;
    if (!diag_data.empty()) {
      const funss::FunctionalDataset raw = funss::read_dataset(diag_data);
      table = funss::run_bound_overlay(config, diag_eps, raw, nullptr);
      const funss::FunctionalDataset ds = funss::center(raw);
      stats = funss::spectrum_stats(funss::fpca_full(ds, std::min(ds.n(), ds.l())), diag_rank);
    } else {
      table = funss::run_bound_overlay(config, diag_eps);
      const funss::FunctionalDataset ds = funss::center(funss::synth_dataset(config.design));
      stats = funss::spectrum_stats(funss::fpca_full(ds, std::min(ds.n(), ds.l())), diag_rank);
    }
    table.append("stats", 0, -1, "g_r", stats.g_r);
    table.append("stats", 0, -1, "big_g_r", stats.big_g_r);
    table.append("stats", 0, -1, "k_r", stats.k_r);
    table.append("stats", 0, -1, "delta_r", stats.delta_r);
    table.append("stats", 0, -1, "delta0", stats.delta0);
    table.append("stats", 0, -1, "sigma1_sq", stats.sigma1_sq);
    table.append("stats", 0, -1, "eigengap_ok", stats.eigengap_ok ? 1.0 : 0.0);
    funss::write_results(diag_out, table);
    std::cout << "g_R=" << stats.g_r << " G_R=" << stats.big_g_r << " K_R=" << stats.k_r
              << " Delta_R=" << stats.delta_r << " Delta_0=" << stats.delta0 << "\n";
    return kExitOk;
  }

  if (preprocess->parsed()) {
    const funss::FunctionalDataset ds = funss::read_dataset(pre_in);
    funss::write_dataset(pre_out,
                         funss::preprocess_spectra(ds, {pre_unit, pre_center}));
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  funss::parallel::init_from_env();
  try {
    return run(argc, argv);
  } catch (const funss::ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const funss::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const funss::DimensionError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const funss::FormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const funss::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

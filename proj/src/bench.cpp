#include "funss/bench.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <limits>
#include <optional>
#include <utility>

#include "funss/diagnostics.hpp"
#include "funss/errors.hpp"
#include "funss/parallel.hpp"
#include "funss/rflr.hpp"
#include "funss/rfpca.hpp"
#include "funss/rng.hpp"
#include "funss/version.hpp"

namespace funss {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t sampler_tag(const std::string& name) {
  if (name == "unif") return 1;
  if (name == "impo") return 2;
  if (name == "funprinss") return 3;
  if (name == "funprinss-exact") return 4;
  throw ParameterError("unknown sampler '" + name + "'");
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::vector<std::string> metric_names(BenchTask task, int rank) {
  std::vector<std::string> names;
  if (task == BenchTask::kFpca) {
    names = {"cov_err_hs", "cov_err_op", "proj_err_hs", "proj_err_op"};
    for (int r = 1; r <= rank; ++r) names.push_back("eigfun_err_" + std::to_string(r));
  } else {
    names = {"pred_err_n", "est_err"};
  }
  return names;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

bool is_known_sampler(const std::string& name) {
  return name == "unif" || name == "impo" || name == "funprinss" || name == "funprinss-exact";
}

ResultTable run_experiment(const ExperimentConfig& config) {
  if (config.task == BenchTask::kFlr) {
    const RegressionData data = synth_regression(config.design);
    return run_experiment(config, data.x, &data.y);
  }
  const FunctionalDataset x = synth_dataset(config.design);
  return run_experiment(config, x, nullptr);
}

ResultTable run_experiment(const ExperimentConfig& config, const FunctionalDataset& raw_x,
                           const ResponseVector* raw_y) {
  if (config.replicates < 1) throw ParameterError("run_experiment: need replicates >= 1");
  if (config.c_list.empty()) throw ParameterError("run_experiment: empty C list");
  if (config.rank < 1) throw ParameterError("run_experiment: need rank >= 1");
  for (const std::string& s : config.samplers) sampler_tag(s);
  if (config.task == BenchTask::kFlr && raw_y == nullptr) {
    throw ParameterError("run_experiment: the FLR task needs a response vector");
  }

  const FunctionalDataset ds = center(raw_x);
  const int n = ds.n();
  const int full_rank = std::min(n, ds.l());
  const SpectralModel full_model = fpca_full(ds, full_rank);
  if (full_model.rank() < config.rank) {
    throw NumericalError("run_experiment: dataset rank is below the requested R");
  }
  const SpectralModel ref_model = truncate(full_model, config.rank);

  Eigen::MatrixXd b_hat;
  if (config.task == BenchTask::kFpca) b_hat = cov_matrix_scaled(ds);

  ResponseVector y;
  std::optional<RegressionFit> full_fit;
  if (config.task == BenchTask::kFlr) {
    y = center(*raw_y);
    full_fit.emplace(flr_full(ds, y, config.rank));
  }

  // Static distributions shared across replicates; the pilot one is random
  // and gets rebuilt per replicate from its own derived stream.
  SamplingDistribution dist_unif = prob_uniform(n);
  SamplingDistribution dist_impo = prob_impo(ds);
  SamplingDistribution dist_exact;
  for (const std::string& s : config.samplers) {
    if (s == "funprinss-exact") dist_exact = prob_funprinss_exact(ds, full_model, config.rank);
  }

  struct Job {
    int sampler;
    int c_index;
    int replicate;
  };
  std::vector<Job> jobs;
  for (int si = 0; si < static_cast<int>(config.samplers.size()); ++si) {
    for (int ci = 0; ci < static_cast<int>(config.c_list.size()); ++ci) {
      for (int rep = 0; rep < config.replicates; ++rep) jobs.push_back({si, ci, rep});
    }
  }
  const std::vector<std::string> metrics = metric_names(config.task, config.rank);
  std::vector<std::vector<double>> values(jobs.size());
  std::vector<std::string> notes(jobs.size());

  const int threads = parallel::thread_count();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    const std::string& sampler = config.samplers[job.sampler];
    const int c = config.c_list[job.c_index];
    const std::uint64_t tag = sampler_tag(sampler);
    std::vector<double> out(metrics.size(), kNaN);
    try {
      SamplingDistribution local;
      const SamplingDistribution* dist = nullptr;
      if (sampler == "unif") {
        dist = &dist_unif;
      } else if (sampler == "impo") {
        dist = &dist_impo;
      } else if (sampler == "funprinss-exact") {
        dist = &dist_exact;
      } else {
        const int c_pilot = config.c_pilot > 0 ? config.c_pilot : c;
        local = estimate_funprinss(
            ds, c_pilot, config.rank, config.alpha,
            rng::derive_seed(config.seed, {tag, static_cast<std::uint64_t>(c),
                                           static_cast<std::uint64_t>(job.replicate), 1}));
        dist = &local;
      }
      const SubsampleDraw draw =
          config.identity_draw_mode
              ? identity_draw(n)
              : draw_with_replacement(
                    *dist, c,
                    rng::derive_seed(config.seed, {tag, static_cast<std::uint64_t>(c),
                                                   static_cast<std::uint64_t>(job.replicate), 2}));
      if (config.task == BenchTask::kFpca) {
        const WeightedSketch sketch = cov_subsampled(ds, draw);
        const OperatorNorms cov_err =
            sym_diff_norms(cov_matrix_scaled(sketch, ds.grid()), b_hat);
        out[0] = cov_err.hs;
        out[1] = cov_err.op;
        const SpectralModel tilde = spectral_from_rows(sketch.rows, ds.grid(), config.rank);
        if (tilde.rank() < config.rank) {
          throw NumericalError("subsampled spectrum rank deficient at R");
        }
        const OperatorNorms proj = subspace_error(ref_model, tilde, config.rank);
        out[2] = proj.hs;
        out[3] = proj.op;
        for (int r = 0; r < config.rank; ++r) {
          out[4 + r] =
              eigfun_error(ref_model.eigenfunction(r), tilde.eigenfunction(r), ds.grid());
        }
      } else {
        const RegressionFit sub_fit = flr_randomized(ds, y, draw, config.rank);
        out[0] = (sub_fit.fitted - full_fit->fitted).squaredNorm() / static_cast<double>(n);
        out[1] = sq_norm(sub_fit.psi - full_fit->psi, ds.grid());
      }
      values[j] = std::move(out);
    } catch (const std::exception& e) {
      values[j] = std::move(out);  // NaN row set
      notes[j] = e.what();
    }
  }

  ResultTable table;
  table.seed = config.seed;
  table.design = to_string(config.design);
  table.timestamp = utc_timestamp();
  table.version = kVersionString;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      table.append(config.samplers[job.sampler], config.c_list[job.c_index], job.replicate,
                   metrics[m], values[j][m], notes[j]);
    }
  }

  // Aggregates over finite replicate values; rows keyed by replicate = -1.
  for (int si = 0; si < static_cast<int>(config.samplers.size()); ++si) {
    for (int ci = 0; ci < static_cast<int>(config.c_list.size()); ++ci) {
      for (std::size_t m = 0; m < metrics.size(); ++m) {
        std::vector<double> finite;
        for (int rep = 0; rep < config.replicates; ++rep) {
          const std::size_t j =
              (static_cast<std::size_t>(si) * config.c_list.size() + ci) * config.replicates +
              rep;
          if (std::isfinite(values[j][m])) finite.push_back(values[j][m]);
        }
        double mean = kNaN, stderr_ = kNaN;
        if (!finite.empty()) {
          mean = 0.0;
          for (double v : finite) mean += v;
          mean /= static_cast<double>(finite.size());
          if (finite.size() > 1) {
            double ss = 0.0;
            for (double v : finite) ss += (v - mean) * (v - mean);
            stderr_ = std::sqrt(ss / static_cast<double>(finite.size() - 1) /
                                static_cast<double>(finite.size()));
          }
        }
        const std::string& sampler = config.samplers[si];
        const int c = config.c_list[ci];
        table.append(sampler, c, -1, metrics[m] + "_mean", mean);
        table.append(sampler, c, -1, metrics[m] + "_median", median_of(finite));
        table.append(sampler, c, -1, metrics[m] + "_stderr", stderr_);
      }
    }
  }
  return table;
}

ResultTable run_bound_overlay(const ExperimentConfig& config,
                              const std::vector<double>& eps_grid) {
  if (config.task == BenchTask::kFlr) {
    const RegressionData data = synth_regression(config.design);
    return run_bound_overlay(config, eps_grid, data.x, &data.y);
  }
  const FunctionalDataset x = synth_dataset(config.design);
  return run_bound_overlay(config, eps_grid, x, nullptr);
}

ResultTable run_bound_overlay(const ExperimentConfig& config, const std::vector<double>& eps_grid,
                              const FunctionalDataset& raw_x, const ResponseVector* raw_y) {
  if (config.c_list.empty()) throw ParameterError("run_bound_overlay: empty C list");
  if (config.task == BenchTask::kFlr && raw_y == nullptr) {
    throw ParameterError("run_bound_overlay: the FLR task needs a response vector");
  }
  const FunctionalDataset ds = center(raw_x);
  const SpectralModel full_model = fpca_full(ds, std::min(ds.n(), ds.l()));
  const SpectrumStats stats = spectrum_stats(full_model, config.rank);
  if (!stats.eigengap_ok) {
    throw NumericalError("run_bound_overlay: eigengap at R is not positive");
  }

  double y_norm = 0.0, yperp_norm = 0.0;
  if (config.task == BenchTask::kFlr) {
    const ResponseVector y = center(*raw_y);
    const RegressionFit fit = flr_full(ds, y, config.rank);
    y_norm = y.values.norm() / std::sqrt(static_cast<double>(ds.n()));
    yperp_norm = fit.residual.norm() / std::sqrt(static_cast<double>(ds.n()));
  }

  ResultTable table;
  table.seed = config.seed;
  table.design = to_string(config.design);
  table.timestamp = utc_timestamp();
  table.version = kVersionString;
  const double dim = static_cast<double>(stats.r) + stats.delta_r;
  for (int c : config.c_list) {
    std::vector<double> eps_list = eps_grid;
    if (eps_list.empty()) {
      const double threshold = config.task == BenchTask::kFpca
                                   ? fpca_eps_threshold(stats, config.beta, c)
                                   : flr_eps_threshold(stats, config.beta, c);
      eps_list.push_back(3.0 * threshold);
    }
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
      const double eps = eps_list[e];
      const BoundResult res =
          config.task == BenchTask::kFpca
              ? fpca_bound(stats, config.beta, c, eps)
              : flr_bound(stats, config.beta, c, eps, y_norm, yperp_norm);
      const long rep = static_cast<long>(e);
      table.append("theory", c, rep, "theory_eps", eps);
      table.append("theory", c, rep, "theory_bound", res.error_bound);
      table.append("theory", c, rep, "theory_prob", res.success_prob);
      table.append("theory", c, rep, "theory_feasible", res.eps_feasible ? 1.0 : 0.0);
    }
    table.append("theory", c, -1, "theory_first_order",
                 dim * std::sqrt(std::log(120.0 * dim)) / std::sqrt(static_cast<double>(c)));
    const PilotBetaResult beta = pilot_beta(stats, c);
    table.append("theory", c, -1, "theory_pilot_beta",
                 beta.finite ? beta.value : std::numeric_limits<double>::infinity());
  }
  return table;
}

}  // namespace funss

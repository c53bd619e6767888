#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "alphabp/common.hpp"
#include "alphabp/exact.hpp"
#include "alphabp/inference.hpp"
#include "alphabp/meanfield.hpp"
#include "alphabp/mrf.hpp"
#include "alphabp/rng.hpp"
#include "alphabp/spanning.hpp"

namespace alphabp {

// y = H x + e, e ~ N(0, σ_w² I), x ∈ {-1,1}^N.
struct LinearModel {
  Eigen::MatrixXd H;
  double sigma_w = 1.0;
};

// Posterior MRF of the linear model: with S = HᵀH,
//   φ_i(x_i)  = exp{-S_ii x_i²/(2σ_w²) + <h_i,y> x_i/σ_w²}
//   φ_ij(x_i,x_j) = exp{-x_i S_ij x_j/σ_w²}
// The edge set is the off-diagonal nonzero pattern of S.
inline PairwiseMRF mimo_posterior_mrf(const LinearModel& model, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(model.H.cols());
  if (model.H.rows() != y.size())
    throw StructuralError("mimo_posterior_mrf: dimension mismatch");
  if (!(model.sigma_w > 0.0)) throw ParameterError("mimo_posterior_mrf: sigma_w must be > 0");
  const double inv_var = 1.0 / (model.sigma_w * model.sigma_w);
  Eigen::MatrixXd S = model.H.transpose() * model.H;
  Eigen::VectorXd hy = model.H.transpose() * y;

  Domain domain = Domain::binary();
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (S(i, j) != 0.0) edges.emplace_back(i, j);
  Graph graph(n, std::move(edges));

  std::vector<std::vector<double>> log_unary(n);
  for (int i = 0; i < n; ++i) {
    log_unary[i].resize(2);
    for (std::size_t a = 0; a < 2; ++a) {
      double xi = domain.label(a);
      log_unary[i][a] = -S(i, i) * xi * xi * 0.5 * inv_var + hy(i) * xi * inv_var;
    }
  }
  std::vector<std::vector<double>> log_pairwise;
  log_pairwise.reserve(graph.num_edges());
  for (auto [i, j] : graph.edges()) {
    std::vector<double> table(4);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        table[a * 2 + b] = -domain.label(a) * S(i, j) * domain.label(b) * inv_var;
    log_pairwise.push_back(std::move(table));
  }
  return PairwiseMRF(std::move(graph), std::move(domain), std::move(log_unary),
                     std::move(log_pairwise));
}

struct MmseResult {
  Eigen::VectorXd mu_hat;
  Eigen::MatrixXd sigma_hat;
  std::vector<int> decision;
};

// μ̂ = (HᵀH + σ_w² I)⁻¹ Hᵀ y, Σ̂ = (HᵀH + σ_w² I)⁻¹ σ_w; per-entry nearest
// symbol decision with tie → -1.
inline MmseResult mmse_estimate(const LinearModel& model, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(model.H.cols());
  Eigen::MatrixXd A = model.H.transpose() * model.H +
                      model.sigma_w * model.sigma_w * Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  MmseResult result;
  result.mu_hat = llt.solve(model.H.transpose() * y);
  result.sigma_hat = llt.solve(Eigen::MatrixXd::Identity(n, n)) * model.sigma_w;
  result.decision.resize(n);
  for (int i = 0; i < n; ++i) result.decision[i] = result.mu_hat(i) > 0.0 ? 1 : -1;
  return result;
}

// Two-point prior p̂_i(x_i) ∝ exp{-(x_i - μ̂_i)²/(2 Σ̂_ii)} at x ∈ {-1,+1}.
inline std::vector<DiscreteDistribution> mmse_prior_beliefs(const MmseResult& result) {
  std::vector<DiscreteDistribution> priors(result.mu_hat.size());
  for (int i = 0; i < result.mu_hat.size(); ++i) {
    double var = result.sigma_hat(i, i);
    if (!(var > 0.0)) throw NumericalError("mmse_prior_beliefs: nonpositive variance");
    double lm = -(-1.0 - result.mu_hat(i)) * (-1.0 - result.mu_hat(i)) / (2.0 * var);
    double lp = -(1.0 - result.mu_hat(i)) * (1.0 - result.mu_hat(i)) / (2.0 * var);
    double lse = detail::log_sum_exp({lm, lp});
    priors[i] = {std::exp(lm - lse), std::exp(lp - lse)};
  }
  return priors;
}

// Multiplies each unary potential by a per-node prior factor; graph structure
// is unchanged.
inline PairwiseMRF augment_with_prior(const PairwiseMRF& mrf,
                                      const std::vector<DiscreteDistribution>& priors) {
  const Graph& g = mrf.graph();
  const std::size_t k = mrf.num_states();
  if (priors.size() != static_cast<std::size_t>(g.num_nodes()))
    throw StructuralError("augment_with_prior: one prior per node");
  std::vector<std::vector<double>> log_unary(g.num_nodes());
  for (int s = 0; s < g.num_nodes(); ++s) {
    if (priors[s].size() != k) throw StructuralError("augment_with_prior: prior size mismatch");
    log_unary[s].resize(k);
    for (std::size_t x = 0; x < k; ++x) {
      if (!(priors[s][x] > 0.0)) throw DomainError("augment_with_prior: prior mass must be > 0");
      log_unary[s][x] = mrf.log_unary(s, x) + std::log(priors[s][x]);
    }
  }
  std::vector<std::vector<double>> log_pairwise;
  log_pairwise.reserve(g.num_edges());
  for (auto [s, t] : g.edges()) {
    std::vector<double> table(k * k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) table[a * k + b] = mrf.log_pairwise(s, t, a, b);
    log_pairwise.push_back(std::move(table));
  }
  return PairwiseMRF(g, mrf.domain(), std::move(log_unary), std::move(log_pairwise));
}

struct AlgorithmSpec {
  enum class Kind { Map, Mmse, Bp, AlphaBp, AlphaBpMmse, MeanField, Damped, Trw };
  Kind kind = Kind::Bp;
  double param = 0.0;  // alpha for alpha-bp variants, gamma for damped
  std::string label;

  static AlgorithmSpec parse(const std::string& text) {
    AlgorithmSpec spec;
    spec.label = text;
    std::string name = text;
    std::string param;
    if (auto pos = text.find(':'); pos != std::string::npos) {
      name = text.substr(0, pos);
      param = text.substr(pos + 1);
    }
    auto need_param = [&](double fallback) {
      return param.empty() ? fallback : std::stod(param);
    };
    if (name == "map") spec.kind = Kind::Map;
    else if (name == "mmse") spec.kind = Kind::Mmse;
    else if (name == "bp") spec.kind = Kind::Bp;
    else if (name == "alpha-bp") { spec.kind = Kind::AlphaBp; spec.param = need_param(0.5); }
    else if (name == "alpha-bp-mmse") { spec.kind = Kind::AlphaBpMmse; spec.param = need_param(0.5); }
    else if (name == "mf") spec.kind = Kind::MeanField;
    else if (name == "damped") { spec.kind = Kind::Damped; spec.param = need_param(0.5); }
    else if (name == "trw") spec.kind = Kind::Trw;
    else throw ParameterError("unknown algorithm identifier: " + text);
    return spec;
  }
};

struct SerPoint {
  double snr_db = 0.0;
  std::string algorithm;
  double param = 0.0;
  long trials = 0;
  long symbol_errors = 0;
  double ser = 0.0;
};

// Per-trial symbol error counts, one row per algorithm, for paired
// statistics.
struct SerDetail {
  double snr_db = 0.0;
  std::vector<std::vector<int>> errors_per_trial;  // [algorithm][trial]
};

// SNR(dB) = 10 log10(N / σ_w²); H is unit-variance Gaussian, so SNR is
// controlled solely through σ_w.
inline double sigma_w_for_snr_db(int n, double snr_db) {
  return std::sqrt(static_cast<double>(n) * std::pow(10.0, -snr_db / 10.0));
}

inline std::vector<int> detail_run_algorithm(const AlgorithmSpec& algo, const LinearModel& model,
                                             const Eigen::VectorXd& y,
                                             const PairwiseMRF& posterior,
                                             const RunConfig& config);

// Monte Carlo SER study. Each trial draws fresh (H, x, e) from a per-trial
// sub-stream and every algorithm sees the identical (H, x, y), so SER
// differences are paired.
inline std::vector<SerDetail> ser_experiment_detailed(int n,
                                                      const std::vector<AlgorithmSpec>& algorithms,
                                                      const std::vector<double>& snr_grid_db,
                                                      int trials, std::uint64_t seed,
                                                      const RunConfig& config = RunConfig{
                                                          .max_iterations = 50}) {
  if (trials < 1) throw ParameterError("ser_experiment: trials must be >= 1");
  for (const auto& algo : algorithms)
    if (algo.kind == AlgorithmSpec::Kind::Map && n > 20)
      throw CapacityError("ser_experiment: MAP enabled with N > 20");

  std::vector<SerDetail> details;
  details.reserve(snr_grid_db.size());
  for (std::size_t point = 0; point < snr_grid_db.size(); ++point) {
    SerDetail detail;
    detail.snr_db = snr_grid_db[point];
    detail.errors_per_trial.assign(algorithms.size(), std::vector<int>(trials, 0));
    const double sigma_w = sigma_w_for_snr_db(n, snr_grid_db[point]);

    for (int trial = 0; trial < trials; ++trial) {
      Rng rng(substream_seed(seed, point * static_cast<std::uint64_t>(trials) + trial));
      LinearModel model;
      model.sigma_w = sigma_w;
      model.H.resize(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) model.H(i, j) = rng.normal();
      std::vector<int> x(n);
      Eigen::VectorXd xv(n);
      for (int i = 0; i < n; ++i) {
        x[i] = rng.uniform() < 0.5 ? -1 : 1;
        xv(i) = x[i];
      }
      Eigen::VectorXd y = model.H * xv;
      for (int i = 0; i < n; ++i) y(i) += sigma_w * rng.normal();

      PairwiseMRF posterior = mimo_posterior_mrf(model, y);
      for (std::size_t a = 0; a < algorithms.size(); ++a) {
        std::vector<int> decision = detail_run_algorithm(algorithms[a], model, y, posterior, config);
        int errors = 0;
        for (int i = 0; i < n; ++i)
          if (decision[i] != x[i]) ++errors;
        detail.errors_per_trial[a][trial] = errors;
      }
    }
    details.push_back(std::move(detail));
  }
  return details;
}

inline std::vector<int> detail_run_algorithm(const AlgorithmSpec& algo, const LinearModel& model,
                                             const Eigen::VectorXd& y,
                                             const PairwiseMRF& posterior,
                                             const RunConfig& config) {
  using Kind = AlgorithmSpec::Kind;
  switch (algo.kind) {
    case Kind::Map:
      // symbol-wise MAP: exact posterior marginals by enumeration, then a
      // per-symbol argmax; this is the minimum-SER detector (the sequence
      // argmax minimizes sequence errors instead and is measurably worse on
      // SER at low SNR)
      return map_decision(exact_marginals(posterior), posterior.domain());
    case Kind::Mmse:
      return mmse_estimate(model, y).decision;
    case Kind::Bp: {
      BeliefResult r = run_bp(posterior, config);
      return map_decision(r.marginals, posterior.domain());
    }
    case Kind::AlphaBp: {
      BeliefResult r =
          run_alpha_bp(posterior, AlphaAssignment(posterior.graph(), algo.param), config);
      return map_decision(r.marginals, posterior.domain());
    }
    case Kind::AlphaBpMmse: {
      MmseResult mmse = mmse_estimate(model, y);
      PairwiseMRF augmented = augment_with_prior(posterior, mmse_prior_beliefs(mmse));
      BeliefResult r =
          run_alpha_bp(augmented, AlphaAssignment(augmented.graph(), algo.param), config);
      return map_decision(r.marginals, augmented.domain());
    }
    case Kind::MeanField: {
      BeliefResult r = mean_field_run(posterior, config);
      return map_decision(r.marginals, posterior.domain());
    }
    case Kind::Damped: {
      BeliefResult r = run_damped_bp(posterior, algo.param, config);
      return map_decision(r.marginals, posterior.domain());
    }
    case Kind::Trw: {
      EdgeAppearance mu = edge_appearance_probabilities(posterior.graph());
      BeliefResult r = run_trw(posterior, mu, config);
      return map_decision(r.marginals, posterior.domain());
    }
  }
  throw ParameterError("unknown algorithm kind");
}

inline std::vector<SerPoint> ser_experiment(int n, const std::vector<AlgorithmSpec>& algorithms,
                                            const std::vector<double>& snr_grid_db, int trials,
                                            std::uint64_t seed,
                                            const RunConfig& config = RunConfig{.max_iterations =
                                                                                    50}) {
  auto details = ser_experiment_detailed(n, algorithms, snr_grid_db, trials, seed, config);
  std::vector<SerPoint> points;
  for (const auto& detail : details) {
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      SerPoint p;
      p.snr_db = detail.snr_db;
      p.algorithm = algorithms[a].label;
      p.param = algorithms[a].param;
      p.trials = trials;
      long errors = 0;
      for (int e : detail.errors_per_trial[a]) errors += e;
      p.symbol_errors = errors;
      p.ser = static_cast<double>(errors) / (static_cast<double>(trials) * n);
      points.push_back(std::move(p));
    }
  }
  return points;
}

}  // namespace alphabp

// Command-line front end: certification, single inferences, and the three
// experiment harnesses (lambda* sweeps, message trajectories, MIMO SER),
// plus a minimal deterministic SVG plotter.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "alphabp/convergence.hpp"
#include "alphabp/exact.hpp"
#include "alphabp/inference.hpp"
#include "alphabp/meanfield.hpp"
#include "alphabp/mimo.hpp"
#include "alphabp/model_io.hpp"
#include "alphabp/plot.hpp"
#include "alphabp/randgen.hpp"
#include "alphabp/spanning.hpp"

namespace {

using namespace alphabp;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitCertificateFailed = 2;
constexpr int kExitSamplingExhausted = 3;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw ParameterError("empty list: " + text);
  return out;
}

// Grid syntax "a:b:c": read as start:end:step when the step fits the range,
// otherwise as start:step:end. A plain number or comma list also works.
std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_double_list(text);
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() != 3) throw ParameterError("grid must be a:b:c, got " + text);
  double a = parts[0], b = parts[1], c = parts[2];
  double start, end, step;
  if (c > 0.0 && c <= b - a + 1e-12) {
    start = a; end = b; step = c;
  } else if (b > 0.0 && b <= c - a + 1e-12) {
    start = a; end = c; step = b;
  } else {
    throw ParameterError("cannot interpret grid " + text);
  }
  std::vector<double> out;
  for (double v = start; v <= end + step * 1e-9; v += step) out.push_back(v);
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StructuralError("cannot open output file " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("cannot open input file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_certify(const std::string& model_path, double alpha, const std::string& out_path) {
  ModelFile model = read_model_file(model_path);
  if (!model.ising)
    throw StructuralError("certify: model must be a binary Ising file (J/b form)");
  Graph graph = model.ising->graph();
  Certificate cert =
      certify(theta_from_ising(*model.ising, graph), AlphaAssignment(graph, alpha), graph);
  write_file(out_path, certificate_to_json(cert).dump(2) + "\n");
  return cert.theorem1_holds ? kExitOk : kExitCertificateFailed;
}

int cmd_infer(const std::string& model_path, const std::string& algo, double alpha, double gamma,
              int max_iter, double tol, const std::string& anneal, const std::string& out_path) {
  ModelFile model = read_model_file(model_path);
  const PairwiseMRF& mrf = model.mrf;
  RunConfig config;
  config.max_iterations = max_iter;
  config.tolerance = tol;
  if (!anneal.empty()) {
    auto pos = anneal.find(':');
    if (pos == std::string::npos) throw ParameterError("--anneal expects A:B");
    config.anneal = AnnealSchedule{std::stod(anneal.substr(0, pos)),
                                   std::stod(anneal.substr(pos + 1)), max_iter};
  }

  BeliefResult result;
  if (algo == "exact") {
    result.marginals = exact_marginals(mrf);
    result.converged = true;
  } else if (algo == "bp") {
    result = run_bp(mrf, config);
  } else if (algo == "alpha-bp") {
    result = run_alpha_bp(mrf, AlphaAssignment(mrf.graph(), alpha), config);
  } else if (algo == "damped") {
    result = run_damped_bp(mrf, gamma, config);
  } else if (algo == "mf") {
    result = mean_field_run(mrf, config);
  } else if (algo == "trw") {
    result = run_trw(mrf, edge_appearance_probabilities(mrf.graph()), config);
  } else {
    throw ParameterError("unknown algorithm: " + algo);
  }
  write_file(out_path, belief_result_to_json(result).dump(2) + "\n");
  return kExitOk;
}

int cmd_sweep_sigma(int n, const std::string& gammas, const std::string& alphas,
                    const std::string& sigmas, int trials, std::uint64_t seed,
                    const std::string& out_path) {
  std::ostringstream csv;
  csv << "# schema=1\n";
  csv << "# mean/min/max of lambda_star over " << trials << " seeded realizations per point\n";
  csv << "gamma,alpha,sigma,lambda_mean,lambda_min,lambda_max\n";
  for (double gamma : parse_double_list(gammas)) {
    for (double alpha : parse_double_list(alphas)) {
      for (double sigma : parse_grid(sigmas)) {
        double sum = 0.0, lo = 0.0, hi = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
          GraphSpec gs{n, gamma, substream_seed(seed, 2 * static_cast<std::uint64_t>(trial))};
          PotentialSpec ps{sigma,
                           substream_seed(seed, 2 * static_cast<std::uint64_t>(trial) + 1)};
          Graph graph = erdos_renyi(gs);
          IsingModel model = sample_ising(graph, ps);
          ConvergenceMatrix m = build_m_matrix(theta_from_ising(model, graph),
                                               AlphaAssignment(graph, alpha), graph);
          double lambda = largest_singular_value(m);
          if (trial == 0) lo = hi = lambda;
          lo = std::min(lo, lambda);
          hi = std::max(hi, lambda);
          sum += lambda;
        }
        csv << format_double(gamma) << "," << format_double(alpha) << ","
            << format_double(sigma) << "," << format_double(sum / trials) << ","
            << format_double(lo) << "," << format_double(hi) << "\n";
      }
    }
  }
  write_file(out_path, csv.str());
  return kExitOk;
}

std::vector<double> flatten_messages(const MessageState& state) {
  std::vector<double> flat;
  for (const auto& m : state.m) flat.insert(flat.end(), m.begin(), m.end());
  return flat;
}

int cmd_trajectory(int n, double gamma, double alpha, double sigma, int trials, int iters,
                   bool require_certified, std::uint64_t seed, const std::string& out_path) {
  if (iters < 2) throw ParameterError("trajectory: --iters must be >= 2");
  // err[n][trial], n = 1..iters, measured against m* = messages after iters sweeps
  std::vector<std::vector<double>> err(iters, std::vector<double>(trials, 0.0));
  for (int trial = 0; trial < trials; ++trial) {
    GraphSpec gs{n, gamma, substream_seed(seed, 2 * static_cast<std::uint64_t>(trial))};
    PotentialSpec ps{sigma, substream_seed(seed, 2 * static_cast<std::uint64_t>(trial) + 1)};
    Graph graph(0, {});
    IsingModel model(0, {}, {});
    if (require_certified) {
      CertifiedSample sample = sample_certified(gs, ps, alpha, 1000);
      graph = std::move(sample.graph);
      model = std::move(sample.model);
    } else {
      graph = erdos_renyi(gs);
      model = sample_ising(graph, ps);
    }
    PairwiseMRF mrf = ising_to_mrf(model);
    AlphaAssignment alphas(mrf.graph(), alpha);
    MessageState state = init_messages(mrf);
    std::vector<std::vector<double>> trace;
    trace.reserve(iters);
    for (int it = 0; it < iters; ++it) {
      state = alpha_bp_step(mrf, alphas, state);
      trace.push_back(flatten_messages(state));
    }
    const std::vector<double>& star = trace.back();
    double star_norm = 0.0;
    for (double v : star) star_norm += v * v;
    star_norm = std::sqrt(star_norm);
    for (int it = 0; it < iters; ++it) {
      double d = 0.0;
      for (std::size_t i = 0; i < star.size(); ++i)
        d += (trace[it][i] - star[i]) * (trace[it][i] - star[i]);
      err[it][trial] = std::sqrt(d) / star_norm;
    }
  }

  std::ostringstream csv;
  csv << "# schema=1\n";
  csv << "# normalized message error |m(n)-m*|/|m*| vs sweep n; m* = messages after " << iters
      << " sweeps; " << trials << " trials\n";
  csv << "iter,err_min,err_mean,err_max\n";
  for (int it = 0; it < iters; ++it) {
    double lo = err[it][0], hi = err[it][0], sum = 0.0;
    for (double v : err[it]) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    csv << (it + 1) << "," << format_double(lo) << "," << format_double(sum / trials) << ","
        << format_double(hi) << "\n";
  }
  write_file(out_path, csv.str());
  return kExitOk;
}

int cmd_mimo_ser(int n, const std::string& snr_grid, int trials, const std::string& algos,
                 std::uint64_t seed, const std::string& out_path) {
  std::vector<AlgorithmSpec> algorithms;
  {
    std::stringstream ss(algos);
    std::string item;
    while (std::getline(ss, item, ',')) algorithms.push_back(AlgorithmSpec::parse(item));
  }
  if (algorithms.empty()) throw ParameterError("mimo-ser: empty algorithm list");
  std::vector<double> grid = parse_grid(snr_grid);
  auto points = ser_experiment(n, algorithms, grid, trials, seed);

  std::ostringstream csv;
  csv << "# schema=1\n";
  csv << "# snr_db = 10*log10(N/sigma_w^2); H entries iid N(0,1), fresh per trial\n";
  csv << "snr_db,algorithm,alpha,trials,symbol_errors,ser\n";
  for (const auto& p : points)
    csv << format_double(p.snr_db) << "," << p.algorithm << "," << format_double(p.param) << ","
        << p.trials << "," << p.symbol_errors << "," << format_double(p.ser) << "\n";
  write_file(out_path, csv.str());
  return kExitOk;
}

int cmd_plot(const std::string& csv_path, const std::string& kind, bool logy,
             const std::string& out_path) {
  if (kind != "lines") throw ParameterError("plot: unsupported kind " + kind);
  CsvTable table = parse_csv(read_file(csv_path));
  auto series = plot_series_from_csv(table);
  write_file(out_path, render_line_svg(series, logy));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha belief propagation toolkit"};
  app.require_subcommand(1);

  std::string model_path, out_path, algo = "bp", anneal, gammas = "0.2,0.4";
  std::string alphas = "0.5,1.0", sigmas = "0.05:1.0:0.05", snr_grid = "0:2:14";
  std::string algos = "map,mmse,bp,alpha-bp:0.5", csv_path, kind = "lines";
  double alpha = 0.5, gamma = 0.5, sigma = 0.1, tol = 1e-6, gamma_er = 0.2;
  int n = 16, max_iter = 200, trials = 100, iters = 200;
  std::uint64_t seed = 7;
  bool require_certified = false, logy = false;

  auto* certify_cmd = app.add_subcommand("certify", "evaluate the convergence certificate");
  certify_cmd->add_option("--model", model_path)->required();
  certify_cmd->add_option("--alpha", alpha);
  certify_cmd->add_option("--out", out_path)->required();

  auto* infer_cmd = app.add_subcommand("infer", "run one inference algorithm on a model");
  infer_cmd->add_option("--model", model_path)->required();
  infer_cmd->add_option("--algo", algo)
      ->check(CLI::IsMember({"exact", "bp", "alpha-bp", "damped", "mf", "trw"}));
  infer_cmd->add_option("--alpha", alpha);
  infer_cmd->add_option("--gamma", gamma);
  infer_cmd->add_option("--max-iter", max_iter);
  infer_cmd->add_option("--tol", tol);
  infer_cmd->add_option("--anneal", anneal, "A:B linear alpha schedule");
  infer_cmd->add_option("--out", out_path)->required();

  auto* sweep_cmd = app.add_subcommand("sweep-sigma", "lambda* versus potential spread");
  sweep_cmd->add_option("--n", n);
  sweep_cmd->add_option("--gammas", gammas);
  sweep_cmd->add_option("--alphas", alphas);
  sweep_cmd->add_option("--sigmas", sigmas);
  sweep_cmd->add_option("--trials", trials);
  sweep_cmd->add_option("--seed", seed);
  sweep_cmd->add_option("--out", out_path)->required();

  auto* traj_cmd = app.add_subcommand("trajectory", "message error versus iteration");
  traj_cmd->add_option("--n", n);
  traj_cmd->add_option("--gamma", gamma_er);
  traj_cmd->add_option("--alpha", alpha);
  traj_cmd->add_option("--sigma", sigma);
  traj_cmd->add_option("--trials", trials);
  traj_cmd->add_option("--iters", iters);
  traj_cmd->add_flag("--require-certified", require_certified);
  traj_cmd->add_option("--seed", seed);
  traj_cmd->add_option("--out", out_path)->required();

  auto* ser_cmd = app.add_subcommand("mimo-ser", "MIMO detection symbol error rates");
  ser_cmd->add_option("--n", n);
  ser_cmd->add_option("--snr-db", snr_grid);
  ser_cmd->add_option("--trials", trials);
  ser_cmd->add_option("--algos", algos);
  ser_cmd->add_option("--seed", seed);
  ser_cmd->add_option("--out", out_path)->required();

  auto* plot_cmd = app.add_subcommand("plot", "render a CSV as a line-chart SVG");
  plot_cmd->add_option("--csv", csv_path)->required();
  plot_cmd->add_option("--kind", kind);
  plot_cmd->add_flag("--logy", logy);
  plot_cmd->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (certify_cmd->parsed()) return cmd_certify(model_path, alpha, out_path);
    if (infer_cmd->parsed())
      return cmd_infer(model_path, algo, alpha, gamma, max_iter, tol, anneal, out_path);
    if (sweep_cmd->parsed())
      return cmd_sweep_sigma(n, gammas, alphas, sigmas, trials, seed, out_path);
    if (traj_cmd->parsed())
      return cmd_trajectory(n, gamma_er, alpha, sigma, trials, iters, require_certified, seed,
                            out_path);
    if (ser_cmd->parsed()) return cmd_mimo_ser(n, snr_grid, trials, algos, seed, out_path);
    if (plot_cmd->parsed()) return cmd_plot(csv_path, kind, logy, out_path);
  } catch (const SamplingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSamplingExhausted;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

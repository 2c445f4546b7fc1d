#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lumprank/lumprank.hpp"

namespace lumprank::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WebGraph load_graph(const std::string& path) {
  const std::string text = read_file(path);
  return parse_edge_list(text);
}

/// Weight files list one entry per node in ascending external-label order.
ProbabilityVector load_weights(const std::string& spec, const WebGraph& g) {
  const std::size_t n = g.size();
  if (spec == "uniform") return ProbabilityVector::uniform(n);
  const auto loaded = load_weight_vector(read_file(spec), n);
  std::vector<std::size_t> by_label(n);
  std::iota(by_label.begin(), by_label.end(), std::size_t{0});
  std::sort(by_label.begin(), by_label.end(),
            [&](std::size_t a, std::size_t b) { return g.label(a) < g.label(b); });
  std::vector<double> entries(n);
  for (std::size_t i = 0; i < n; ++i) entries[by_label[i]] = loaded[i];
  return ProbabilityVector(std::move(entries));
}

PageRankParams load_params(const CliConfig& cfg, const WebGraph& g) {
  return {cfg.alpha, load_weights(cfg.v_spec, g), load_weights(cfg.w_spec, g), cfg.tol,
          cfg.max_iter};
}

std::string sig12(double x) {
  std::ostringstream ss;
  ss << std::setprecision(12) << x;
  return ss.str();
}

std::string sci(double x) {
  std::ostringstream ss;
  ss << std::scientific << std::setprecision(3) << x;
  return ss.str();
}

class CheckPrinter {
 public:
  explicit CheckPrinter(std::ostream& out) : out_(out) {}

  void report(const std::string& name, bool passed, double deviation, const std::string& detail) {
    out_ << (passed ? "PASS" : "FAIL") << "  " << name << "  max_dev=" << sci(deviation);
    if (!detail.empty()) out_ << "  " << detail;
    out_ << '\n';
    all_passed_ = all_passed_ && passed;
  }
  void report(const std::string& name, const CheckReport& r) {
    report(name, r.passed, r.max_abs_deviation, r.detail);
  }
  /// Negative controls pass when the underlying check fails.
  void expect_failure(const std::string& name, const CheckReport& r) {
    report("negative-control:" + name, !r.passed, r.max_abs_deviation,
           r.passed ? "corruption went undetected" : "corruption detected");
  }
  void note(const std::string& text) { out_ << "NOTE  " << text << '\n'; }

  bool all_passed() const { return all_passed_; }

 private:
  std::ostream& out_;
  bool all_passed_ = true;
};

void run_transform_checks(const DenseMatrix& gt, std::size_t k, const CliConfig& cfg,
                          CheckPrinter& pr) {
  const std::size_t n = gt.rows();
  const std::size_t m = n - k;
  if (m == 1) pr.note("one dangling node: every transform is the order-1 matrix [1]");
  const DenseMatrix direct = lumped_matrix(gt, k);
  DenseMatrix g1;
  for (TransformKind kind : kBuiltinTransforms) {
    const std::string tag = std::string("[") + to_string(kind) + "]";
    const DenseMatrix l = build_transform(kind, m);
    pr.report("transform-condition" + tag, verify_transform_condition(l, 1e-12));
    const auto sim = similarity_transform(gt, l, k);
    pr.report("block-triangular" + tag, check_block_triangular(sim.full, k, 1e-11));
    pr.report("lumped-matrix" + tag,
              make_report(max_abs_diff(sim.lumped, direct), 1e-12, "vs [G11 G12e; u1^T u2^Te]"));
    if (kind == TransformKind::SparseElim) g1 = sim.lumped;
  }
  pr.report("spectrum-identity", check_spectrum_identity(gt, g1, k, 1e-8, cfg.seed));
  if (k > 0) {
    const auto blocks = lumpability_blocks(gt, {k}, 1e-12);
    for (const auto& b : blocks) {
      if (b.row_block == 1 && b.col_block == 0) {
        pr.report("lumpable[D->ND]", b.passed, b.spread, "row sums of e u1^T");
      }
    }
  }
  if (cfg.negative_control) {
    DenseMatrix corrupted = g1;
    corrupted(0, 0) += 0.1;
    pr.expect_failure("spectrum-identity", check_spectrum_identity(gt, corrupted, k, 1e-8, cfg.seed));
    pr.expect_failure("lumped-matrix",
                      make_report(max_abs_diff(corrupted, direct), 1e-12, ""));
  }
}

void run_decomposition_checks(const DenseMatrix& gt, std::size_t k,
                              const std::vector<double>& pi_tilde, const CliConfig& cfg,
                              CheckPrinter& pr) {
  const std::size_t n = gt.rows();
  if (k < 1 || k >= n) {
    pr.note("decomposition checks need 1 <= k <= n-1; skipped");
    return;
  }
  const auto f = ldu_factors(gt, k);
  pr.report("ldu-reconstruction",
            check_ldu_reconstruction(f, gt, 1e-12 * static_cast<double>(n)));
  pr.report("complement-stochastic", check_complement_stochastic(f.complement, 1e-10));
  pr.report("complement-singular", check_complement_singular(f.complement, 1e-8));

  const auto coupled = verify_coupled_stationarity(pi_tilde, gt, k, 1e-8);
  pr.report("coupled-censored", coupled.censored);
  pr.report("coupled-nondangling", coupled.nondangling);
  if (coupled.dangling_skipped) {
    pr.note("coupled-dangling skipped: u2^T e = 1");
  } else {
    pr.report("coupled-dangling", coupled.dangling);
  }

  if (cfg.negative_control) {
    std::vector<double> perturbed = pi_tilde;
    perturbed[0] += 1e-3;
    const double s = std::accumulate(perturbed.begin(), perturbed.end(), 0.0);
    for (double& x : perturbed) x /= s;
    const auto bad = verify_coupled_stationarity(perturbed, gt, k, 1e-6);
    pr.expect_failure("coupled-stationarity",
                      {bad.passed(), bad.max_abs_deviation(), ""});
  }
}

}  // namespace

int cmd_rank(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  WebGraph g;
  SolveReport report;
  try {
    g = load_graph(cfg.graph_path);
    report = solve_lumped(g, load_params(cfg, g));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  const std::size_t n = g.size();
  out << "# n=" << n << " k=" << report.k << " dangling=" << (n - report.k)
      << " alpha=" << cfg.alpha << " iters=" << report.iterations
      << " residual=" << sci(report.residual) << '\n';

  // Sort on the printed value so scores that read equal are ordered by label.
  std::vector<double> key(n);
  for (std::size_t i = 0; i < n; ++i) key[i] = std::stod(sig12(report.pagerank[i]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b]) return key[a] > key[b];
    return g.label(a) < g.label(b);
  });
  const std::size_t shown = cfg.top ? std::min(*cfg.top, n) : n;
  for (std::size_t r = 0; r < shown; ++r) {
    const std::size_t i = order[r];
    out << g.label(i) << '\t' << sig12(report.pagerank[i]) << '\t' << (r + 1) << '\n';
  }
  if (!report.converged) {
    err << "warning: did not converge within " << cfg.max_iter << " iterations\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_compare(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  WebGraph g;
  SolveReport lumped, full;
  try {
    g = load_graph(cfg.graph_path);
    const auto params = load_params(cfg, g);
    const auto h = build_hyperlink_matrix(g);
    lumped = solve_lumped(h, params);
    full = solve_full(h, params);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  const std::size_t n = g.size();
  out << "# n=" << n << " k=" << full.k << " dangling=" << (n - full.k) << " alpha=" << cfg.alpha
      << " tol=" << cfg.tol << '\n';
  if (full.k == n) out << "no dangling nodes; lumped path = full path\n";

  const auto line = [&](const char* name, const SolveReport& r) {
    const double per_iter = r.iterations ? r.iteration_seconds / static_cast<double>(r.iterations) : 0.0;
    out << name << "\titers=" << r.iterations << "\ttime_ms=" << sig12(r.iteration_seconds * 1e3)
        << "\tper_iter_us=" << sig12(per_iter * 1e6) << "\tconverged=" << (r.converged ? 1 : 0)
        << '\n';
  };
  line("lumped", lumped);
  line("full", full);
  out << "l1_difference=" << sci(l1_distance(lumped.pagerank, full.pagerank)) << '\n';
  if (!lumped.converged || !full.converged) {
    err << "warning: a solver did not converge within " << cfg.max_iter << " iterations\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  WebGraph g;
  std::optional<PageRankParams> params;
  try {
    g = load_graph(cfg.graph_path);
    params.emplace(load_params(cfg, g));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  const std::size_t n = g.size();
  if (n > cfg.dense_limit) {
    err << "error: graph has " << n << " nodes, above the dense limit " << cfg.dense_limit
        << "; use rank or compare instead\n";
    return kExitDenseLimit;
  }

  CheckPrinter pr(out);
  try {
    const auto h = build_hyperlink_matrix(g);
    const auto partition = detect_dangling(h);
    const std::size_t k = partition.k;
    out << "# n=" << n << " k=" << k << " dangling=" << (n - k) << " alpha=" << cfg.alpha
        << " seed=" << cfg.seed << '\n';
    const DenseMatrix gt = build_dense_google(g, *params, partition, cfg.dense_limit);

    if (k == n) {
      pr.note("no dangling nodes; lumping does not apply");
      return kExitOk;
    }
    // The stationary vector used by the identities comes from the lumped
    // solve; its stopping tolerance is tightened to keep it well below the
    // check tolerances.
    const auto tight = params->with_tol(std::min(cfg.tol, 1e-12)).with_max_iter(
        std::max<std::size_t>(cfg.max_iter, 100000));
    const auto solution = solve_lumped_permuted(h, tight);

    if (!cfg.decomposition_only) {
      run_transform_checks(gt, k, cfg, pr);
      const auto dense_pi = stationary_distribution(gt);
      pr.report("recovery",
                make_report(l1_distance(solution.pi_tilde, dense_pi), 1e-9, "1-norm vs dense solve"));
      const double total = std::accumulate(solution.pi_tilde.begin(), solution.pi_tilde.end(), 0.0);
      pr.report("recovery-normalization", make_report(std::abs(total - 1.0), 1e-12, "|e^T pi - 1|"));
    }
    run_decomposition_checks(gt, k, solution.pi_tilde, cfg, pr);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return pr.all_passed() ? kExitOk : kExitInputError;
}

int cmd_gen(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  GeneratorOptions opt;
  opt.nodes = cfg.nodes;
  opt.dangling_frac = cfg.dangling_frac;
  opt.avg_degree = cfg.avg_degree;
  opt.seed = cfg.seed;
  try {
    const auto g = random_web_graph(opt);
    out << "# nodes=" << opt.nodes << " dangling-frac=" << opt.dangling_frac
        << " avg-degree=" << opt.avg_degree << " seed=" << opt.seed << '\n';
    write_edge_list(g, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitOk;
}

int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "rank") return cmd_rank(cfg, out, err);
  if (cfg.command == "compare") return cmd_compare(cfg, out, err);
  if (cfg.command == "verify") return cmd_verify(cfg, out, err);
  if (cfg.command == "gen") return cmd_gen(cfg, out, err);
  err << "error: unknown command '" << cfg.command << "'\n";
  return kExitInputError;
}

}  // namespace lumprank::cli

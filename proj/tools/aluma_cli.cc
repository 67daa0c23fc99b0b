// Command-line front end: pool generation, experiment sweeps, preprocessing,
// the kernel pipeline, tiny-pool oracles and result comparison.
//
// Exit codes: 0 success, 2 configuration or input error, 3 infeasible
// (labels no halfspace can produce), 1 anything else.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "aluma/aluma.h"
#include "aluma/harness.h"
#include "aluma/oracles.h"
#include "aluma/pool_io.h"
#include "aluma/preprocess.h"

namespace {

using namespace aluma;

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

// "5,10,20" or "10:60:5" (inclusive), mixed freely.
template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  auto to_num = [&](const std::string& s) -> long long {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw ConfigError(std::string("bad ") + what + " '" + s + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(static_cast<T>(to_num(item)));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    const long long lo = to_num(item.substr(0, c1));
    const long long hi = to_num(item.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
    const long long step = c2 == std::string::npos ? 1 : to_num(item.substr(c2 + 1));
    if (step < 1 || hi < lo) throw ConfigError(std::string("bad ") + what + " range '" + item + "'");
    for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<T>(v));
  }
  if (out.empty()) throw ConfigError(std::string("empty ") + what + " list");
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::vector<Label> read_labels(const std::string& path) {
  const RowMatrix m = load_matrix_csv(path);
  if (m.cols() != 1) throw ConfigError(path + ": labels file needs one column");
  std::vector<Label> y(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, 0) != 1.0 && m(i, 0) != -1.0) throw ConfigError(path + ": labels must be -1 or +1");
    y[i] = static_cast<Label>(m(i, 0));
  }
  return y;
}

// --- subcommands -------------------------------------------------------------

struct GenArgs {
  std::string spec;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  const BuiltPool b = build_pool(a.spec, a.seed);
  OraclePool pool = b.oracle;
  pool.info.seed = a.seed;
  save_pool_csv(pool, a.out);
  save_sidecar(pool, sidecar_path(a.out));
  std::cerr << "wrote " << pool.pool.size() << " points to " << a.out << "\n";
  return 0;
}

struct RunArgs {
  std::string config;
  std::string preset;
  std::string algo;
  std::string pool;
  std::string gen;
  std::string budgets;
  std::string seeds;
  std::string test;
  std::string out = "-";
  std::string format = "csv";
  std::optional<double> delta, lambda, alpha, gamma, hinge_bound;
  std::optional<int> samples, mix_steps, vote_size, qbc_passes, jl_dim, threads;
  std::string order;
  bool stop_at_zero = false;
  bool record_time = false;
};

ExperimentConfig run_config(const RunArgs& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) cfg = config_from_json(read_json(a.config));
  if (!a.preset.empty()) {
    if (a.preset == "octahedron") {
      // Queries-to-zero-error sweep on the d=10 octahedron. QBC re-streams
      // the pool so it is not capped by a single pass.
      cfg.pool = "octahedron:d=10,bias=1,neg=1";
      cfg.params.qbc_passes = 100;
      cfg.seeds = {1, 2, 3, 4, 5};
      cfg.stop_at_zero = true;
      cfg.budgets = parse_list<int>("1:120,130:400:10,450:1044:50,1044", "budget");
    } else if (a.preset == "two-circles-adversarial") {
      cfg.pool = "two_circles:eps=0.03125,strict=0";
      cfg.params.order = "raised-first";
      cfg.budgets = parse_list<int>("0:64", "budget");
    } else {
      throw ConfigError("unknown preset '" + a.preset + "'");
    }
  }
  if (!a.algo.empty()) cfg.algorithm = a.algo;
  if (!a.pool.empty() && !a.gen.empty()) throw ConfigError("give --pool or --gen, not both");
  if (!a.pool.empty()) cfg.pool = a.pool;
  if (!a.gen.empty()) cfg.pool = a.gen;
  if (!a.budgets.empty()) cfg.budgets = parse_list<int>(a.budgets, "budget");
  if (!a.seeds.empty()) cfg.seeds = parse_list<std::uint64_t>(a.seeds, "seed");
  if (!a.test.empty()) cfg.test = a.test;
  AlgoParams& p = cfg.params;
  if (a.delta) p.delta = *a.delta;
  if (a.lambda) p.lambda = *a.lambda;
  if (a.alpha) p.alpha = *a.alpha;
  if (a.gamma) p.gamma = *a.gamma;
  if (a.hinge_bound) p.hinge_bound = *a.hinge_bound;
  if (a.samples) p.samples = *a.samples;
  if (a.mix_steps) p.mix_steps = *a.mix_steps;
  if (a.vote_size) p.vote_size = *a.vote_size;
  if (a.qbc_passes) p.qbc_passes = *a.qbc_passes;
  if (a.jl_dim) p.jl_dim = *a.jl_dim;
  if (!a.order.empty()) p.order = a.order;
  if (a.threads) cfg.threads = *a.threads;
  cfg.stop_at_zero = cfg.stop_at_zero || a.stop_at_zero;
  cfg.record_time = cfg.record_time || a.record_time;
  cfg.validate();
  return cfg;
}

int cmd_run(const RunArgs& a) {
  const ExperimentConfig cfg = run_config(a);
  const OutputFormat fmt = parse_format(a.format);
  emit(run_experiment(cfg), fmt, a.out);
  return 0;
}

struct PreArgs {
  std::string input;
  std::string kernel;
  std::string labels;
  double gamma = 0.1;
  double hinge_bound = 0.0;
  double delta = 0.1;
  std::optional<int> jl_dim;
  std::uint64_t seed = 0;
  std::string out = "-";
  // pipeline only
  int budget = -1;
  int samples = 1000;
  int mix_steps = 1000;
  int svm_iterations = 100000;
};

struct Input {
  RowMatrix x;
  InputKind kind = InputKind::kVectors;
  std::optional<std::vector<Label>> labels;
};

Input read_input(const PreArgs& a) {
  if (a.input.empty() == a.kernel.empty()) throw ConfigError("give exactly one of --input, --kernel");
  Input in;
  if (!a.input.empty()) {
    LoadedPool p = load_pool_csv(a.input);
    in.x = std::move(p.pool.points);
    in.labels = std::move(p.labels);
  } else {
    in.x = load_matrix_csv(a.kernel);
    in.kind = InputKind::kKernel;
  }
  if (!a.labels.empty()) in.labels = read_labels(a.labels);
  if (in.labels && in.labels->size() != static_cast<std::size_t>(in.x.rows())) {
    throw ConfigError("label count differs from the number of points");
  }
  return in;
}

PreprocessParams pre_params(const PreArgs& a) {
  PreprocessParams p;
  p.gamma = a.gamma;
  p.hinge_bound = a.hinge_bound;
  p.delta = a.delta;
  p.jl_dim = a.jl_dim;
  p.seed = a.seed;
  p.validate();
  return p;
}

int cmd_preprocess(const PreArgs& a) {
  const Input in = read_input(a);
  const PreprocessParams p = pre_params(a);
  const RowMatrix out =
      in.kind == InputKind::kKernel ? preprocess_kernel(in.x, p) : preprocess_vectors(in.x, p);
  if (a.out == "-") {
    std::ostringstream ss;
    ss.precision(17);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) ss << (j ? "," : "") << out(i, j);
      ss << "\n";
    }
    std::cout << ss.str();
  } else if (in.labels) {
    Pool pool;
    pool.points = out;
    save_pool_csv(pool, &*in.labels, a.out);
  } else {
    save_matrix_csv(out, a.out);
  }
  return 0;
}

int cmd_pipeline(const PreArgs& a) {
  const Input in = read_input(a);
  if (!in.labels) throw ConfigError("pipeline needs labels (pool label column or --labels)");
  const PreprocessParams p = pre_params(a);
  const std::size_t m = static_cast<std::size_t>(in.x.rows());
  AlumaConfig cfg;
  cfg.budget = a.budget < 0 ? static_cast<int>(m) : a.budget;
  cfg.samples_per_round = a.samples;
  cfg.sampler.mix_steps = a.mix_steps;
  cfg.sampler.seed = a.seed;
  SvmParams svm;
  svm.iterations = a.svm_iterations;
  svm.seed = a.seed;
  const PipelineResult r = pipeline_run(in.x, in.kind, oracle_from_labels(*in.labels), cfg, p, svm);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < m; ++i) wrong += r.labeling[i] != (*in.labels)[i];
  nlohmann::json j = {{"queries", r.log.queries()},
                      {"labeling", r.labeling},
                      {"train_error", static_cast<double>(wrong) / static_cast<double>(m)},
                      {"projected_dim", r.projected.cols()},
                      {"w", std::vector<double>(r.w.data(), r.w.data() + r.w.size())}};
  write_text(a.out, j.dump(2) + "\n");
  return 0;
}

struct OracleArgs {
  std::string what;
  std::string pool;
  int samples = 200000;
  std::uint64_t seed = 0;
  std::optional<int> t;
  std::string out = "-";
};

int cmd_oracle(const OracleArgs& a) {
  const LoadedPool p = load_pool_csv(a.pool);
  const RowMatrix& x = p.pool.points;
  const LabelingEnumeration e = x.cols() == 2 ? enumerate_labelings_2d(x)
                                              : enumerate_labelings_sampled(x, a.samples, a.seed);
  nlohmann::json j = {{"m", x.rows()}, {"d", x.cols()}, {"exact", e.exact}, {"patterns", e.patterns.size()}};
  if (a.what == "enumerate") {
    nlohmann::json pats = nlohmann::json::array();
    for (const auto& pat : e.patterns) pats.push_back({{"labels", pat.labels}, {"mass", pat.mass}});
    j["labelings"] = pats;
  } else if (a.what == "opt-max") {
    j["opt_max"] = brute_force_opt_max(e);
  } else if (a.what == "favg") {
    const int m = static_cast<int>(x.rows());
    nlohmann::json rows = nlohmann::json::array();
    const auto greedy = exact_greedy_policy();
    for (int t = a.t ? *a.t : 0; t <= (a.t ? *a.t : m); ++t) {
      rows.push_back({{"t", t}, {"greedy", compute_favg(greedy, e, t)}, {"optimal", optimal_favg(e, t)}});
    }
    j["favg"] = rows;
    j["resolved"] = resolved_favg(e);
  } else {
    throw ConfigError("oracle query is opt-max, favg or enumerate");
  }
  write_text(a.out, j.dump(2) + "\n");
  return 0;
}

int cmd_compare(const std::vector<std::string>& files, const std::string& format, const std::string& out) {
  std::vector<ExperimentResult> results;
  for (const auto& f : files) results.push_back(load_results(f));
  const auto rows = compare_table(results);
  if (format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json seeds = nlohmann::json::array();
      for (const auto& s : r.per_seed) seeds.push_back(s ? nlohmann::json(*s) : nullptr);
      j.push_back({{"algorithm", r.algorithm},
                   {"queries_to_zero_error", r.display()},
                   {"median", r.median ? nlohmann::json(*r.median) : nullptr},
                   {"max_budget", r.max_budget},
                   {"per_seed", seeds}});
    }
    write_text(out, j.dump(2) + "\n");
  } else if (format == "text") {
    write_text(out, format_compare_table(rows));
  } else {
    throw ConfigError("compare format is text or json");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aggressive pool-based active learning of halfspaces"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a pool CSV plus a JSON sidecar");
  g->add_option("spec", gen.spec, "Generator spec, e.g. octahedron:d=10,bias=1,neg=1")->required();
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("--out", gen.out, "Output CSV")->required();

  RunArgs run;
  auto* r = app.add_subcommand("run", "Budget sweep of one algorithm over seeds");
  r->add_option("--config", run.config, "Experiment config JSON (flags override it)");
  r->add_option("--preset", run.preset, "octahedron | two-circles-adversarial");
  r->add_option("--algo", run.algo,
                "aluma, cal, qbc, tk, erm, greedy-line, binsearch-line, alpha-line, pipeline");
  r->add_option("--pool", run.pool, "Labeled pool CSV");
  r->add_option("--gen", run.gen, "Generator spec (pool regenerated per seed)");
  r->add_option("--budgets", run.budgets, "List of T, e.g. 5,10 or 10:60:5");
  r->add_option("--seeds", run.seeds, "List of seeds");
  r->add_option("--test", run.test, "Held-out pool CSV or generator spec");
  r->add_option("--out", run.out, "Output file, - for stdout");
  r->add_option("--format", run.format, "csv | json");
  r->add_option("--delta", run.delta);
  r->add_option("--lambda", run.lambda);
  r->add_option("--samples", run.samples, "ALuMA hypotheses per round");
  r->add_option("--mix-steps", run.mix_steps, "Hit-and-run steps per draw");
  r->add_option("--alpha", run.alpha, "alpha-line approximation factor");
  r->add_option("--vote-size", run.vote_size);
  r->add_option("--qbc-passes", run.qbc_passes);
  r->add_option("--order", run.order, "cal/qbc stream order: seeded | raised-first");
  r->add_option("--gamma", run.gamma, "pipeline margin");
  r->add_option("--hinge-bound", run.hinge_bound, "pipeline H");
  r->add_option("--jl-dim", run.jl_dim, "pipeline projection dimension");
  r->add_option("--threads", run.threads);
  r->add_flag("--stop-at-zero", run.stop_at_zero, "End each seed at its first zero-error budget");
  r->add_flag("--time", run.record_time, "Record wall time (results stop being reproducible)");

  PreArgs pre;
  auto add_pre = [](CLI::App* c, PreArgs& a) {
    c->add_option("--input", a.input, "Pool CSV");
    c->add_option("--kernel", a.kernel, "Kernel matrix CSV (no header)");
    c->add_option("--labels", a.labels, "One-column label CSV (no header)");
    c->add_option("--gamma", a.gamma);
    c->add_option("--hinge-bound", a.hinge_bound);
    c->add_option("--delta", a.delta);
    c->add_option("--jl-dim", a.jl_dim);
    c->add_option("--seed", a.seed);
    c->add_option("--out", a.out);
  };
  auto* p = app.add_subcommand("preprocess", "Lift and project a pool or kernel");
  add_pre(p, pre);
  PreArgs pipe;
  auto* pl = app.add_subcommand("pipeline", "Preprocess, run ALuMA, train an SVM on its labels");
  add_pre(pl, pipe);
  pl->add_option("--budget", pipe.budget, "Label budget (default: pool size)");
  pl->add_option("--samples", pipe.samples);
  pl->add_option("--mix-steps", pipe.mix_steps);
  pl->add_option("--svm-iterations", pipe.svm_iterations);

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "Brute-force quantities on a tiny pool");
  o->add_option("what", orc.what, "opt-max | favg | enumerate")->required();
  o->add_option("--pool", orc.pool, "Pool CSV")->required();
  o->add_option("--samples", orc.samples, "Directions sampled when d != 2");
  o->add_option("--seed", orc.seed);
  o->add_option("--t", orc.t, "Single t for favg (default 0..m)");
  o->add_option("--out", orc.out);

  std::vector<std::string> files;
  std::string cmp_format = "text", cmp_out = "-";
  auto* c = app.add_subcommand("compare", "Queries-to-zero-error table from result files");
  c->add_option("files", files, "Result files (.json or .csv)")->required();
  c->add_option("--format", cmp_format, "text | json");
  c->add_option("--out", cmp_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (r->parsed()) return cmd_run(run);
    if (p->parsed()) return cmd_preprocess(pre);
    if (pl->parsed()) return cmd_pipeline(pipe);
    if (o->parsed()) return cmd_oracle(orc);
    if (c->parsed()) return cmd_compare(files, cmp_format, cmp_out);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

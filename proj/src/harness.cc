#include "aluma/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "aluma/aluma.h"
#include "aluma/baselines.h"
#include "aluma/pool_io.h"
#include "aluma/preprocess.h"
#include "aluma/rng.h"

namespace aluma {

namespace {

constexpr std::uint64_t kOrderSalt = 0x6f72646572ULL;                      // "order"
constexpr std::uint64_t kJlSalt = 0x6a6cULL;                                // "jl"
constexpr std::uint64_t kTestSalt = 0x74657374ULL;                          // "test"
constexpr std::uint64_t kSignSalt = 0x7369676eULL;                          // "sign"
constexpr std::uint64_t kLineSalt = 0x6c696e65ULL;                          // "line"

const std::vector<std::string> kAlgorithms = {"aluma",       "cal",         "qbc",
                                              "tk",          "erm",         "greedy-line",
                                              "binsearch-line", "alpha-line", "pipeline"};

const char* const kCsvHeader =
    "seed,T,queries_used,train_error,test_error,wall_time_ms,balance_verified_fraction";

bool is_line_algorithm(const std::string& a) {
  return a == "greedy-line" || a == "binsearch-line" || a == "alpha-line";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// --- generator parameters ---------------------------------------------------

class SpecReader {
 public:
  SpecReader(const nlohmann::json& spec, std::vector<std::string> allowed)
      : spec_(spec), name_(spec.value("generator", std::string())) {
    for (const auto& [key, _] : spec.items()) {
      if (key == "generator") continue;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ConfigError(name_ + ": unknown parameter '" + key + "'");
      }
    }
  }

  double real(const std::string& key) const {
    if (!spec_.contains(key)) throw ConfigError(name_ + ": missing parameter '" + key + "'");
    if (!spec_[key].is_number()) throw ConfigError(name_ + ": '" + key + "' must be a number");
    return spec_[key].get<double>();
  }
  double real(const std::string& key, double dflt) const {
    return spec_.contains(key) ? real(key) : dflt;
  }
  int integer(const std::string& key) const {
    const double v = real(key);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      throw ConfigError(name_ + ": '" + key + "' must be an integer");
    }
    return static_cast<int>(v);
  }
  int integer(const std::string& key, int dflt) const {
    return spec_.contains(key) ? integer(key) : dflt;
  }
  std::optional<std::string> text(const std::string& key) const {
    if (!spec_.contains(key)) return std::nullopt;
    if (spec_[key].is_string()) return spec_[key].get<std::string>();
    return spec_[key].dump();
  }

 private:
  const nlohmann::json& spec_;
  std::string name_;
};

OraclePool line_as_oracle(const LinePool& line, GeneratorInfo info) {
  OraclePool out;
  out.pool.points.resize(static_cast<Eigen::Index>(line.size()), 1);
  for (std::size_t i = 0; i < line.size(); ++i) out.pool.points(i, 0) = line.points[i];
  out.labels = line.labels();
  out.info = std::move(info);
  out.info.target = {{"threshold", line.threshold}};
  out.realizable = true;
  return out;
}

BuiltPool from_line(LinePool line, const std::string& name, nlohmann::json params,
                    std::uint64_t seed) {
  BuiltPool out;
  out.oracle = line_as_oracle(line, {name, std::move(params), seed, nullptr});
  out.line = std::move(line);
  return out;
}

std::vector<int> octahedron_signs(const SpecReader& r, int d, std::uint64_t seed) {
  std::vector<int> w(d);
  if (auto s = r.text("w")) {
    if (static_cast<int>(s->size()) != d) throw ConfigError("octahedron: w needs d signs");
    for (int i = 0; i < d; ++i) {
      if ((*s)[i] != '+' && (*s)[i] != '-') throw ConfigError("octahedron: w is a +/- string");
      w[i] = (*s)[i] == '+' ? 1 : -1;
    }
    return w;
  }
  Rng rng(mix64(seed, kSignSalt));
  for (int i = 0; i < d; ++i) w[i] = uniform01(rng) < 0.5 ? 1 : -1;
  return w;
}

// Give `test` the labels the training target assigns to it.
void relabel_like(BuiltPool& test, const BuiltPool& train) {
  const auto& target = train.oracle.info.target;
  const RowMatrix& x = test.oracle.pool.points;
  if (train.line) {
    if (!test.line) throw ConfigError("test pool must be a line pool");
    test.line->threshold = train.line->threshold;
    test.oracle.labels = test.line->labels();
    return;
  }
  if (target.is_array()) {
    const auto w = target.get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != x.cols()) {
      throw ConfigError("test pool dimension differs from the training pool");
    }
    const Vector wv = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) test.oracle.labels[i] = sign_label(x.row(i).dot(wv));
    return;
  }
  if (target.is_object() && target.contains("affine_w")) {
    const auto w = target["affine_w"].get<std::vector<int>>();
    const double d = static_cast<double>(w.size());
    if (static_cast<Eigen::Index>(w.size()) != x.cols()) {
      throw ConfigError("test pool dimension differs from the training pool");
    }
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double s = -1.0 + 1.0 / d;
      for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x(i, static_cast<Eigen::Index>(j));
      test.oracle.labels[i] = sign_label(s);
    }
  }
  // CSV pools carry their own labels.
}

BuiltPool load_csv_pool(const std::string& path) {
  LoadedPool loaded = load_pool_csv(path);
  if (!loaded.labels) throw ConfigError(path + ": pool has no label column");
  BuiltPool out;
  out.oracle.pool = std::move(loaded.pool);
  out.oracle.labels = std::move(*loaded.labels);
  out.oracle.info = {"csv", {{"path", path}}, 0, nullptr};
  out.oracle.realizable = is_realizable(out.oracle.pool.points, out.oracle.labels);
  const RowMatrix& x = out.oracle.pool.points;
  if (x.cols() == 1) {
    std::vector<std::size_t> idx(out.oracle.labels.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x(a, 0) < x(b, 0); });
    LinePool line;
    double threshold = 1.0;
    bool monotone = true, in_range = true;
    Label prev = -1;
    for (auto i : idx) {
      const double v = x(i, 0);
      in_range = in_range && v >= 0.0 && v <= 1.0;
      const Label y = out.oracle.labels[i];
      if (y < prev) monotone = false;
      if (y == 1 && prev == -1) threshold = v;
      prev = y;
      line.points.push_back(v);
    }
    if (monotone && in_range && std::is_sorted(idx.begin(), idx.end())) {
      line.threshold = threshold;
      if (line.labels() == out.oracle.labels) out.line = std::move(line);
    }
  }
  return out;
}

// --- running -----------------------------------------------------------------

struct CellOutput {
  std::vector<ResultRow> rows;
};

double error_rate(std::span<const Label> got, std::span<const Label> want) {
  if (got.size() != want.size()) throw std::logic_error("labeling size mismatch");
  if (want.empty()) return 0.0;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < got.size(); ++i) bad += got[i] != want[i];
  return static_cast<double>(bad) / static_cast<double>(want.size());
}

std::optional<double> balance_fraction(const QueryLog& log) {
  if (log.records.empty()) return std::nullopt;
  std::size_t ok = 0;
  for (const auto& r : log.records) ok += r.balance_verified;
  return static_cast<double>(ok) / static_cast<double>(log.records.size());
}

AlumaConfig aluma_config(const AlgoParams& p, std::uint64_t seed) {
  AlumaConfig a;
  a.delta = p.delta;
  a.lambda = p.lambda;
  a.samples_per_round = p.samples;
  a.cap_samples = true;
  a.sampler.mix_steps = p.mix_steps;
  a.sampler.seed = seed;
  a.vote_size = p.vote_size;
  return a;
}

BaselineConfig baseline_config(const AlgoParams& p, std::uint64_t seed) {
  BaselineConfig b;
  b.sampler.mix_steps = p.mix_steps;
  b.sampler.seed = seed;
  b.vote_size = p.vote_size.value_or(default_vote_size(p.delta));
  b.committee = p.committee;
  b.qbc_passes = p.qbc_passes;
  return b;
}

CellOutput run_cell(const ExperimentConfig& cfg, std::uint64_t seed) {
  const BuiltPool train = build_pool(cfg.pool, seed);
  std::optional<BuiltPool> test;
  if (cfg.test) {
    test = build_pool(*cfg.test, mix64(seed, kTestSalt));
    relabel_like(*test, train);
    if (test->oracle.pool.dim() != train.oracle.pool.dim()) {
      throw ConfigError("test pool dimension differs from the training pool");
    }
  }
  const RowMatrix& x = train.oracle.pool.points;
  const std::vector<Label>& y = train.oracle.labels;
  const LabelOracle oracle = train.oracle.oracle();
  const int m = static_cast<int>(x.rows());
  const AlgoParams& p = cfg.params;

  std::vector<int> sweep;
  for (int t : cfg.budgets) sweep.push_back(std::min(t, m));
  sweep = normalize_budgets(sweep);

  const CheckpointStop stop = [&](const Checkpoint& cp) {
    return cfg.stop_at_zero && error_rate(cp.log.labeling, y) == 0.0;
  };

  std::vector<Checkpoint> cps;
  // Pipeline: SVM per checkpoint for test error.
  std::map<int, Vector> svm_w;
  const std::string& algo = cfg.algorithm;
  if (algo == "aluma") {
    cps = trace_aluma(x, oracle, aluma_config(p, seed), sweep, {}, stop);
  } else if (algo == "cal" || algo == "qbc") {
    const auto order = p.order == "raised-first" ? raised_first_order(x, mix64(seed, kOrderSalt))
                                                 : stream_order(x.rows(), mix64(seed, kOrderSalt));
    const BaselineConfig b = baseline_config(p, seed);
    cps = algo == "cal" ? trace_cal(x, oracle, order, b, sweep, stop)
                        : trace_qbc(x, oracle, order, b, sweep, stop);
  } else if (algo == "tk") {
    cps = trace_tk(x, oracle, baseline_config(p, seed), sweep, stop);
  } else if (algo == "erm") {
    cps = trace_passive_erm(x, oracle, baseline_config(p, seed), sweep, stop);
  } else if (is_line_algorithm(algo)) {
    if (!train.line) throw ConfigError(algo + " needs a line pool");
    for (int t : sweep) {
      const auto t0 = std::chrono::steady_clock::now();
      LineRun run = algo == "greedy-line"      ? exact_greedy_line(*train.line, t)
                    : algo == "binsearch-line" ? binary_search_line(*train.line, t)
                                               : alpha_greedy_smallest_x_line(*train.line, p.alpha, t);
      Checkpoint cp;
      cp.budget = t;
      for (std::size_t q = 0; q < run.queried.size(); ++q) {
        const std::size_t i = run.queried[q];
        cp.log.records.push_back({static_cast<int>(q + 1), i, train.line->label(i)});
      }
      cp.log.labeling = std::move(run.labeling);
      cp.elapsed_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0).count();
      cps.push_back(std::move(cp));
      if (stop(cps.back())) break;
    }
  } else if (algo == "pipeline") {
    PreprocessParams pre;
    pre.gamma = p.gamma;
    pre.hinge_bound = p.hinge_bound;
    pre.delta = p.delta / 2;
    pre.jl_dim = p.jl_dim;
    pre.seed = mix64(seed, kJlSalt);
    const RowMatrix projected = preprocess_vectors(x, pre);
    AlumaConfig a = aluma_config(p, seed);
    a.delta = p.delta / 2;
    cps = trace_aluma(projected, oracle, a, sweep, {}, stop);
    SvmParams svm{p.svm_lambda, p.svm_iterations, seed};
    if (test) {
      for (const auto& cp : cps) svm_w[cp.budget] = svm_train(x, cp.log.labeling, svm);
    }
  } else {
    throw ConfigError("unknown algorithm '" + algo + "'");
  }

  std::map<int, const Checkpoint*> by_budget;
  for (const auto& cp : cps) by_budget[cp.budget] = &cp;

  CellOutput out;
  for (int t : cfg.budgets) {
    const auto it = by_budget.find(std::min(t, m));
    if (it == by_budget.end()) continue;  // sweep stopped earlier
    const Checkpoint& cp = *it->second;
    ResultRow row;
    row.seed = seed;
    row.budget = t;
    row.queries_used = static_cast<int>(cp.log.queries());
    row.train_error = error_rate(cp.log.labeling, y);
    if (cfg.record_time) row.wall_time_ms = cp.elapsed_ms;
    if (algo == "aluma" || algo == "pipeline") row.balance_verified_fraction = balance_fraction(cp.log);
    if (test) {
      const RowMatrix& tx = test->oracle.pool.points;
      if (algo == "pipeline") {
        const Vector& w = svm_w.at(cp.budget);
        std::vector<Label> pred(static_cast<std::size_t>(tx.rows()));
        for (Eigen::Index i = 0; i < tx.rows(); ++i) pred[i] = sign_label(tx.row(i).dot(w));
        row.test_error = error_rate(pred, test->oracle.labels);
      } else if (cp.vote.size() > 0) {
        row.test_error = error_rate(majority_vote_all(cp.vote, tx), test->oracle.labels);
      }
    }
    out.rows.push_back(row);
  }
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows) {
  std::map<int, std::vector<const ResultRow*>> by_t;
  for (const auto& r : rows) by_t[r.budget].push_back(&r);
  std::vector<AggregateRow> out;
  for (const auto& [t, rs] : by_t) {
    AggregateRow a;
    a.budget = t;
    a.runs = static_cast<int>(rs.size());
    std::vector<double> train, test, queries;
    for (const auto* r : rs) {
      train.push_back(r->train_error);
      queries.push_back(r->queries_used);
      if (r->test_error) test.push_back(*r->test_error);
    }
    a.train_error = quartiles(train);
    a.queries_used = quartiles(queries);
    if (test.size() == rs.size()) a.test_error = quartiles(test);
    out.push_back(a);
  }
  return out;
}

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> json_opt(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

nlohmann::json quartiles_json(const Quartiles& q) {
  return {{"q1", q.q1}, {"median", q.median}, {"q3", q.q3}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// --- public API ----------------------------------------------------------------

nlohmann::json parse_gen_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  std::string name = trim(spec.substr(0, colon));
  if (name.empty()) throw ConfigError("generator spec without a name");
  std::replace(name.begin(), name.end(), '-', '_');
  nlohmann::json out = {{"generator", name}};
  if (colon == std::string::npos) return out;
  std::stringstream rest(spec.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("generator parameter '" + item + "' needs =");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    double v = 0.0;
    const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
    if (r.ec == std::errc() && r.ptr == value.data() + value.size() && !value.empty()) {
      out[key] = v;
    } else {
      out[key] = value;
    }
  }
  return out;
}

BuiltPool build_generated(const nlohmann::json& spec, std::uint64_t seed) {
  if (!spec.is_object() || !spec.contains("generator") || !spec["generator"].is_string()) {
    throw ConfigError("generator spec must name a generator");
  }
  std::string name = spec["generator"].get<std::string>();
  std::replace(name.begin(), name.end(), '-', '_');
  BuiltPool out;
  try {
    if (name == "sphere" || name == "uniform_sphere") {
      SpecReader r(spec, {"m", "d"});
      out.oracle = gen_uniform_sphere(r.integer("m"), r.integer("d"), seed);
    } else if (name == "grid") {
      SpecReader r(spec, {"c", "d", "max_m"});
      out.oracle = gen_grid_pool(r.real("c"), r.integer("d"), seed,
                                 static_cast<std::size_t>(r.integer("max_m", 1000)));
    } else if (name == "line") {
      SpecReader r(spec, {"m", "c", "placement"});
      const std::string placement = r.text("placement").value_or("uniform");
      if (placement != "uniform" && placement != "grid") {
        throw ConfigError("line: placement is uniform or grid");
      }
      Rng rng(mix64(seed, kLineSalt));
      const double c = spec.contains("c") ? r.real("c") : uniform01(rng);
      LinePool line = gen_line_pool(r.integer("m"), c,
                                    placement == "grid" ? LinePlacement::kGrid : LinePlacement::kUniform,
                                    seed);
      out = from_line(std::move(line), "line", spec, seed);
    } else if (name == "thm7") {
      SpecReader r(spec, {"m", "alpha"});
      out = from_line(gen_thm7_pool(r.integer("m"), r.real("alpha", 2.0)), "thm7", spec, 0);
    } else if (name == "thm8") {
      SpecReader r(spec, {"gamma"});
      out.oracle = gen_thm8_arc_pool(r.real("gamma"));
    } else if (name == "two_circles") {
      SpecReader r(spec, {"eps", "m", "strict"});
      TwoCirclesMode mode;
      if (spec.contains("m")) mode = {false, r.integer("m"), seed};
      out.oracle = gen_two_circles(r.real("eps"), mode, std::nullopt, r.integer("strict", 1) != 0);
    } else if (name == "octahedron") {
      SpecReader r(spec, {"d", "bias", "neg", "w"});
      const int d = r.integer("d");
      out.oracle = gen_octahedron(d, octahedron_signs(r, d, seed), r.integer("bias", 1) != 0,
                                  r.integer("neg", 1) != 0);
    } else if (name == "noisy") {
      SpecReader r(spec, {"m", "d", "gamma", "rho"});
      out.oracle = gen_noisy_margin_pool(r.integer("m"), r.integer("d"), r.real("gamma"),
                                         r.real("rho", 0.05), seed);
    } else {
      throw ConfigError("unknown generator '" + name + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(name + ": " + e.what());
  }
  return out;
}

BuiltPool build_pool(const std::string& source, std::uint64_t seed) {
  if (source.empty()) throw ConfigError("no pool source");
  std::error_code ec;
  if (std::filesystem::is_regular_file(source, ec)) return load_csv_pool(source);
  return build_generated(parse_gen_spec(source), seed);
}

std::vector<std::size_t> raised_first_order(const RowMatrix& points, std::uint64_t seed) {
  std::vector<std::size_t> out;
  const auto shuffled = stream_order(static_cast<std::size_t>(points.rows()), seed);
  const Eigen::Index last = points.cols() - 1;
  for (auto i : shuffled) if (points(i, last) > 0.0) out.push_back(i);
  for (auto i : shuffled) if (!(points(i, last) > 0.0)) out.push_back(i);
  return out;
}

void ExperimentConfig::validate() const {
  if (std::find(kAlgorithms.begin(), kAlgorithms.end(), algorithm) == kAlgorithms.end()) {
    throw ConfigError("unknown algorithm '" + algorithm + "'");
  }
  if (pool.empty()) throw ConfigError("no pool source");
  if (budgets.empty()) throw ConfigError("budget sweep is empty");
  for (int t : budgets) {
    if (t < 0) throw ConfigError("budgets must be >= 0");
  }
  if (std::set<int>(budgets.begin(), budgets.end()).size() != budgets.size()) {
    throw ConfigError("budgets must be distinct");
  }
  if (seeds.empty()) throw ConfigError("no seeds");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("seeds must be distinct");
  }
  const AlgoParams& p = params;
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw ConfigError("delta must lie in (0,1)");
  if (!(p.lambda > 0.0 && p.lambda <= 1.0 / 64.0)) throw ConfigError("lambda must lie in (0, 1/64]");
  if (p.samples < 1 || p.mix_steps < 1) throw ConfigError("samples and mix-steps must be >= 1");
  if (!(p.alpha >= 1.0)) throw ConfigError("alpha must be >= 1");
  if (p.vote_size && *p.vote_size < 1) throw ConfigError("vote size must be >= 1");
  if (p.qbc_passes < 1) throw ConfigError("qbc passes must be >= 1");
  if (p.committee < 2) throw ConfigError("committee must have >= 2 members");
  if (p.order != "seeded" && p.order != "raised-first") {
    throw ConfigError("order must be seeded or raised-first");
  }
  if (!(p.gamma > 0.0) || !(p.hinge_bound >= 0.0)) throw ConfigError("bad gamma or hinge bound");
  if (p.jl_dim && *p.jl_dim < 1) throw ConfigError("jl dim must be >= 1");
  if (!(p.svm_lambda > 0.0) || p.svm_iterations < 1) throw ConfigError("bad svm parameters");
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  const AlgoParams& p = cfg.params;
  nlohmann::json params = {{"delta", p.delta},
                           {"lambda", p.lambda},
                           {"samples", p.samples},
                           {"mix_steps", p.mix_steps},
                           {"alpha", p.alpha},
                           {"vote_size", p.vote_size ? nlohmann::json(*p.vote_size) : nullptr},
                           {"qbc_passes", p.qbc_passes},
                           {"committee", p.committee},
                           {"order", p.order},
                           {"gamma", p.gamma},
                           {"hinge_bound", p.hinge_bound},
                           {"jl_dim", p.jl_dim ? nlohmann::json(*p.jl_dim) : nullptr},
                           {"svm_lambda", p.svm_lambda},
                           {"svm_iterations", p.svm_iterations}};
  return {{"algorithm", cfg.algorithm},
          {"params", params},
          {"pool", cfg.pool},
          {"test", cfg.test ? nlohmann::json(*cfg.test) : nullptr},
          {"budgets", cfg.budgets},
          {"seeds", cfg.seeds},
          {"record_time", cfg.record_time},
          {"stop_at_zero", cfg.stop_at_zero}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> top = {"algorithm", "params", "pool", "test", "budgets",
                                              "seeds", "record_time", "stop_at_zero", "threads"};
    for (const auto& [k, _] : j.items()) {
      if (!top.count(k)) throw ConfigError("unknown config key '" + k + "'");
    }
    ExperimentConfig cfg;
    cfg.algorithm = j.value("algorithm", cfg.algorithm);
    cfg.pool = j.value("pool", std::string());
    if (j.contains("test") && !j["test"].is_null()) cfg.test = j["test"].get<std::string>();
    if (j.contains("budgets")) cfg.budgets = j["budgets"].get<std::vector<int>>();
    if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    cfg.record_time = j.value("record_time", false);
    cfg.stop_at_zero = j.value("stop_at_zero", false);
    cfg.threads = j.value("threads", 0);
    if (j.contains("params")) {
      const auto& pj = j["params"];
      static const std::set<std::string> keys = {
          "delta", "lambda", "samples", "mix_steps", "alpha", "vote_size", "qbc_passes",
          "committee", "order", "gamma", "hinge_bound", "jl_dim", "svm_lambda", "svm_iterations"};
      for (const auto& [k, _] : pj.items()) {
        if (!keys.count(k)) throw ConfigError("unknown parameter '" + k + "'");
      }
      AlgoParams& p = cfg.params;
      p.delta = pj.value("delta", p.delta);
      p.lambda = pj.value("lambda", p.lambda);
      p.samples = pj.value("samples", p.samples);
      p.mix_steps = pj.value("mix_steps", p.mix_steps);
      p.alpha = pj.value("alpha", p.alpha);
      if (pj.contains("vote_size") && !pj["vote_size"].is_null()) p.vote_size = pj["vote_size"].get<int>();
      p.qbc_passes = pj.value("qbc_passes", p.qbc_passes);
      p.committee = pj.value("committee", p.committee);
      p.order = pj.value("order", p.order);
      p.gamma = pj.value("gamma", p.gamma);
      p.hinge_bound = pj.value("hinge_bound", p.hinge_bound);
      if (pj.contains("jl_dim") && !pj["jl_dim"].is_null()) p.jl_dim = pj["jl_dim"].get<int>();
      p.svm_lambda = pj.value("svm_lambda", p.svm_lambda);
      p.svm_iterations = pj.value("svm_iterations", p.svm_iterations);
    }
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("quartiles of nothing");
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.seeds.size();
  std::vector<CellOutput> cells(n);
  std::vector<std::exception_ptr> errors(n);
  std::size_t workers = cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads)
                                        : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        cells[i] = run_cell(cfg, cfg.seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  ExperimentResult out;
  out.config = cfg;
  for (auto& c : cells) {
    std::stable_sort(c.rows.begin(), c.rows.end(),
                     [](const ResultRow& a, const ResultRow& b) { return a.budget < b.budget; });
    out.rows.insert(out.rows.end(), c.rows.begin(), c.rows.end());
  }
  out.aggregates = aggregate(out.rows);
  return out;
}

std::string CompareRow::display() const {
  if (!median) return "> " + std::to_string(max_budget);
  if (*median == std::floor(*median)) return std::to_string(static_cast<long long>(*median));
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(1);
  ss << *median;
  return ss.str();
}

std::vector<CompareRow> compare_table(const std::vector<ExperimentResult>& results) {
  std::vector<CompareRow> out;
  for (const auto& r : results) {
    const std::string name = r.config.algorithm;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const CompareRow& c) { return c.algorithm == name; });
    if (it == out.end()) {
      out.push_back({name, 0, {}, std::nullopt});
      it = out.end() - 1;
    }
    int max_t = 0;
    for (int t : r.config.budgets) max_t = std::max(max_t, t);
    std::map<std::uint64_t, std::vector<const ResultRow*>> by_seed;
    std::vector<std::uint64_t> seed_order;
    for (const auto& row : r.rows) {
      max_t = std::max(max_t, row.budget);
      if (!by_seed.count(row.seed)) seed_order.push_back(row.seed);
      by_seed[row.seed].push_back(&row);
    }
    for (auto s : r.config.seeds) {
      if (!by_seed.count(s)) seed_order.push_back(s);
    }
    it->max_budget = std::max(it->max_budget, max_t);
    for (auto s : seed_order) {
      auto rows = by_seed[s];
      std::stable_sort(rows.begin(), rows.end(),
                       [](auto* a, auto* b) { return a->budget < b->budget; });
      std::optional<int> hit;
      for (const auto* row : rows) {
        if (row->train_error == 0.0) {
          hit = row->queries_used;
          break;
        }
      }
      it->per_seed.push_back(hit);
    }
  }
  for (auto& c : out) {
    if (c.per_seed.empty()) continue;
    std::vector<double> v;
    for (const auto& h : c.per_seed) {
      v.push_back(h ? *h : std::numeric_limits<double>::infinity());
    }
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size();
    const double med = k % 2 ? v[k / 2] : (v[k / 2 - 1] + v[k / 2]) / 2;
    if (std::isfinite(med)) c.median = med;
  }
  return out;
}

std::string format_compare_table(const std::vector<CompareRow>& rows) {
  std::size_t w = std::string("algorithm").size();
  for (const auto& r : rows) w = std::max(w, r.algorithm.size());
  std::ostringstream ss;
  auto pad = [&](const std::string& s) { return s + std::string(w - s.size() + 2, ' '); };
  ss << pad("algorithm") << "queries_to_zero_error  seeds_reached\n";
  for (const auto& r : rows) {
    std::size_t reached = 0;
    for (const auto& h : r.per_seed) reached += h.has_value();
    const std::string d = r.display();
    ss << pad(r.algorithm) << d << std::string(d.size() < 23 ? 23 - d.size() : 1, ' ') << reached
       << "/" << r.per_seed.size() << "\n";
  }
  return ss.str();
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw ConfigError("format must be csv or json");
}

std::string results_to_csv(const ExperimentResult& result) {
  std::ostringstream ss;
  ss << kCsvHeader << "\n";
  for (const auto& r : result.rows) {
    ss << r.seed << "," << r.budget << "," << r.queries_used << "," << num(r.train_error) << ","
       << (r.test_error ? num(*r.test_error) : "") << "," << num(r.wall_time_ms) << ","
       << (r.balance_verified_fraction ? num(*r.balance_verified_fraction) : "") << "\n";
  }
  return ss.str();
}

nlohmann::json results_to_json(const ExperimentResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"seed", r.seed},
                    {"T", r.budget},
                    {"queries_used", r.queries_used},
                    {"train_error", r.train_error},
                    {"test_error", opt_json(r.test_error)},
                    {"wall_time_ms", r.wall_time_ms},
                    {"balance_verified_fraction", opt_json(r.balance_verified_fraction)}});
  }
  nlohmann::json agg = nlohmann::json::array();
  for (const auto& a : result.aggregates) {
    agg.push_back({{"T", a.budget},
                   {"runs", a.runs},
                   {"train_error", quartiles_json(a.train_error)},
                   {"test_error", a.test_error ? quartiles_json(*a.test_error) : nullptr},
                   {"queries_used", quartiles_json(a.queries_used)}});
  }
  return {{"config", config_to_json(result.config)}, {"rows", rows}, {"aggregates", agg}};
}

ExperimentResult results_from_json(const nlohmann::json& j) {
  try {
    ExperimentResult out;
    out.config = config_from_json(j.at("config"));
    for (const auto& r : j.at("rows")) {
      ResultRow row;
      row.seed = r.at("seed").get<std::uint64_t>();
      row.budget = r.at("T").get<int>();
      row.queries_used = r.at("queries_used").get<int>();
      row.train_error = r.at("train_error").get<double>();
      row.test_error = json_opt(r, "test_error");
      row.wall_time_ms = r.at("wall_time_ms").get<double>();
      row.balance_verified_fraction = json_opt(r, "balance_verified_fraction");
      out.rows.push_back(row);
    }
    out.aggregates = aggregate(out.rows);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad results file: ") + e.what());
  }
}

ExperimentResult results_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader) {
    throw ConfigError("results CSV has an unexpected header");
  }
  ExperimentResult out;
  out.config.algorithm.clear();
  out.config.seeds.clear();
  auto cell_opt = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
  };
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != 7) throw ConfigError("results CSV row needs 7 cells: " + line);
    try {
      ResultRow r;
      r.seed = std::stoull(cells[0]);
      r.budget = std::stoi(cells[1]);
      r.queries_used = std::stoi(cells[2]);
      r.train_error = std::stod(cells[3]);
      r.test_error = cell_opt(cells[4]);
      r.wall_time_ms = std::stod(cells[5]);
      r.balance_verified_fraction = cell_opt(cells[6]);
      out.rows.push_back(r);
      out.config.budgets.push_back(r.budget);
    } catch (const std::logic_error&) {
      throw ConfigError("bad results CSV row: " + line);
    }
  }
  out.aggregates = aggregate(out.rows);
  return out;
}

void emit(const ExperimentResult& result, OutputFormat format, const std::string& path) {
  const std::string text =
      format == OutputFormat::kCsv ? results_to_csv(result) : results_to_json(result).dump(2) + "\n";
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

ExperimentResult load_results(const std::string& path) {
  const std::string text = read_file(path);
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".json") {
    try {
      return results_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
  if (ext == ".csv") {
    ExperimentResult r = results_from_csv(text);
    r.config.algorithm = std::filesystem::path(path).stem().string();
    return r;
  }
  throw ConfigError(path + ": results file must end in .json or .csv");
}

}  // namespace aluma

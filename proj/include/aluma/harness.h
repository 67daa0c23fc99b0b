#ifndef ALUMA_HARNESS_H_
#define ALUMA_HARNESS_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aluma/line.h"
#include "aluma/pools.h"

namespace aluma {

// Bad ids, bad parameters, malformed configs. The CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// "name:key=value,key=value", e.g. "octahedron:d=10,bias=1,neg=1".
// Values that parse as numbers become numbers.
nlohmann::json parse_gen_spec(const std::string& spec);

struct BuiltPool {
  OraclePool oracle;
  // Set for line generators and one-column labeled CSVs.
  std::optional<LinePool> line;
};

// Generators: sphere(m,d), grid(c,d,max_m), line(m,c,placement),
// thm7(m,alpha), thm8(gamma), two_circles(eps[,m,strict]), octahedron(d,bias,neg[,w]),
// noisy(m,d,gamma,rho). Randomness is drawn from `seed`. two_circles with
// strict=0 accepts an even 1/(2 eps).
BuiltPool build_generated(const nlohmann::json& spec, std::uint64_t seed);

// A path to a labeled pool CSV, or a generator spec (contains ':' or names a
// generator and is not an existing file).
BuiltPool build_pool(const std::string& source, std::uint64_t seed);

// Rows with positive last coordinate (the raised circle of the two-circles
// pool) first, each group in seeded shuffle order.
std::vector<std::size_t> raised_first_order(const RowMatrix& points, std::uint64_t seed);

struct AlgoParams {
  double delta = 0.1;
  double lambda = 1e-3;
  int samples = 1000;    // ALuMA hypotheses per round
  int mix_steps = 1000;  // hit-and-run steps per draw
  double alpha = 2.0;    // alpha-line
  std::optional<int> vote_size;
  int qbc_passes = 1;
  int committee = 2;
  // Stream order for cal/qbc: "seeded" or "raised-first".
  std::string order = "seeded";
  // Pipeline only.
  double gamma = 0.1;
  double hinge_bound = 0.0;
  std::optional<int> jl_dim;
  double svm_lambda = 1e-3;
  int svm_iterations = 100000;
};

struct ExperimentConfig {
  // aluma, cal, qbc, tk, erm, greedy-line, binsearch-line, alpha-line, pipeline
  std::string algorithm = "aluma";
  AlgoParams params;
  std::string pool;
  std::optional<std::string> test;
  std::vector<int> budgets;
  std::vector<std::uint64_t> seeds = {0};
  // Measure wall time; off by default so results are byte-reproducible.
  bool record_time = false;
  // Stop each seed's sweep at the first zero-train-error budget; the larger
  // budgets are then not run and have no rows.
  bool stop_at_zero = false;
  int threads = 0;  // 0: one per seed up to the hardware count

  void validate() const;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

struct ResultRow {
  std::uint64_t seed = 0;
  int budget = 0;
  int queries_used = 0;
  double train_error = 0.0;
  std::optional<double> test_error;
  double wall_time_ms = 0.0;
  std::optional<double> balance_verified_fraction;
};

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

struct AggregateRow {
  int budget = 0;
  int runs = 0;
  Quartiles train_error;
  std::optional<Quartiles> test_error;
  Quartiles queries_used;
};

struct ExperimentResult {
  ExperimentConfig config;
  // Seeds in config order, budgets ascending within a seed.
  std::vector<ResultRow> rows;
  std::vector<AggregateRow> aggregates;
};

// Linear interpolation between order statistics; values must be non-empty.
Quartiles quartiles(std::vector<double> values);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct CompareRow {
  std::string algorithm;
  int max_budget = 0;
  // Per seed: queries used at the first zero-error budget.
  std::vector<std::optional<int>> per_seed;
  // Median over seeds, a seed that never reached zero counting as +inf;
  // nullopt when that median is infinite.
  std::optional<double> median;

  // "12", "12.5", or "> 60".
  std::string display() const;
};

std::vector<CompareRow> compare_table(const std::vector<ExperimentResult>& results);
std::string format_compare_table(const std::vector<CompareRow>& rows);

enum class OutputFormat { kCsv, kJson };

OutputFormat parse_format(const std::string& name);

// Column order seed,T,queries_used,train_error,test_error,wall_time_ms,
// balance_verified_fraction; missing optionals are empty cells.
std::string results_to_csv(const ExperimentResult& result);
nlohmann::json results_to_json(const ExperimentResult& result);
ExperimentResult results_from_json(const nlohmann::json& j);
// CSV carries no config; the algorithm name is left empty.
ExperimentResult results_from_csv(const std::string& text);

void emit(const ExperimentResult& result, OutputFormat format, const std::string& path);
// By extension: .json or .csv.
ExperimentResult load_results(const std::string& path);

}  // namespace aluma

#endif  // ALUMA_HARNESS_H_

#include "aluma/aluma.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "aluma/rng.h"

namespace aluma {

namespace {

constexpr std::uint64_t kRetrySalt = 0x7e7157ULL;

HypothesisBatch prefix(const HypothesisBatch& b, int count) {
  return {b.w.topRows(count)};
}

}  // namespace

int AlumaConfig::vote_m() const {
  return vote_size ? *vote_size : default_vote_size(delta);
}

void AlumaConfig::validate(std::size_t pool_size) const {
  if (budget < 0) throw std::invalid_argument("budget must be non-negative");
  if (static_cast<std::size_t>(budget) > pool_size) {
    throw std::invalid_argument("budget exceeds pool size");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(lambda > 0.0 && lambda <= 1.0 / 64.0)) {
    throw std::invalid_argument("lambda must lie in (0, 1/64]");
  }
  if (samples_per_round < 1) throw std::invalid_argument("samples_per_round must be >= 1");
  if (vote_size && *vote_size < 1) throw std::invalid_argument("vote size must be >= 1");
  if (sampler.mix_steps < 1) throw std::invalid_argument("mix_steps must be >= 1");
}

int round_sample_count(const AlumaConfig& cfg, std::size_t pool_size) {
  if (cfg.cap_samples) return cfg.samples_per_round;
  // Half of delta goes to estimation, union bound over T rounds and m points.
  const double t = std::max(1, cfg.budget);
  const double m = static_cast<double>(std::max<std::size_t>(1, pool_size));
  const double k = std::ceil(std::log(2.0 * t * m / (cfg.delta / 2.0)) /
                             (2.0 * cfg.lambda * cfg.lambda));
  if (k > 1e9) throw std::invalid_argument("sample count formula overflow");
  return std::max(cfg.samples_per_round, static_cast<int>(k));
}

SplitEstimates estimates_from_batch(const HypothesisBatch& batch,
                                    std::span<const std::size_t> remaining,
                                    const RowMatrix& pool) {
  if (batch.size() == 0) throw std::invalid_argument("empty hypothesis batch");
  SplitEstimates out;
  out.reserve(remaining.size());
  const double k = static_cast<double>(batch.size());
  Eigen::VectorXd dots(batch.w.rows());
  for (std::size_t i : remaining) {
    dots.noalias() = batch.w * pool.row(static_cast<Eigen::Index>(i)).transpose();
    const long plus = (dots.array() >= 0.0).count();
    out.push_back({i, plus / k, (k - plus) / k});
  }
  return out;
}

SplitEstimates estimate_splits(const VersionSpace& vs,
                               std::span<const std::size_t> remaining,
                               const RowMatrix& pool, const AlumaConfig& cfg,
                               int round) {
  if (remaining.empty()) throw std::invalid_argument("no remaining candidates");
  SamplerConfig sc = cfg.sampler;
  sc.seed = mix64(cfg.sampler.seed, static_cast<std::uint64_t>(round));
  const HypothesisBatch batch =
      sample_batch(vs, round_sample_count(cfg, static_cast<std::size_t>(pool.rows())), sc);
  return estimates_from_batch(batch, remaining, pool);
}

double balance_threshold(double lambda) {
  return 4.0 * std::sqrt(lambda) + 2.0 * lambda;
}

std::vector<bool> verify_balance(const SplitEstimates& est, double lambda) {
  const double thr = balance_threshold(lambda);
  std::vector<bool> out(est.size());
  for (std::size_t i = 0; i < est.size(); ++i) out[i] = est[i].product() >= thr;
  return out;
}

std::size_t select_query(const SplitEstimates& est) {
  if (est.empty()) throw std::invalid_argument("select_query: no estimates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < est.size(); ++i) {
    const double p = est[i].product();
    const double b = est[best].product();
    if (p > b || (p == b && est[i].index < est[best].index)) best = i;
  }
  return est[best].index;
}

std::vector<Checkpoint> trace_aluma(const RowMatrix& pool, const LabelOracle& oracle,
                                    const AlumaConfig& cfg,
                                    std::span<const int> budgets,
                                    const RoundObserver& observer,
                                    const CheckpointStop& stop_after) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> sweep = normalize_budgets(budgets);
  const std::size_t m = static_cast<std::size_t>(pool.rows());
  if (m == 0) throw std::invalid_argument("empty pool");
  AlumaConfig run_cfg = cfg;
  run_cfg.budget = sweep.back();
  run_cfg.validate(m);

  const int k = round_sample_count(run_cfg, m);
  const int vote_m = run_cfg.vote_m();
  const int max_t = sweep.back();

  VersionSpace vs(static_cast<int>(pool.cols()));
  std::vector<std::size_t> remaining(m);
  for (std::size_t i = 0; i < m; ++i) remaining[i] = i;
  std::vector<QueryRecord> records;
  std::optional<Vector> warm = cfg.sampler.warm_start;
  std::vector<Checkpoint> out;
  std::size_t next = 0;

  for (int t = 1;; ++t) {
    const int queried = t - 1;
    const bool want_vote = next < sweep.size() && sweep[next] == queried;
    bool stop = queried >= max_t || remaining.empty();

    SamplerConfig sc = cfg.sampler;
    sc.seed = mix64(cfg.sampler.seed, static_cast<std::uint64_t>(t));
    sc.warm_start = warm;
    const int draw = stop ? vote_m : (want_vote ? std::max(k, vote_m) : k);
    const HypothesisBatch batch = sample_batch(vs, draw, sc);

    SplitEstimates est;
    if (!stop) {
      est = estimates_from_batch(k == draw ? batch : prefix(batch, k), remaining, pool);
      stop = std::all_of(est.begin(), est.end(),
                         [](const SplitEstimate& e) { return e.product() == 0.0; });
    }

    if (want_vote || stop) {
      Checkpoint cp;
      if (draw < vote_m) {
        cp.vote = sample_batch(vs, vote_m, sc);
      } else {
        cp.vote = vote_m == draw ? batch : prefix(batch, vote_m);
      }
      cp.log.records = records;
      cp.log.labeling = majority_vote_all(cp.vote, pool);
      cp.elapsed_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      // Once stopped, every larger budget sees the same output.
      const std::size_t last = stop ? sweep.size() : next + 1;
      for (; next < last; ++next) {
        cp.budget = sweep[next];
        out.push_back(cp);
      }
      if (stop_after && stop_after(out.back())) break;
    }
    if (stop) break;

    std::size_t selected = select_query(est);
    auto pos_of = [&est](std::size_t idx) {
      return static_cast<std::size_t>(
          std::find_if(est.begin(), est.end(),
                       [idx](const SplitEstimate& e) { return e.index == idx; }) -
          est.begin());
    };
    bool balanced = est[pos_of(selected)].product() >= balance_threshold(cfg.lambda);
    if (!balanced && !cfg.cap_samples) {
      SamplerConfig retry = sc;
      retry.seed = mix64(sc.seed, kRetrySalt);
      est = estimates_from_batch(sample_batch(vs, 4 * k, retry), remaining, pool);
      selected = select_query(est);
      balanced = est[pos_of(selected)].product() >= balance_threshold(cfg.lambda);
    }
    const SplitEstimate& chosen = est[pos_of(selected)];
    if (observer) observer({t, vs, remaining, est, selected, balanced});

    const Label y = oracle(selected);
    if (y != 1 && y != -1) throw std::invalid_argument("oracle returned invalid label");
    records.push_back({t, selected, y, chosen.v_plus, chosen.v_minus, balanced});
    vs = vs.with_constraint(pool.row(static_cast<Eigen::Index>(selected)).transpose(), y);
    remaining.erase(std::find(remaining.begin(), remaining.end(), selected));
    warm = Vector(batch.w.row(batch.w.rows() - 1).transpose());
  }
  return out;
}

QueryLog run_aluma(const RowMatrix& pool, const LabelOracle& oracle,
                   const AlumaConfig& cfg, const RoundObserver& observer) {
  const int b[] = {cfg.budget};
  cfg.validate(static_cast<std::size_t>(pool.rows()));
  return trace_aluma(pool, oracle, cfg, b, observer).front().log;
}

std::vector<RoundGap> greedy_gap_exact_2d(const RowMatrix& pool,
                                          const LabelOracle& oracle,
                                          const AlumaConfig& cfg) {
  if (pool.cols() != 2) throw std::invalid_argument("greedy_gap_exact_2d requires d = 2");
  std::vector<RoundGap> gaps;
  auto observe = [&](const RoundView& view) {
    double best = 0.0;
    double chosen = 0.0;
    for (std::size_t i : view.remaining) {
      const SplitMeasure s =
          split_measures_2d(view.vs, pool.row(static_cast<Eigen::Index>(i)).transpose());
      const double p = s.plus * s.minus;
      best = std::max(best, p);
      if (i == view.selected) chosen = p;
    }
    gaps.push_back({view.round, best > 0.0 ? chosen / best : 1.0, view.balance_verified});
  };
  run_aluma(pool, oracle, cfg, observe);
  return gaps;
}

}  // namespace aluma

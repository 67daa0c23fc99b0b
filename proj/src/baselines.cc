#include "aluma/baselines.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "aluma/max_margin.h"
#include "aluma/rng.h"

namespace aluma {

namespace {

constexpr std::uint64_t kVoteSalt = 0x9073ULL;
constexpr std::uint64_t kQbcSalt = 0x9bcULL;
constexpr std::uint64_t kErmSalt = 0xe22ULL;
constexpr std::size_t kMaxWitnesses = 64;

using Clock = std::chrono::steady_clock;

void validate(const RowMatrix& pool, const BaselineConfig& cfg) {
  if (pool.rows() == 0) throw std::invalid_argument("empty pool");
  if (cfg.budget < 0) throw std::invalid_argument("budget must be non-negative");
  if (cfg.vote_size < 1) throw std::invalid_argument("vote size must be >= 1");
  if (cfg.committee < 2) throw std::invalid_argument("committee size must be >= 2");
  if (cfg.qbc_passes < 1) throw std::invalid_argument("qbc_passes must be >= 1");
  if (cfg.sampler.mix_steps < 1) throw std::invalid_argument("mix_steps must be >= 1");
  if (!(cfg.eps_feas > 0.0)) throw std::invalid_argument("eps_feas must be positive");
}

void validate_order(std::span<const std::size_t> order, std::size_t m) {
  if (order.size() != m) throw std::invalid_argument("stream order must cover the pool");
  std::vector<bool> seen(m, false);
  for (std::size_t i : order) {
    if (i >= m || seen[i]) throw std::invalid_argument("stream order is not a permutation");
    seen[i] = true;
  }
}

Vector row_of(const RowMatrix& pool, std::size_t i) {
  return pool.row(static_cast<Eigen::Index>(i)).transpose();
}

Label ask(const LabelOracle& oracle, std::size_t i) {
  const Label y = oracle(i);
  if (y != 1 && y != -1) throw std::invalid_argument("oracle returned invalid label");
  return y;
}

// Deterministic point of the version space: half the max-margin direction.
std::optional<Vector> anchor_point(const VersionSpace& vs) {
  if (vs.num_constraints() == 0) return Vector(Vector::Zero(vs.dim()));
  const MaxMarginResult mm = max_margin_normalized(vs.signed_rows());
  if (mm.lower > 0.0) {
    const Vector p = 0.5 * mm.w;
    if (vs.contains(p)) return p;
  }
  return std::nullopt;
}

// Shared checkpoint emission for the baselines.
class CheckpointWriter {
 public:
  CheckpointWriter(const RowMatrix& pool, const BaselineConfig& cfg,
  std::span<const int> budgets, const CheckpointStop& stop_after)
      : pool_(pool),
        cfg_(cfg),
        sweep_(normalize_budgets(budgets)),
        stop_after_(stop_after),
        t0_(Clock::now()) {}

  int max_budget() const { return sweep_.back(); }
  bool done() const { return next_ >= sweep_.size(); }
  // True if a checkpoint is due before query number `queries + 1`.
  bool due(int queries) const { return !done() && sweep_[next_] == queries; }

  void emit(const VersionSpace& vs, const std::vector<QueryRecord>& records,
            const std::vector<Label>* fixed, bool all_remaining) {
    Checkpoint cp;
    SamplerConfig sc = cfg_.sampler;
    sc.seed = mix64(mix64(cfg_.sampler.seed, kVoteSalt), records.size());
    sc.warm_start = anchor_point(vs);
    cp.vote = sample_batch(vs, cfg_.vote_size, sc);
    cp.log.records = records;
    cp.log.labeling = majority_vote_all(cp.vote, pool_);
    if (fixed) {
      for (std::size_t i = 0; i < fixed->size(); ++i) {
        if ((*fixed)[i] != 0) cp.log.labeling[i] = (*fixed)[i];
      }
    }
    cp.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0_).count();
    const std::size_t last = all_remaining ? sweep_.size() : next_ + 1;
    for (; next_ < last; ++next_) {
      cp.budget = sweep_[next_];
      out_.push_back(cp);
    }
    if (stop_after_ && stop_after_(out_.back())) next_ = sweep_.size();
  }

  std::vector<Checkpoint> take() { return std::move(out_); }

 private:
  const RowMatrix& pool_;
  const BaselineConfig& cfg_;
  std::vector<int> sweep_;
  const CheckpointStop& stop_after_;
  Clock::time_point t0_;
  std::size_t next_ = 0;
  std::vector<Checkpoint> out_;
};

QueryLog single(std::vector<Checkpoint> cps) { return std::move(cps.front().log); }

// Feasibility of vs + (x, y) at slack eps, on normalized rows. Unknown
// outcomes count as feasible, so inference stays conservative.
struct Feasibility {
  bool feasible;
  Vector witness;  // unit, valid when feasible and certified
  bool certified;
};

Feasibility check_feasible(const RowMatrix& unit_rows, const Vector& unit_x, Label y,
                           double eps) {
  RowMatrix rows(unit_rows.rows() + 1, unit_x.size());
  rows.topRows(unit_rows.rows()) = unit_rows;
  rows.row(unit_rows.rows()) = y * unit_x.transpose();
  const MaxMarginResult mm = max_margin(rows);
  if (mm.lower >= eps) return {true, mm.w, true};
  if (mm.upper < eps) return {false, Vector(), true};
  return {true, Vector(), false};
}

std::optional<Label> decide(bool feasible_plus, bool feasible_minus) {
  if (feasible_plus && !feasible_minus) return 1;
  if (feasible_minus && !feasible_plus) return -1;
  return std::nullopt;
}

RowMatrix unit_rows_of(const VersionSpace& vs) {
  RowMatrix rows = vs.signed_rows();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) rows.row(i).normalize();
  return rows;
}

}  // namespace

std::optional<Label> label_determined(const VersionSpace& vs, const Vector& x,
                                      double eps_feas) {
  if (x.size() != vs.dim()) throw std::invalid_argument("label_determined: dimension mismatch");
  const double xn = x.norm();
  if (!(xn > 0.0)) throw std::invalid_argument("label_determined: zero point");
  const RowMatrix rows = unit_rows_of(vs);
  const Vector ux = x / xn;
  return decide(check_feasible(rows, ux, 1, eps_feas).feasible,
                check_feasible(rows, ux, -1, eps_feas).feasible);
}

std::vector<std::size_t> stream_order(std::size_t m, std::uint64_t seed) {
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  // Fisher-Yates with our own uniform draw keeps the order library-independent.
  for (std::size_t i = m; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  return order;
}

std::vector<Checkpoint> trace_cal(const RowMatrix& pool, const LabelOracle& oracle,
                                  std::span<const std::size_t> order,
                                  const BaselineConfig& cfg,
                                  std::span<const int> budgets,
                                  const CheckpointStop& stop_after) {
  validate(pool, cfg);
  const std::size_t m = static_cast<std::size_t>(pool.rows());
  validate_order(order, m);
  CheckpointWriter writer(pool, cfg, budgets, stop_after);

  VersionSpace vs(static_cast<int>(pool.cols()));
  RowMatrix unit_rows(0, pool.cols());
  std::vector<Vector> witnesses;
  std::vector<Label> known(m, 0);
  std::vector<QueryRecord> records;
  int queries = 0;

  for (std::size_t idx : order) {
    const Vector x = row_of(pool, idx);
    const double xn = x.norm();
    if (!(xn > 0.0)) throw std::invalid_argument("CAL: zero pool point");
    const Vector ux = x / xn;

    bool plus_ok = false;
    bool minus_ok = false;
    for (const Vector& w : witnesses) {
      const double v = w.dot(ux);
      plus_ok = plus_ok || v >= cfg.eps_feas;
      minus_ok = minus_ok || v <= -cfg.eps_feas;
    }
    for (Label y : {1, -1}) {
      bool& ok = y == 1 ? plus_ok : minus_ok;
      if (ok) continue;
      const Feasibility f = check_feasible(unit_rows, ux, y, cfg.eps_feas);
      ok = f.feasible;
      if (f.feasible && f.certified && witnesses.size() < kMaxWitnesses) {
        witnesses.push_back(f.witness);
      }
    }
    if (const auto inferred = decide(plus_ok, minus_ok)) {
      known[idx] = *inferred;
      continue;
    }

    if (writer.due(queries)) writer.emit(vs, records, &known, false);
    if (writer.done()) break;
    const Label y = ask(oracle, idx);
    ++queries;
    records.push_back({queries, idx, y});
    known[idx] = y;
    vs = vs.with_constraint(x, y);
    unit_rows.conservativeResize(unit_rows.rows() + 1, Eigen::NoChange);
    unit_rows.row(unit_rows.rows() - 1) = y * ux.transpose();
    std::erase_if(witnesses, [&](const Vector& w) { return y * w.dot(ux) < cfg.eps_feas; });
  }
  if (!writer.done()) writer.emit(vs, records, &known, true);
  return writer.take();
}

QueryLog run_cal(const RowMatrix& pool, const LabelOracle& oracle,
                 std::span<const std::size_t> order, const BaselineConfig& cfg) {
  const int b[] = {cfg.budget};
  return single(trace_cal(pool, oracle, order, cfg, b));
}

std::vector<Checkpoint> trace_qbc(const RowMatrix& pool, const LabelOracle& oracle,
                                  std::span<const std::size_t> order,
                                  const BaselineConfig& cfg,
                                  std::span<const int> budgets,
                                  const CheckpointStop& stop_after) {
  validate(pool, cfg);
  const std::size_t m = static_cast<std::size_t>(pool.rows());
  validate_order(order, m);
  CheckpointWriter writer(pool, cfg, budgets, stop_after);

  VersionSpace vs(static_cast<int>(pool.cols()));
  std::vector<QueryRecord> records;
  std::optional<Vector> warm;
  const std::uint64_t base = mix64(cfg.sampler.seed, kQbcSalt);
  int queries = 0;

  std::vector<bool> queried(m, false);
  const std::size_t stream_length = order.size() * static_cast<std::size_t>(cfg.qbc_passes);
  for (std::size_t pos = 0; pos < stream_length && !writer.done(); ++pos) {
    const std::size_t idx = order[pos % order.size()];
    if (queried[idx]) continue;
    const Vector x = row_of(pool, idx);
    SamplerConfig sc = cfg.sampler;
    sc.seed = mix64(base, pos);
    sc.warm_start = warm;
    const HypothesisBatch committee = sample_batch(vs, cfg.committee, sc);
    warm = Vector(committee.w.row(committee.w.rows() - 1).transpose());
    const Eigen::VectorXd dots = committee.w * x;
    const Label first = sign_label(dots[0]);
    bool disagree = false;
    for (Eigen::Index j = 1; j < dots.size(); ++j) disagree |= sign_label(dots[j]) != first;
    if (!disagree) continue;

    if (writer.due(queries)) writer.emit(vs, records, nullptr, false);
    if (writer.done()) break;
    const Label y = ask(oracle, idx);
    ++queries;
    queried[idx] = true;
    records.push_back({queries, idx, y});
    vs = vs.with_constraint(x, y);
  }
  if (!writer.done()) writer.emit(vs, records, nullptr, true);
  return writer.take();
}

QueryLog run_qbc(const RowMatrix& pool, const LabelOracle& oracle,
                 std::span<const std::size_t> order, const BaselineConfig& cfg) {
  const int b[] = {cfg.budget};
  return single(trace_qbc(pool, oracle, order, cfg, b));
}

std::vector<Checkpoint> trace_tk(const RowMatrix& pool, const LabelOracle& oracle,
                                 const BaselineConfig& cfg,
                                 std::span<const int> budgets,
                                 const CheckpointStop& stop_after) {
  validate(pool, cfg);
  const std::size_t m = static_cast<std::size_t>(pool.rows());
  CheckpointWriter writer(pool, cfg, budgets, stop_after);

  VersionSpace vs(static_cast<int>(pool.cols()));
  std::vector<QueryRecord> records;
  std::vector<bool> queried(m, false);
  const Eigen::VectorXd norms = pool.rowwise().norm();
  if ((norms.array() <= 0.0).any()) throw std::invalid_argument("TK: zero pool point");

  for (int queries = 0;; ++queries) {
    if (static_cast<std::size_t>(queries) == m) break;
    if (writer.due(queries)) writer.emit(vs, records, nullptr, false);
    if (writer.done()) break;

    std::size_t pick = m;
    if (queries == 0) {
      Eigen::Index best = 0;
      norms.maxCoeff(&best);  // first maximum
      pick = static_cast<std::size_t>(best);
    } else {
      const MaxMarginResult mm = max_margin(vs.signed_rows());
      if (mm.lower > 0.0) {
        const Eigen::VectorXd score = (pool * mm.w).cwiseAbs().cwiseQuotient(norms);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
          if (!queried[i] && score[i] < best) {
            best = score[i];
            pick = i;
          }
        }
      } else {
        // Degenerate labeled set: lowest unqueried index.
        pick = static_cast<std::size_t>(
            std::find(queried.begin(), queried.end(), false) - queried.begin());
      }
    }
    const Label y = ask(oracle, pick);
    records.push_back({queries + 1, pick, y});
    queried[pick] = true;
    vs = vs.with_constraint(row_of(pool, pick), y);
  }
  if (!writer.done()) writer.emit(vs, records, nullptr, true);
  return writer.take();
}

QueryLog run_tk(const RowMatrix& pool, const LabelOracle& oracle,
                const BaselineConfig& cfg) {
  const int b[] = {cfg.budget};
  return single(trace_tk(pool, oracle, cfg, b));
}

std::vector<Checkpoint> trace_passive_erm(const RowMatrix& pool,
                                          const LabelOracle& oracle,
                                          const BaselineConfig& cfg,
                                          std::span<const int> budgets,
                                          const CheckpointStop& stop_after) {
  validate(pool, cfg);
  const std::size_t m = static_cast<std::size_t>(pool.rows());
  CheckpointWriter writer(pool, cfg, budgets, stop_after);
  const std::vector<std::size_t> order = stream_order(m, mix64(cfg.sampler.seed, kErmSalt));

  VersionSpace vs(static_cast<int>(pool.cols()));
  std::vector<QueryRecord> records;
  for (std::size_t q = 0;; ++q) {
    if (q == m) break;
    if (writer.due(static_cast<int>(q))) writer.emit(vs, records, nullptr, false);
    if (writer.done()) break;
    const std::size_t idx = order[q];
    const Label y = ask(oracle, idx);
    records.push_back({static_cast<int>(q) + 1, idx, y});
    vs = vs.with_constraint(row_of(pool, idx), y);
  }
  if (!writer.done()) writer.emit(vs, records, nullptr, true);
  return writer.take();
}

QueryLog run_passive_erm(const RowMatrix& pool, const LabelOracle& oracle,
                         const BaselineConfig& cfg) {
  const int b[] = {cfg.budget};
  return single(trace_passive_erm(pool, oracle, cfg, b));
}

}  // namespace aluma

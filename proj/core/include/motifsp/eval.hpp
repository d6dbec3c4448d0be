#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "motifsp/census.hpp"
#include "motifsp/generators.hpp"
#include "motifsp/sp.hpp"

namespace motifsp {

class WorkerPool;
struct DatasetRecord;
struct TrainedModel;

inline constexpr std::array<double, 4> kDefaultThetas{0.05, 0.10, 0.25, 0.50};

/// Copies an 8-wide prediction into a profile (no renormalization).
SignificanceProfile as_profile(std::span<const double> v);

struct ThresholdCell {
  std::size_t correct = 0;
  std::size_t incorrect = 0;
};

struct ThresholdTable {
  std::vector<double> thetas;
  std::map<Family, std::vector<ThresholdCell>> rows;  ///< one cell per theta
};

/// Applies is_correct per record and theta, grouped by family. Throws
/// std::invalid_argument on misaligned input.
ThresholdTable threshold_table(std::span<const SignificanceProfile> preds, std::span<const SignificanceProfile> truths,
                               std::span<const Family> families,
                               std::span<const double> thetas = kDefaultThetas);

/// What a random guess is compared with.
enum class BaselineMode : std::uint8_t {
  SphereVsSphere,   ///< independent random truth per simulation
  SphereVsDataset,  ///< truth drawn uniformly from supplied profiles
};

struct BaselineRate {
  double theta = 0.0;
  std::size_t hits = 0;
  std::size_t sims = 0;
  double rate() const { return sims ? static_cast<double>(hits) / static_cast<double>(sims) : 0.0; }
};

/// A profile uniform on the unit circle (size-3 group) times the unit
/// 5-sphere (size-4 group): isotropic Gaussians normalized per group.
SignificanceProfile random_profile(std::uint64_t seed);

/// Fraction of random guesses that pass is_correct. Simulations run in
/// fixed blocks with derived seeds, so the result does not depend on the
/// pool width. Requires n_sims >= 1e4; SphereVsDataset needs truths.
std::vector<BaselineRate> baseline_rates(std::span<const double> thetas, std::size_t n_sims, std::uint64_t seed,
                                         BaselineMode mode = BaselineMode::SphereVsSphere,
                                         std::span<const SignificanceProfile> truths = {},
                                         const WorkerPool* pool = nullptr);

/// Row = true family, column = family of the nearest true profile.
struct AgreementMatrix {
  std::vector<Family> families;
  std::vector<std::vector<std::size_t>> counts;

  std::size_t row_sum(std::size_t r) const;
  std::size_t at(Family truth, Family matched) const;
};

/// Nearest reference (mean absolute difference, ties to the lowest id) for
/// each prediction. Throws std::invalid_argument for an empty index.
AgreementMatrix agreement_heatmap(std::span<const SignificanceProfile> preds, std::span<const Family> true_families,
                                  const std::map<Family, std::vector<ReferenceProfile>>& index);

/// Same, predicting each test graph with the model first.
AgreementMatrix agreement_heatmap(const TrainedModel& model, std::span<const DatasetRecord> test_records,
                                  std::span<const Graph> test_graphs,
                                  const std::map<Family, std::vector<ReferenceProfile>>& index);

enum class ErrorMetric : std::uint8_t { Squared, Absolute };

inline constexpr std::array<double, 5> kPercentiles{25, 50, 75, 95, 100};

struct PercentileReport {
  ErrorMetric metric = ErrorMetric::Squared;
  std::array<std::array<double, kPercentiles.size()>, kNumPatterns> values{};  ///< [pattern][percentile]
};

/// Nearest-rank value: the ceil(q/100 * n)-th smallest element (q in (0,100]).
double nearest_rank(std::vector<double> values, double q);

PercentileReport error_percentiles(std::span<const SignificanceProfile> preds,
                                   std::span<const SignificanceProfile> truths, ErrorMetric metric);

/// Per-pattern moments of log1p counts.
struct CountMoments {
  std::array<double, kNumPatterns> mean{};
  std::array<double, kNumPatterns> var{};
};

/// E[y] and Var(y) of log1p counts for each family of the dataset.
std::map<Family, CountMoments> count_moments(std::span<const DatasetRecord> records);

/// Every sign combination of ((y - E[y]) +/- sigma_z) / sqrt(Var(y)^2 + Var(z)^2),
/// normalized to a profile. Patterns with sigma_z = 0 contribute a single
/// choice. Where both variances vanish the z-value is sign(y - E[y]).
std::vector<SignificanceProfile> approx_sp_from_counts(std::span<const double> log_counts,
                                                       const CountMoments& dataset_stats,
                                                       std::span<const double> residual_var);

/// Candidate with the smallest mean absolute difference to truth (first on ties).
std::size_t closest_candidate(std::span<const SignificanceProfile> candidates, const SignificanceProfile& truth);

struct RunTime {
  double wall_seconds = 0.0;
  double core_seconds = 0.0;
};

struct Speedup {
  double speedup = 0.0;          ///< total wall(a) / total wall(b)
  double core_efficiency = 0.0;  ///< total core(a) / total core(b)
};

/// Throws std::invalid_argument when a total of b is not positive.
Speedup speedup_report(std::span<const RunTime> task_a, std::span<const RunTime> task_b);

/// Report serializations. Column orders:
///   threshold: family,theta,correct,incorrect
///   baseline:  theta,hits,sims,rate
///   heatmap:   true_family,<one column per family>
///   percentiles: pattern,p25,p50,p75,p95,p100
std::string to_csv(const ThresholdTable& t);
std::string to_csv(std::span<const BaselineRate> rates);
std::string to_csv(const AgreementMatrix& h);
std::string to_csv(const PercentileReport& r);
std::string to_text(const AgreementMatrix& h);
std::string to_json(const ThresholdTable& t);
std::string to_json(std::span<const BaselineRate> rates);
std::string to_json(const AgreementMatrix& h);
std::string to_json(const PercentileReport& r);

}  // namespace motifsp

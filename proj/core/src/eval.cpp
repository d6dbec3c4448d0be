#include "motifsp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "motifsp/dataset.hpp"
#include "motifsp/nn.hpp"
#include "motifsp/parallel.hpp"
#include "motifsp/rng.hpp"

namespace motifsp {

using nlohmann::json;

SignificanceProfile as_profile(std::span<const double> v) {
  if (v.size() != kNumPatterns) throw std::invalid_argument("prediction must have 8 entries");
  SignificanceProfile sp;
  std::copy(v.begin(), v.end(), sp.s.begin());
  return sp;
}

ThresholdTable threshold_table(std::span<const SignificanceProfile> preds, std::span<const SignificanceProfile> truths,
                               std::span<const Family> families, std::span<const double> thetas) {
  if (preds.size() != truths.size() || preds.size() != families.size())
    throw std::invalid_argument("threshold_table: inputs are not aligned");
  ThresholdTable t;
  t.thetas.assign(thetas.begin(), thetas.end());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    auto& row = t.rows[families[i]];
    row.resize(thetas.size());
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      if (is_correct(preds[i], truths[i], thetas[k])) ++row[k].correct;
      else ++row[k].incorrect;
    }
  }
  return t;
}

namespace {

SignificanceProfile draw_profile(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::array<double, kNumPatterns> z{};
  // resample a group in the (measure-zero) event that it is exactly zero
  do {
    for (std::size_t i = kSize3Begin; i < kSize3End; ++i) z[i] = gauss(rng);
  } while (z[0] == 0.0 && z[1] == 0.0);
  bool zero4;
  do {
    zero4 = true;
    for (std::size_t i = kSize4Begin; i < kSize4End; ++i) {
      z[i] = gauss(rng);
      zero4 = zero4 && z[i] == 0.0;
    }
  } while (zero4);
  return normalize(std::span<const double, kNumPatterns>(z));
}

}  // namespace

SignificanceProfile random_profile(std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return draw_profile(rng);
}

std::vector<BaselineRate> baseline_rates(std::span<const double> thetas, std::size_t n_sims, std::uint64_t seed,
                                         BaselineMode mode, std::span<const SignificanceProfile> truths,
                                         const WorkerPool* pool) {
  if (n_sims < 10000) throw std::invalid_argument("baseline_rates needs at least 1e4 simulations");
  if (mode == BaselineMode::SphereVsDataset && truths.empty())
    throw std::invalid_argument("dataset baseline needs at least one truth profile");
  for (double th : thetas)
    if (!(th > 0.0 && th <= 0.5)) throw std::invalid_argument("theta must lie in (0, 0.5]");

  constexpr std::size_t kBlock = 1 << 15;
  const std::size_t blocks = (n_sims + kBlock - 1) / kBlock;
  std::vector<std::vector<std::size_t>> hits(blocks, std::vector<std::size_t>(thetas.size(), 0));
  parallel_for(pool, blocks, [&](std::size_t b) {
    Rng rng = make_rng(derive_seed({seed, b}));
    const std::size_t end = std::min(n_sims, (b + 1) * kBlock);
    for (std::size_t s = b * kBlock; s < end; ++s) {
      const SignificanceProfile truth = mode == BaselineMode::SphereVsSphere
                                            ? draw_profile(rng)
                                            : truths[uniform_index(rng, truths.size())];
      const SignificanceProfile guess = draw_profile(rng);
      for (std::size_t k = 0; k < thetas.size(); ++k)
        if (is_correct(guess, truth, thetas[k])) ++hits[b][k];
    }
  });
  std::vector<BaselineRate> out;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    BaselineRate r;
    r.theta = thetas[k];
    r.sims = n_sims;
    for (const auto& h : hits) r.hits += h[k];
    out.push_back(r);
  }
  return out;
}

std::size_t AgreementMatrix::row_sum(std::size_t r) const {
  std::size_t s = 0;
  for (auto c : counts.at(r)) s += c;
  return s;
}

std::size_t AgreementMatrix::at(Family truth, Family matched) const {
  auto pos = [&](Family f) {
    auto it = std::find(families.begin(), families.end(), f);
    if (it == families.end()) throw std::out_of_range("family not in matrix");
    return static_cast<std::size_t>(it - families.begin());
  };
  return counts[pos(truth)][pos(matched)];
}

AgreementMatrix agreement_heatmap(std::span<const SignificanceProfile> preds, std::span<const Family> true_families,
                                  const std::map<Family, std::vector<ReferenceProfile>>& index) {
  if (preds.size() != true_families.size()) throw std::invalid_argument("agreement_heatmap: inputs are not aligned");
  struct Ref {
    const std::string* id;
    Family family;
    const SignificanceProfile* sp;
  };
  std::vector<Ref> refs;
  for (const auto& [f, list] : index)
    for (const auto& r : list) refs.push_back({&r.id, f, &r.sp});
  if (refs.empty()) throw std::invalid_argument("agreement_heatmap: empty reference index");
  std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) { return *a.id < *b.id; });

  AgreementMatrix h;
  for (const auto& [f, list] : index) h.families.push_back(f);
  for (Family f : true_families)
    if (std::find(h.families.begin(), h.families.end(), f) == h.families.end()) h.families.push_back(f);
  std::sort(h.families.begin(), h.families.end());
  const std::size_t F = h.families.size();
  h.counts.assign(F, std::vector<std::size_t>(F, 0));
  auto pos = [&](Family f) {
    return static_cast<std::size_t>(std::find(h.families.begin(), h.families.end(), f) - h.families.begin());
  };

  for (std::size_t i = 0; i < preds.size(); ++i) {
    const Ref* best = nullptr;
    double best_d = 0.0;
    for (const auto& r : refs) {
      const double d = sp_distance(preds[i], *r.sp);
      if (!best || d < best_d) {
        best = &r;
        best_d = d;
      }
    }
    ++h.counts[pos(true_families[i])][pos(best->family)];
  }
  return h;
}

AgreementMatrix agreement_heatmap(const TrainedModel& model, std::span<const DatasetRecord> test_records,
                                  std::span<const Graph> test_graphs,
                                  const std::map<Family, std::vector<ReferenceProfile>>& index) {
  if (test_records.size() != test_graphs.size())
    throw std::invalid_argument("agreement_heatmap: records and graphs are not aligned");
  std::vector<SignificanceProfile> preds;
  std::vector<Family> fams;
  for (std::size_t i = 0; i < test_records.size(); ++i) {
    preds.push_back(as_profile(predict(model, test_graphs[i])));
    fams.push_back(test_records[i].family);
  }
  return agreement_heatmap(preds, fams, index);
}

double nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("nearest_rank: empty input");
  if (!(q > 0.0 && q <= 100.0)) throw std::invalid_argument("percentile must lie in (0, 100]");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(values.size())));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

PercentileReport error_percentiles(std::span<const SignificanceProfile> preds,
                                   std::span<const SignificanceProfile> truths, ErrorMetric metric) {
  if (preds.size() != truths.size()) throw std::invalid_argument("error_percentiles: inputs are not aligned");
  if (preds.empty()) throw std::invalid_argument("error_percentiles: empty input");
  PercentileReport rep;
  rep.metric = metric;
  for (std::size_t k = 0; k < kNumPatterns; ++k) {
    std::vector<double> errs(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const double d = preds[i].s[k] - truths[i].s[k];
      errs[i] = metric == ErrorMetric::Squared ? d * d : std::abs(d);
    }
    std::sort(errs.begin(), errs.end());
    for (std::size_t j = 0; j < kPercentiles.size(); ++j) rep.values[k][j] = nearest_rank(errs, kPercentiles[j]);
  }
  return rep;
}

std::map<Family, CountMoments> count_moments(std::span<const DatasetRecord> records) {
  std::map<Family, std::vector<const DatasetRecord*>> groups;
  for (const auto& r : records) groups[r.family].push_back(&r);
  std::map<Family, CountMoments> out;
  for (const auto& [f, list] : groups) {
    CountMoments m;
    const auto N = static_cast<double>(list.size());
    for (std::size_t k = 0; k < kNumPatterns; ++k) {
      double mean = 0.0;
      for (auto* r : list) mean += std::log1p(static_cast<double>(r->counts.values[k]));
      mean /= N;
      double var = 0.0;
      for (auto* r : list) {
        const double d = std::log1p(static_cast<double>(r->counts.values[k])) - mean;
        var += d * d;
      }
      m.mean[k] = mean;
      m.var[k] = var / N;
    }
    out[f] = m;
  }
  return out;
}

std::vector<SignificanceProfile> approx_sp_from_counts(std::span<const double> log_counts,
                                                       const CountMoments& dataset_stats,
                                                       std::span<const double> residual_var) {
  if (log_counts.size() != kNumPatterns || residual_var.size() != kNumPatterns)
    throw std::invalid_argument("approx_sp_from_counts: expected 8 values");
  std::array<double, kNumPatterns> base{}, spread{};
  std::vector<std::size_t> free_axes;
  for (std::size_t k = 0; k < kNumPatterns; ++k) {
    if (!(residual_var[k] >= 0.0)) throw std::invalid_argument("residual variance must be >= 0");
    const double vy = dataset_stats.var[k], vz = residual_var[k];
    const double centered = log_counts[k] - dataset_stats.mean[k];
    const double denom = std::sqrt(vy * vy + vz * vz);
    if (denom == 0.0) {
      base[k] = centered > 0.0 ? 1.0 : (centered < 0.0 ? -1.0 : 0.0);
      continue;
    }
    base[k] = centered / denom;
    spread[k] = std::sqrt(vz) / denom;
    if (spread[k] > 0.0) free_axes.push_back(k);
  }
  std::vector<SignificanceProfile> out;
  const std::size_t combos = std::size_t{1} << free_axes.size();
  out.reserve(combos);
  for (std::size_t mask = 0; mask < combos; ++mask) {
    std::array<double, kNumPatterns> z = base;
    for (std::size_t b = 0; b < free_axes.size(); ++b) {
      const std::size_t k = free_axes[b];
      z[k] += (mask >> b & 1) ? -spread[k] : spread[k];
    }
    out.push_back(normalize(std::span<const double, kNumPatterns>(z)));
  }
  return out;
}

std::size_t closest_candidate(std::span<const SignificanceProfile> candidates, const SignificanceProfile& truth) {
  if (candidates.empty()) throw std::invalid_argument("closest_candidate: no candidates");
  std::size_t best = 0;
  double best_d = sp_distance(candidates[0], truth);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double d = sp_distance(candidates[i], truth);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

Speedup speedup_report(std::span<const RunTime> task_a, std::span<const RunTime> task_b) {
  RunTime a, b;
  for (const auto& t : task_a) {
    a.wall_seconds += t.wall_seconds;
    a.core_seconds += t.core_seconds;
  }
  for (const auto& t : task_b) {
    b.wall_seconds += t.wall_seconds;
    b.core_seconds += t.core_seconds;
  }
  if (!(b.wall_seconds > 0.0) || !(b.core_seconds > 0.0))
    throw std::invalid_argument("speedup_report: reference totals must be positive");
  return {a.wall_seconds / b.wall_seconds, a.core_seconds / b.core_seconds};
}

std::string to_csv(const ThresholdTable& t) {
  std::string out = "family,theta,correct,incorrect\n";
  for (const auto& [f, row] : t.rows)
    for (std::size_t k = 0; k < t.thetas.size(); ++k)
      out += std::string(name_of(f)) + ',' + format_real(t.thetas[k]) + ',' + std::to_string(row[k].correct) + ',' +
             std::to_string(row[k].incorrect) + '\n';
  return out;
}

std::string to_csv(std::span<const BaselineRate> rates) {
  std::string out = "theta,hits,sims,rate\n";
  for (const auto& r : rates)
    out += format_real(r.theta) + ',' + std::to_string(r.hits) + ',' + std::to_string(r.sims) + ',' +
           format_real(r.rate()) + '\n';
  return out;
}

std::string to_csv(const AgreementMatrix& h) {
  std::string out = "true_family";
  for (Family f : h.families) out += ',' + std::string(name_of(f));
  out += '\n';
  for (std::size_t r = 0; r < h.families.size(); ++r) {
    out += std::string(name_of(h.families[r]));
    for (auto c : h.counts[r]) out += ',' + std::to_string(c);
    out += '\n';
  }
  return out;
}

std::string to_csv(const PercentileReport& r) {
  std::string out = "pattern,p25,p50,p75,p95,p100\n";
  for (std::size_t k = 0; k < kNumPatterns; ++k) {
    out += std::string(kPatternNames[k]);
    for (double v : r.values[k]) out += ',' + format_real(v);
    out += '\n';
  }
  return out;
}

std::string to_text(const AgreementMatrix& h) {
  std::size_t w = 5;
  for (Family f : h.families) w = std::max(w, name_of(f).size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "" << ' ';
  for (std::size_t c = 0; c < h.families.size(); ++c) os << std::right << std::setw(6) << c;
  os << '\n';
  for (std::size_t r = 0; r < h.families.size(); ++r) {
    os << std::left << std::setw(static_cast<int>(w)) << name_of(h.families[r]) << ' ';
    for (auto c : h.counts[r]) os << std::right << std::setw(6) << c;
    os << "  [" << r << "]\n";
  }
  return os.str();
}

std::string to_json(const ThresholdTable& t) {
  json j;
  j["thetas"] = t.thetas;
  json rows = json::object();
  for (const auto& [f, row] : t.rows) {
    json cells = json::array();
    for (const auto& c : row) cells.push_back({{"correct", c.correct}, {"incorrect", c.incorrect}});
    rows[std::string(name_of(f))] = cells;
  }
  j["rows"] = rows;
  return j.dump();
}

std::string to_json(std::span<const BaselineRate> rates) {
  json j = json::array();
  for (const auto& r : rates) j.push_back({{"theta", r.theta}, {"hits", r.hits}, {"sims", r.sims}, {"rate", r.rate()}});
  return j.dump();
}

std::string to_json(const AgreementMatrix& h) {
  json j;
  std::vector<std::string> names;
  for (Family f : h.families) names.emplace_back(name_of(f));
  j["families"] = names;
  j["counts"] = h.counts;
  return j.dump();
}

std::string to_json(const PercentileReport& r) {
  json j;
  j["metric"] = r.metric == ErrorMetric::Squared ? "squared" : "absolute";
  j["percentiles"] = kPercentiles;
  json vals = json::object();
  for (std::size_t k = 0; k < kNumPatterns; ++k) vals[std::string(kPatternNames[k])] = r.values[k];
  j["values"] = vals;
  return j.dump();
}

}  // namespace motifsp

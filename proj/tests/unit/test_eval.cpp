#include <cmath>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "motifsp/dataset.hpp"
#include "motifsp/eval.hpp"
#include "motifsp/parallel.hpp"
#include "support.hpp"

using namespace motifsp;

namespace {

SignificanceProfile sp_of(std::array<double, kNumPatterns> v) {
  SignificanceProfile s;
  s.s = v;
  return s;
}

SignificanceProfile negate(SignificanceProfile s) {
  for (auto& v : s.s) v = -v;
  return s;
}

std::vector<SignificanceProfile> random_profiles(std::size_t n, std::uint64_t seed) {
  std::vector<SignificanceProfile> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_profile(seed + i));
  return out;
}

// 95% Wilson score interval.
std::pair<double, double> wilson(std::size_t hits, std::size_t n) {
  const double z = 1.959963984540054, p = static_cast<double>(hits) / n, nn = static_cast<double>(n);
  const double centre = (p + z * z / (2 * nn)) / (1 + z * z / nn);
  const double half = z / (1 + z * z / nn) * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn));
  return {centre - half, centre + half};
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("random profiles are valid") {
    for (std::uint64_t s = 0; s < 200; ++s) {
      auto p = random_profile(s);
      CHECK(validate_profile(p).empty());
      auto n = group_norms2(p.s);
      CHECK(n[0] == doctest::Approx(1.0));
      CHECK(n[1] == doctest::Approx(1.0));
    }
    CHECK(random_profile(4) == random_profile(4));
  }

  TEST_CASE("threshold table examples") {
    auto truths = random_profiles(12, 10);
    std::vector<Family> fams;
    for (std::size_t i = 0; i < 12; ++i) fams.push_back(i < 5 ? Family::Star : Family::Dgm);

    auto exact = threshold_table(truths, truths, fams);
    CHECK(exact.thetas == std::vector<double>(kDefaultThetas.begin(), kDefaultThetas.end()));
    CHECK(exact.rows.size() == 2);
    for (const auto& [f, cells] : exact.rows)
      for (const auto& c : cells) {
        CHECK(c.incorrect == 0);
        CHECK(c.correct == (f == Family::Star ? 5u : 7u));
      }

    std::vector<SignificanceProfile> neg;
    for (const auto& t : truths) neg.push_back(negate(t));
    auto wrong = threshold_table(neg, truths, fams);
    for (const auto& [f, cells] : wrong.rows)
      for (const auto& c : cells) CHECK(c.correct == 0);

    std::vector<SignificanceProfile> short_preds(truths.begin(), truths.begin() + 3);
    CHECK_THROWS_AS(threshold_table(short_preds, truths, fams), std::invalid_argument);
  }

  TEST_CASE("threshold table is monotone and accounts for every record") {
    auto truths = random_profiles(300, 1000);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> noise(0.0, 0.15);
    std::vector<SignificanceProfile> preds;
    std::vector<Family> fams;
    for (std::size_t i = 0; i < truths.size(); ++i) {
      auto p = truths[i];
      for (auto& v : p.s) v += noise(rng);
      preds.push_back(p);
      fams.push_back(static_cast<Family>(i % 4));
    }
    auto t = threshold_table(preds, truths, fams);
    for (const auto& [f, cells] : t.rows) {
      for (std::size_t k = 0; k < cells.size(); ++k) {
        CHECK(cells[k].correct + cells[k].incorrect == 75);
        if (k) CHECK(cells[k].correct >= cells[k - 1].correct);
      }
    }
  }

  TEST_CASE("baseline at theta 0.5 matches the sign-only rate") {
    WorkerPool pool(4);
    const std::vector<double> th{0.5};
    auto r = baseline_rates(th, 200000, 7, BaselineMode::SphereVsSphere, {}, &pool);
    REQUIRE(r.size() == 1);
    auto [lo, hi] = wilson(r[0].hits, r[0].sims);
    INFO("rate " << r[0].rate());
    CHECK(lo <= 1.0 / 256);
    CHECK(hi >= 1.0 / 256);
  }

  TEST_CASE("baseline is pool independent and validated") {
    const std::vector<double> th{0.05, 0.1, 0.25, 0.5};
    auto a = baseline_rates(th, 20000, 3);
    WorkerPool pool(3);
    auto b = baseline_rates(th, 20000, 3, BaselineMode::SphereVsSphere, {}, &pool);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].hits == b[i].hits);
      CHECK(a[i].sims == 20000);
      if (i) CHECK(a[i].hits >= a[i - 1].hits);
    }
    CHECK_THROWS_AS(baseline_rates(th, 9999, 3), std::invalid_argument);
    CHECK_THROWS_AS(baseline_rates(th, 20000, 3, BaselineMode::SphereVsDataset), std::invalid_argument);
    const std::vector<double> tiny{1e-6};
    CHECK(baseline_rates(tiny, 20000, 1)[0].hits == 0);
  }

  TEST_CASE("baseline against dataset truths") {
    auto truths = random_profiles(50, 5);
    const std::vector<double> th{0.5};
    auto r = baseline_rates(th, 100000, 9, BaselineMode::SphereVsDataset, truths);
    CHECK(r[0].sims == 100000);
    CHECK(r[0].rate() < 0.02);
  }

  TEST_CASE("agreement heatmap") {
    std::vector<DatasetRecord> recs;
    auto profiles = random_profiles(9, 50);
    for (std::size_t i = 0; i < 9; ++i) {
      DatasetRecord r;
      r.id = "r" + std::to_string(i);
      r.family = static_cast<Family>(i % 3);
      r.sp = profiles[i];
      recs.push_back(r);
    }
    auto index = nearest_family_reference_profiles(recs);
    std::vector<Family> fams;
    for (const auto& r : recs) fams.push_back(r.family);

    auto perfect = agreement_heatmap(profiles, fams, index);
    REQUIRE(perfect.families.size() == 3);
    for (std::size_t r = 0; r < 3; ++r) {
      CHECK(perfect.row_sum(r) == 3);
      for (std::size_t c = 0; c < 3; ++c) CHECK(perfect.counts[r][c] == (r == c ? 3u : 0u));
    }

    std::vector<SignificanceProfile> constant(9, profiles[4]);
    auto flat = agreement_heatmap(constant, fams, index);
    for (std::size_t r = 0; r < 3; ++r) CHECK(flat.at(flat.families[r], recs[4].family) == 3);
    std::size_t nonzero_cols = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      std::size_t col = 0;
      for (std::size_t r = 0; r < 3; ++r) col += flat.counts[r][c];
      nonzero_cols += col > 0;
    }
    CHECK(nonzero_cols == 1);

    std::map<Family, std::vector<ReferenceProfile>> empty;
    CHECK_THROWS_AS(agreement_heatmap(profiles, fams, empty), std::invalid_argument);
  }

  TEST_CASE("heatmap ties go to the lowest id") {
    SignificanceProfile shared = random_profile(1);
    std::map<Family, std::vector<ReferenceProfile>> index;
    index[Family::Star] = {{"b", shared}};
    index[Family::Dgm] = {{"a", shared}};
    std::vector<SignificanceProfile> preds{shared};
    std::vector<Family> fams{Family::Star};
    auto h = agreement_heatmap(preds, fams, index);
    CHECK(h.at(Family::Star, Family::Dgm) == 1);
  }

  TEST_CASE("heatmap rows sum to family counts") {
    auto truths = random_profiles(60, 300);
    std::map<Family, std::vector<ReferenceProfile>> index;
    std::vector<Family> fams;
    std::map<Family, std::size_t> sizes;
    for (std::size_t i = 0; i < truths.size(); ++i) {
      Family f = static_cast<Family>(i % 5);
      index[f].push_back({"x" + std::to_string(1000 + i), truths[i]});
      fams.push_back(f);
      sizes[f]++;
    }
    auto preds = random_profiles(60, 900);
    auto h = agreement_heatmap(preds, fams, index);
    for (std::size_t r = 0; r < h.families.size(); ++r) CHECK(h.row_sum(r) == sizes[h.families[r]]);
  }

  TEST_CASE("nearest rank") {
    CHECK(nearest_rank({3, 1, 2, 4}, 50) == 2);
    CHECK(nearest_rank({3, 1, 2, 4}, 25) == 1);
    CHECK(nearest_rank({3, 1, 2, 4}, 100) == 4);
    CHECK(nearest_rank({5}, 25) == 5);
    CHECK(nearest_rank({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 95) == 10);
    CHECK_THROWS_AS(nearest_rank({}, 50), std::invalid_argument);
  }

  TEST_CASE("error percentiles") {
    auto truths = random_profiles(40, 7);
    auto same = error_percentiles(truths, truths, ErrorMetric::Squared);
    for (const auto& row : same.values)
      for (double v : row) CHECK(v == 0.0);

    std::vector<SignificanceProfile> one_t{truths[0]}, one_p{truths[1]};
    auto single = error_percentiles(one_p, one_t, ErrorMetric::Absolute);
    for (std::size_t k = 0; k < kNumPatterns; ++k)
      for (double v : single.values[k]) CHECK(v == std::abs(truths[1].s[k] - truths[0].s[k]));

    auto preds = random_profiles(40, 100);
    for (auto metric : {ErrorMetric::Squared, ErrorMetric::Absolute}) {
      auto r = error_percentiles(preds, truths, metric);
      for (const auto& row : r.values)
        for (std::size_t q = 1; q < row.size(); ++q) CHECK(row[q] >= row[q - 1]);
    }
    std::vector<SignificanceProfile> none;
    CHECK_THROWS(error_percentiles(none, none, ErrorMetric::Squared));
  }

  TEST_CASE("count moments") {
    std::vector<DatasetRecord> recs(4);
    for (std::size_t i = 0; i < 4; ++i) {
      recs[i].family = i < 2 ? Family::Star : Family::Dgm;
      recs[i].counts[PatternId::P3] = i == 0 ? 0 : (i == 1 ? 6 : 10);
    }
    auto m = count_moments(recs);
    REQUIRE(m.size() == 2);
    const double a = std::log1p(0.0), b = std::log1p(6.0);
    CHECK(m[Family::Star].mean[0] == doctest::Approx((a + b) / 2));
    CHECK(m[Family::Star].var[0] == doctest::Approx((b - a) * (b - a) / 4));
    CHECK(m[Family::Dgm].var[0] == 0.0);
  }

  TEST_CASE("count to profile approximation") {
    CountMoments st;
    for (std::size_t k = 0; k < kNumPatterns; ++k) {
      st.mean[k] = 2.0 + static_cast<double>(k);
      st.var[k] = 0.5 + 0.1 * static_cast<double>(k);
    }
    std::vector<double> y{3.0, 2.5, 5.5, 4.0, 6.5, 7.0, 7.2, 9.9};
    std::vector<double> zero_var(8, 0.0);
    auto single = approx_sp_from_counts(y, st, zero_var);
    REQUIRE(single.size() == 1);
    std::array<double, kNumPatterns> z{};
    for (std::size_t k = 0; k < kNumPatterns; ++k) z[k] = (y[k] - st.mean[k]) / st.var[k];
    auto expect = normalize(std::span<const double, kNumPatterns>(z));
    for (std::size_t k = 0; k < kNumPatterns; ++k) CHECK(single[0].s[k] == doctest::Approx(expect.s[k]));

    std::vector<double> at_mean(st.mean.begin(), st.mean.end());
    auto flat = approx_sp_from_counts(at_mean, st, zero_var);
    REQUIRE(flat.size() == 1);
    for (double v : flat[0].s) CHECK(v == 0.0);

    std::vector<double> var(8, 0.3);
    auto many = approx_sp_from_counts(y, st, var);
    CHECK(many.size() == 256);
    var[0] = var[5] = 0.0;
    CHECK(approx_sp_from_counts(y, st, var).size() == 64);
    for (const auto& c : many) CHECK(validate_profile(c).empty());

    // spread sign choice: with one free axis the two candidates differ only there
    std::vector<double> one_free(8, 0.0);
    one_free[2] = 0.16;
    auto two = approx_sp_from_counts(y, st, one_free);
    REQUIRE(two.size() == 2);
    const double denom = std::sqrt(st.var[2] * st.var[2] + 0.16 * 0.16);
    std::array<double, kNumPatterns> zp = z, zm = z;
    zp[2] = (y[2] - st.mean[2] + 0.4) / denom;
    zm[2] = (y[2] - st.mean[2] - 0.4) / denom;
    auto sp_plus = normalize(std::span<const double, kNumPatterns>(zp));
    auto sp_minus = normalize(std::span<const double, kNumPatterns>(zm));
    const bool ok = (sp_distance(two[0], sp_plus) < 1e-12 && sp_distance(two[1], sp_minus) < 1e-12) ||
                    (sp_distance(two[0], sp_minus) < 1e-12 && sp_distance(two[1], sp_plus) < 1e-12);
    CHECK(ok);

    CountMoments degenerate;
    auto signs = approx_sp_from_counts(y, degenerate, zero_var);
    REQUIRE(signs.size() == 1);
    CHECK(signs[0].s[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  }

  TEST_CASE("closest candidate") {
    auto c = random_profiles(5, 20);
    CHECK(closest_candidate(c, c[3]) == 3);
    std::vector<SignificanceProfile> dup{c[1], c[1]};
    CHECK(closest_candidate(dup, c[1]) == 0);
    std::vector<SignificanceProfile> none;
    CHECK_THROWS_AS(closest_candidate(none, c[0]), std::invalid_argument);
  }

  TEST_CASE("speedup") {
    std::vector<RunTime> a{{50, 800}, {50, 800}}, b{{0.5, 50}, {0.5, 50}};
    auto s = speedup_report(a, b);
    CHECK(s.speedup == doctest::Approx(100));
    CHECK(s.core_efficiency == doctest::Approx(16));
    auto eq = speedup_report(a, a);
    CHECK(eq.speedup == 1.0);
    std::vector<RunTime> zero{{0, 0}};
    CHECK_THROWS_AS(speedup_report(a, zero), std::invalid_argument);
  }

  TEST_CASE("report serialization") {
    auto truths = random_profiles(6, 1);
    std::vector<Family> fams(6, Family::Star);
    auto t = threshold_table(truths, truths, fams);
    auto csv = to_csv(t);
    CHECK(csv.rfind("family,theta,correct,incorrect\n", 0) == 0);
    CHECK(csv.find("star,0.05,6,0\n") != std::string::npos);
    CHECK(nlohmann::json::parse(to_json(t)).is_object());

    std::vector<BaselineRate> rates{{0.5, 4, 1000}};
    CHECK(to_csv(std::span<const BaselineRate>(rates)) == "theta,hits,sims,rate\n0.5,4,1000,0.004\n");

    auto pr = error_percentiles(truths, truths, ErrorMetric::Absolute);
    auto pcsv = to_csv(pr);
    CHECK(pcsv.rfind("pattern,p25,p50,p75,p95,p100\nP3,0,0,0,0,0\n", 0) == 0);

    std::map<Family, std::vector<ReferenceProfile>> index;
    index[Family::Star] = {{"a", truths[0]}};
    index[Family::Dgm] = {{"b", truths[1]}};
    std::vector<SignificanceProfile> preds{truths[0]};
    std::vector<Family> pf{Family::Star};
    auto h = agreement_heatmap(preds, pf, index);
    CHECK(to_csv(h).rfind("true_family,", 0) == 0);
    CHECK_FALSE(to_text(h).empty());
    CHECK(nlohmann::json::parse(to_json(h)).is_object());
  }
}

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "motifsp/dataset.hpp"
#include "motifsp/error.hpp"
#include "motifsp/nn.hpp"
#include "motifsp/parallel.hpp"
#include "motifsp/rng.hpp"
#include "support.hpp"

using namespace motifsp;

namespace {

ModelConfig small(Backbone b, JumpingKnowledge jk) {
  ModelConfig c;
  c.backbone = b;
  c.jumping_knowledge = jk;
  c.gnn_depth = 2;
  c.hidden_dim = 6;
  c.mlp_depth = 3;
  c.mlp_hidden_dim = 7;
  c.mlp_dropout = 0.0;
  return c;
}

// Perturbs eps away from 0 so its gradient is exercised on a generic point.
ModelParams generic_params(const ModelConfig& c, std::uint64_t seed) {
  auto p = init_params(c, seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (auto& v : p.values) v += 0.1 * u(rng);
  return p;
}

double batch_loss(const ModelParams& p, const ModelConfig& c, std::span<const Example> batch, bool train,
                  std::uint64_t seed) {
  double sum = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto y = forward(p, c, *batch[i].graph, train, derive_seed({seed, i}));
    sum += loss(y, batch[i].target);
  }
  return sum / static_cast<double>(batch.size());
}

std::vector<double> random_target(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> t(dim);
  for (auto& v : t) v = u(rng);
  return t;
}

struct Toy {
  std::vector<Graph> graphs;
  std::vector<DatasetRecord> records;
};

Toy toy_records(std::size_t count, std::uint64_t seed) {
  Toy t;
  NullConfig cfg;
  cfg.replicates = 20;
  for (std::size_t i = 0; i < count; ++i) {
    t.graphs.push_back(testsupport::gnp(12 + i % 8, 0.2 + 0.05 * static_cast<double>(i % 5), seed + i));
    cfg.base_seed = seed + i;
    t.records.push_back(label(t.graphs.back(), Family::ErdosRenyi, "r" + std::to_string(i), cfg));
  }
  return t;
}

}  // namespace

TEST_SUITE("nn") {
  TEST_CASE("config names") {
    CHECK(backbone_from_name("sage") == Backbone::Sage);
    CHECK(jk_from_name("max") == JumpingKnowledge::Max);
    CHECK_FALSE(backbone_from_name("gat").has_value());
    CHECK(name_of(Backbone::Gin) == "gin");
    CHECK(name_of(JumpingKnowledge::Cat) == "cat");
  }

  TEST_CASE("config checks") {
    ModelConfig c;
    CHECK(check_config(c).empty());
    CHECK(in_hyperspace(c));
    c.batch_size = 25;
    CHECK_FALSE(in_hyperspace(c));
    c.batch_size = 256;
    CHECK(in_hyperspace(c));
    c.mlp_dropout = 0.0;
    CHECK(check_config(c).empty());
    CHECK_FALSE(in_hyperspace(c));
    c.gnn_depth = 0;
    CHECK_FALSE(check_config(c).empty());
    for (std::uint64_t s = 0; s < 100; ++s) CHECK(in_hyperspace(sample_config(s)));
    CHECK(sample_config(3) == sample_config(3));
  }

  TEST_CASE("parameter layout size") {
    auto c = small(Backbone::Gin, JumpingKnowledge::Cat);
    // GIN layer: 1 + h*d + h + h*h + h; cat feeds 2*6 into M3
    const std::size_t gin = (1 + 6 * 1 + 6 + 36 + 6) + (1 + 36 + 6 + 36 + 6);
    const std::size_t head = (12 * 7 + 7) + (7 * 7 + 7) + (7 * 8 + 8);
    CHECK(parameter_count(c) == gin + head);
    CHECK(init_params(c, 1).values.size() == parameter_count(c));
    auto s = small(Backbone::Sage, JumpingKnowledge::Max);
    const std::size_t sage = (6 + 6 + 6) + (36 + 36 + 6);
    const std::size_t head_max = (6 * 7 + 7) + (7 * 7 + 7) + (7 * 8 + 8);
    CHECK(parameter_count(s) == sage + head_max);
  }

  TEST_CASE("init is seeded and bounded") {
    auto c = small(Backbone::Sage, JumpingKnowledge::Cat);
    auto a = init_params(c, 5);
    CHECK(a == init_params(c, 5));
    CHECK_FALSE(a == init_params(c, 6));
    for (double v : a.values) CHECK(std::abs(v) <= 1.0 / std::sqrt(2.0));
    auto g = init_params(small(Backbone::Gin, JumpingKnowledge::Cat), 5);
    CHECK(g.values[0] == 0.0);  // eps of layer 0
  }

  TEST_CASE("loss examples") {
    std::vector<double> t{0.5, -0.5, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    CHECK(loss(t, t) == 0.0);
    auto shifted = t;
    for (auto& v : shifted) v += 0.1;
    CHECK(loss(shifted, t) == doctest::Approx(0.01));
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<double> unit{r, -r, 0.6, 0.8, 0, 0, 0, 0};
    std::vector<double> neg;
    for (double v : unit) neg.push_back(-v);
    CHECK(loss(neg, unit) == doctest::Approx(1.0));
  }

  TEST_CASE("empty graph maps to the head bias path") {
    for (auto b : {Backbone::Gin, Backbone::Sage})
      for (auto jk : {JumpingKnowledge::Max, JumpingKnowledge::Cat}) {
        auto c = small(b, jk);
        auto p = init_params(c, 2);
        Graph empty = testsupport::make(0, {});
        auto pooled = pooled_embedding(p, c, empty);
        for (double v : pooled) CHECK(v == 0.0);
        // every graph without nodes gives the same output
        CHECK(forward(p, c, empty) == forward(p, c, testsupport::make(0, {})));
        CHECK(forward(p, c, empty).size() == 8);
      }
  }

  TEST_CASE("permutation invariance") {
    for (auto b : {Backbone::Gin, Backbone::Sage})
      for (auto jk : {JumpingKnowledge::Max, JumpingKnowledge::Cat}) {
        auto c = small(b, jk);
        auto p = generic_params(c, 11);
        for (std::uint64_t s = 0; s < 5; ++s) {
          Graph g = testsupport::gnp(25, 0.2, s);
          Graph h = relabel(g, testsupport::random_perm(25, s + 100));
          auto a = forward(p, c, g), bb = forward(p, c, h);
          for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(bb[k]).epsilon(1e-9));
        }
      }
  }

  TEST_CASE("add pooling is additive over disjoint unions") {
    for (auto b : {Backbone::Gin, Backbone::Sage}) {
      auto c = small(b, JumpingKnowledge::Cat);
      auto p = generic_params(c, 4);
      Graph g1 = testsupport::gnp(15, 0.3, 1), g2 = testsupport::gnp(10, 0.4, 2);
      auto a = pooled_embedding(p, c, g1), bb = pooled_embedding(p, c, g2);
      auto u = pooled_embedding(p, c, disjoint_union(g1, g2));
      for (std::size_t k = 0; k < u.size(); ++k) CHECK(u[k] == doctest::Approx(a[k] + bb[k]).epsilon(1e-9));
      auto twice = pooled_embedding(p, c, disjoint_union(g1, g1));
      for (std::size_t k = 0; k < twice.size(); ++k) CHECK(twice[k] == doctest::Approx(2 * a[k]).epsilon(1e-9));
      CHECK_FALSE(forward(p, c, disjoint_union(g1, g1)) == forward(p, c, g1));
    }
  }

  TEST_CASE("forward is deterministic without dropout and seeded with it") {
    auto c = small(Backbone::Gin, JumpingKnowledge::Max);
    c.gnn_dropout = 0.3;
    c.mlp_dropout = 0.3;
    auto p = init_params(c, 1);
    Graph g = testsupport::gnp(20, 0.3, 3);
    CHECK(forward(p, c, g) == forward(p, c, g));
    CHECK(forward(p, c, g, true, 9) == forward(p, c, g, true, 9));
    CHECK_FALSE(forward(p, c, g, true, 9) == forward(p, c, g, true, 10));
  }

  TEST_CASE("gradients match central differences") {
    const double h = 1e-5;
    std::size_t checked = 0;
    for (auto b : {Backbone::Gin, Backbone::Sage})
      for (auto jk : {JumpingKnowledge::Max, JumpingKnowledge::Cat})
        for (bool train : {false, true}) {
          auto c = small(b, jk);
          if (train) {
            c.gnn_dropout = 0.25;
            c.mlp_dropout = 0.25;
          }
          auto p = generic_params(c, 21);
          std::vector<Graph> graphs{testsupport::gnp(9, 0.35, 1), testsupport::gnp(12, 0.25, 2),
                                    testsupport::make(5, {{0, 1}, {1, 2}})};
          std::vector<Example> batch;
          for (std::size_t i = 0; i < graphs.size(); ++i) batch.push_back({&graphs[i], random_target(8, i)});
          const std::uint64_t seed = 77;
          auto lg = backward(p, c, batch, train, seed);
          CHECK(lg.loss == doctest::Approx(batch_loss(p, c, batch, train, seed)).epsilon(1e-12));
          REQUIRE(lg.grad.size() == p.values.size());
          std::mt19937_64 rng(5);
          for (int k = 0; k < 40; ++k) {
            const std::size_t idx = k < 2 ? static_cast<std::size_t>(k) : rng() % p.values.size();
            auto plus = p, minus = p;
            plus.values[idx] += h;
            minus.values[idx] -= h;
            const double num = (batch_loss(plus, c, batch, train, seed) - batch_loss(minus, c, batch, train, seed)) / (2 * h);
            const double ana = lg.grad[idx];
            const double rel = std::abs(num - ana) / std::max({std::abs(num), std::abs(ana), 1e-6});
            INFO(name_of(b) << "/" << name_of(jk) << " train=" << train << " idx=" << idx << " num=" << num << " ana=" << ana);
            CHECK(rel < 1e-4);
            ++checked;
          }
        }
    CHECK(checked >= 100);
  }

  TEST_CASE("zero gradient at a loss-zero point") {
    auto c = small(Backbone::Gin, JumpingKnowledge::Cat);
    auto p = generic_params(c, 3);
    Graph g = testsupport::gnp(10, 0.3, 8);
    std::vector<Example> batch{{&g, forward(p, c, g)}};
    auto lg = backward(p, c, batch);
    CHECK(lg.loss == 0.0);
    for (double v : lg.grad) CHECK(v == 0.0);
  }

  TEST_CASE("duplicated batch entry keeps the mean gradient") {
    auto c = small(Backbone::Sage, JumpingKnowledge::Max);
    auto p = generic_params(c, 3);
    Graph g = testsupport::gnp(10, 0.3, 8);
    std::vector<Example> one{{&g, random_target(8, 1)}};
    std::vector<Example> two{one[0], one[0]};
    auto a = backward(p, c, one), b = backward(p, c, two);
    CHECK(a.loss == doctest::Approx(b.loss).epsilon(1e-15));
    for (std::size_t k = 0; k < a.grad.size(); ++k) CHECK(a.grad[k] == doctest::Approx(b.grad[k]).epsilon(1e-12));
  }

  TEST_CASE("backward is independent of pool width") {
    auto c = small(Backbone::Gin, JumpingKnowledge::Max);
    c.gnn_dropout = 0.2;
    auto p = generic_params(c, 3);
    std::vector<Graph> graphs;
    for (std::uint64_t s = 0; s < 9; ++s) graphs.push_back(testsupport::gnp(15, 0.2, s));
    std::vector<Example> batch;
    for (std::size_t i = 0; i < graphs.size(); ++i) batch.push_back({&graphs[i], random_target(8, i)});
    auto serial = backward(p, c, batch, true, 4);
    WorkerPool pool(4);
    auto par = backward(p, c, batch, true, 4, &pool);
    CHECK(par.loss == serial.loss);
    CHECK(par.grad == serial.grad);
  }

  TEST_CASE("zero learning rate leaves parameters unchanged") {
    auto toy = toy_records(6, 10);
    auto c = small(Backbone::Gin, JumpingKnowledge::Cat);
    c.learning_rate = 0.0;
    c.epochs = 5;
    c.batch_size = 2;
    std::span<const DatasetRecord> recs(toy.records);
    std::span<const Graph> gs(toy.graphs);
    auto m = train_profile(recs.subspan(0, 4), gs.subspan(0, 4), recs.subspan(4), gs.subspan(4), c);
    CHECK(m.params == init_params(c, derive_seed({c.seed, 0x1417})));
    REQUIRE(m.report.valid_mse.size() == 5);
    for (double v : m.report.valid_mse) CHECK(v == m.report.valid_mse[0]);
  }

  TEST_CASE("overfits a single record") {
    auto toy = toy_records(1, 40);
    // give the record a non-trivial target
    toy.records[0].sp.s = {0.70710678118654752, -0.70710678118654752, 0.5, -0.5, 0.5, 0.1, -0.3, 0.3};
    ModelConfig c;
    c.hidden_dim = 16;
    c.mlp_hidden_dim = 16;
    c.mlp_dropout = 0.0;
    c.learning_rate = 1e-2;
    c.batch_size = 16;
    c.epochs = 100;
    auto m = train_profile(toy.records, toy.graphs, toy.records, toy.graphs, c);
    CHECK(m.report.train_mse.back() < 1e-3);
    CHECK(loss(predict(m, toy.graphs[0]), toy.records[0].sp.s) < 1e-3);
  }

  TEST_CASE("training is reproducible") {
    auto toy = toy_records(12, 3);
    auto c = small(Backbone::Sage, JumpingKnowledge::Cat);
    c.mlp_dropout = 0.2;
    c.epochs = 6;
    c.batch_size = 4;
    std::span<const DatasetRecord> recs(toy.records);
    std::span<const Graph> gs(toy.graphs);
    auto a = train_profile(recs.subspan(0, 8), gs.subspan(0, 8), recs.subspan(8), gs.subspan(8), c);
    WorkerPool pool(3);
    auto b = train_profile(recs.subspan(0, 8), gs.subspan(0, 8), recs.subspan(8), gs.subspan(8), c, &pool);
    CHECK(a.params == b.params);
    CHECK(a.report.train_mse == b.report.train_mse);
    CHECK(a.report.valid_mse == b.report.valid_mse);
    CHECK(a.report.median_abs_error == b.report.median_abs_error);
    for (double v : a.report.train_mse) CHECK(std::isfinite(v));
    CHECK(a.report.max_abs_sum_error >= a.report.median_abs_error);
  }

  TEST_CASE("early stopping respects grace and patience") {
    auto toy = toy_records(6, 50);
    auto c = small(Backbone::Gin, JumpingKnowledge::Max);
    c.learning_rate = 0.0;  // validation never improves after the first epoch
    c.epochs = 100;
    c.grace_period = 25;
    c.patience = 25;
    std::span<const DatasetRecord> recs(toy.records);
    std::span<const Graph> gs(toy.graphs);
    auto m = train_profile(recs.subspan(0, 4), gs.subspan(0, 4), recs.subspan(4), gs.subspan(4), c);
    CHECK(m.report.early_stopped);
    // epochs count from 1; the first epoch is the best and 25 more follow
    CHECK(m.report.best_epoch == 1);
    CHECK(m.report.stopping_epoch == 26);
    CHECK(m.report.valid_mse.size() == 26);
  }

  TEST_CASE("training rejects empty splits") {
    auto c = small(Backbone::Gin, JumpingKnowledge::Max);
    std::vector<Example> none;
    Graph g = testsupport::path(3);
    std::vector<Example> one{{&g, random_target(8, 1)}};
    CHECK_THROWS_AS(train(none, one, c), std::invalid_argument);
    CHECK_THROWS_AS(train(one, none, c), std::invalid_argument);
    std::vector<Example> wrong{{&g, random_target(3, 1)}};
    CHECK_THROWS_AS(train(wrong, wrong, c), std::invalid_argument);
  }

  TEST_CASE("divergence is reported") {
    auto c = small(Backbone::Gin, JumpingKnowledge::Max);
    Graph g = testsupport::path(3);
    std::vector<Example> bad{{&g, std::vector<double>(8, std::numeric_limits<double>::infinity())}};
    CHECK_THROWS_AS(train(bad, bad, c), DivergenceError);
  }

  TEST_CASE("single target heads") {
    auto toy = toy_records(6, 70);
    auto c = small(Backbone::Gin, JumpingKnowledge::Cat);
    c.epochs = 2;
    c.batch_size = 2;
    std::span<const DatasetRecord> recs(toy.records);
    std::span<const Graph> gs(toy.graphs);
    for (auto pat : kAllPatterns) {
      auto ex = single_pattern_examples(recs, gs, pat);
      REQUIRE(ex.size() == 6);
      for (std::size_t i = 0; i < 6; ++i) {
        REQUIRE(ex[i].target.size() == 1);
        CHECK(ex[i].target[0] == toy.records[i].sp[pat]);
      }
    }
    auto m = train_single_target(recs.subspan(0, 4), gs.subspan(0, 4), recs.subspan(4), gs.subspan(4), c, PatternId::TRI);
    CHECK(m.config.output_dim == 1);
    CHECK(m.target == TargetKind::SinglePattern);
    CHECK(m.pattern == PatternId::TRI);
    CHECK(predict(m, toy.graphs[0]).size() == 1);
  }

  TEST_CASE("count target statistics") {
    auto toy = toy_records(8, 90);
    // trees have no triangles, so TRI, PAW, DIAMOND, C4?, K4 counts are zero
    for (std::size_t i = 0; i < 8; ++i) {
      toy.graphs[i] = testsupport::path(5 + i);
      NullConfig cfg;
      cfg.replicates = 5;
      toy.records[i] = label(toy.graphs[i], Family::BalancedTree, "t" + std::to_string(i), cfg);
    }
    auto ex = log_count_examples(toy.records, toy.graphs);
    for (std::size_t i = 0; i < ex.size(); ++i)
      for (std::size_t k = 0; k < kNumPatterns; ++k) {
        CHECK(ex[i].target[k] == std::log1p(static_cast<double>(toy.records[i].counts.values[k])));
        CHECK(std::expm1(ex[i].target[k]) == doctest::Approx(static_cast<double>(toy.records[i].counts.values[k])));
      }
    auto c = small(Backbone::Gin, JumpingKnowledge::Cat);
    c.epochs = 100;
    c.learning_rate = 1e-2;
    c.batch_size = 16;
    std::span<const DatasetRecord> recs(toy.records);
    std::span<const Graph> gs(toy.graphs);
    auto m = train_count_target(recs.subspan(0, 6), gs.subspan(0, 6), recs.subspan(6), gs.subspan(6), c);
    CHECK(m.target == TargetKind::LogCounts);
    REQUIRE(m.residual_mean.size() == 8);
    REQUIRE(m.residual_var.size() == 8);
    // independent residual recomputation
    for (std::size_t k = 0; k < kNumPatterns; ++k) {
      double mean = 0, sq = 0;
      for (std::size_t i = 0; i < 6; ++i) {
        double r = predict(m, toy.graphs[i])[k] - std::log1p(static_cast<double>(toy.records[i].counts.values[k]));
        mean += r / 6;
        sq += r * r / 6;
      }
      CHECK(m.residual_mean[k] == doctest::Approx(mean).epsilon(1e-9));
      CHECK(m.residual_var[k] == doctest::Approx(sq - mean * mean).epsilon(1e-9));
      CHECK(m.residual_var[k] >= 0.0);
    }
    CHECK(m.residual_var[index_of(PatternId::K4)] < 0.05);
  }

  TEST_CASE("checkpoint round trip") {
    auto toy = toy_records(5, 5);
    auto c = small(Backbone::Sage, JumpingKnowledge::Max);
    c.epochs = 2;
    c.batch_size = 2;
    std::span<const DatasetRecord> recs(toy.records);
    std::span<const Graph> gs(toy.graphs);
    auto m = train_count_target(recs.subspan(0, 3), gs.subspan(0, 3), recs.subspan(3), gs.subspan(3), c);
    std::stringstream io;
    save_model(m, io);
    auto back = load_model(io);
    CHECK(back.config == m.config);
    CHECK(back.params == m.params);
    CHECK(back.target == m.target);
    CHECK(back.residual_mean == m.residual_mean);
    CHECK(back.residual_var == m.residual_var);
    CHECK(back.report.valid_mse == m.report.valid_mse);
    CHECK(predict(back, toy.graphs[0]) == predict(m, toy.graphs[0]));

    std::istringstream junk("{\"format\": \"other\"}");
    CHECK_THROWS_AS(load_model(junk), DataError);
    std::istringstream broken("{");
    CHECK_THROWS_AS(load_model(broken), DataError);
  }
}

#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "motifsp/census.hpp"
#include "motifsp/dataset.hpp"
#include "motifsp/error.hpp"
#include "motifsp/eval.hpp"
#include "motifsp/generators.hpp"
#include "motifsp/graph.hpp"
#include "motifsp/nn.hpp"
#include "motifsp/nullmodel.hpp"
#include "motifsp/parallel.hpp"
#include "motifsp/sp.hpp"

#ifndef MOTIFSP_VERSION
#define MOTIFSP_VERSION "0.0.0"
#endif

namespace motifsp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 42;
  std::size_t threads = 0;
  std::string out_dir = ".";
  std::string format = "csv";
};

struct GenerateOpts {
  std::string config;
  std::string family;
  std::size_t count = 1;
  std::size_t n_min = 50;
  std::size_t n_max = 2000;
};

struct NullOpts {
  std::size_t replicates = 500;
  double swaps_factor = 10.0;
  double cap = 1e6;
};

struct TrainOpts {
  std::string data;
  std::string target = "profile";
  std::string pattern;
  std::string model_out = "model.json";
  std::string backbone = "gin";
  std::string jk = "cat";
  ModelConfig config;
};

struct EvalOpts {
  std::string data;
  std::string model;
  std::string count_model;
  std::string split = "test";
};

struct BaselineOpts {
  std::size_t sims = 1000000;
  std::vector<double> thetas{kDefaultThetas.begin(), kDefaultThetas.end()};
  std::string mode = "sphere";
  std::string data;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string header_row() {
  std::string h;
  for (std::size_t i = 0; i < kNumPatterns; ++i) {
    if (i) h += ',';
    h += kPatternNames[i];
  }
  return h + '\n';
}

std::string counts_row(const GraphletCounts& c) {
  std::string r;
  for (std::size_t i = 0; i < kNumPatterns; ++i) {
    if (i) r += ',';
    r += std::to_string(c.values[i]);
  }
  return r + '\n';
}

std::vector<PlanRow> parse_plan(const json& j, std::uint64_t default_seed) {
  const json& rows = j.is_array() ? j : j.at("rows");
  std::vector<PlanRow> plan;
  for (const auto& row : rows) {
    PlanRow p;
    const auto name = row.at("family").get<std::string>();
    auto f = family_from_name(name);
    if (!f) throw UsageError("unknown family '" + name + "'");
    p.family = *f;
    p.count = row.at("count").get<std::size_t>();
    const json& prof = row.contains("size_profile") ? row.at("size_profile") : row;
    p.profile.n_min = prof.value("n_min", p.profile.n_min);
    p.profile.n_max = prof.value("n_max", p.profile.n_max);
    p.profile.rewire_fraction = prof.value("rewire_fraction", p.profile.rewire_fraction);
    p.profile.gaussian_variance = prof.value("gaussian_variance", p.profile.gaussian_variance);
    p.profile.gaussian_attractiveness = prof.value("gaussian_attractiveness", p.profile.gaussian_attractiveness);
    if (p.profile.n_min > p.profile.n_max) throw UsageError("n_min exceeds n_max for " + name);
    p.base_seed = row.value("base_seed", default_seed);
    plan.push_back(p);
  }
  return plan;
}

std::vector<PlanRow> load_plan(const std::string& path, std::uint64_t default_seed) {
  try {
    return parse_plan(json::parse(read_text(path)), default_seed);
  } catch (const json::exception& e) {
    throw DataError("malformed plan " + path + ": " + e.what());
  }
}

std::string params_field(const GeneratorSpec& s) {
  std::string out;
  for (const auto& [k, v] : s.params) {
    if (!out.empty()) out += ';';
    out += k + '=' + format_real(v);
  }
  return out;
}

struct Dataset {
  fs::path root;
  std::vector<DatasetRecord> records;
  std::optional<SplitManifest> split;
};

Dataset load_dataset(const std::string& dir) {
  Dataset d;
  d.root = dir;
  d.records = read_jsonl_file(d.root / "records.jsonl");
  if (fs::exists(d.root / "split.json")) d.split = manifest_from_json(read_text(d.root / "split.json"));
  return d;
}

std::vector<Graph> load_graphs(const fs::path& root, std::span<const DatasetRecord> records, const WorkerPool& pool) {
  std::vector<Graph> graphs(records.size());
  parallel_for(&pool, records.size(), [&](std::size_t i) {
    graphs[i] = read_edge_list_file((root / records[i].edge_path).string(), records[i].n);
    if (graphs[i].num_edges() != records[i].m) throw DataError("edge count mismatch for " + records[i].id);
  });
  return graphs;
}

std::vector<DatasetRecord> split_part(const Dataset& d, const std::string& which) {
  if (!d.split) throw DataError("dataset has no split.json");
  if (which == "train") return select(d.records, d.split->train);
  if (which == "valid") return select(d.records, d.split->valid);
  if (which == "test") return select(d.records, d.split->test);
  throw UsageError("unknown split '" + which + "'");
}

std::array<double, 3> parse_ratios(const std::string& text) {
  std::array<double, 3> r{};
  std::stringstream ss(text);
  std::string part;
  std::size_t i = 0;
  while (std::getline(ss, part, ',')) {
    if (i == 3) throw UsageError("--split needs three comma-separated ratios");
    try {
      r[i++] = std::stod(part);
    } catch (const std::exception&) {
      throw UsageError("bad ratio '" + part + "'");
    }
  }
  if (i != 3) throw UsageError("--split needs three comma-separated ratios");
  return r;
}

json config_json(const ModelConfig& c) {
  return {{"backbone", std::string(name_of(c.backbone))},
          {"gnn_depth", c.gnn_depth},
          {"hidden_dim", c.hidden_dim},
          {"gnn_dropout", c.gnn_dropout},
          {"jumping_knowledge", std::string(name_of(c.jumping_knowledge))},
          {"mlp_depth", c.mlp_depth},
          {"mlp_hidden_dim", c.mlp_hidden_dim},
          {"mlp_dropout", c.mlp_dropout},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate},
          {"seed", c.seed}};
}

class Runner {
 public:
  Runner(const Globals& g, std::ostream& out, std::ostream& err)
      : g_(g), out_(out), err_(err), pool_(WorkerPool::resolve_threads(g.threads)) {
    if (g_.format != "csv" && g_.format != "json") throw UsageError("--format must be csv or json");
  }

  fs::path out_path(const std::string& name) const { return fs::path(g_.out_dir) / name; }
  bool json_out() const { return g_.format == "json"; }

  void generate_cmd(const GenerateOpts& o, json& cfg) {
    std::vector<PlanRow> plan;
    if (!o.config.empty()) {
      plan = load_plan(o.config, g_.seed);
    } else {
      if (o.family.empty()) throw UsageError("generate needs --config or --family");
      auto f = family_from_name(o.family);
      if (!f) throw UsageError("unknown family '" + o.family + "'");
      PlanRow r;
      r.family = *f;
      r.count = o.count;
      r.profile.n_min = o.n_min;
      r.profile.n_max = o.n_max;
      r.base_seed = g_.seed;
      plan.push_back(r);
    }
    const auto specs = plan_specs(plan);
    std::vector<Graph> graphs(specs.size());
    parallel_for(&pool_, specs.size(), [&](std::size_t i) { graphs[i] = motifsp::generate(specs[i].second); });
    fs::create_directories(out_path("graphs"));
    std::string manifest = "id,family,n,m,seed,params\n";
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto& [id, spec] = specs[i];
      write_edge_list_file(graphs[i], out_path("graphs/" + id + ".edges").string());
      manifest += id + ',' + std::string(name_of(spec.family)) + ',' + std::to_string(graphs[i].num_nodes()) + ',' +
                  std::to_string(graphs[i].num_edges()) + ',' + std::to_string(spec.seed) + ',' +
                  params_field(spec) + '\n';
    }
    write_text(out_path("generate_manifest.csv"), manifest);
    cfg["graphs"] = specs.size();
    out_ << "generated " << specs.size() << " graphs\n";
  }

  void census_cmd(const std::vector<std::string>& inputs, json& cfg) {
    std::vector<GraphletCounts> counts;
    for (const auto& path : inputs) counts.push_back(census(read_edge_list_file(path), &pool_));
    std::string text;
    if (json_out()) {
      json arr = json::array();
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        json row = {{"input", inputs[i]}};
        for (std::size_t k = 0; k < kNumPatterns; ++k) row[std::string(kPatternNames[k])] = counts[i].values[k];
        arr.push_back(row);
      }
      text = arr.dump() + '\n';
    } else {
      text = header_row();
      for (const auto& c : counts) text += counts_row(c);
    }
    write_text(out_path(json_out() ? "census.json" : "census.csv"), text);
    out_ << text;
    cfg["inputs"] = inputs;
  }

  void sp_cmd(const std::vector<std::string>& inputs, const NullOpts& n, json& cfg) {
    NullConfig nc;
    nc.replicates = n.replicates;
    nc.swaps_factor = n.swaps_factor;
    nc.cap = n.cap;
    nc.base_seed = g_.seed;
    std::vector<DatasetRecord> recs;
    for (const auto& path : inputs) {
      const Graph g = read_edge_list_file(path);
      recs.push_back(label(g, Family::ErdosRenyi, fs::path(path).stem().string(), nc, std::nullopt, &pool_));
    }
    std::string text;
    if (json_out()) {
      json arr = json::array();
      for (std::size_t i = 0; i < inputs.size(); ++i)
        arr.push_back({{"input", inputs[i]}, {"counts", recs[i].counts.values}, {"z", recs[i].z.z},
                       {"sp", recs[i].sp.s}});
      text = arr.dump() + '\n';
    } else {
      text = header_row();
      for (const auto& r : recs) text += to_csv_row(r.sp.s) + '\n';
    }
    write_text(out_path(json_out() ? "sp.json" : "sp.csv"), text);
    out_ << text;
    cfg["inputs"] = inputs;
    cfg["replicates"] = nc.replicates;
    cfg["swaps_factor"] = nc.swaps_factor;
    cfg["null_base_seed"] = nc.base_seed;
  }

  void dataset_cmd(const std::string& manifest, const NullOpts& n, const std::string& split_text, json& cfg) {
    const auto plan = load_plan(manifest, g_.seed);
    const auto ratios = parse_ratios(split_text);
    NullConfig nc;
    nc.replicates = n.replicates;
    nc.swaps_factor = n.swaps_factor;
    nc.cap = n.cap;
    nc.base_seed = g_.seed;
    const auto records = build_dataset(plan, nc, fs::path(g_.out_dir), &pool_);
    write_jsonl_file(records, out_path("records.jsonl"));
    const auto sm = split(records, ratios, g_.seed);
    write_text(out_path("split.json"), manifest_to_json(sm) + '\n');
    cfg["records"] = records.size();
    cfg["replicates"] = nc.replicates;
    cfg["swaps_factor"] = nc.swaps_factor;
    cfg["split"] = ratios;
    out_ << "labeled " << records.size() << " graphs: " << sm.train.size() << " train, " << sm.valid.size()
         << " valid, " << sm.test.size() << " test\n";
  }

  void train_cmd(TrainOpts o, json& cfg) {
    auto bb = backbone_from_name(o.backbone);
    auto jk = jk_from_name(o.jk);
    if (!bb) throw UsageError("--backbone must be gin or sage");
    if (!jk) throw UsageError("--jk must be max or cat");
    o.config.backbone = *bb;
    o.config.jumping_knowledge = *jk;
    o.config.seed = g_.seed;
    if (auto e = check_config(o.config); !e.empty()) throw UsageError(e);
    if (!in_hyperspace(o.config)) err_ << "note: configuration lies outside the published search space\n";

    const Dataset d = load_dataset(o.data);
    const auto tr = split_part(d, "train"), va = split_part(d, "valid");
    const auto tg = load_graphs(d.root, tr, pool_), vg = load_graphs(d.root, va, pool_);
    TrainedModel m;
    if (o.target == "profile") {
      m = train_profile(tr, tg, va, vg, o.config, &pool_);
    } else if (o.target == "counts") {
      m = train_count_target(tr, tg, va, vg, o.config, &pool_);
    } else if (o.target == "single") {
      auto p = pattern_from_name(o.pattern);
      if (!p) throw UsageError("--pattern must name one of P3,TRI,P4,S4,C4,PAW,DIAMOND,K4");
      m = train_single_target(tr, tg, va, vg, o.config, *p, &pool_);
    } else {
      throw UsageError("--target must be profile, single or counts");
    }
    save_model_file(m, out_path(o.model_out).string());
    std::string report = "epoch,train_mse,valid_mse\n";
    for (std::size_t e = 0; e < m.report.valid_mse.size(); ++e)
      report += std::to_string(e + 1) + ',' + format_real(m.report.train_mse[e]) + ',' +
                format_real(m.report.valid_mse[e]) + '\n';
    write_text(out_path("train_report.csv"), report);
    cfg["model"] = config_json(m.config);
    cfg["target"] = o.target;
    cfg["data"] = o.data;
    out_ << "best epoch " << m.report.best_epoch << ", stopped at " << m.report.stopping_epoch
         << ", valid mse " << format_real(m.report.valid_mse[m.report.best_epoch - 1]) << '\n';
  }

  void predict_cmd(const std::string& model_path, const std::vector<std::string>& inputs, json& cfg) {
    const auto m = load_model_file(model_path);
    std::vector<std::vector<double>> preds(inputs.size());
    std::vector<Graph> graphs;
    for (const auto& p : inputs) graphs.push_back(read_edge_list_file(p));
    parallel_for(&pool_, graphs.size(), [&](std::size_t i) { preds[i] = predict(m, graphs[i]); });
    std::string text;
    if (json_out()) {
      json arr = json::array();
      for (std::size_t i = 0; i < inputs.size(); ++i) arr.push_back({{"input", inputs[i]}, {"prediction", preds[i]}});
      text = arr.dump() + '\n';
    } else {
      text = m.config.output_dim == kNumPatterns ? header_row() : std::string(name_of(m.pattern)) + '\n';
      for (const auto& p : preds) {
        for (std::size_t k = 0; k < p.size(); ++k) text += (k ? "," : "") + format_real(p[k]);
        text += '\n';
      }
    }
    write_text(out_path(json_out() ? "predictions.json" : "predictions.csv"), text);
    out_ << text;
    cfg["model"] = model_path;
    cfg["inputs"] = inputs;
  }

  void eval_cmd(const EvalOpts& o, json& cfg) {
    const Dataset d = load_dataset(o.data);
    const auto test = split_part(d, o.split);
    const auto graphs = load_graphs(d.root, test, pool_);
    const auto model = load_model_file(o.model);
    if (model.target != TargetKind::Profile) throw UsageError("--model must be a profile model");

    std::vector<SignificanceProfile> preds(test.size()), truths;
    std::vector<Family> fams;
    parallel_for(&pool_, test.size(), [&](std::size_t i) { preds[i] = as_profile(predict(model, graphs[i])); });
    for (const auto& r : test) {
      truths.push_back(r.sp);
      fams.push_back(r.family);
    }
    const auto table = threshold_table(preds, truths, fams);
    const auto heat = agreement_heatmap(preds, fams, nearest_family_reference_profiles(d.records));
    const auto sq = error_percentiles(preds, truths, ErrorMetric::Squared);
    const auto ab = error_percentiles(preds, truths, ErrorMetric::Absolute);

    json bundle;
    bundle["threshold"] = json::parse(to_json(table));
    bundle["heatmap"] = json::parse(to_json(heat));
    bundle["percentiles_squared"] = json::parse(to_json(sq));
    bundle["percentiles_absolute"] = json::parse(to_json(ab));
    write_text(out_path("threshold.csv"), to_csv(table));
    write_text(out_path("heatmap.csv"), to_csv(heat));
    write_text(out_path("heatmap.txt"), to_text(heat));
    write_text(out_path("percentiles_squared.csv"), to_csv(sq));
    write_text(out_path("percentiles_absolute.csv"), to_csv(ab));

    if (!o.count_model.empty()) {
      const auto cm = load_model_file(o.count_model);
      if (cm.target != TargetKind::LogCounts) throw UsageError("--count-model must be a count model");
      const auto moments = count_moments(d.records);
      std::vector<SignificanceProfile> approx(test.size());
      parallel_for(&pool_, test.size(), [&](std::size_t i) {
        const auto y = predict(cm, graphs[i]);
        const auto cands = approx_sp_from_counts(y, moments.at(test[i].family), cm.residual_var);
        approx[i] = cands[closest_candidate(cands, test[i].sp)];
      });
      const auto cabs = error_percentiles(approx, truths, ErrorMetric::Absolute);
      write_text(out_path("count_percentiles_absolute.csv"), to_csv(cabs));
      bundle["count_percentiles_absolute"] = json::parse(to_json(cabs));
    }
    write_text(out_path("eval.json"), bundle.dump(2) + '\n');
    out_ << (json_out() ? bundle.dump(2) + '\n' : to_csv(table));
    cfg["data"] = o.data;
    cfg["model"] = o.model;
    cfg["split"] = o.split;
  }

  void baseline_cmd(const BaselineOpts& o, json& cfg) {
    BaselineMode mode;
    std::vector<SignificanceProfile> truths;
    if (o.mode == "sphere") {
      mode = BaselineMode::SphereVsSphere;
    } else if (o.mode == "dataset") {
      mode = BaselineMode::SphereVsDataset;
      if (o.data.empty()) throw UsageError("--mode dataset needs --data");
      for (const auto& r : load_dataset(o.data).records) truths.push_back(r.sp);
    } else {
      throw UsageError("--mode must be sphere or dataset");
    }
    const auto rates = baseline_rates(o.thetas, o.sims, g_.seed, mode, truths, &pool_);
    const std::string text = json_out() ? to_json(rates) + '\n' : to_csv(rates);
    write_text(out_path(json_out() ? "baseline.json" : "baseline.csv"), text);
    out_ << text;
    cfg["sims"] = o.sims;
    cfg["thetas"] = o.thetas;
    cfg["mode"] = o.mode;
  }

  std::size_t threads() const { return pool_.threads(); }

 private:
  Globals g_;
  std::ostream& out_;
  std::ostream& err_;
  WorkerPool pool_;
};

void add_null_flags(CLI::App* sub, NullOpts& n) {
  sub->add_option("--replicates", n.replicates, "Null-model replicates T")->capture_default_str();
  sub->add_option("--swaps-factor", n.swaps_factor, "Attempted swaps per edge")->capture_default_str();
  sub->add_option("--cap", n.cap, "|z| used when the null std is zero")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graphlet census, significance profiles and GNN profile prediction", "motifsp"};
  app.set_version_flag("--version", std::string(MOTIFSP_VERSION));
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Base seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: MOTIFSP_THREADS or 1)")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for all outputs")->capture_default_str();
  app.add_option("--format", g.format, "Report format: csv or json")->capture_default_str();
  app.fallthrough();

  GenerateOpts gen;
  auto* s_gen = app.add_subcommand("generate", "Generate synthetic graphs");
  s_gen->add_option("--config", gen.config, "Plan JSON: rows of family, count, size_profile, base_seed");
  s_gen->add_option("--family", gen.family, "Single family (instead of --config)");
  s_gen->add_option("--count", gen.count)->capture_default_str();
  s_gen->add_option("--n-min", gen.n_min)->capture_default_str();
  s_gen->add_option("--n-max", gen.n_max)->capture_default_str();

  std::vector<std::string> inputs;
  auto* s_census = app.add_subcommand("census", "Induced 3- and 4-node graphlet counts");
  s_census->add_option("--in", inputs, "Edge-list files")->required()->check(CLI::ExistingFile);

  NullOpts nul;
  auto* s_sp = app.add_subcommand("sp", "Significance profiles");
  s_sp->add_option("--in", inputs, "Edge-list files")->required()->check(CLI::ExistingFile);
  add_null_flags(s_sp, nul);

  std::string manifest, split_text = "0.7,0.2,0.1";
  auto* s_data = app.add_subcommand("dataset", "Generate, label and split a dataset");
  s_data->add_option("--manifest", manifest, "Plan JSON")->required()->check(CLI::ExistingFile);
  s_data->add_option("--split", split_text, "train,valid,test ratios")->capture_default_str();
  add_null_flags(s_data, nul);

  TrainOpts tr;
  auto* s_train = app.add_subcommand("train", "Train a predictor on a labeled dataset");
  s_train->add_option("--data", tr.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  s_train->add_option("--target", tr.target, "profile, single or counts")->capture_default_str();
  s_train->add_option("--pattern", tr.pattern, "Pattern for --target single");
  s_train->add_option("--model-out", tr.model_out, "Checkpoint file name")->capture_default_str();
  s_train->add_option("--backbone", tr.backbone, "gin or sage")->capture_default_str();
  s_train->add_option("--jk", tr.jk, "Jumping knowledge: max or cat")->capture_default_str();
  s_train->add_option("--gnn-depth", tr.config.gnn_depth)->capture_default_str();
  s_train->add_option("--hidden-dim", tr.config.hidden_dim)->capture_default_str();
  s_train->add_option("--gnn-dropout", tr.config.gnn_dropout)->capture_default_str();
  s_train->add_option("--mlp-depth", tr.config.mlp_depth)->capture_default_str();
  s_train->add_option("--mlp-hidden-dim", tr.config.mlp_hidden_dim)->capture_default_str();
  s_train->add_option("--mlp-dropout", tr.config.mlp_dropout)->capture_default_str();
  s_train->add_option("--epochs", tr.config.epochs)->capture_default_str();
  s_train->add_option("--batch-size", tr.config.batch_size)->capture_default_str();
  s_train->add_option("--lr", tr.config.learning_rate)->capture_default_str();

  std::string model_path;
  auto* s_pred = app.add_subcommand("predict", "Predict with a trained model");
  s_pred->add_option("--model", model_path, "Checkpoint")->required()->check(CLI::ExistingFile);
  s_pred->add_option("--in", inputs, "Edge-list files")->required()->check(CLI::ExistingFile);

  EvalOpts ev;
  auto* s_eval = app.add_subcommand("eval", "Threshold table, heatmap and error percentiles");
  s_eval->add_option("--data", ev.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  s_eval->add_option("--model", ev.model, "Profile checkpoint")->required()->check(CLI::ExistingFile);
  s_eval->add_option("--count-model", ev.count_model, "Count checkpoint")->check(CLI::ExistingFile);
  s_eval->add_option("--split", ev.split, "train, valid or test")->capture_default_str();

  BaselineOpts bl;
  auto* s_base = app.add_subcommand("baseline", "Random-profile baseline rates");
  s_base->add_option("--sims", bl.sims)->capture_default_str();
  s_base->add_option("--thetas", bl.thetas)->delimiter(',');
  s_base->add_option("--mode", bl.mode, "sphere or dataset")->capture_default_str();
  s_base->add_option("--data", bl.data, "Dataset directory for --mode dataset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto wall0 = std::chrono::steady_clock::now();
  const std::clock_t cpu0 = std::clock();
  try {
    fs::create_directories(g.out_dir);
    Runner r(g, out, err);
    json cfg;
    CLI::App* used = app.get_subcommands().front();
    const std::string name = used->get_name();
    if (used == s_gen) r.generate_cmd(gen, cfg);
    else if (used == s_census) r.census_cmd(inputs, cfg);
    else if (used == s_sp) r.sp_cmd(inputs, nul, cfg);
    else if (used == s_data) r.dataset_cmd(manifest, nul, split_text, cfg);
    else if (used == s_train) r.train_cmd(tr, cfg);
    else if (used == s_pred) r.predict_cmd(model_path, inputs, cfg);
    else if (used == s_eval) r.eval_cmd(ev, cfg);
    else if (used == s_base) r.baseline_cmd(bl, cfg);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    const double cpu = static_cast<double>(std::clock() - cpu0) / CLOCKS_PER_SEC;
    json run_manifest;
    run_manifest["subcommand"] = name;
    run_manifest["version"] = MOTIFSP_VERSION;
    run_manifest["compiler"] = __VERSION__;
    run_manifest["seed"] = g.seed;
    run_manifest["threads"] = r.threads();
    run_manifest["format"] = g.format;
    run_manifest["config"] = cfg;
    run_manifest["wall_seconds"] = wall;
    run_manifest["core_seconds"] = cpu;
    run_manifest["finished_at"] = static_cast<std::int64_t>(std::time(nullptr));
    write_text(fs::path(g.out_dir) / ("run_" + name + ".json"), run_manifest.dump(2) + '\n');
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace motifsp::cli

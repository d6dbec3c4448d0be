#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "motifsp/census.hpp"
#include "motifsp/graph.hpp"

namespace motifsp {

class WorkerPool;
struct DatasetRecord;

enum class Backbone : std::uint8_t { Gin, Sage };
enum class JumpingKnowledge : std::uint8_t { Max, Cat };

std::string_view name_of(Backbone b) noexcept;
std::string_view name_of(JumpingKnowledge jk) noexcept;
std::optional<Backbone> backbone_from_name(std::string_view s);
std::optional<JumpingKnowledge> jk_from_name(std::string_view s);

/// Encoder (M1) + add pooling (M2) + MLP head (M3).
struct ModelConfig {
  Backbone backbone = Backbone::Gin;
  std::size_t gnn_depth = 3;
  std::size_t hidden_dim = 16;
  double gnn_dropout = 0.0;
  JumpingKnowledge jumping_knowledge = JumpingKnowledge::Cat;
  std::size_t mlp_depth = 3;        ///< dense layers in M3, including the output layer
  std::size_t mlp_hidden_dim = 16;  ///< width of the M3 hidden layers
  double mlp_dropout = 0.2;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 42;
  std::size_t output_dim = kNumPatterns;
  std::size_t grace_period = 25;
  std::size_t patience = 25;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Structural validity (positive sizes, dropout in [0,1), lr >= 0). Empty
/// when usable.
std::string check_config(const ModelConfig& c);

/// Whether the config lies inside the published search space: depth 2..3,
/// widths 6..16, gnn dropout [0,0.9], mlp depth 2..6, mlp dropout [0.2,0.9],
/// epochs <= 100, batch in {16,32,64,128,256}, lr in [1e-5,1e-3].
bool in_hyperspace(const ModelConfig& c);

/// Uniform draw from the search space, for seeded random search.
ModelConfig sample_config(std::uint64_t seed);

/// Flat parameter vector. Layout, per message-passing layer l with input
/// width d (1 for l = 0, hidden_dim after):
///   GIN:  eps, W1[h x d], b1[h], W2[h x h], b2[h]
///   SAGE: W_self[h x d], W_neigh[h x d], b[h]
/// then per M3 layer: W[out x in], b[out]. Matrices are row-major.
struct ModelParams {
  std::vector<double> values;
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

std::size_t parameter_count(const ModelConfig& c);

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases; GIN eps = 0.
ModelParams init_params(const ModelConfig& c, std::uint64_t seed);

/// Prediction for one graph. Dropout is applied only when train_mode is set;
/// masks are drawn from dropout_seed and the layer index.
std::vector<double> forward(const ModelParams& p, const ModelConfig& c, const Graph& g, bool train_mode = false,
                            std::uint64_t dropout_seed = 0);

/// M2 output (sum of jumping-knowledge node embeddings), evaluation mode.
std::vector<double> pooled_embedding(const ModelParams& p, const ModelConfig& c, const Graph& g);

/// Mean squared error over coordinates.
double loss(std::span<const double> pred, std::span<const double> truth);

struct Example {
  const Graph* graph = nullptr;
  std::vector<double> target;
};

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Batch-mean loss and its exact gradient. Item i of the batch uses dropout
/// stream derive_seed(dropout_seed, i). Per-item gradients are summed in
/// index order, so the result does not depend on the pool width.
LossAndGrad backward(const ModelParams& p, const ModelConfig& c, std::span<const Example> batch,
                     bool train_mode = false, std::uint64_t dropout_seed = 0, const WorkerPool* pool = nullptr);

struct TrainReport {
  std::vector<double> train_mse;  ///< per epoch, batch-weighted mean of training losses
  std::vector<double> valid_mse;  ///< per epoch, evaluation mode
  double median_abs_error = 0.0;  ///< over all validation coordinates, best parameters
  double max_abs_sum_error = 0.0; ///< max over validation graphs of sum |error|
  std::size_t best_epoch = 0;
  std::size_t stopping_epoch = 0;
  bool early_stopped = false;
};

/// Target kinds a model can be trained for.
enum class TargetKind : std::uint8_t { Profile, SinglePattern, LogCounts };

struct TrainedModel {
  ModelConfig config;
  ModelParams params;
  TrainReport report;
  TargetKind target = TargetKind::Profile;
  PatternId pattern = PatternId::P3;       ///< for SinglePattern
  std::vector<double> residual_mean;       ///< LogCounts: per pattern, training set
  std::vector<double> residual_var;
};

/// Adam on mini-batches reshuffled every epoch, with early stopping after
/// grace_period epochs once patience epochs pass without a new best
/// validation loss. Returns the best-validation parameters. Throws
/// DivergenceError on a non-finite loss and std::invalid_argument for empty
/// splits or mismatched target widths.
TrainedModel train(std::span<const Example> train_set, std::span<const Example> valid_set, const ModelConfig& c,
                   const WorkerPool* pool = nullptr);

/// Targets derived from dataset records. graphs[i] belongs to records[i].
std::vector<Example> profile_examples(std::span<const DatasetRecord> records, std::span<const Graph> graphs);
std::vector<Example> single_pattern_examples(std::span<const DatasetRecord> records, std::span<const Graph> graphs,
                                             PatternId pattern);
std::vector<Example> log_count_examples(std::span<const DatasetRecord> records, std::span<const Graph> graphs);

/// 8-output model on significance profiles.
TrainedModel train_profile(std::span<const DatasetRecord> train_records, std::span<const Graph> train_graphs,
                           std::span<const DatasetRecord> valid_records, std::span<const Graph> valid_graphs,
                           ModelConfig c, const WorkerPool* pool = nullptr);

/// 1-output model on one profile coordinate.
TrainedModel train_single_target(std::span<const DatasetRecord> train_records, std::span<const Graph> train_graphs,
                                 std::span<const DatasetRecord> valid_records, std::span<const Graph> valid_graphs,
                                 ModelConfig c, PatternId pattern, const WorkerPool* pool = nullptr);

/// 8-output model on log1p counts; records the mean and variance of the
/// training residuals (prediction - target) per pattern.
TrainedModel train_count_target(std::span<const DatasetRecord> train_records, std::span<const Graph> train_graphs,
                                std::span<const DatasetRecord> valid_records, std::span<const Graph> valid_graphs,
                                ModelConfig c, const WorkerPool* pool = nullptr);

std::vector<double> predict(const TrainedModel& m, const Graph& g);

/// Checkpoint: JSON with format tag, version, config, pattern order,
/// target kind, residual statistics and the flat parameter array.
void save_model(const TrainedModel& m, std::ostream& out);
TrainedModel load_model(std::istream& in);
void save_model_file(const TrainedModel& m, const std::string& path);
TrainedModel load_model_file(const std::string& path);

}  // namespace motifsp

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "motifsp/census.hpp"
#include "motifsp/generators.hpp"
#include "motifsp/graph.hpp"
#include "motifsp/nullmodel.hpp"
#include "motifsp/sp.hpp"

namespace motifsp {

class WorkerPool;

/// One labeled graph. edge_path is relative to the dataset root.
struct DatasetRecord {
  std::string id;
  Family family = Family::ErdosRenyi;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string edge_path;
  GraphletCounts counts;
  ZScores z;
  SignificanceProfile sp;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

/// Census, null sampling, z-scores and normalization for one graph. When
/// root is given the edge list is written to root/graphs/<id>.edges.
DatasetRecord label(const Graph& g, Family family, const std::string& id, const NullConfig& cfg,
                    const std::optional<std::filesystem::path>& root = std::nullopt,
                    const WorkerPool* pool = nullptr);

/// Loads the referenced graph and checks n, m, counts, the conservation law
/// and normalize(z) == sp. Returns an empty string when everything matches.
std::string verify_record(const DatasetRecord& r, const std::filesystem::path& root);

/// A row of a generation plan: count graphs of one family.
struct PlanRow {
  Family family = Family::ErdosRenyi;
  std::size_t count = 0;
  SizeProfile profile;
  std::uint64_t base_seed = 42;
};

/// Graph i of a row is generated from sample_spec(family, profile,
/// derive_seed(base_seed, family, i)) and labeled with a null seed derived
/// from cfg.base_seed and the same coordinates. Records come back in plan
/// order regardless of the pool width.
std::vector<DatasetRecord> build_dataset(std::span<const PlanRow> plan, const NullConfig& cfg,
                                         const std::optional<std::filesystem::path>& root = std::nullopt,
                                         const WorkerPool* pool = nullptr);

/// The specs build_dataset would draw, in the same order.
std::vector<std::pair<std::string, GeneratorSpec>> plan_specs(std::span<const PlanRow> plan);

struct SplitManifest {
  std::vector<std::string> train;
  std::vector<std::string> valid;
  std::vector<std::string> test;
  std::array<double, 3> ratios{0.7, 0.2, 0.1};
  std::uint64_t seed = 42;

  friend bool operator==(const SplitManifest&, const SplitManifest&) = default;
};

/// Stratified split. Each family's records are shuffled with a seed derived
/// from (seed, family); the first round(k * r_train) go to train, the next
/// round(k * r_valid) to valid, the rest to test. Throws
/// std::invalid_argument if ratios do not sum to 1 or a family has fewer
/// than 3 records.
SplitManifest split(std::span<const DatasetRecord> records, std::array<double, 3> ratios, std::uint64_t seed);

/// Records whose ids are listed, in list order. Throws DataError for an
/// unknown id.
std::vector<DatasetRecord> select(std::span<const DatasetRecord> records, std::span<const std::string> ids);

void write_jsonl(std::span<const DatasetRecord> records, std::ostream& out);
/// Parses and validates every line (field set, array lengths, family name,
/// profile invariants, normalize(z) == sp within 1e-9). Throws DataError
/// naming the offending line.
std::vector<DatasetRecord> read_jsonl(std::istream& in);
std::string record_to_json(const DatasetRecord& r);
DatasetRecord record_from_json(const std::string& line);

void write_jsonl_file(std::span<const DatasetRecord> records, const std::filesystem::path& path);
std::vector<DatasetRecord> read_jsonl_file(const std::filesystem::path& path);

std::string manifest_to_json(const SplitManifest& m);
SplitManifest manifest_from_json(const std::string& text);

}  // namespace motifsp

#include "motifsp/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "motifsp/error.hpp"
#include "motifsp/parallel.hpp"
#include "motifsp/rng.hpp"

namespace motifsp {

using nlohmann::json;

DatasetRecord label(const Graph& g, Family family, const std::string& id, const NullConfig& cfg,
                    const std::optional<std::filesystem::path>& root, const WorkerPool* pool) {
  DatasetRecord r;
  r.id = id;
  r.family = family;
  r.n = g.num_nodes();
  r.m = g.num_edges();
  r.edge_path = "graphs/" + id + ".edges";
  r.counts = census(g, pool);
  const NullStats stats = sample_null(g, cfg.replicates, cfg.swaps_for(g), cfg.base_seed, pool);
  r.z = zscores(r.counts, stats, cfg.cap);
  r.sp = normalize(r.z);
  if (root) {
    std::filesystem::create_directories(*root / "graphs");
    write_edge_list_file(g, (*root / r.edge_path).string());
  }
  return r;
}

namespace {

std::string check_sp_consistency(const DatasetRecord& r) {
  if (auto err = validate_profile(r.sp); !err.empty()) return err;
  for (double v : r.z.z)
    if (!std::isfinite(v)) return "non-finite z-score";
  const auto expect = normalize(r.z);
  for (std::size_t i = 0; i < kNumPatterns; ++i)
    if (std::abs(expect.s[i] - r.sp.s[i]) > 1e-9)
      return "sp disagrees with normalize(z) at " + std::string(kPatternNames[i]);
  return {};
}

}  // namespace

std::string verify_record(const DatasetRecord& r, const std::filesystem::path& root) {
  Graph g;
  try {
    g = read_edge_list_file((root / r.edge_path).string(), r.n);
  } catch (const std::exception& e) {
    return std::string("cannot load graph: ") + e.what();
  }
  if (g.num_nodes() != r.n) return "node count mismatch";
  if (g.num_edges() != r.m) return "edge count mismatch";
  const auto c = census(g);
  if (c != r.counts) return "stored counts differ from census";
  if (!check_conservation(g, c)) return "conservation law violated";
  return check_sp_consistency(r);
}

std::vector<std::pair<std::string, GeneratorSpec>> plan_specs(std::span<const PlanRow> plan) {
  std::vector<std::pair<std::string, GeneratorSpec>> out;
  for (const auto& row : plan) {
    const auto f = static_cast<std::uint64_t>(row.family);
    for (std::size_t i = 0; i < row.count; ++i) {
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "_%06zu", i);
      out.emplace_back(std::string(name_of(row.family)) + suffix,
                       sample_spec(row.family, row.profile, derive_seed({row.base_seed, f, i})));
    }
  }
  return out;
}

std::vector<DatasetRecord> build_dataset(std::span<const PlanRow> plan, const NullConfig& cfg,
                                         const std::optional<std::filesystem::path>& root,
                                         const WorkerPool* pool) {
  const auto specs = plan_specs(plan);
  std::vector<DatasetRecord> out(specs.size());
  if (root) std::filesystem::create_directories(*root / "graphs");
  parallel_for(pool, specs.size(), [&](std::size_t i) {
    const auto& [id, spec] = specs[i];
    NullConfig local = cfg;
    local.base_seed = derive_seed({cfg.base_seed, spec.seed});
    out[i] = label(generate(spec), spec.family, id, local, root);
  });
  return out;
}

SplitManifest split(std::span<const DatasetRecord> records, std::array<double, 3> ratios, std::uint64_t seed) {
  for (double r : ratios)
    if (!(r >= 0.0)) throw std::invalid_argument("split ratios must be non-negative");
  if (std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) > 1e-9)
    throw std::invalid_argument("split ratios must sum to 1");
  std::map<Family, std::vector<std::string>> by_family;
  for (const auto& r : records) by_family[r.family].push_back(r.id);

  SplitManifest m;
  m.ratios = ratios;
  m.seed = seed;
  for (auto& [family, ids] : by_family) {
    if (ids.size() < 3)
      throw std::invalid_argument("family " + std::string(name_of(family)) + " has fewer than 3 records");
    Rng rng = make_rng(derive_seed({seed, static_cast<std::uint64_t>(family)}));
    for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[uniform_index(rng, i)]);
    const auto k = static_cast<double>(ids.size());
    auto n_train = static_cast<std::size_t>(std::llround(k * ratios[0]));
    auto n_valid = static_cast<std::size_t>(std::llround(k * ratios[1]));
    n_train = std::min(n_train, ids.size());
    n_valid = std::min(n_valid, ids.size() - n_train);
    m.train.insert(m.train.end(), ids.begin(), ids.begin() + n_train);
    m.valid.insert(m.valid.end(), ids.begin() + n_train, ids.begin() + n_train + n_valid);
    m.test.insert(m.test.end(), ids.begin() + n_train + n_valid, ids.end());
  }
  return m;
}

std::vector<DatasetRecord> select(std::span<const DatasetRecord> records, std::span<const std::string> ids) {
  std::unordered_map<std::string, const DatasetRecord*> index;
  for (const auto& r : records) index.emplace(r.id, &r);
  std::vector<DatasetRecord> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = index.find(id);
    if (it == index.end()) throw DataError("unknown record id '" + id + "'");
    out.push_back(*it->second);
  }
  return out;
}

namespace {

const std::array<const char*, 8> kFields{"id", "family", "n", "m", "edge_path", "counts", "z", "sp"};

template <class T>
std::array<T, kNumPatterns> fixed_array(const json& j, const char* field) {
  const auto& a = j.at(field);
  if (!a.is_array()) throw DataError(std::string("field '") + field + "' is not an array");
  if (a.size() != kNumPatterns)
    throw DataError(std::string("field '") + field + "' has length " + std::to_string(a.size()) + ", expected 8");
  std::array<T, kNumPatterns> out{};
  for (std::size_t i = 0; i < kNumPatterns; ++i) {
    if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!a[i].is_number_unsigned()) throw DataError(std::string("field '") + field + "' must hold counts");
    } else {
      if (!a[i].is_number()) throw DataError(std::string("field '") + field + "' must hold numbers");
    }
    out[i] = a[i].get<T>();
  }
  return out;
}

}  // namespace

std::string record_to_json(const DatasetRecord& r) {
  json j;
  j["id"] = r.id;
  j["family"] = std::string(name_of(r.family));
  j["n"] = r.n;
  j["m"] = r.m;
  j["edge_path"] = r.edge_path;
  j["counts"] = r.counts.values;
  j["z"] = r.z.z;
  j["sp"] = r.sp.s;
  return j.dump();
}

DatasetRecord record_from_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("record is not a JSON object");
  for (const char* f : kFields)
    if (!j.contains(f)) throw DataError(std::string("missing field '") + f + "'");
  if (j.size() != kFields.size()) throw DataError("unexpected extra fields");

  DatasetRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    const auto fam = family_from_name(j.at("family").get<std::string>());
    if (!fam) throw DataError("unknown family '" + j.at("family").get<std::string>() + "'");
    r.family = *fam;
    if (!j.at("n").is_number_unsigned() || !j.at("m").is_number_unsigned())
      throw DataError("n and m must be non-negative integers");
    r.n = j.at("n").get<std::size_t>();
    r.m = j.at("m").get<std::size_t>();
    r.edge_path = j.at("edge_path").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(std::string("bad field type: ") + e.what());
  }
  r.counts.values = fixed_array<std::uint64_t>(j, "counts");
  r.z.z = fixed_array<double>(j, "z");
  r.sp.s = fixed_array<double>(j, "sp");
  if (auto err = check_sp_consistency(r); !err.empty()) throw DataError("record " + r.id + ": " + err);
  return r;
}

void write_jsonl(std::span<const DatasetRecord> records, std::ostream& out) {
  for (const auto& r : records) out << record_to_json(r) << '\n';
}

std::vector<DatasetRecord> read_jsonl(std::istream& in) {
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(line));
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_jsonl_file(std::span<const DatasetRecord> records, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open " + path.string() + " for writing");
  write_jsonl(records, f);
}

std::vector<DatasetRecord> read_jsonl_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open " + path.string());
  return read_jsonl(f);
}

std::string manifest_to_json(const SplitManifest& m) {
  json j;
  j["ratios"] = m.ratios;
  j["seed"] = m.seed;
  j["train"] = m.train;
  j["valid"] = m.valid;
  j["test"] = m.test;
  return j.dump(2);
}

SplitManifest manifest_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    SplitManifest m;
    m.ratios = j.at("ratios").get<std::array<double, 3>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.train = j.at("train").get<std::vector<std::string>>();
    m.valid = j.at("valid").get<std::vector<std::string>>();
    m.test = j.at("test").get<std::vector<std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed split manifest: ") + e.what());
  }
}

}  // namespace motifsp

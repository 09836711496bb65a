#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stylecast/catalog.hpp"
#include "stylecast/ensemble.hpp"
#include "stylecast/features.hpp"
#include "stylecast/losses.hpp"
#include "stylecast/synthgen.hpp"

namespace stylecast {

/// Flat `key = value` text. Blank lines and lines starting with '#' are
/// ignored. Unknown or repeated keys are hard errors.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, std::string_view source = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, std::string value);
  const std::map<std::string, std::string>& entries() const { return entries_; }

  /// Every key the tool understands.
  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> entries_;
};

/// One benchmark row: model kind plus loss and scale.
struct RunSpec {
  ModelKind model = ModelKind::kGbrt;
  LossSpec loss;

  std::string label() const;  // "gbrt_mse_log"
  bool operator==(const RunSpec&) const = default;
};

/// Parses "gbrt:mse:log, rf:mse:linear, ...". Throws on invalid combinations.
std::vector<RunSpec> parse_runs(std::string_view text, std::optional<double> huber_delta);

struct RunConfig {
  std::uint64_t seed = 42;
  GenConfig gen;
  SplitSpec split;
  FeatureConfig features;
  ModelKind model = ModelKind::kGbrt;  // for the train subcommand
  LossSpec loss;                       // for train/search
  EnsembleConfig gbrt;
  EnsembleConfig rf = EnsembleConfig::random_forest_defaults();
  std::vector<RunSpec> runs;
  int search_budget = 0;  // 0: fit the fixed gbrt.* / rf.* configs
  std::string data_dir;   // benchmark input catalog; empty means generate

  /// Applies every key from `kv` over the defaults and re-seeds all
  /// components from `seed`.
  static RunConfig from(const KeyValueConfig& kv);
  void reseed(std::uint64_t new_seed);
  void validate() const;
};

}  // namespace stylecast

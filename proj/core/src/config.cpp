#include "stylecast/config.hpp"

#include <algorithm>
#include <set>

#include "stylecast/error.hpp"
#include "stylecast/fs_util.hpp"

namespace stylecast {

namespace {

const std::vector<std::string> kEnsembleKeys = {"n_trees",        "max_depth",      "min_samples_leaf",
                                                "learning_rate",  "subsample_rows", "subsample_cols",
                                                "l2_leaf",        "bootstrap"};

std::vector<std::string> build_known_keys() {
  std::vector<std::string> keys = {
      // general
      "seed", "data_dir", "runs", "model", "search_budget",
      // losses
      "loss", "scale", "huber_delta",
      // split
      "train_end_week", "valid_end_week", "test_end_week",
      // features
      "lags", "n_harmonics", "price_band_fraction", "rare_threshold", "promo_horizon",
      // generator
      "n_items", "n_weeks", "n_article_types", "n_brands", "n_colors", "n_materials",
      "min_life_weeks", "max_life_weeks", "promos_per_year", "base_log_rate", "brand_effect",
      "attribute_effect", "price_effect", "discount_effect", "visibility_effect", "promo_effect",
      "promo_dip_effect", "age_effect", "age_peak_weeks", "season_effect",
      "cannibalization_effect", "noise_sd"};
  for (const auto& k : kEnsembleKeys) {
    keys.push_back("gbrt." + k);
    keys.push_back("rf." + k);
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

const std::vector<std::string>& KeyValueConfig::known_keys() {
  static const std::vector<std::string> keys = build_known_keys();
  return keys;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view source) {
  KeyValueConfig out;
  const auto& known = known_keys();
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where + "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (!std::binary_search(known.begin(), known.end(), key)) {
      throw ValidationError(where + "unknown config key '" + key + "'");
    }
    if (!out.entries_.emplace(key, value).second) {
      throw ValidationError(where + "config key '" + key + "' given twice");
    }
    if (end == text.size()) break;
  }
  return out;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void KeyValueConfig::set(const std::string& key, std::string value) {
  const auto& known = known_keys();
  if (!std::binary_search(known.begin(), known.end(), key)) {
    throw ValidationError("unknown config key '" + key + "'");
  }
  entries_[key] = std::move(value);
}

std::string RunSpec::label() const {
  return to_string(model) + "_" + to_string(loss.kind) + "_" + to_string(loss.scale);
}

std::vector<RunSpec> parse_runs(std::string_view text, std::optional<double> huber_delta) {
  std::vector<RunSpec> runs;
  for (auto item : split_fields(text, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    if (item == "naive") continue;  // always included
    auto parts = split_fields(item, ':');
    if (parts.size() != 3) {
      throw ValidationError("run '" + std::string(item) + "' must be model:loss:scale");
    }
    RunSpec run;
    run.model = parse_model_kind(trim(parts[0]));
    run.loss.kind = parse_loss_kind(trim(parts[1]));
    run.loss.scale = parse_target_scale(trim(parts[2]));
    if (run.loss.kind == LossKind::kHuber) run.loss.huber_delta = huber_delta;
    if (run.model == ModelKind::kNaive) {
      throw ValidationError("naive takes no loss or scale; list it as 'naive'");
    }
    if (run.model == ModelKind::kRandomForest && run.loss.kind != LossKind::kMse) {
      throw ValidationError("run '" + std::string(item) + "': random forest supports mse only");
    }
    run.loss.validate();
    if (std::find(runs.begin(), runs.end(), run) != runs.end()) {
      throw ValidationError("run '" + std::string(item) + "' listed twice");
    }
    runs.push_back(run);
  }
  return runs;
}

namespace {

class Reader {
 public:
  explicit Reader(const KeyValueConfig& kv) : kv_(kv) {}

  void real(const std::string& key, double& out) const {
    if (auto v = kv_.get(key)) out = parse_double(*v, key);
  }
  void integer(const std::string& key, int& out) const {
    if (auto v = kv_.get(key)) out = static_cast<int>(parse_int(*v, key));
  }
  void boolean(const std::string& key, bool& out) const {
    if (auto v = kv_.get(key)) {
      if (*v == "1" || *v == "true") out = true;
      else if (*v == "0" || *v == "false") out = false;
      else throw ValidationError("config key '" + key + "' expects true|false");
    }
  }
  void ensemble(const std::string& prefix, EnsembleConfig& c) const {
    integer(prefix + "n_trees", c.n_trees);
    integer(prefix + "max_depth", c.max_depth);
    integer(prefix + "min_samples_leaf", c.min_samples_leaf);
    real(prefix + "learning_rate", c.learning_rate);
    real(prefix + "subsample_rows", c.subsample_rows);
    real(prefix + "subsample_cols", c.subsample_cols);
    real(prefix + "l2_leaf", c.l2_leaf);
    boolean(prefix + "bootstrap", c.bootstrap);
  }

 private:
  const KeyValueConfig& kv_;
};

const char* kDefaultRuns = "rf:mse:log, gbrt:mse:log, gbrt:mse:linear, gbrt:huber:log, gbrt:poisson:linear";

}  // namespace

RunConfig RunConfig::from(const KeyValueConfig& kv) {
  RunConfig c;
  Reader r(kv);
  if (auto v = kv.get("seed")) c.seed = parse_uint(*v, "seed");
  if (auto v = kv.get("data_dir")) c.data_dir = *v;
  if (auto v = kv.get("model")) c.model = parse_model_kind(*v);
  r.integer("search_budget", c.search_budget);

  if (auto v = kv.get("loss")) c.loss.kind = parse_loss_kind(*v);
  if (auto v = kv.get("scale")) c.loss.scale = parse_target_scale(*v);
  if (auto v = kv.get("huber_delta")) c.loss.huber_delta = parse_huber_delta(*v);
  if (c.loss.kind != LossKind::kHuber) c.loss.huber_delta.reset();
  c.runs = parse_runs(kv.get("runs").value_or(kDefaultRuns),
                      kv.get("huber_delta") ? parse_huber_delta(*kv.get("huber_delta")) : std::nullopt);

  r.integer("train_end_week", c.split.train_end_week);
  r.integer("valid_end_week", c.split.valid_end_week);
  r.integer("test_end_week", c.split.test_end_week);

  r.integer("lags", c.features.lags);
  r.integer("n_harmonics", c.features.n_harmonics);
  r.real("price_band_fraction", c.features.price_band_fraction);
  r.real("rare_threshold", c.features.rare_threshold);
  r.integer("promo_horizon", c.features.promo_horizon);

  GenConfig& g = c.gen;
  r.integer("n_items", g.n_items);
  r.integer("n_weeks", g.n_weeks);
  r.integer("n_article_types", g.n_article_types);
  r.integer("n_brands", g.n_brands);
  r.integer("n_colors", g.n_colors);
  r.integer("n_materials", g.n_materials);
  r.integer("min_life_weeks", g.min_life_weeks);
  r.integer("max_life_weeks", g.max_life_weeks);
  r.integer("promos_per_year", g.promos_per_year);
  r.real("base_log_rate", g.base_log_rate);
  r.real("brand_effect", g.brand_effect);
  r.real("attribute_effect", g.attribute_effect);
  r.real("price_effect", g.price_effect);
  r.real("discount_effect", g.discount_effect);
  r.real("visibility_effect", g.visibility_effect);
  r.real("promo_effect", g.promo_effect);
  r.real("promo_dip_effect", g.promo_dip_effect);
  r.real("age_effect", g.age_effect);
  r.integer("age_peak_weeks", g.age_peak_weeks);
  r.real("season_effect", g.season_effect);
  r.real("cannibalization_effect", g.cannibalization_effect);
  r.real("noise_sd", g.noise_sd);

  r.ensemble("gbrt.", c.gbrt);
  r.ensemble("rf.", c.rf);
  c.reseed(c.seed);
  c.validate();
  return c;
}

void RunConfig::reseed(std::uint64_t new_seed) {
  seed = new_seed;
  gen.seed = new_seed;
  gbrt.seed = new_seed;
  rf.seed = new_seed;
}

void RunConfig::validate() const {
  split.validate();
  features.validate();
  loss.validate();
  gbrt.validate();
  rf.validate();
  if (model == ModelKind::kRandomForest && loss.kind != LossKind::kMse) {
    throw ValidationError("random forest supports the mse loss only");
  }
  if (search_budget < 0) throw ValidationError("search_budget must be >= 0");
}

}  // namespace stylecast

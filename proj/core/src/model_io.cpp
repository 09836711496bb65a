#include "stylecast/model_io.hpp"

#include <sstream>

#include "stylecast/error.hpp"
#include "stylecast/fs_util.hpp"

namespace stylecast {

namespace {

constexpr std::string_view kMagic = "stylecast-model";

void write_tree(std::ostringstream& out, const Tree& tree, int index) {
  const TreeNode& node = tree.nodes()[static_cast<std::size_t>(index)];
  if (node.is_leaf()) {
    out << "L " << format_hex_double(node.value) << '\n';
    return;
  }
  out << "S " << node.feature << ' ' << format_hex_double(node.threshold) << '\n';
  write_tree(out, tree, node.left);
  write_tree(out, tree, node.right);
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  std::string_view line() {
    if (pos_ >= text_.size()) throw ValidationError("model file truncated at line " + std::to_string(line_no_ + 1));
    auto end = text_.find('\n', pos_);
    if (end == std::string::npos) end = text_.size();
    std::string_view out(text_.data() + pos_, end - pos_);
    pos_ = end + 1;
    ++line_no_;
    return out;
  }

  /// Reads "<key> <value>" and returns the value.
  std::string_view field(std::string_view key) {
    std::string_view l = line();
    if (!l.starts_with(key) || l.size() <= key.size() || l[key.size()] != ' ') {
      fail("expected '" + std::string(key) + " <value>'");
    }
    return l.substr(key.size() + 1);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("model file line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

int read_tree(Reader& in, std::vector<TreeNode>& nodes, std::size_t n_features, int depth) {
  if (depth > 4096) in.fail("tree too deep");
  const int index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  auto parts = split_fields(in.line(), ' ');
  if (parts.size() == 2 && parts[0] == "L") {
    nodes[static_cast<std::size_t>(index)].value = parse_double(parts[1], "leaf value");
    return index;
  }
  if (parts.size() != 3 || parts[0] != "S") in.fail("expected 'S <feature> <threshold>' or 'L <value>'");
  const long long feature = parse_int(parts[1], "split feature");
  if (feature < 0 || static_cast<std::size_t>(feature) >= n_features) in.fail("split feature out of range");
  const double threshold = parse_double(parts[2], "split threshold");
  const int left = read_tree(in, nodes, n_features, depth + 1);
  const int right = read_tree(in, nodes, n_features, depth + 1);
  TreeNode& node = nodes[static_cast<std::size_t>(index)];
  node.feature = static_cast<int>(feature);
  node.threshold = threshold;
  node.left = left;
  node.right = right;
  return index;
}

/// Renumbers nodes breadth-first with siblings adjacent, the layout fit_tree
/// produces, so a loaded tree compares equal to the fitted one.
std::vector<TreeNode> breadth_first(const std::vector<TreeNode>& nodes) {
  std::vector<TreeNode> out = {nodes[0]};
  for (std::size_t i = 0; i < out.size(); ++i) {
    TreeNode& node = out[i];
    if (node.is_leaf()) continue;
    const TreeNode left = nodes[static_cast<std::size_t>(node.left)];
    const TreeNode right = nodes[static_cast<std::size_t>(node.right)];
    node.left = static_cast<int>(out.size());
    node.right = static_cast<int>(out.size() + 1);
    out.push_back(left);
    out.push_back(right);
  }
  return out;
}

}  // namespace

std::string serialize_model(const TrainedModel& model) {
  std::ostringstream out;
  out << kMagic << '\n';
  out << "version " << kModelFormatVersion << '\n';
  out << "kind " << to_string(model.kind) << '\n';
  out << "loss " << to_string(model.loss.kind) << '\n';
  out << "scale " << to_string(model.loss.scale) << '\n';
  out << "huber_delta "
      << (model.loss.huber_delta ? format_hex_double(*model.loss.huber_delta) : "adaptive") << '\n';
  out << "base_score " << format_hex_double(model.base_score) << '\n';
  const EnsembleConfig& c = model.config;
  out << "n_trees " << c.n_trees << '\n';
  out << "max_depth " << c.max_depth << '\n';
  out << "min_samples_leaf " << c.min_samples_leaf << '\n';
  out << "learning_rate " << format_hex_double(c.learning_rate) << '\n';
  out << "subsample_rows " << format_hex_double(c.subsample_rows) << '\n';
  out << "subsample_cols " << format_hex_double(c.subsample_cols) << '\n';
  out << "l2_leaf " << format_hex_double(c.l2_leaf) << '\n';
  out << "bootstrap " << (c.bootstrap ? 1 : 0) << '\n';
  out << "seed " << c.seed << '\n';
  out << "columns " << model.schema.size() << '\n';
  for (const auto& name : model.schema) {
    if (name.find('\n') != std::string::npos) throw Error("column name contains a newline");
    out << name << '\n';
  }
  out << "trees " << model.trees.size() << '\n';
  for (const auto& tree : model.trees) {
    out << "tree " << tree.nodes().size() << '\n';
    write_tree(out, tree, 0);
  }
  out << "end\n";
  return out.str();
}

TrainedModel deserialize_model(const std::string& text) {
  Reader in(text);
  if (in.line() != kMagic) in.fail("not a stylecast model file");
  const long long version = parse_int(in.field("version"), "version");
  if (version != kModelFormatVersion) {
    in.fail("unsupported model format version " + std::to_string(version));
  }
  TrainedModel model;
  model.kind = parse_model_kind(in.field("kind"));
  model.loss.kind = parse_loss_kind(in.field("loss"));
  model.loss.scale = parse_target_scale(in.field("scale"));
  model.loss.huber_delta = parse_huber_delta(in.field("huber_delta"));
  model.base_score = parse_double(in.field("base_score"), "base_score");
  EnsembleConfig& c = model.config;
  c.n_trees = static_cast<int>(parse_int(in.field("n_trees"), "n_trees"));
  c.max_depth = static_cast<int>(parse_int(in.field("max_depth"), "max_depth"));
  c.min_samples_leaf = static_cast<int>(parse_int(in.field("min_samples_leaf"), "min_samples_leaf"));
  c.learning_rate = parse_double(in.field("learning_rate"), "learning_rate");
  c.subsample_rows = parse_double(in.field("subsample_rows"), "subsample_rows");
  c.subsample_cols = parse_double(in.field("subsample_cols"), "subsample_cols");
  c.l2_leaf = parse_double(in.field("l2_leaf"), "l2_leaf");
  c.bootstrap = parse_int(in.field("bootstrap"), "bootstrap") != 0;
  c.seed = parse_uint(in.field("seed"), "seed");
  const long long n_columns = parse_int(in.field("columns"), "columns");
  if (n_columns < 0) in.fail("negative column count");
  for (long long i = 0; i < n_columns; ++i) model.schema.emplace_back(in.line());
  const long long n_trees = parse_int(in.field("trees"), "trees");
  if (n_trees < 0) in.fail("negative tree count");
  for (long long t = 0; t < n_trees; ++t) {
    const long long n_nodes = parse_int(in.field("tree"), "tree node count");
    std::vector<TreeNode> nodes;
    read_tree(in, nodes, model.schema.size(), 0);
    if (static_cast<long long>(nodes.size()) != n_nodes) in.fail("tree node count mismatch");
    model.trees.emplace_back(breadth_first(nodes));
  }
  if (in.line() != "end") in.fail("expected 'end'");
  return model;
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  write_file_atomic(path, serialize_model(model));
}

TrainedModel load_model(const std::filesystem::path& path) {
  return deserialize_model(read_file(path));
}

}  // namespace stylecast

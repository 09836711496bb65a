#include "stylecast/matrix_io.hpp"

#include "stylecast/error.hpp"
#include "stylecast/fs_util.hpp"

namespace stylecast {

namespace fs = std::filesystem;

std::string matrix_csv(const FeatureMatrix& matrix) {
  std::string out = "item_id,week,target";
  for (const auto& c : matrix.columns()) {
    out += ',';
    out += c;
  }
  out += '\n';
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    const auto& key = matrix.keys()[r];
    out += key.item_id;
    out += ',';
    out += std::to_string(key.week);
    out += ',';
    out += format_double(matrix.target()[r]);
    for (double v : matrix.row(r)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

FeatureMatrix parse_matrix_csv(const std::string& text, const std::vector<std::string>& schema,
                               const std::string& source) {
  FeatureMatrix matrix(schema);
  std::string_view rest(text);
  std::size_t line_no = 0;
  std::vector<double> values(schema.size());
  while (!rest.empty()) {
    auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto where = source + ":" + std::to_string(line_no) + ": ";
    auto fields = split_fields(line);
    if (line_no == 1) {
      bool ok = fields.size() == schema.size() + 3 && fields[0] == "item_id" &&
                fields[1] == "week" && fields[2] == "target";
      for (std::size_t c = 0; ok && c < schema.size(); ++c) ok = fields[c + 3] == schema[c];
      if (!ok) throw ValidationError(where + "header does not match the schema");
      continue;
    }
    if (line.empty()) continue;
    if (fields.size() != schema.size() + 3) {
      throw ValidationError(where + "expected " + std::to_string(schema.size() + 3) + " fields");
    }
    try {
      RowKey key{std::string(fields[0]), static_cast<Week>(parse_int(fields[1], "week"))};
      double target = parse_double(fields[2], "target");
      for (std::size_t c = 0; c < schema.size(); ++c) {
        values[c] = parse_double(fields[c + 3], schema[c]);
      }
      matrix.add_row(std::move(key), values, target);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  if (line_no == 0) throw ValidationError(source + ": missing header");
  return matrix;
}

void write_matrix(const fs::path& dir, const FeatureMatrix& matrix) {
  fs::create_directories(dir);
  std::string schema;
  for (const auto& c : matrix.columns()) schema += c + "\n";
  write_file_atomic(dir / kSchemaFile, schema);
  write_file_atomic(dir / kMatrixFile, matrix_csv(matrix));
}

FeatureMatrix read_matrix(const fs::path& dir) {
  std::vector<std::string> schema;
  const std::string text = read_file(dir / kSchemaFile);
  std::string_view rest(text);
  while (!rest.empty()) {
    auto nl = rest.find('\n');
    auto name = trim(rest.substr(0, nl));
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (!name.empty()) schema.emplace_back(name);
  }
  return parse_matrix_csv(read_file(dir / kMatrixFile), schema, (dir / kMatrixFile).string());
}

}  // namespace stylecast

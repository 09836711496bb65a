#include "stylecast/catalog_io.hpp"

#include <map>
#include <set>
#include <sstream>

#include "stylecast/error.hpp"
#include "stylecast/fs_util.hpp"

namespace stylecast {

namespace {

constexpr std::string_view kAttrPrefix = "attr:";
constexpr std::string_view kObservationsHeader =
    "item_id,week,units_sold,discount_fraction,list_views,live_flag";

struct Lines {
  std::vector<std::string_view> lines;
  std::string storage;
};

Lines read_lines(const std::filesystem::path& path) {
  Lines out;
  out.storage = read_file(path);
  std::string_view all(out.storage);
  std::size_t start = 0;
  while (start < all.size()) {
    auto end = all.find('\n', start);
    if (end == std::string_view::npos) end = all.size();
    std::string_view line = all.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.lines.push_back(line);
    start = end + 1;
  }
  return out;
}

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line_no,
                            const std::string& what) {
  throw ValidationError(path.filename().string() + ":" + std::to_string(line_no) + ": " + what);
}

void check_text_field(std::string_view value, std::string_view what) {
  if (value.find_first_of(",\"\n\r") != std::string_view::npos) {
    throw ValidationError("value for " + std::string(what) +
                          " contains a comma, quote or newline: '" + std::string(value) + "'");
  }
}

std::vector<ObservationRow> read_observations(const std::filesystem::path& path) {
  Lines file = read_lines(path);
  if (file.lines.empty() || file.lines.front() != kObservationsHeader) {
    fail_line(path, 1, "expected header '" + std::string(kObservationsHeader) + "'");
  }
  std::vector<ObservationRow> rows;
  std::map<std::pair<std::string, Week>, std::size_t> seen;
  for (std::size_t i = 1; i < file.lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (file.lines[i].empty()) continue;
    auto fields = split_fields(file.lines[i]);
    if (fields.size() != 6) {
      fail_line(path, line_no, "expected 6 fields, found " + std::to_string(fields.size()));
    }
    ObservationRow row;
    try {
      row.item_id = std::string(fields[0]);
      row.week = static_cast<Week>(parse_int(fields[1], "week"));
      row.units_sold = parse_int(fields[2], "units_sold");
      row.discount_fraction = parse_double(fields[3], "discount_fraction");
      row.list_views = parse_double(fields[4], "list_views");
      if (fields[5] == "1") {
        row.live = true;
      } else if (fields[5] == "0") {
        row.live = false;
      } else {
        throw ValidationError("live_flag must be 0 or 1, got '" + std::string(fields[5]) + "'");
      }
    } catch (const ValidationError& e) {
      fail_line(path, line_no, e.what());
    }
    if (row.item_id.empty()) fail_line(path, line_no, "empty item_id");
    auto [it, inserted] = seen.emplace(std::make_pair(row.item_id, row.week), line_no);
    if (!inserted) {
      fail_line(path, line_no, "duplicate (item_id, week) = (" + row.item_id + ", " +
                                   std::to_string(row.week) + "), first seen on line " +
                                   std::to_string(it->second));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<ItemMeta> read_items_csv(const std::filesystem::path& path) {
  Lines file = read_lines(path);
  if (file.lines.empty()) fail_line(path, 1, "missing header");
  auto header = split_fields(file.lines.front());
  const std::vector<std::string_view> fixed = {"item_id", "article_type", "brand", "price_point",
                                               "go_live_week"};
  if (header.size() < fixed.size()) fail_line(path, 1, "header has too few columns");
  for (std::size_t c = 0; c < fixed.size(); ++c) {
    if (header[c] != fixed[c]) {
      fail_line(path, 1, "expected column '" + std::string(fixed[c]) + "' at position " +
                             std::to_string(c + 1));
    }
  }
  std::vector<std::string> attr_names;
  std::set<std::string> unique_names;
  for (std::size_t c = fixed.size(); c < header.size(); ++c) {
    if (!header[c].starts_with(kAttrPrefix) || header[c].size() == kAttrPrefix.size()) {
      fail_line(path, 1, "attribute columns must be named attr:<name>, got '" +
                             std::string(header[c]) + "'");
    }
    std::string name(header[c].substr(kAttrPrefix.size()));
    if (!unique_names.insert(name).second) fail_line(path, 1, "duplicate column " + name);
    attr_names.push_back(std::move(name));
  }

  std::vector<ItemMeta> items;
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 1; i < file.lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (file.lines[i].empty()) continue;
    auto fields = split_fields(file.lines[i]);
    if (fields.size() != header.size()) {
      fail_line(path, line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                   std::to_string(fields.size()));
    }
    ItemMeta item;
    try {
      item.item_id = std::string(fields[0]);
      item.article_type = std::string(fields[1]);
      item.brand = std::string(fields[2]);
      item.price_point = parse_double(fields[3], "price_point");
      item.go_live_week = static_cast<Week>(parse_int(fields[4], "go_live_week"));
    } catch (const ValidationError& e) {
      fail_line(path, line_no, e.what());
    }
    if (item.item_id.empty()) fail_line(path, line_no, "empty item_id");
    for (std::size_t a = 0; a < attr_names.size(); ++a) {
      std::string_view value = fields[fixed.size() + a];
      if (!value.empty()) item.attributes.emplace(attr_names[a], std::string(value));
    }
    auto [it, inserted] = seen.emplace(item.item_id, line_no);
    if (!inserted) {
      fail_line(path, line_no, "duplicate item_id '" + item.item_id + "', first seen on line " +
                                   std::to_string(it->second));
    }
    items.push_back(std::move(item));
  }
  return items;
}

PromoCalendar read_promos(const std::filesystem::path& path) {
  Lines file = read_lines(path);
  std::vector<Week> weeks;
  for (std::size_t i = 0; i < file.lines.size(); ++i) {
    auto text = trim(file.lines[i]);
    if (text.empty()) continue;
    try {
      weeks.push_back(static_cast<Week>(parse_int(text, "promo week")));
    } catch (const ValidationError& e) {
      fail_line(path, i + 1, e.what());
    }
  }
  return PromoCalendar(std::move(weeks));
}

Catalog ingest_csv(const std::filesystem::path& dir) {
  auto items = read_items_csv(dir / kItemsFile);
  auto observations = read_observations(dir / kObservationsFile);
  PromoCalendar promos;
  if (std::filesystem::exists(dir / kPromosFile)) promos = read_promos(dir / kPromosFile);
  return Catalog::validated(std::move(items), std::move(observations), std::move(promos));
}

std::string items_csv(const Catalog& catalog) {
  std::set<std::string> names;
  for (const auto& item : catalog.items()) {
    for (const auto& [name, value] : item.attributes) names.insert(name);
  }
  std::ostringstream out;
  out << "item_id,article_type,brand,price_point,go_live_week";
  for (const auto& name : names) {
    check_text_field(name, "attribute name");
    out << ',' << kAttrPrefix << name;
  }
  out << '\n';
  for (const auto& item : catalog.items()) {
    check_text_field(item.item_id, "item_id");
    check_text_field(item.article_type, "article_type");
    check_text_field(item.brand, "brand");
    out << item.item_id << ',' << item.article_type << ',' << item.brand << ','
        << format_double(item.price_point) << ',' << item.go_live_week;
    for (const auto& name : names) {
      out << ',';
      if (auto it = item.attributes.find(name); it != item.attributes.end()) {
        check_text_field(it->second, "attribute value");
        out << it->second;
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string observations_csv(const Catalog& catalog) {
  std::ostringstream out;
  out << kObservationsHeader << '\n';
  for (const auto& row : catalog.observations()) {
    out << row.item_id << ',' << row.week << ',' << row.units_sold << ','
        << format_double(row.discount_fraction) << ',' << format_double(row.list_views) << ','
        << (row.live ? '1' : '0') << '\n';
  }
  return out.str();
}

std::string promos_text(const PromoCalendar& promos) {
  std::ostringstream out;
  for (Week w : promos.weeks()) out << w << '\n';
  return out.str();
}

void write_catalog(const std::filesystem::path& dir, const Catalog& catalog) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / kItemsFile, items_csv(catalog));
  write_file_atomic(dir / kObservationsFile, observations_csv(catalog));
  write_file_atomic(dir / kPromosFile, promos_text(catalog.promos()));
}

}  // namespace stylecast

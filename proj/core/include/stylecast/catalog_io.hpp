#pragma once

#include <filesystem>

#include "stylecast/catalog.hpp"

namespace stylecast {

/// File names inside a catalog directory.
inline constexpr const char* kItemsFile = "items.csv";
inline constexpr const char* kObservationsFile = "observations.csv";
inline constexpr const char* kPromosFile = "promos.txt";

/// Reads items.csv, observations.csv and promos.txt (optional) from `dir`
/// and returns the validated catalog. Parse errors carry file and line.
Catalog ingest_csv(const std::filesystem::path& dir);

/// Writes the three files atomically. Output re-ingests to an equal catalog.
void write_catalog(const std::filesystem::path& dir, const Catalog& catalog);

/// Parses the items file alone (used for forecasting unseen items).
std::vector<ItemMeta> read_items_csv(const std::filesystem::path& path);
PromoCalendar read_promos(const std::filesystem::path& path);

std::string items_csv(const Catalog& catalog);
std::string observations_csv(const Catalog& catalog);
std::string promos_text(const PromoCalendar& promos);

}  // namespace stylecast

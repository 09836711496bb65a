#pragma once

#include <filesystem>
#include <string>

#include "stylecast/feature_matrix.hpp"

namespace stylecast {

inline constexpr const char* kMatrixFile = "matrix.csv";
inline constexpr const char* kSchemaFile = "schema.txt";

/// matrix.csv holds `item_id,week,target,<columns>`; schema.txt lists the
/// column names one per line. Values round-trip exactly.
void write_matrix(const std::filesystem::path& dir, const FeatureMatrix& matrix);
FeatureMatrix read_matrix(const std::filesystem::path& dir);

std::string matrix_csv(const FeatureMatrix& matrix);
FeatureMatrix parse_matrix_csv(const std::string& text, const std::vector<std::string>& schema,
                               const std::string& source = kMatrixFile);

}  // namespace stylecast

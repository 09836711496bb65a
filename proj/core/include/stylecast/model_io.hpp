#pragma once

#include <filesystem>
#include <string>

#include "stylecast/ensemble.hpp"

namespace stylecast {

inline constexpr int kModelFormatVersion = 1;

/// Line-oriented text encoding; every real is written as a hexadecimal
/// float so deserialized models replay predictions bit-exactly. The layout
/// is documented in docs/model_format.md.
std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(const std::string& text);

void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace stylecast

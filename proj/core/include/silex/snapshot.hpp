#pragma once

// Background-model snapshots: save a trained/updated model mid-sequence and
// resume later. Fixed little-endian binary layout (magic "SLBM", version 1)
// so snapshots travel between machines; all floats are IEEE f64.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "silex/bgmodel.hpp"

namespace silex {

inline constexpr std::uint16_t kSnapshotVersion = 1;

std::vector<std::uint8_t> serialize_model(const BackgroundModel& model);
// Throws IoError on bad magic/version/kind, truncation, or values that no
// valid model can hold (non-finite, var <= 0 on live slots).
BackgroundModel deserialize_model(std::span<const std::uint8_t> bytes);

void save_model(const std::filesystem::path& path, const BackgroundModel& model);
BackgroundModel load_model(const std::filesystem::path& path);

} // namespace silex

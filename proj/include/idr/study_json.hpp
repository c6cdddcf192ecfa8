#pragma once

#include <filesystem>
#include <string>

#include "idr/analysis.hpp"

namespace idr {

/// Canonical JSON text of a study result (stable key order, shortest
/// round-trip doubles). See docs/study-schema.md.
std::string study_to_json(const StudyResult& result);
StudyResult study_from_json(const std::string& text);

void write_study_json(const StudyResult& result, const std::filesystem::path& path);
StudyResult read_study_json(const std::filesystem::path& path);

}  // namespace idr

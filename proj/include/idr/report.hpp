#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "idr/analysis.hpp"

namespace idr {

enum class Format {
    Csv,
    Markdown,
    Json,
};

/// Parses "csv", "md" or "json"; a comma-separated list selects several.
std::set<Format> parse_formats(const std::string& text);

/// "N (P%)" with P = 100 n / total rounded half-up to one decimal.
/// Throws Error(UndefinedInput) when total is zero or n exceeds total.
std::string format_count_pct(std::size_t n, std::size_t total);

/// Percentage with one decimal, rounded half-up ("13.5").
std::string format_pct(std::size_t n, std::size_t total);

/// Two-decimal rendering of a median difference ("0.81", "-0.43").
std::string format_delta(double delta);

struct RenderOptions {
    std::set<Format> formats{Format::Csv, Format::Markdown, Format::Json};
    std::size_t extremes_k = 5;
};

/// Writes the report bundle into `dir` (created if needed) and returns the
/// paths written, in write order. Output bytes depend only on `result`.
std::vector<std::filesystem::path> render_report(const StudyResult& result, const RenderOptions& options,
                                                 const std::filesystem::path& dir);

}  // namespace idr

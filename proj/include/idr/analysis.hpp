#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idr/corpus.hpp"
#include "idr/pairing.hpp"
#include "idr/partition.hpp"
#include "idr/stats.hpp"

namespace idr {

enum class Contrast {
    Set1VsSet2,
    Set1VsSet3,
    Union12VsSet3,
};

enum class Indicator {
    AII,
    JII,
};

inline constexpr Contrast kContrasts[] = {Contrast::Set1VsSet2, Contrast::Set1VsSet3, Contrast::Union12VsSet3};

const char* to_string(Contrast c);   // "1v2", "1v3", "12v3"
const char* to_string(Indicator i);  // "AII", "JII"
Contrast parse_contrast(const std::string& s);
Indicator parse_indicator(const std::string& s);

struct StudyConfig {
    double threshold = 0.10;
    std::size_t min_first_count = 100;
    double alpha = 0.05;
    std::size_t min_set_size = 10;
    std::vector<Indicator> indicators{Indicator::AII, Indicator::JII};
    std::uint64_t seed = 20151230;  // Shapiro-Wilk subsampling
    std::optional<std::vector<FieldPair>> pair_override;
    unsigned workers = 1;

    /// Throws Error(InvalidConfig) naming the offending field.
    void check() const;
};

/// A pair scope (first_field, second_field) or a single-field scope.
struct Scope {
    std::string first_field;
    std::string second_field;  // empty for a field scope

    bool is_pair() const { return !second_field.empty(); }
    std::string label() const { return is_pair() ? first_field + "_" + second_field : first_field; }
    auto operator<=>(const Scope&) const = default;
};

/// Outcome of the Shapiro-Wilk pretest on one sample: a result, or the
/// reason it could not run (too small, degenerate).
struct Normality {
    std::optional<stats::TestResult> result;
    std::string error;
};

enum class ComparisonStatus {
    Tested,
    InsufficientData,
};

struct Comparison {
    Scope scope;
    Contrast contrast = Contrast::Set1VsSet2;
    Indicator indicator = Indicator::AII;
    ComparisonStatus status = ComparisonStatus::InsufficientData;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    Normality normality1;
    Normality normality2;
    std::optional<double> u;
    std::optional<double> p;
    std::optional<stats::Method> method;
    std::optional<double> median1;
    std::optional<double> median2;
    std::optional<double> delta_median;
    bool significant = false;
};

/// Fills one comparison from two samples of defined indicator values.
Comparison compare_sets(std::span<const double> values1, std::span<const double> values2,
                        const StudyConfig& config);

struct ScopeCounts {
    Scope scope;
    SetCounts counts;
    std::size_t single_author = 0;
};

struct IndicatorTally {
    std::size_t significant = 0;
    std::size_t positive = 0;  // significant with delta_median > 0
    std::size_t negative = 0;  // significant with delta_median <= 0
    bool operator==(const IndicatorTally&) const = default;
};

struct AreaRow {
    std::string area_code;
    std::string area_name;
    std::size_t scopes = 0;
    std::map<Indicator, IndicatorTally> tallies;
    bool operator==(const AreaRow&) const = default;
};

struct AreaTable {
    Contrast contrast = Contrast::Set1VsSet2;
    std::vector<AreaRow> rows;  // sorted by area name
    AreaRow total;
};

struct StudyResult {
    StudyConfig config;
    std::vector<PairProfile> pairs;
    std::vector<ScopeCounts> pair_counts;   // same order as pairs
    std::vector<ScopeCounts> field_counts;  // distinct first fields, sorted
    DedupTotals totals;                     // over the pair rows
    std::vector<Comparison> comparisons;    // pair scopes (1v2, 1v3) then field scopes (12v3)
    std::vector<AreaTable> areas;           // one per contrast
    std::map<std::string, std::string> field_area;  // first field -> area code
    std::map<std::string, std::string> area_names;  // area code -> name
    std::vector<std::string> warnings;
};

/// Runs the full study. Deterministic for any config.workers.
StudyResult run_study(const Corpus& corpus, const StudyConfig& config);

/// Per-area rollup of the comparisons, one table per contrast. Scopes are
/// grouped by the area of their first field.
std::vector<AreaTable> aggregate_by_area(const StudyResult& result, const FieldScheme& scheme);
/// Same rollup driven by the field->area map stored in the result.
std::vector<AreaTable> aggregate_by_area(const StudyResult& result);

struct SignificanceCell {
    Contrast contrast = Contrast::Set1VsSet2;
    Indicator indicator = Indicator::AII;
    std::size_t scopes = 0;  // denominator: pairs, or first fields for 12v3
    std::size_t tested = 0;
    IndicatorTally tally;
};

/// Counts behind the significance summary table, contrast-major order.
std::vector<SignificanceCell> summarize_significance(const StudyResult& result);

struct ExtremeEntry {
    std::string scope;
    double delta_median = 0;
};

struct Extremes {
    Contrast contrast = Contrast::Set1VsSet2;
    Indicator indicator = Indicator::AII;
    std::vector<ExtremeEntry> top;     // largest first
    std::vector<ExtremeEntry> bottom;  // smallest k, listed largest first
};

/// The k largest and k smallest significant median differences per
/// (contrast, indicator). Throws Error(InvalidConfig) for k == 0.
std::vector<Extremes> extract_extremes(const StudyResult& result, std::size_t k);

}  // namespace idr

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "idr/corpus.hpp"

namespace idr {

/// Ordered pair of field codes. Order matters: the first field is the one
/// whose publications are partitioned.
struct FieldPair {
    std::string first;
    std::string second;

    auto operator<=>(const FieldPair&) const = default;
    /// "A_B", the label used in listings.
    std::string label() const { return first + "_" + second; }
};

struct PairProfile {
    std::string first_field;
    std::string second_field;
    std::size_t co_count = 0;     // publications with classified authors in both fields
    std::size_t first_count = 0;  // publications with a classified author in first_field
    double degree = 0.0;          // co_count / first_count

    FieldPair pair() const { return {first_field, second_field}; }
};

/// Symmetric co-publication counts keyed by (a, b) with a < b.
using CoCounts = std::map<std::pair<std::string, std::string>, std::size_t>;

/// Number of distinct publications per field (fields with zero omitted).
std::map<std::string, std::size_t> field_pub_counts(const Corpus& corpus);

CoCounts co_pub_counts(const Corpus& corpus);
/// Order-insensitive lookup; zero when the pair never co-occurs.
std::size_t lookup_co_count(const CoCounts& counts, const std::string& a, const std::string& b);

/// Specific degree of interdisciplinarity of the first field with the second.
/// Throws Error(UndefinedInput) when first_count is zero.
double specific_degree(std::size_t co_count, std::size_t first_count);

/// All ordered pairs (A, B), A != B, with first_count(A) >= min_first_count
/// and degree(A, B) strictly above threshold, sorted by (A, B).
std::vector<PairProfile> identify_pairs(const Corpus& corpus, double threshold, std::size_t min_first_count);

/// Profiles for an externally fixed pair list, sorted by (A, B). Pairs whose
/// first field has no publications are skipped with a warning appended.
std::vector<PairProfile> profile_pairs(const Corpus& corpus, std::span<const FieldPair> pairs,
                                       std::vector<std::string>* warnings = nullptr);

/// Reads a first_field,second_field CSV.
std::vector<FieldPair> load_pair_list(const std::filesystem::path& path);

/// Simpson's index of diversity, 1 - sum(p_i^2) with p_i = x_i / sum(x).
double simpson_index(std::span<const std::uint64_t> counts);

}  // namespace idr

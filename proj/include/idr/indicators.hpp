#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idr/corpus.hpp"

namespace idr {

struct StratumKey {
    int year = 0;
    std::string category;

    auto operator<=>(const StratumKey&) const = default;
};

/// Per (year, category) normalization baselines. Every stratum that occurs
/// in the corpus has an entry; nullopt marks it undefined.
struct BaselineTable {
    /// Mean citations over the stratum's publications with at least one citation.
    std::map<StratumKey, std::optional<double>> citation;
    /// Mean impact factor over the distinct journals carrying the category that year.
    std::map<StratumKey, std::optional<double>> impact;

    std::optional<double> citation_baseline(int year, const std::string& category) const;
    std::optional<double> impact_baseline(int year, const std::string& category) const;
};

BaselineTable compute_baselines(const Corpus& corpus);

/// Article Impact Index: citations over the stratum baseline, averaged over
/// the publication's categories. Undefined for an empty category list or
/// when any category's baseline is undefined.
std::optional<double> aii(const Publication& publication, const BaselineTable& baselines);

/// Journal Impact Index: the journal's impact factor in the publication year
/// over the category IF baseline, averaged the same way as aii().
std::optional<double> jii(const Publication& publication, std::optional<double> journal_impact_factor,
                          const BaselineTable& baselines);

/// Convenience overload looking up the journal record in the corpus.
std::optional<double> jii(const Corpus& corpus, PubIndex index, const BaselineTable& baselines);

struct IndicatorScore {
    PubIndex pub = 0;
    std::optional<double> aii;
    std::optional<double> jii;
};

/// Scores every publication, indexed by PubIndex. Result is identical for
/// any worker count.
std::vector<IndicatorScore> score_publications(const Corpus& corpus, const BaselineTable& baselines,
                                               unsigned workers = 1);

/// pub_id,aii,jii with an empty cell for undefined values.
void write_indicators_csv(const Corpus& corpus, std::span<const IndicatorScore> scores,
                          const std::filesystem::path& path);

}  // namespace idr

#include "idr/indicators.hpp"

#include <algorithm>
#include <fstream>

#include "idr/csv.hpp"
#include "idr/error.hpp"
#include "idr/parallel.hpp"

namespace idr {

namespace {

std::optional<double> lookup(const std::map<StratumKey, std::optional<double>>& table, int year,
                             const std::string& category) {
    auto it = table.find(StratumKey{year, category});
    return it == table.end() ? std::nullopt : it->second;
}

struct Accumulator {
    long double sum = 0;
    std::size_t count = 0;
};

std::optional<double> mean(const Accumulator& a) {
    if (a.count == 0) return std::nullopt;
    return static_cast<double>(a.sum / a.count);
}

// Distinct categories in first-seen order; repeated codes must not weight
// the multi-category average.
std::vector<std::string> distinct(const std::vector<std::string>& categories) {
    std::vector<std::string> out;
    for (const auto& c : categories) {
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
}

}  // namespace

std::optional<double> BaselineTable::citation_baseline(int year, const std::string& category) const {
    return lookup(citation, year, category);
}

std::optional<double> BaselineTable::impact_baseline(int year, const std::string& category) const {
    return lookup(impact, year, category);
}

BaselineTable compute_baselines(const Corpus& corpus) {
    std::map<StratumKey, Accumulator> cites;
    for (const auto& p : corpus.publications()) {
        for (const auto& cat : distinct(p.categories)) {
            auto& acc = cites[StratumKey{p.year, cat}];
            if (p.citations >= 1) {
                acc.sum += p.citations;
                ++acc.count;
            }
        }
    }
    std::map<StratumKey, Accumulator> impacts;
    for (const auto& j : corpus.journals()) {
        for (const auto& rec : j.records) {
            for (const auto& cat : distinct(rec.categories)) {
                auto& acc = impacts[StratumKey{rec.year, cat}];
                if (rec.impact_factor) {
                    acc.sum += *rec.impact_factor;
                    ++acc.count;
                }
            }
        }
    }

    BaselineTable table;
    for (const auto& [key, acc] : cites) table.citation.emplace(key, mean(acc));
    for (const auto& [key, acc] : impacts) {
        auto m = mean(acc);
        // An all-zero IF stratum cannot normalize anything.
        table.impact.emplace(key, (m && *m > 0) ? m : std::nullopt);
    }
    return table;
}

std::optional<double> aii(const Publication& publication, const BaselineTable& baselines) {
    auto cats = distinct(publication.categories);
    if (cats.empty()) return std::nullopt;
    double total = 0;
    for (const auto& c : cats) {
        auto base = baselines.citation_baseline(publication.year, c);
        if (!base) return std::nullopt;
        total += static_cast<double>(publication.citations) / *base;
    }
    return total / static_cast<double>(cats.size());
}

std::optional<double> jii(const Publication& publication, std::optional<double> journal_impact_factor,
                          const BaselineTable& baselines) {
    auto cats = distinct(publication.categories);
    if (cats.empty() || !journal_impact_factor) return std::nullopt;
    double total = 0;
    for (const auto& c : cats) {
        auto base = baselines.impact_baseline(publication.year, c);
        if (!base) return std::nullopt;
        total += *journal_impact_factor / *base;
    }
    return total / static_cast<double>(cats.size());
}

std::optional<double> jii(const Corpus& corpus, PubIndex index, const BaselineTable& baselines) {
    const auto& p = corpus.publication(index);
    const auto* rec = corpus.journal_record(p.journal_id, p.year);
    return jii(p, rec ? rec->impact_factor : std::nullopt, baselines);
}

std::vector<IndicatorScore> score_publications(const Corpus& corpus, const BaselineTable& baselines,
                                               unsigned workers) {
    std::vector<IndicatorScore> scores(corpus.size());
    parallel_for(corpus.size(), workers, [&](std::size_t i) {
        auto index = static_cast<PubIndex>(i);
        scores[i] = {index, aii(corpus.publication(index), baselines), jii(corpus, index, baselines)};
    });
    return scores;
}

void write_indicators_csv(const Corpus& corpus, std::span<const IndicatorScore> scores,
                          const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    csv::write_row(out, {"pub_id", "aii", "jii"});
    for (const auto& s : scores) {
        csv::write_row(out, {corpus.publication(s.pub).pub_id, s.aii ? format_double(*s.aii) : std::string{},
                             s.jii ? format_double(*s.jii) : std::string{}});
    }
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace idr

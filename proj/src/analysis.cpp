#include "idr/analysis.hpp"

#include <algorithm>
#include <set>

#include "idr/error.hpp"
#include "idr/indicators.hpp"
#include "idr/parallel.hpp"

namespace idr {

const char* to_string(Contrast c) {
    switch (c) {
        case Contrast::Set1VsSet2: return "1v2";
        case Contrast::Set1VsSet3: return "1v3";
        case Contrast::Union12VsSet3: return "12v3";
    }
    return "?";
}

const char* to_string(Indicator i) { return i == Indicator::AII ? "AII" : "JII"; }

Contrast parse_contrast(const std::string& s) {
    for (auto c : kContrasts) {
        if (s == to_string(c)) return c;
    }
    throw Error(ErrorCode::MalformedRow, "unknown contrast '" + s + "'");
}

Indicator parse_indicator(const std::string& s) {
    if (s == "AII" || s == "aii") return Indicator::AII;
    if (s == "JII" || s == "jii") return Indicator::JII;
    throw Error(ErrorCode::InvalidConfig, "unknown indicator '" + s + "'");
}

void StudyConfig::check() const {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
    if (!(threshold > 0.0 && threshold <= 1.0)) bad("threshold must lie in (0, 1]");
    if (!(alpha > 0.0 && alpha < 1.0)) bad("alpha must lie in (0, 1)");
    if (min_set_size < 3) bad("min_set_size must be at least 3");
    if (indicators.empty()) bad("indicators must select AII, JII or both");
    std::set<Indicator> seen(indicators.begin(), indicators.end());
    if (seen.size() != indicators.size()) bad("indicators lists an indicator twice");
}

Comparison compare_sets(std::span<const double> values1, std::span<const double> values2,
                        const StudyConfig& config) {
    Comparison c;
    c.n1 = values1.size();
    c.n2 = values2.size();
    if (c.n1 < config.min_set_size || c.n2 < config.min_set_size) {
        c.status = ComparisonStatus::InsufficientData;
        return c;
    }
    c.status = ComparisonStatus::Tested;
    auto pretest = [&](std::span<const double> values) {
        Normality out;
        try {
            out.result = stats::shapiro_wilk(values, config.seed);
        } catch (const Error& e) {
            out.error = to_string(e.code());
        }
        return out;
    };
    c.normality1 = pretest(values1);
    c.normality2 = pretest(values2);

    stats::MannWhitneyOptions options;
    options.alpha = config.alpha;
    auto test = stats::mann_whitney(values1, values2, options);
    c.u = test.statistic;
    c.p = test.p_value;
    c.method = test.method;
    c.median1 = stats::median(values1);
    c.median2 = stats::median(values2);
    c.delta_median = *c.median1 - *c.median2;
    c.significant = test.p_value < config.alpha;
    return c;
}

namespace {

struct Slot {
    std::size_t sets;  // index into the partition list
    Contrast contrast;
    Indicator indicator;
};

std::vector<double> collect(std::span<const PubIndex> pubs, const std::vector<IndicatorScore>& scores,
                            Indicator indicator) {
    std::vector<double> out;
    out.reserve(pubs.size());
    for (auto i : pubs) {
        const auto& v = indicator == Indicator::AII ? scores[i].aii : scores[i].jii;
        if (v) out.push_back(*v);
    }
    return out;
}

}  // namespace

StudyResult run_study(const Corpus& corpus, const StudyConfig& config) {
    config.check();
    StudyResult result;
    result.config = config;

    if (config.pair_override) {
        result.pairs = profile_pairs(corpus, *config.pair_override, &result.warnings);
    } else {
        result.pairs = identify_pairs(corpus, config.threshold, config.min_first_count);
    }
    if (result.pairs.empty()) result.warnings.push_back("no qualifying field pairs; study is empty");

    std::vector<PublicationSets> partitions(result.pairs.size());
    parallel_for(result.pairs.size(), config.workers,
                 [&](std::size_t i) { partitions[i] = partition_pair(corpus, result.pairs[i].pair()); });

    std::set<std::string> first_fields;
    for (const auto& p : result.pairs) first_fields.insert(p.first_field);
    const std::size_t pair_rows = partitions.size();
    for (const auto& f : first_fields) partitions.push_back(partition_field(corpus, f));

    for (std::size_t i = 0; i < partitions.size(); ++i) {
        const auto& s = partitions[i];
        ScopeCounts sc{{s.first_field, s.second_field.value_or("")}, count_sets(s), s.single_author};
        (i < pair_rows ? result.pair_counts : result.field_counts).push_back(std::move(sc));
    }
    result.totals = dedup_totals(std::span<const PublicationSets>(partitions).first(pair_rows));

    auto baselines = compute_baselines(corpus);
    auto scores = score_publications(corpus, baselines, config.workers);

    std::vector<Slot> slots;
    for (std::size_t i = 0; i < partitions.size(); ++i) {
        auto contrasts = i < pair_rows ? std::vector<Contrast>{Contrast::Set1VsSet2, Contrast::Set1VsSet3}
                                       : std::vector<Contrast>{Contrast::Union12VsSet3};
        for (auto c : contrasts) {
            for (auto ind : config.indicators) slots.push_back({i, c, ind});
        }
    }
    result.comparisons.resize(slots.size());
    parallel_for(slots.size(), config.workers, [&](std::size_t k) {
        const auto& slot = slots[k];
        const auto& sets = partitions[slot.sets];
        std::span<const PubIndex> left, right;
        switch (slot.contrast) {
            case Contrast::Set1VsSet2: left = sets.set1; right = sets.set2; break;
            case Contrast::Set1VsSet3: left = sets.set1; right = sets.set3; break;
            case Contrast::Union12VsSet3: left = sets.union12; right = sets.set3; break;
        }
        auto v1 = collect(left, scores, slot.indicator);
        auto v2 = collect(right, scores, slot.indicator);
        auto c = compare_sets(v1, v2, config);
        c.scope = {sets.first_field, sets.second_field.value_or("")};
        c.contrast = slot.contrast;
        c.indicator = slot.indicator;
        result.comparisons[k] = std::move(c);
    });

    for (const auto& f : first_fields) {
        auto id = corpus.scheme().require(f);
        const auto& area = corpus.scheme().area_of(id);
        result.field_area.emplace(f, area);
        result.area_names.emplace(area, corpus.scheme().areas().at(area));
    }
    result.areas = aggregate_by_area(result);
    return result;
}

namespace {

std::vector<AreaTable> aggregate(const StudyResult& result, const std::map<std::string, std::string>& field_area,
                                 const std::map<std::string, std::string>& area_names) {
    auto area_of = [&](const std::string& field) -> const std::string& {
        auto it = field_area.find(field);
        if (it == field_area.end()) {
            throw Error(ErrorCode::DanglingReference, "no area recorded for field '" + field + "'");
        }
        return it->second;
    };

    std::vector<AreaTable> tables;
    for (auto contrast : kContrasts) {
        AreaTable table;
        table.contrast = contrast;
        std::map<std::string, AreaRow> rows;
        const auto& scopes = contrast == Contrast::Union12VsSet3 ? result.field_counts : result.pair_counts;
        for (const auto& sc : scopes) {
            const auto& area = area_of(sc.scope.first_field);
            auto& row = rows[area];
            row.area_code = area;
            auto nt = area_names.find(area);
            row.area_name = nt == area_names.end() ? area : nt->second;
            ++row.scopes;
        }
        for (auto& [code, row] : rows) {
            for (auto ind : result.config.indicators) row.tallies[ind];
        }
        for (const auto& c : result.comparisons) {
            if (c.contrast != contrast || !c.significant) continue;
            auto& tally = rows.at(area_of(c.scope.first_field)).tallies[c.indicator];
            ++tally.significant;
            ++(c.delta_median.value_or(0) > 0 ? tally.positive : tally.negative);
        }
        table.total.area_name = "Total";
        for (auto ind : result.config.indicators) table.total.tallies[ind];
        for (auto& [code, row] : rows) {
            table.total.scopes += row.scopes;
            for (const auto& [ind, t] : row.tallies) {
                auto& tt = table.total.tallies[ind];
                tt.significant += t.significant;
                tt.positive += t.positive;
                tt.negative += t.negative;
            }
            table.rows.push_back(std::move(row));
        }
        std::stable_sort(table.rows.begin(), table.rows.end(),
                         [](const AreaRow& a, const AreaRow& b) { return a.area_name < b.area_name; });
        tables.push_back(std::move(table));
    }
    return tables;
}

}  // namespace

std::vector<AreaTable> aggregate_by_area(const StudyResult& result, const FieldScheme& scheme) {
    std::map<std::string, std::string> field_area;
    std::map<std::string, std::string> area_names;
    for (const auto* scopes : {&result.pair_counts, &result.field_counts}) {
        for (const auto& sc : *scopes) {
            const auto& area = scheme.area_of(scheme.require(sc.scope.first_field));
            field_area.emplace(sc.scope.first_field, area);
            area_names.emplace(area, scheme.areas().at(area));
        }
    }
    return aggregate(result, field_area, area_names);
}

std::vector<AreaTable> aggregate_by_area(const StudyResult& result) {
    return aggregate(result, result.field_area, result.area_names);
}

std::vector<SignificanceCell> summarize_significance(const StudyResult& result) {
    std::vector<SignificanceCell> cells;
    for (auto contrast : kContrasts) {
        for (auto ind : result.config.indicators) {
            SignificanceCell cell;
            cell.contrast = contrast;
            cell.indicator = ind;
            cell.scopes = contrast == Contrast::Union12VsSet3 ? result.field_counts.size() : result.pair_counts.size();
            for (const auto& c : result.comparisons) {
                if (c.contrast != contrast || c.indicator != ind) continue;
                if (c.status == ComparisonStatus::Tested) ++cell.tested;
                if (!c.significant) continue;
                ++cell.tally.significant;
                ++(c.delta_median.value_or(0) > 0 ? cell.tally.positive : cell.tally.negative);
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

std::vector<Extremes> extract_extremes(const StudyResult& result, std::size_t k) {
    if (k == 0) throw Error(ErrorCode::InvalidConfig, "extremes need k >= 1");
    std::vector<Extremes> out;
    for (auto contrast : kContrasts) {
        for (auto ind : result.config.indicators) {
            std::vector<ExtremeEntry> entries;
            for (const auto& c : result.comparisons) {
                if (c.contrast == contrast && c.indicator == ind && c.significant) {
                    entries.push_back({c.scope.label(), *c.delta_median});
                }
            }
            std::sort(entries.begin(), entries.end(), [](const ExtremeEntry& a, const ExtremeEntry& b) {
                if (a.delta_median != b.delta_median) return a.delta_median > b.delta_median;
                return a.scope < b.scope;
            });
            Extremes e;
            e.contrast = contrast;
            e.indicator = ind;
            const std::size_t take = std::min(k, entries.size());
            e.top.assign(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(take));
            e.bottom.assign(entries.end() - static_cast<std::ptrdiff_t>(take), entries.end());
            out.push_back(std::move(e));
        }
    }
    return out;
}

}  // namespace idr

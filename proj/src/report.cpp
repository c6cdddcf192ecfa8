#include "idr/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "idr/csv.hpp"
#include "idr/error.hpp"
#include "idr/study_json.hpp"

namespace idr {

std::set<Format> parse_formats(const std::string& text) {
    std::set<Format> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (item == "csv") out.insert(Format::Csv);
        else if (item == "md") out.insert(Format::Markdown);
        else if (item == "json") out.insert(Format::Json);
        else if (item == "all") out = {Format::Csv, Format::Markdown, Format::Json};
        else throw Error(ErrorCode::InvalidConfig, "unknown format '" + item + "' (expected csv, md, json)");
    }
    if (out.empty()) throw Error(ErrorCode::InvalidConfig, "no output format selected");
    return out;
}

std::string format_pct(std::size_t n, std::size_t total) {
    if (total == 0) throw Error(ErrorCode::UndefinedInput, "percentage of an empty total");
    if (n > total) throw Error(ErrorCode::UndefinedInput, "count exceeds its total");
    // tenths of a percent, half-up, in integer arithmetic
    unsigned __int128 tenths = (static_cast<unsigned __int128>(n) * 2000 + total) / (2 * static_cast<unsigned __int128>(total));
    auto t = static_cast<std::uint64_t>(tenths);
    return std::to_string(t / 10) + "." + std::to_string(t % 10);
}

std::string format_count_pct(std::size_t n, std::size_t total) {
    return std::to_string(n) + " (" + format_pct(n, total) + "%)";
}

std::string format_delta(double delta) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", delta);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

namespace {

const char* contrast_title(Contrast c) {
    switch (c) {
        case Contrast::Set1VsSet2: return "set 1 vs set 2";
        case Contrast::Set1VsSet3: return "set 1 vs set 3";
        case Contrast::Union12VsSet3: return "set (1 U 2) vs set 3";
    }
    return "?";
}

const char* contrast_file(Contrast c) {
    switch (c) {
        case Contrast::Set1VsSet2: return "area_1v2.csv";
        case Contrast::Set1VsSet3: return "area_1v3.csv";
        case Contrast::Union12VsSet3: return "area_12v3.csv";
    }
    return "?";
}

// Percent cell that tolerates an empty denominator (renders the bare count).
std::string count_cell(std::size_t n, std::size_t total) {
    return total == 0 ? std::to_string(n) : format_count_pct(n, total);
}

std::string pct_or_empty(std::size_t n, std::size_t total) { return total == 0 ? std::string{} : format_pct(n, total); }

// Significant count cell: "0" when none, else "N (P%)" of the scopes.
std::string significant_cell(const IndicatorTally& t, std::size_t scopes) {
    return t.significant == 0 ? "0" : count_cell(t.significant, scopes);
}

std::string split_cell(const IndicatorTally& t) {
    if (t.significant == 0) return "-";
    return std::to_string(t.positive) + "(+) " + std::to_string(t.negative) + "(-)";
}

class Output {
public:
    Output(const std::filesystem::path& dir, std::vector<std::filesystem::path>& written) : dir_(dir), written_(written) {}

    void write(const std::string& name, const std::string& content) {
        auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
        out << content;
        if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
        written_.push_back(path);
    }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path>& written_;
};

std::string csv_text(const std::vector<csv::Row>& rows) {
    std::ostringstream out;
    for (const auto& r : rows) csv::write_row(out, r);
    return out.str();
}

// --- pair listing -----------------------------------------------------------

std::vector<csv::Row> pair_listing_rows(const StudyResult& r) {
    std::vector<csv::Row> rows{{"first_field", "second_field", "pair", "co_count", "first_count", "degree_pct", "set1",
                                "set1_pct", "set2", "set2_pct", "set3", "set3_pct", "union12", "union12_pct", "total"}};
    auto counts_cells = [](const SetCounts& c, csv::Row& row) {
        for (auto v : {c.set1, c.set2, c.set3, c.union12}) {
            row.push_back(std::to_string(v));
            row.push_back(pct_or_empty(v, c.total));
        }
        row.push_back(std::to_string(c.total));
    };
    for (std::size_t i = 0; i < r.pairs.size(); ++i) {
        const auto& p = r.pairs[i];
        csv::Row row{p.first_field, p.second_field, p.first_field + "_" + p.second_field, std::to_string(p.co_count),
                     std::to_string(p.first_count), pct_or_empty(p.co_count, p.first_count)};
        counts_cells(r.pair_counts.at(i).counts, row);
        rows.push_back(std::move(row));
    }
    if (!r.pairs.empty()) {
        csv::Row total{"Total", "", "", "", "", ""};
        counts_cells(r.totals.summed, total);
        rows.push_back(std::move(total));
        const auto& d = r.totals.distinct;
        rows.push_back({"Total without duplicates", "", "", "", "", "", std::to_string(d.set1), "",
                        std::to_string(d.set2), "", std::to_string(d.set3), "", std::to_string(d.union12), "",
                        std::to_string(d.total)});
    }
    return rows;
}

// --- significance summary ---------------------------------------------------

std::vector<csv::Row> summary_rows(const StudyResult& r) {
    std::vector<csv::Row> rows{{"contrast", "indicator", "scopes", "tested", "significant", "positive", "negative",
                                "significant_pct", "positive_pct", "negative_pct"}};
    if (r.pair_counts.empty() && r.field_counts.empty()) return rows;
    for (const auto& c : summarize_significance(r)) {
        rows.push_back({to_string(c.contrast), to_string(c.indicator), std::to_string(c.scopes),
                        std::to_string(c.tested), std::to_string(c.tally.significant),
                        std::to_string(c.tally.positive), std::to_string(c.tally.negative),
                        pct_or_empty(c.tally.significant, c.scopes), pct_or_empty(c.tally.positive, c.scopes),
                        pct_or_empty(c.tally.negative, c.scopes)});
    }
    return rows;
}

// --- extremes ---------------------------------------------------------------

std::vector<csv::Row> extremes_rows(const std::vector<Extremes>& ex) {
    std::vector<csv::Row> rows{{"contrast", "indicator", "direction", "rank", "scope", "delta_median"}};
    for (const auto& e : ex) {
        for (std::size_t i = 0; i < e.top.size(); ++i) {
            rows.push_back({to_string(e.contrast), to_string(e.indicator), "top", std::to_string(i + 1), e.top[i].scope,
                            format_delta(e.top[i].delta_median)});
        }
        for (std::size_t i = 0; i < e.bottom.size(); ++i) {
            rows.push_back({to_string(e.contrast), to_string(e.indicator), "bottom", std::to_string(i + 1),
                            e.bottom[i].scope, format_delta(e.bottom[i].delta_median)});
        }
    }
    return rows;
}

// --- area tables ------------------------------------------------------------

std::vector<csv::Row> area_rows(const AreaTable& t, const std::vector<Indicator>& indicators) {
    csv::Row header{"area_code", "area_name", "scopes", "scopes_pct"};
    for (auto ind : indicators) {
        std::string p = ind == Indicator::AII ? "aii_" : "jii_";
        for (const char* s : {"significant", "significant_pct", "positive", "negative"}) header.push_back(p + s);
    }
    std::vector<csv::Row> rows{header};
    if (t.rows.empty()) return rows;
    auto emit = [&](const AreaRow& row, bool total) {
        csv::Row out{row.area_code, row.area_name, std::to_string(row.scopes),
                     total ? std::string{} : pct_or_empty(row.scopes, t.total.scopes)};
        for (auto ind : indicators) {
            IndicatorTally tally;
            if (auto it = row.tallies.find(ind); it != row.tallies.end()) tally = it->second;
            out.push_back(std::to_string(tally.significant));
            out.push_back(pct_or_empty(tally.significant, row.scopes));
            out.push_back(std::to_string(tally.positive));
            out.push_back(std::to_string(tally.negative));
        }
        rows.push_back(std::move(out));
    };
    for (const auto& row : t.rows) emit(row, false);
    emit(t.total, true);
    return rows;
}

// --- median difference listings ----------------------------------------------

std::vector<const Comparison*> significant_sorted(const StudyResult& r, Contrast c, Indicator ind) {
    std::vector<const Comparison*> out;
    for (const auto& cmp : r.comparisons) {
        if (cmp.contrast == c && cmp.indicator == ind && cmp.significant) out.push_back(&cmp);
    }
    std::sort(out.begin(), out.end(),
              [](const Comparison* a, const Comparison* b) { return a->scope.label() < b->scope.label(); });
    return out;
}

std::vector<csv::Row> median_diff_rows(const StudyResult& r, Indicator ind) {
    std::vector<csv::Row> rows{{"contrast", "scope", "delta_median", "p_value"}};
    bool selected = std::find(r.config.indicators.begin(), r.config.indicators.end(), ind) != r.config.indicators.end();
    if (!selected) return rows;
    for (auto c : kContrasts) {
        for (const auto* cmp : significant_sorted(r, c, ind)) {
            rows.push_back({to_string(c), cmp->scope.label(), format_delta(*cmp->delta_median), format_double(*cmp->p)});
        }
    }
    return rows;
}

// --- markdown -----------------------------------------------------------------

void md_table(std::ostream& out, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    out << '|';
    for (const auto& h : header) out << ' ' << h << " |";
    out << "\n|";
    for (std::size_t i = 0; i < header.size(); ++i) out << (i < 2 ? " --- |" : " ---: |");
    out << '\n';
    for (const auto& row : rows) {
        out << '|';
        for (const auto& cell : row) out << ' ' << cell << " |";
        out << '\n';
    }
    out << '\n';
}

std::string markdown(const StudyResult& r, const std::vector<Extremes>& extremes) {
    std::ostringstream out;
    out << "# Interdisciplinarity impact study\n\n";
    out << "Threshold " << format_double(r.config.threshold) << ", minimum first-field publications "
        << r.config.min_first_count << ", alpha " << format_double(r.config.alpha) << ", minimum set size "
        << r.config.min_set_size << ".\n\n";

    out << "## Field pairs and publication sets\n\n";
    if (r.pairs.empty()) out << "No qualifying field pairs.\n\n";
    {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < r.pairs.size(); ++i) {
            const auto& p = r.pairs[i];
            const auto& c = r.pair_counts.at(i).counts;
            rows.push_back({p.first_field, p.first_field + "_" + p.second_field,
                            count_cell(p.co_count, p.first_count), count_cell(c.set1, c.total),
                            count_cell(c.set2, c.total), count_cell(c.set3, c.total), count_cell(c.union12, c.total),
                            std::to_string(c.total) + " (100%)"});
        }
        if (!r.pairs.empty()) {
            const auto& s = r.totals.summed;
            rows.push_back({"Total", "", "", count_cell(s.set1, s.total), count_cell(s.set2, s.total),
                            count_cell(s.set3, s.total), count_cell(s.union12, s.total),
                            std::to_string(s.total) + " (100%)"});
            const auto& d = r.totals.distinct;
            rows.push_back({"Total without duplicates", "", "", std::to_string(d.set1), std::to_string(d.set2),
                            std::to_string(d.set3), std::to_string(d.union12), std::to_string(d.total)});
        }
        md_table(out, {"First field", "Pair", "Specific degree", "Set 1", "Set 2", "Set 3", "Set (1 U 2)", "Total"}, rows);
    }

    out << "## Significant differences\n\n";
    {
        auto cells = summarize_significance(r);
        std::vector<std::vector<std::string>> rows;
        for (auto ind : r.config.indicators) {
            for (bool positive : {true, false}) {
                std::vector<std::string> row{to_string(ind), positive ? "Y" : "N"};
                for (auto c : kContrasts) {
                    for (const auto& cell : cells) {
                        if (cell.contrast != c || cell.indicator != ind) continue;
                        row.push_back(count_cell(positive ? cell.tally.positive : cell.tally.negative, cell.scopes));
                    }
                }
                rows.push_back(std::move(row));
            }
        }
        md_table(out, {"Indicator", "Δ median > 0", "set 1 vs set 2 (pairs)", "set 1 vs set 3 (pairs)",
                       "set (1 U 2) vs set 3 (fields)"},
                 rows);
    }

    out << "## Largest significant median differences\n\n";
    for (const auto& e : extremes) {
        out << "### " << contrast_title(e.contrast) << ", " << to_string(e.indicator) << "\n\n";
        if (e.top.empty()) {
            out << "No significant differences.\n\n";
            continue;
        }
        std::vector<std::vector<std::string>> rows;
        for (const auto& x : e.top) rows.push_back({"Δ↑", x.scope, format_delta(x.delta_median)});
        for (const auto& x : e.bottom) rows.push_back({"Δ↓", x.scope, format_delta(x.delta_median)});
        md_table(out, {"Direction", "Scope", "Δ median"}, rows);
    }

    for (const auto& t : r.areas) {
        bool field_scope = t.contrast == Contrast::Union12VsSet3;
        out << "## Rank-sum test by area: " << contrast_title(t.contrast) << "\n\n";
        std::vector<std::string> header{"Area", field_scope ? "Tot. no. first fields" : "Tot. no. pairs"};
        for (auto ind : r.config.indicators) {
            header.push_back(std::string(to_string(ind)) + (field_scope ? " no. fields*" : " no. pairs*"));
            header.push_back(std::string(to_string(ind)) + " Δ median");
        }
        std::vector<std::vector<std::string>> rows;
        auto emit = [&](const AreaRow& row, bool total) {
            std::vector<std::string> cells{row.area_name,
                                           total ? std::to_string(row.scopes) : count_cell(row.scopes, t.total.scopes)};
            for (auto ind : r.config.indicators) {
                IndicatorTally tally;
                if (auto it = row.tallies.find(ind); it != row.tallies.end()) tally = it->second;
                cells.push_back(significant_cell(tally, row.scopes));
                cells.push_back(split_cell(tally));
            }
            rows.push_back(std::move(cells));
        };
        for (const auto& row : t.rows) emit(row, false);
        emit(t.total, true);
        md_table(out, header, rows);
        out << "\\* " << (field_scope ? "First fields" : "Pairs")
            << " whose indicator distributions differ significantly. Areas are those of the first field.\n\n";
    }

    for (auto ind : r.config.indicators) {
        out << "## Median differences, " << to_string(ind) << " (significant only)\n\n";
        for (auto c : kContrasts) {
            out << "### " << contrast_title(c) << "\n\n";
            auto list = significant_sorted(r, c, ind);
            if (list.empty()) {
                out << "None.\n\n";
                continue;
            }
            std::vector<std::vector<std::string>> rows;
            for (const auto* cmp : list) rows.push_back({cmp->scope.label(), format_delta(*cmp->delta_median)});
            md_table(out, {c == Contrast::Union12VsSet3 ? "Field" : "Pair", std::string("Δ ") + to_string(ind)}, rows);
        }
    }

    std::vector<std::vector<std::string>> insufficient;
    for (const auto& c : r.comparisons) {
        if (c.status == ComparisonStatus::InsufficientData) {
            insufficient.push_back({c.scope.label(), to_string(c.contrast), to_string(c.indicator),
                                    std::to_string(c.n1), std::to_string(c.n2)});
        }
    }
    out << "## Insufficient data\n\n";
    if (insufficient.empty()) {
        out << "Every comparison had at least " << r.config.min_set_size << " values per set.\n\n";
    } else {
        md_table(out, {"Scope", "Contrast", "Indicator", "n1", "n2"}, insufficient);
    }
    if (!r.warnings.empty()) {
        out << "## Warnings\n\n";
        for (const auto& w : r.warnings) out << "- " << w << '\n';
        out << '\n';
    }
    return out.str();
}

}  // namespace

std::vector<std::filesystem::path> render_report(const StudyResult& result, const RenderOptions& options,
                                                 const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "'");
    }
    std::vector<std::filesystem::path> written;
    Output out(dir, written);
    auto extremes = extract_extremes(result, options.extremes_k);

    if (options.formats.count(Format::Csv)) {
        out.write("pair_listing.csv", csv_text(pair_listing_rows(result)));
        out.write("summary.csv", csv_text(summary_rows(result)));
        out.write("extremes.csv", csv_text(extremes_rows(extremes)));
        for (auto c : kContrasts) {
            AreaTable empty{c, {}, {}};
            const AreaTable* table = &empty;
            for (const auto& t : result.areas) {
                if (t.contrast == c) table = &t;
            }
            out.write(contrast_file(c), csv_text(area_rows(*table, result.config.indicators)));
        }
        out.write("median_diffs_aii.csv", csv_text(median_diff_rows(result, Indicator::AII)));
        out.write("median_diffs_jii.csv", csv_text(median_diff_rows(result, Indicator::JII)));
    }
    if (options.formats.count(Format::Markdown)) out.write("report.md", markdown(result, extremes));
    if (options.formats.count(Format::Json)) out.write("study.json", study_to_json(result));
    return written;
}

}  // namespace idr

#include "idr/pipeline.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "idr/csv.hpp"
#include "idr/error.hpp"
#include "idr/indicators.hpp"
#include "idr/partition.hpp"
#include "idr/study_json.hpp"

namespace idr::pipeline {

namespace {

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "'");
    }
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

std::vector<PairProfile> run_pairs(const Corpus& corpus, const StudyConfig& config,
                                   const std::filesystem::path& out_dir, std::ostream& log) {
    config.check();
    ensure_dir(out_dir);
    std::vector<std::string> warnings;
    auto pairs = config.pair_override ? profile_pairs(corpus, *config.pair_override, &warnings)
                                      : identify_pairs(corpus, config.threshold, config.min_first_count);
    auto out = open_out(out_dir / "pairs.csv");
    csv::write_row(out, {"first_field", "second_field", "co_count", "first_count", "degree"});
    for (const auto& p : pairs) {
        csv::write_row(out, {p.first_field, p.second_field, std::to_string(p.co_count), std::to_string(p.first_count),
                             format_double(p.degree)});
    }
    std::set<std::string> first_fields;
    for (const auto& p : pairs) first_fields.insert(p.first_field);
    log << "pairs: " << pairs.size() << " pairs over " << first_fields.size() << " first fields"
        << (config.pair_override ? " (from pair list)" : "") << '\n';
    for (const auto& w : warnings) log << "  warning: " << w << '\n';
    return pairs;
}

void run_partition(const Corpus& corpus, const std::vector<PairProfile>& pairs, const std::filesystem::path& out_dir,
                   std::ostream& log) {
    ensure_dir(out_dir);
    std::vector<PublicationSets> rows;
    std::set<std::string> first_fields;
    for (const auto& p : pairs) {
        rows.push_back(partition_pair(corpus, p.pair()));
        first_fields.insert(p.first_field);
    }
    auto totals = dedup_totals(rows);
    for (const auto& f : first_fields) rows.push_back(partition_field(corpus, f));

    auto out = open_out(out_dir / "partition.csv");
    csv::write_row(out, {"scope", "first_field", "second_field", "set1", "set2", "set3", "union12", "total",
                         "single_author"});
    for (const auto& r : rows) {
        auto c = count_sets(r);
        csv::write_row(out, {r.is_pair() ? "pair" : "field", r.first_field, r.second_field.value_or(""),
                             std::to_string(c.set1), std::to_string(c.set2), std::to_string(c.set3),
                             std::to_string(c.union12), std::to_string(c.total), std::to_string(r.single_author)});
    }
    log << "partition: " << pairs.size() << " pair scopes, " << first_fields.size() << " field scopes; distinct set1 "
        << totals.distinct.set1 << ", set2 " << totals.distinct.set2 << ", set3 " << totals.distinct.set3 << '\n';
}

void run_indicators(const Corpus& corpus, unsigned workers, const std::filesystem::path& out_dir, std::ostream& log) {
    ensure_dir(out_dir);
    auto baselines = compute_baselines(corpus);
    auto scores = score_publications(corpus, baselines, workers);
    write_indicators_csv(corpus, scores, out_dir / "indicators.csv");
    std::size_t aii = 0, jii = 0;
    for (const auto& s : scores) {
        aii += s.aii.has_value();
        jii += s.jii.has_value();
    }
    log << "indicators: " << scores.size() << " publications, AII defined for " << aii << ", JII defined for " << jii
        << '\n';
}

StudyResult run_compare(const Corpus& corpus, const StudyConfig& config, const std::filesystem::path& out_dir,
                        std::ostream& log) {
    ensure_dir(out_dir);
    auto study = run_study(corpus, config);
    write_study_json(study, out_dir / "study.json");
    std::size_t tested = 0, significant = 0;
    for (const auto& c : study.comparisons) {
        tested += c.status == ComparisonStatus::Tested;
        significant += c.significant;
    }
    log << "compare: " << study.comparisons.size() << " comparisons, " << tested << " tested, " << significant
        << " significant\n";
    for (const auto& w : study.warnings) log << "  warning: " << w << '\n';
    return study;
}

void run_report(const StudyResult& study, const RenderOptions& options, const std::filesystem::path& out_dir,
                std::ostream& log) {
    auto written = render_report(study, options, out_dir);
    log << "report: " << written.size() << " files written to " << out_dir.string() << '\n';
}

StudyResult run_all(const CorpusPaths& paths, const LoadOptions& load, const StudyConfig& config,
                    const RenderOptions& render, const std::filesystem::path& out_dir, std::ostream& log) {
    config.check();
    auto corpus = load_corpus(paths, load);
    log << "load: " << corpus.size() << " publications, " << corpus.authors().size() << " authors, "
        << corpus.scheme().size() << " fields, " << corpus.provenance().warnings.size() << " warnings\n";
    auto pairs = run_pairs(corpus, config, out_dir, log);
    run_partition(corpus, pairs, out_dir, log);
    run_indicators(corpus, config.workers, out_dir, log);
    auto study = run_compare(corpus, config, out_dir, log);
    run_report(study, render, out_dir, log);
    return study;
}

}  // namespace idr::pipeline

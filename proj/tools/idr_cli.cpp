// Command-line frontend: idr <subcommand> [flags]
//
// Exit status: 0 success, 1 data validation failure, 2 I/O failure,
// 3 bad arguments or configuration.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "idr/corpus.hpp"
#include "idr/error.hpp"
#include "idr/parallel.hpp"
#include "idr/pipeline.hpp"
#include "idr/report.hpp"
#include "idr/study_json.hpp"
#include "idr/synthgen.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::string input;
    std::string output = "out";
    std::string config_path;
    std::optional<double> threshold;
    std::optional<std::size_t> min_pubs;
    std::optional<double> alpha;
    std::optional<std::size_t> min_set_size;
    std::optional<std::string> pairs_file;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> format;
    bool lenient = false;

    // synth
    std::optional<std::size_t> areas;
    std::optional<std::size_t> fields_per_area;
    std::optional<std::size_t> professors_per_field;
    std::optional<double> pubs_per_professor;
    std::optional<double> planted_shift;
    std::vector<std::string> planted_pairs;
};

using KeyValues = std::map<std::string, std::string>;

KeyValues read_config(const std::string& path) {
    static const std::set<std::string> known{
        "threshold", "min_first_count", "alpha", "min_set_size", "seed", "formats", "pair_override_path",
        "workers", "lenient", "indicators",
        // synthetic corpus keys
        "areas", "fields_per_area", "professors_per_field", "pubs_per_professor", "within_field_team_prob",
        "generic_collab_prob", "pair_collab", "planted_pairs", "planted_shift", "journals_per_category",
        "categories", "multi_category_prob", "missing_if_prob", "field_journal_affinity", "first_year", "last_year",
        "citation_log_mean", "citation_log_sd", "citation_year_slope", "citation_category_spread", "if_log_mean",
        "if_log_sd"};
    std::ifstream in(path);
    if (!in) throw idr::Error(idr::ErrorCode::Io, "cannot open config file '" + path + "'");
    KeyValues kv;
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(n) + ": expected key=value");
        }
        auto key = trim(line.substr(0, eq));
        if (!known.count(key)) throw UsageError(path + ":" + std::to_string(n) + ": unknown key '" + key + "'");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
    std::istringstream in(text);
    T value{};
    if (!(in >> value) || !(in >> std::ws).eof()) {
        throw UsageError("config key '" + key + "': cannot parse '" + text + "'");
    }
    return value;
}

template <class T>
void apply(const KeyValues& kv, const char* key, T& target) {
    if (auto it = kv.find(key); it != kv.end()) target = parse_value<T>(key, it->second);
}

idr::FieldPair parse_pair(const std::string& text) {
    auto sep = text.find_first_of(">,");
    if (sep == std::string::npos || sep == 0 || sep + 1 == text.size()) {
        throw UsageError("expected a field pair written FIRST>SECOND, got '" + text + "'");
    }
    return {text.substr(0, sep), text.substr(sep + 1)};
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Settings {
    idr::StudyConfig study;
    idr::LoadOptions load;
    idr::RenderOptions render;
    idr::synth::SynthConfig synth;
};

Settings resolve(const Flags& f) {
    Settings s;
    s.study.workers = idr::default_workers();
    s.synth.seed = 1;
    KeyValues kv;
    if (!f.config_path.empty()) kv = read_config(f.config_path);

    apply(kv, "threshold", s.study.threshold);
    apply(kv, "min_first_count", s.study.min_first_count);
    apply(kv, "alpha", s.study.alpha);
    apply(kv, "min_set_size", s.study.min_set_size);
    apply(kv, "seed", s.study.seed);
    apply(kv, "workers", s.study.workers);
    apply(kv, "lenient", s.load.lenient);
    std::optional<std::string> pairs_path;
    if (auto it = kv.find("pair_override_path"); it != kv.end() && !it->second.empty()) pairs_path = it->second;
    if (auto it = kv.find("formats"); it != kv.end()) s.render.formats = idr::parse_formats(it->second);
    if (auto it = kv.find("indicators"); it != kv.end()) {
        s.study.indicators.clear();
        for (const auto& i : split(it->second, ',')) s.study.indicators.push_back(idr::parse_indicator(i));
    }

    auto& sc = s.synth;
    apply(kv, "areas", sc.areas);
    apply(kv, "fields_per_area", sc.fields_per_area);
    apply(kv, "professors_per_field", sc.professors_per_field);
    apply(kv, "pubs_per_professor", sc.pubs_per_professor);
    apply(kv, "within_field_team_prob", sc.within_field_team_prob);
    apply(kv, "generic_collab_prob", sc.generic_collab_prob);
    apply(kv, "planted_shift", sc.planted_shift);
    apply(kv, "journals_per_category", sc.journals_per_category);
    apply(kv, "categories", sc.categories);
    apply(kv, "multi_category_prob", sc.multi_category_prob);
    apply(kv, "missing_if_prob", sc.missing_if_prob);
    apply(kv, "field_journal_affinity", sc.field_journal_affinity);
    apply(kv, "first_year", sc.first_year);
    apply(kv, "last_year", sc.last_year);
    apply(kv, "citation_log_mean", sc.citation_log_mean);
    apply(kv, "citation_log_sd", sc.citation_log_sd);
    apply(kv, "citation_year_slope", sc.citation_year_slope);
    apply(kv, "citation_category_spread", sc.citation_category_spread);
    apply(kv, "if_log_mean", sc.if_log_mean);
    apply(kv, "if_log_sd", sc.if_log_sd);
    if (auto it = kv.find("planted_pairs"); it != kv.end()) {
        for (const auto& p : split(it->second, ';')) sc.planted_pairs.push_back(parse_pair(p));
    }
    if (auto it = kv.find("pair_collab"); it != kv.end()) {
        // FIRST>SECOND:probability;...
        for (const auto& item : split(it->second, ';')) {
            auto colon = item.rfind(':');
            if (colon == std::string::npos) throw UsageError("pair_collab item '" + item + "' lacks ':probability'");
            sc.pair_collab[parse_pair(item.substr(0, colon))] = parse_value<double>("pair_collab", item.substr(colon + 1));
        }
    }
    if (auto it = kv.find("seed"); it != kv.end()) sc.seed = parse_value<std::uint64_t>("seed", it->second);

    // Flags override the config file.
    if (f.threshold) s.study.threshold = *f.threshold;
    if (f.min_pubs) s.study.min_first_count = *f.min_pubs;
    if (f.alpha) s.study.alpha = *f.alpha;
    if (f.min_set_size) s.study.min_set_size = *f.min_set_size;
    if (f.seed) {
        s.study.seed = *f.seed;
        sc.seed = *f.seed;
    }
    if (f.workers) s.study.workers = *f.workers;
    if (f.format) s.render.formats = idr::parse_formats(*f.format);
    if (f.lenient) s.load.lenient = true;
    if (f.pairs_file) pairs_path = *f.pairs_file;
    if (pairs_path) s.study.pair_override = idr::load_pair_list(*pairs_path);

    if (f.areas) sc.areas = *f.areas;
    if (f.fields_per_area) sc.fields_per_area = *f.fields_per_area;
    if (f.professors_per_field) sc.professors_per_field = *f.professors_per_field;
    if (f.pubs_per_professor) sc.pubs_per_professor = *f.pubs_per_professor;
    if (f.planted_shift) sc.planted_shift = *f.planted_shift;
    for (const auto& p : f.planted_pairs) sc.planted_pairs.push_back(parse_pair(p));

    if (s.study.workers == 0) throw UsageError("--workers must be at least 1");
    s.study.check();
    return s;
}

idr::Corpus load_input(const Flags& f, const Settings& s) {
    if (f.input.empty()) throw UsageError("--input is required");
    if (!std::filesystem::is_directory(f.input)) {
        throw idr::Error(idr::ErrorCode::Io, "input directory '" + f.input + "' does not exist");
    }
    return idr::load_corpus(idr::CorpusPaths::in_directory(f.input), s.load);
}

int run_validate(const Flags& f, const Settings& s) {
    auto corpus = load_input(f, s);
    auto r = idr::validate(corpus);
    std::cout << "validate: " << r.publications << " publications, " << r.authors << " authors, " << r.fields
              << " fields in " << r.areas << " areas, " << r.journals << " journals\n"
              << "  empty categories: " << r.empty_categories.size() << ", no classified author: "
              << r.empty_authors.size() << ", missing impact factor: " << r.missing_impact_factor.size()
              << ", single classified author: " << r.single_classified_author
              << ", load warnings: " << r.load_warnings << '\n';
    for (const auto& w : corpus.provenance().warnings) std::cout << "  warning: " << w << '\n';
    return 0;
}

int dispatch(const std::string& command, const Flags& f) {
    auto s = resolve(f);
    std::filesystem::path out(f.output);
    if (command == "validate") return run_validate(f, s);
    if (command == "pairs") {
        auto corpus = load_input(f, s);
        idr::pipeline::run_pairs(corpus, s.study, out, std::cout);
    } else if (command == "partition") {
        auto corpus = load_input(f, s);
        auto pairs = idr::pipeline::run_pairs(corpus, s.study, out, std::cout);
        idr::pipeline::run_partition(corpus, pairs, out, std::cout);
    } else if (command == "indicators") {
        auto corpus = load_input(f, s);
        idr::pipeline::run_indicators(corpus, s.study.workers, out, std::cout);
    } else if (command == "compare") {
        auto corpus = load_input(f, s);
        idr::pipeline::run_compare(corpus, s.study, out, std::cout);
    } else if (command == "report") {
        if (f.input.empty()) throw UsageError("--input is required (a study.json or a directory holding one)");
        std::filesystem::path in(f.input);
        if (std::filesystem::is_directory(in)) in /= "study.json";
        auto study = idr::read_study_json(in);
        idr::pipeline::run_report(study, s.render, out, std::cout);
    } else if (command == "synth") {
        auto generated = idr::synth::generate(s.synth);
        idr::write_corpus(generated.corpus, out);
        idr::synth::write_ground_truth(s.synth, generated.truth, out / "ground_truth.json");
        std::cout << "synth: " << generated.corpus.size() << " publications, " << generated.corpus.authors().size()
                  << " authors, " << generated.truth.shifted_publications << " shifted, written to " << out.string()
                  << '\n';
    } else if (command == "run-all") {
        if (f.input.empty()) throw UsageError("--input is required");
        if (!std::filesystem::is_directory(f.input)) {
            throw idr::Error(idr::ErrorCode::Io, "input directory '" + f.input + "' does not exist");
        }
        idr::pipeline::run_all(idr::CorpusPaths::in_directory(f.input), s.load, s.study, s.render, out, std::cout);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interdisciplinary research impact analysis"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", f.input, "Input directory (corpus CSVs, or study.json for report)");
        sub->add_option("--output", f.output, "Output directory (created if missing)");
        sub->add_option("--config", f.config_path, "key=value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--threshold", f.threshold, "Specific-degree threshold (strict >)");
        sub->add_option("--min-pubs", f.min_pubs, "Minimum publications of the first field");
        sub->add_option("--alpha", f.alpha, "Significance level");
        sub->add_option("--min-set-size", f.min_set_size, "Minimum values per compared set");
        sub->add_option("--pairs-file", f.pairs_file, "CSV of first_field,second_field replacing pair identification")
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", f.seed, "Seed for subsampling and synthetic generation");
        sub->add_option("--workers", f.workers, "Worker threads (default: hardware concurrency)");
        sub->add_option("--format", f.format, "Report formats: csv, md, json (comma-separated)");
        sub->add_flag("--lenient", f.lenient, "Drop publications with dangling references instead of failing");
    };

    const std::vector<std::pair<std::string, std::string>> commands{
        {"validate", "Load the corpus and report counts and flagged rows"},
        {"pairs", "Identify high-collaboration field pairs (pairs.csv)"},
        {"partition", "Partition publications into sets per pair and field (partition.csv)"},
        {"indicators", "Compute AII and JII per publication (indicators.csv)"},
        {"compare", "Run all set comparisons (study.json)"},
        {"report", "Render report tables from a study.json"},
        {"synth", "Generate a synthetic corpus"},
        {"run-all", "load, pairs, partition, indicators, compare, report"},
    };
    std::string chosen;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub);
        if (name == "synth") {
            sub->add_option("--areas", f.areas, "Number of areas");
            sub->add_option("--fields-per-area", f.fields_per_area, "Fields per area");
            sub->add_option("--professors-per-field", f.professors_per_field, "Professors per field");
            sub->add_option("--pubs-per-professor", f.pubs_per_professor, "Mean publications led per professor");
            sub->add_option("--planted-shift", f.planted_shift, "Citation multiplier for planted Set 1 publications");
            sub->add_option("--planted-pair", f.planted_pairs, "Planted pair FIRST>SECOND (repeatable)");
        }
        sub->callback([&chosen, name = name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        if (code == 0) return 0;
        std::cerr << '\n' << app.help();
        return kExitUsage;
    }

    try {
        return dispatch(chosen, f);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const idr::Error& e) {
        std::cerr << "error (" << idr::to_string(e.code()) << "): " << e.what() << '\n';
        switch (e.code()) {
            case idr::ErrorCode::Io: return kExitIo;
            case idr::ErrorCode::InvalidConfig: return kExitUsage;
            default: return kExitValidation;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

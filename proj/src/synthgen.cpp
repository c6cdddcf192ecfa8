#include "idr/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "json.hpp"

#include "idr/error.hpp"

namespace idr::synth {

namespace {

std::string padded(const char* prefix, std::size_t value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, value);
    return buf;
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

std::string synth_area_code(std::size_t area) { return padded("AR", area + 1, 2); }

std::string synth_field_code(std::size_t area, std::size_t field) {
    return synth_area_code(area) + padded("/", field + 1, 2);
}

void SynthConfig::check() const {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, "synth config: " + what); };
    if (!seed) bad("seed is mandatory");
    if (areas == 0) bad("areas must be positive");
    if (fields_per_area == 0) bad("fields_per_area must be positive");
    if (professors_per_field == 0) bad("professors_per_field must be positive");
    if (!(pubs_per_professor > 0.0)) bad("pubs_per_professor must be positive");
    if (!is_probability(within_field_team_prob)) bad("within_field_team_prob must lie in [0, 1]");
    if (!is_probability(generic_collab_prob)) bad("generic_collab_prob must lie in [0, 1]");
    if (!is_probability(multi_category_prob)) bad("multi_category_prob must lie in [0, 1]");
    if (!is_probability(missing_if_prob)) bad("missing_if_prob must lie in [0, 1]");
    if (!is_probability(field_journal_affinity)) bad("field_journal_affinity must lie in [0, 1]");
    if (!(planted_shift > 0.0)) bad("planted_shift must be positive");
    if (!(citation_log_sd >= 0.0)) bad("citation_log_sd must be nonnegative");
    if (!(if_log_sd >= 0.0)) bad("if_log_sd must be nonnegative");
    if (journals_per_category == 0) bad("journals_per_category must be positive");
    if (last_year < first_year) bad("last_year precedes first_year");

    std::set<std::string> codes;
    for (std::size_t a = 0; a < areas; ++a) {
        for (std::size_t f = 0; f < fields_per_area; ++f) codes.insert(synth_field_code(a, f));
    }
    for (const auto& [pair, p] : pair_collab) {
        if (!codes.count(pair.first) || !codes.count(pair.second)) bad("pair_collab names unknown field in " + pair.label());
        if (pair.first == pair.second) bad("pair_collab pair " + pair.label() + " repeats one field");
        if (!is_probability(p)) bad("pair_collab probability for " + pair.label() + " must lie in [0, 1]");
    }
    for (const auto& pair : planted_pairs) {
        if (!codes.count(pair.first) || !codes.count(pair.second)) bad("planted_pairs names unknown field in " + pair.label());
        if (pair.first == pair.second) bad("planted pair " + pair.label() + " repeats one field");
    }
}

SynthCorpus generate(const SynthConfig& config) {
    config.check();
    std::mt19937_64 rng(*config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    const std::size_t n_fields = config.areas * config.fields_per_area;
    const std::size_t n_categories = config.categories == 0 ? n_fields : config.categories;

    CorpusParts parts;
    std::vector<FieldEntry> entries;
    std::vector<std::string> field_codes;
    for (std::size_t a = 0; a < config.areas; ++a) {
        for (std::size_t f = 0; f < config.fields_per_area; ++f) {
            auto code = synth_field_code(a, f);
            entries.push_back({code, "Field " + code, synth_area_code(a), "Area " + std::to_string(a + 1)});
            field_codes.push_back(code);
        }
    }
    parts.scheme = FieldScheme(entries);

    std::vector<std::vector<std::string>> professors(n_fields);
    for (std::size_t f = 0; f < n_fields; ++f) {
        for (std::size_t k = 0; k < config.professors_per_field; ++k) {
            auto id = padded("P", f * config.professors_per_field + k + 1, 6);
            parts.authors.push_back({id, field_codes[f]});
            professors[f].push_back(id);
        }
    }

    auto category_code = [](std::size_t c) { return padded("SC", c + 1, 3); };
    std::vector<double> category_offset(n_categories);
    for (auto& o : category_offset) {
        o = config.citation_category_spread * (2.0 * unit(rng) - 1.0);
    }

    struct JournalInfo {
        std::string id;
        std::size_t primary;
    };
    std::vector<JournalInfo> journals;
    std::vector<std::vector<std::size_t>> journals_by_category(n_categories);
    std::lognormal_distribution<double> impact(config.if_log_mean, config.if_log_sd);
    for (std::size_t c = 0; c < n_categories; ++c) {
        for (std::size_t k = 0; k < config.journals_per_category; ++k) {
            Journal j;
            j.journal_id = padded("J", c * config.journals_per_category + k + 1, 5);
            std::vector<std::string> cats{category_code(c)};
            if (n_categories > 1 && unit(rng) < config.multi_category_prob) {
                std::size_t other = pick(n_categories - 1);
                if (other >= c) ++other;
                cats.push_back(category_code(other));
            }
            for (int y = config.first_year; y <= config.last_year; ++y) {
                JournalYear rec;
                rec.year = y;
                rec.categories = cats;
                double value = impact(rng);
                if (!(unit(rng) < config.missing_if_prob)) rec.impact_factor = std::round(value * 1000.0) / 1000.0;
                j.records.push_back(std::move(rec));
            }
            journals_by_category[c].push_back(journals.size());
            journals.push_back({j.journal_id, c});
            parts.journals.push_back(std::move(j));
        }
    }

    std::vector<std::pair<std::size_t, std::size_t>> planted;  // field indices
    auto field_index = [&](const std::string& code) {
        return static_cast<std::size_t>(std::find(field_codes.begin(), field_codes.end(), code) - field_codes.begin());
    };
    for (const auto& p : config.planted_pairs) planted.emplace_back(field_index(p.first), field_index(p.second));
    std::vector<double> collab(n_fields * n_fields, config.generic_collab_prob);
    for (const auto& [pair, p] : config.pair_collab) {
        collab[field_index(pair.first) * n_fields + field_index(pair.second)] = p;
    }

    GroundTruth truth;
    truth.planted_pairs = config.planted_pairs;
    truth.planted_shift = config.planted_shift;
    truth.expected_aii_median_ratio = config.planted_shift;
    truth.seed = *config.seed;

    std::poisson_distribution<std::size_t> pub_count(config.pubs_per_professor);
    std::normal_distribution<double> noise(0.0, 1.0);
    const int years = config.last_year - config.first_year + 1;
    std::size_t next_pub = 1;
    std::vector<char> in_team(n_fields);
    for (std::size_t f = 0; f < n_fields; ++f) {
        for (const auto& lead : professors[f]) {
            std::size_t count = pub_count(rng);
            for (std::size_t n = 0; n < count; ++n) {
                Publication pub;
                pub.pub_id = padded("W", next_pub++, 8);
                std::fill(in_team.begin(), in_team.end(), 0);
                in_team[f] = 1;
                pub.author_ids.push_back(lead);

                std::set<std::string> members{lead};
                while (members.size() < professors[f].size() && unit(rng) < config.within_field_team_prob) {
                    // re-draw until a new colleague joins
                    std::string colleague;
                    do colleague = professors[f][pick(professors[f].size())];
                    while (members.count(colleague));
                    members.insert(colleague);
                    pub.author_ids.push_back(colleague);
                }
                for (std::size_t g = 0; g < n_fields; ++g) {
                    if (g == f) continue;
                    if (unit(rng) < collab[f * n_fields + g]) {
                        in_team[g] = 1;
                        pub.author_ids.push_back(professors[g][pick(professors[g].size())]);
                    }
                }

                pub.year = config.first_year + static_cast<int>(pick(static_cast<std::size_t>(years)));
                std::size_t journal;
                const std::size_t lead_category = f % n_categories;
                if (unit(rng) < config.field_journal_affinity) {
                    const auto& pool = journals_by_category[lead_category];
                    journal = pool[pick(pool.size())];
                } else {
                    journal = pick(journals.size());
                }
                pub.journal_id = journals[journal].id;

                const std::size_t cat = journals[journal].primary;
                double log_mean = config.citation_log_mean +
                                  config.citation_year_slope * (config.last_year - pub.year) + category_offset[cat];
                double cites = std::exp(log_mean + config.citation_log_sd * noise(rng));
                bool shifted = std::any_of(planted.begin(), planted.end(),
                                           [&](const auto& p) { return in_team[p.first] && in_team[p.second]; });
                if (shifted) {
                    cites *= config.planted_shift;
                    ++truth.shifted_publications;
                }
                pub.citations = std::llround(cites);
                parts.publications.push_back(std::move(pub));
            }
        }
    }

    Provenance prov;
    prov.sources.push_back("synthetic:seed=" + std::to_string(*config.seed));
    Corpus corpus(std::move(parts), LoadOptions{}, std::move(prov));
    return {std::move(corpus), std::move(truth)};
}

void write_ground_truth(const SynthConfig& config, const GroundTruth& truth, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["seed"] = truth.seed;
    j["planted_shift"] = truth.planted_shift;
    j["expected_aii_median_ratio"] = truth.expected_aii_median_ratio;
    j["shifted_publications"] = truth.shifted_publications;
    auto planted = nlohmann::ordered_json::array();
    for (const auto& p : truth.planted_pairs) planted.push_back({p.first, p.second});
    j["planted_pairs"] = planted;
    auto collab = nlohmann::ordered_json::array();
    for (const auto& [pair, p] : config.pair_collab) collab.push_back({{"first", pair.first}, {"second", pair.second}, {"probability", p}});
    j["config"] = {
        {"areas", config.areas},
        {"fields_per_area", config.fields_per_area},
        {"professors_per_field", config.professors_per_field},
        {"pubs_per_professor", config.pubs_per_professor},
        {"within_field_team_prob", config.within_field_team_prob},
        {"generic_collab_prob", config.generic_collab_prob},
        {"pair_collab", collab},
        {"citation_log_mean", config.citation_log_mean},
        {"citation_log_sd", config.citation_log_sd},
        {"citation_year_slope", config.citation_year_slope},
        {"citation_category_spread", config.citation_category_spread},
        {"categories", config.categories},
        {"journals_per_category", config.journals_per_category},
        {"multi_category_prob", config.multi_category_prob},
        {"if_log_mean", config.if_log_mean},
        {"if_log_sd", config.if_log_sd},
        {"missing_if_prob", config.missing_if_prob},
        {"field_journal_affinity", config.field_journal_affinity},
        {"first_year", config.first_year},
        {"last_year", config.last_year},
    };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

}  // namespace idr::synth

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idr/corpus.hpp"
#include "idr/pairing.hpp"

namespace idr::synth {

/// Parameters of a synthetic corpus. Fields are named by synth_field_code();
/// every field owns one subject category unless `categories` says otherwise.
struct SynthConfig {
    std::size_t areas = 3;
    std::size_t fields_per_area = 4;
    std::size_t professors_per_field = 20;
    double pubs_per_professor = 5.0;       // Poisson mean of publications led per professor
    double within_field_team_prob = 0.5;   // chance of each further same-field co-author
    double generic_collab_prob = 0.02;     // per other field, unless pair_collab overrides
    std::map<FieldPair, double> pair_collab;  // ordered: lead field -> co-author field

    double citation_log_mean = 1.5;
    double citation_log_sd = 1.0;
    double citation_year_slope = 0.15;       // log-mean gain per year of age
    double citation_category_spread = 0.5;   // category log-mean offsets drawn in [-s, s]

    std::vector<FieldPair> planted_pairs;
    double planted_shift = 1.0;  // citation multiplier for publications in Set 1 of a planted pair

    std::size_t categories = 0;  // 0: one per field
    std::size_t journals_per_category = 4;
    double multi_category_prob = 0.2;
    double if_log_mean = 0.5;
    double if_log_sd = 0.6;
    double missing_if_prob = 0.0;
    double field_journal_affinity = 0.0;  // chance a publication picks a journal of its lead field's category

    int first_year = 2004;
    int last_year = 2008;
    std::optional<std::uint64_t> seed;

    /// Throws Error(InvalidConfig) naming the first invalid field.
    void check() const;
};

struct GroundTruth {
    std::vector<FieldPair> planted_pairs;
    double planted_shift = 1.0;
    std::size_t shifted_publications = 0;
    /// Expected ratio of Set 1 to non-shifted AII medians for planted pairs.
    double expected_aii_median_ratio = 1.0;
    std::uint64_t seed = 0;
};

struct SynthCorpus {
    Corpus corpus;
    GroundTruth truth;
};

std::string synth_field_code(std::size_t area, std::size_t field);  // 0-based indices
std::string synth_area_code(std::size_t area);

/// Same config (including seed) always yields the same corpus.
SynthCorpus generate(const SynthConfig& config);

void write_ground_truth(const SynthConfig& config, const GroundTruth& truth, const std::filesystem::path& path);

}  // namespace idr::synth

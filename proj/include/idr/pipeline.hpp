#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "idr/analysis.hpp"
#include "idr/corpus.hpp"
#include "idr/report.hpp"

namespace idr::pipeline {

/// Stage outputs. Each stage writes one file into the output directory and
/// prints a one-line summary to `log`; run_all chains the same calls.

/// pairs.csv: first_field,second_field,co_count,first_count,degree
std::vector<PairProfile> run_pairs(const Corpus& corpus, const StudyConfig& config,
                                   const std::filesystem::path& out_dir, std::ostream& log);

/// partition.csv: one row per pair scope, then one per first-field scope.
void run_partition(const Corpus& corpus, const std::vector<PairProfile>& pairs, const std::filesystem::path& out_dir,
                   std::ostream& log);

/// indicators.csv
void run_indicators(const Corpus& corpus, unsigned workers, const std::filesystem::path& out_dir, std::ostream& log);

/// study.json
StudyResult run_compare(const Corpus& corpus, const StudyConfig& config, const std::filesystem::path& out_dir,
                        std::ostream& log);

/// Report bundle rendered from a study result.
void run_report(const StudyResult& study, const RenderOptions& options, const std::filesystem::path& out_dir,
                std::ostream& log);

/// load -> pairs -> partition -> indicators -> compare -> report.
StudyResult run_all(const CorpusPaths& paths, const LoadOptions& load, const StudyConfig& config,
                    const RenderOptions& render, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace idr::pipeline

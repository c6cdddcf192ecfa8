#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace idr::stats {

enum class Method {
    Exact,
    NormalApproximation,
    Subsampled,
};

const char* to_string(Method method);

struct TestResult {
    std::string test_name;  // "shapiro-wilk" or "mann-whitney"
    double statistic = 0;   // W or U (U of the first sample)
    double p_value = 1;
    Method method = Method::Exact;
    std::size_t n1 = 0;
    std::size_t n2 = 0;  // zero for one-sample tests
    bool significant = false;  // rank-sum test only: p < alpha
    std::vector<std::string> warnings;
};

inline constexpr std::size_t kShapiroWilkMaxN = 5000;
inline constexpr std::uint64_t kDefaultSubsampleSeed = 0x5eed5eedULL;

/// Shapiro-Wilk W test using Royston's AS R94 coefficients and p-value
/// approximation. Samples above 5000 points are tested on a seeded random
/// subsample of 5000 and tagged Method::Subsampled.
/// Throws Error(SampleTooSmall) for n < 3, Error(DegenerateSample) when all
/// values are identical.
TestResult shapiro_wilk(std::span<const double> sample, std::uint64_t subsample_seed = kDefaultSubsampleSeed);

enum class MannWhitneyMode {
    Auto,    // exact while C(n1+n2, n1) <= max_exact_combinations
    Exact,   // always enumerate (caller bounds the cost)
    Normal,  // always use the normal approximation
};

struct MannWhitneyOptions {
    double alpha = 0.05;
    std::uint64_t max_exact_combinations = 100000;
    MannWhitneyMode mode = MannWhitneyMode::Auto;
};

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test on midranks.
/// The exact p-value enumerates every assignment of the pooled midranks to
/// the smaller sample; the approximation uses the tie-corrected variance
/// with a 0.5 continuity correction. Throws Error(SampleTooSmall) for an
/// empty sample.
TestResult mann_whitney(std::span<const double> sample1, std::span<const double> sample2,
                        const MannWhitneyOptions& options = {});

/// Throws Error(SampleTooSmall) for an empty sample.
double median(std::span<const double> sample);
double median_diff(std::span<const double> sample1, std::span<const double> sample2);

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t choose(std::uint64_t n, std::uint64_t k);

/// Standard normal CDF and quantile (Wichura AS 241).
double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace idr::stats

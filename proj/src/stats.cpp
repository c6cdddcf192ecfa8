#include "idr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "idr/error.hpp"

namespace idr::stats {

const char* to_string(Method method) {
    switch (method) {
        case Method::Exact: return "exact";
        case Method::NormalApproximation: return "normal-approximation";
        case Method::Subsampled: return "subsampled";
    }
    return "unknown";
}

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw Error(ErrorCode::UndefinedInput, "normal quantile requires p in [0, 1]");
    }
    double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        double r = 0.180625 - q * q;
        return q *
               (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r + 67265.770927008700853) * r +
                    45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((r * 5226.495278852545925 + 28729.085735721942674) * r + 39307.89580009271061) * r +
                    21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = std::sqrt(-std::log(q < 0 ? p : 1.0 - p));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                   1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
                4.6303378461565452959) * r + 1.42343711074968357734) /
              (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                   0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
                2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                   0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
                5.4637849111641143699) * r + 6.6579046435011037772) /
              (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                   7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
    }
    return q < 0 ? -val : val;
}

// ---------------------------------------------------------------------------
// Shapiro-Wilk

namespace {

// c[0] + c[1] x + ... + c[n-1] x^(n-1)
double poly(std::span<const double> c, double x) {
    double result = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) result = result * x + *it;
    return result;
}

double upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Antisymmetric coefficient vector for a sample of size n sorted ascending;
// the upper half is positive and the vector has unit norm.
std::vector<double> shapiro_coefficients(std::size_t n) {
    static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
    static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};

    const std::size_t half = n / 2;
    std::vector<double> a(half);  // a[k]: weight of the (k+1)-th largest value
    if (n == 3) {
        a[0] = std::sqrt(0.5);
    } else {
        const double an = static_cast<double>(n);
        std::vector<double> m(half);
        double summ2 = 0;
        for (std::size_t i = 0; i < half; ++i) {
            m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
            summ2 += m[i] * m[i];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(an);
        const double a1 = poly(c1, rsn) - m[0] / ssumm2;
        std::size_t first_scaled;
        double fac;
        if (n > 5) {
            first_scaled = 2;
            const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            a[1] = a2;
        } else {
            first_scaled = 1;
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
        }
        a[0] = a1;
        for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
    }

    std::vector<double> full(n, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        full[n - 1 - k] = a[k];
        full[k] = -a[k];
    }
    return full;
}

TestResult shapiro_wilk_sorted(std::span<const double> x) {
    static constexpr double g[] = {-2.273, 0.459};
    static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
    static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
    static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};

    const std::size_t n = x.size();
    const double range = x.back() - x.front();
    if (!(range > 1e-19 * std::max(1.0, std::fabs(x.back())))) {
        throw Error(ErrorCode::DegenerateSample, "Shapiro-Wilk: all sample values are identical");
    }
    auto a = shapiro_coefficients(n);

    // W as the squared correlation of data and coefficients; 1 - W is
    // formed directly to keep precision when W is close to 1.
    double sa = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
    double sx = 0;
    for (double v : x) sx += v / range;
    sx /= static_cast<double>(n);
    double ssa = 0, ssx = 0, sax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double asa = a[i] - sa;
        double xsx = x[i] / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    const double ssassx = std::sqrt(ssa * ssx);
    const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    const double w = 1.0 - w1;

    TestResult r;
    r.test_name = "shapiro-wilk";
    r.statistic = w;
    r.n1 = n;
    if (n == 3) {
        constexpr double six_over_pi = 1.90985931710274;
        constexpr double pi_over_three = 1.04719755119660;
        r.p_value = std::clamp(six_over_pi * (std::asin(std::sqrt(w)) - pi_over_three), 0.0, 1.0);
        r.method = Method::Exact;
        return r;
    }
    r.method = Method::NormalApproximation;
    double y = std::log(w1);
    const double an = static_cast<double>(n);
    double mean, sd;
    if (n <= 11) {
        const double gamma = poly(g, an);
        if (y >= gamma) {
            r.p_value = 1e-99;
            return r;
        }
        y = -std::log(gamma - y);
        mean = poly(c3, an);
        sd = std::exp(poly(c4, an));
    } else {
        const double ln = std::log(an);
        mean = poly(c5, ln);
        sd = std::exp(poly(c6, ln));
    }
    r.p_value = std::clamp(upper_tail((y - mean) / sd), 0.0, 1.0);
    return r;
}

}  // namespace

TestResult shapiro_wilk(std::span<const double> sample, std::uint64_t subsample_seed) {
    if (sample.size() < 3) {
        throw Error(ErrorCode::SampleTooSmall, "Shapiro-Wilk needs at least 3 values, got " +
                                                   std::to_string(sample.size()));
    }
    std::vector<double> x(sample.begin(), sample.end());
    bool subsampled = false;
    if (x.size() > kShapiroWilkMaxN) {
        // Partial Fisher-Yates: the first kShapiroWilkMaxN slots become a
        // uniform sample without replacement.
        std::mt19937_64 rng(subsample_seed);
        for (std::size_t i = 0; i < kShapiroWilkMaxN; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, x.size() - 1);
            std::swap(x[i], x[pick(rng)]);
        }
        x.resize(kShapiroWilkMaxN);
        subsampled = true;
    }
    std::sort(x.begin(), x.end());
    auto r = shapiro_wilk_sorted(x);
    if (subsampled) {
        r.method = Method::Subsampled;
        r.warnings.push_back("tested a random subsample of " + std::to_string(kShapiroWilkMaxN) + " of " +
                             std::to_string(sample.size()) + " values");
    }
    return r;
}

// ---------------------------------------------------------------------------
// Mann-Whitney

namespace {

struct PooledRanks {
    std::vector<std::int64_t> doubled;  // 2 * midrank, pooled order: sample1 then sample2
    double tie_term = 0;                // sum over tie groups of t^3 - t
};

PooledRanks midranks(std::span<const double> s1, std::span<const double> s2) {
    const std::size_t n = s1.size() + s2.size();
    std::vector<double> values;
    values.reserve(n);
    values.insert(values.end(), s1.begin(), s1.end());
    values.insert(values.end(), s2.begin(), s2.end());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });

    PooledRanks out;
    out.doubled.resize(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j (0-based) share the midrank ((i+1)+(j+1))/2
        auto doubled = static_cast<std::int64_t>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) out.doubled[order[k]] = doubled;
        double t = static_cast<double>(j - i + 1);
        out.tie_term += t * t * t - t;
        i = j + 1;
    }
    return out;
}

// Two-sided exact p: the share of size-k subsets of the pooled doubled
// ranks whose rank sum deviates from its mean at least as much as observed.
double exact_p(const std::vector<std::int64_t>& doubled, std::size_t k, std::int64_t observed_sum) {
    const std::size_t n = doubled.size();
    const auto expected = static_cast<std::int64_t>(k * (n + 1));
    const std::int64_t observed_dev = std::llabs(observed_sum - expected);

    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::int64_t sum = 0;
    for (auto i : idx) sum += doubled[i];
    std::uint64_t extreme = 0, total = 0;
    while (true) {
        ++total;
        if (std::llabs(sum - expected) >= observed_dev) ++extreme;
        // advance to the next combination in lexicographic order
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) break;
        --pos;
        sum -= doubled[idx[pos]];
        ++idx[pos];
        sum += doubled[idx[pos]];
        for (std::size_t q = pos + 1; q < k; ++q) {
            sum -= doubled[idx[q]];
            idx[q] = idx[q - 1] + 1;
            sum += doubled[idx[q]];
        }
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace

TestResult mann_whitney(std::span<const double> sample1, std::span<const double> sample2,
                        const MannWhitneyOptions& options) {
    if (sample1.empty() || sample2.empty()) {
        throw Error(ErrorCode::SampleTooSmall, "Mann-Whitney needs two nonempty samples");
    }
    const std::size_t n1 = sample1.size(), n2 = sample2.size(), n = n1 + n2;
    auto ranks = midranks(sample1, sample2);

    std::int64_t doubled_r1 = 0;
    for (std::size_t i = 0; i < n1; ++i) doubled_r1 += ranks.doubled[i];
    const double u1 = static_cast<double>(doubled_r1) / 2.0 - static_cast<double>(n1 * (n1 + 1)) / 2.0;

    TestResult r;
    r.test_name = "mann-whitney";
    r.statistic = u1;
    r.n1 = n1;
    r.n2 = n2;

    bool exact = false;
    switch (options.mode) {
        case MannWhitneyMode::Exact: exact = true; break;
        case MannWhitneyMode::Normal: exact = false; break;
        case MannWhitneyMode::Auto: exact = choose(n, std::min(n1, n2)) <= options.max_exact_combinations; break;
    }

    if (exact) {
        r.method = Method::Exact;
        if (n1 <= n2) {
            r.p_value = exact_p(ranks.doubled, n1, doubled_r1);
        } else {
            // Enumerate over the smaller sample: move it to the front.
            std::vector<std::int64_t> reordered(ranks.doubled.begin() + static_cast<std::ptrdiff_t>(n1),
                                                ranks.doubled.end());
            reordered.insert(reordered.end(), ranks.doubled.begin(),
                             ranks.doubled.begin() + static_cast<std::ptrdiff_t>(n1));
            const std::int64_t doubled_r2 = static_cast<std::int64_t>(n * (n + 1)) - doubled_r1;
            r.p_value = exact_p(reordered, n2, doubled_r2);
        }
    } else {
        r.method = Method::NormalApproximation;
        const double dn = static_cast<double>(n);
        const double mu = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
        const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                           ((dn + 1.0) - ranks.tie_term / (dn * (dn - 1.0)));
        if (var <= 0) {
            r.p_value = 1.0;
            r.warnings.push_back("all pooled values tied; rank-sum variance is zero");
        } else {
            const double z = std::max(0.0, std::fabs(u1 - mu) - 0.5) / std::sqrt(var);
            r.p_value = std::clamp(std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
        }
    }
    r.p_value = std::min(r.p_value, 1.0);
    r.significant = r.p_value < options.alpha;
    return r;
}

double median(std::span<const double> sample) {
    if (sample.empty()) throw Error(ErrorCode::SampleTooSmall, "median of an empty sample");
    std::vector<double> v(sample.begin(), sample.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lower + upper) / 2.0;
}

double median_diff(std::span<const double> sample1, std::span<const double> sample2) {
    return median(sample1) - median(sample2);
}

}  // namespace idr::stats

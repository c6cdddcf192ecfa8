#include "idr/pairing.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "idr/csv.hpp"
#include "idr/error.hpp"

namespace idr {

namespace {

// Dense co-occurrence counts over field ids; the scheme is small enough
// (hundreds of fields) that an n*n table is cheaper than a map.
struct FieldCounts {
    std::size_t n = 0;
    std::vector<std::size_t> single;
    std::vector<std::size_t> joint;

    std::size_t co(FieldId a, FieldId b) const { return joint[a.value * n + b.value]; }
};

FieldCounts count_fields(const Corpus& corpus) {
    FieldCounts c;
    c.n = corpus.scheme().size();
    c.single.assign(c.n, 0);
    c.joint.assign(c.n * c.n, 0);
    for (PubIndex i = 0; i < corpus.size(); ++i) {
        auto fs = corpus.field_set(i);
        for (std::size_t x = 0; x < fs.size(); ++x) {
            ++c.single[fs[x].value];
            for (std::size_t y = x + 1; y < fs.size(); ++y) {
                ++c.joint[fs[x].value * c.n + fs[y].value];
                ++c.joint[fs[y].value * c.n + fs[x].value];
            }
        }
    }
    return c;
}

}  // namespace

std::map<std::string, std::size_t> field_pub_counts(const Corpus& corpus) {
    auto c = count_fields(corpus);
    std::map<std::string, std::size_t> out;
    for (std::uint32_t f = 0; f < c.n; ++f) {
        if (c.single[f] > 0) out.emplace(corpus.scheme().code(FieldId{f}), c.single[f]);
    }
    return out;
}

CoCounts co_pub_counts(const Corpus& corpus) {
    auto c = count_fields(corpus);
    CoCounts out;
    for (std::uint32_t a = 0; a < c.n; ++a) {
        for (std::uint32_t b = a + 1; b < c.n; ++b) {
            if (auto v = c.co(FieldId{a}, FieldId{b}); v > 0) {
                out.emplace(std::pair{corpus.scheme().code(FieldId{a}), corpus.scheme().code(FieldId{b})}, v);
            }
        }
    }
    return out;
}

std::size_t lookup_co_count(const CoCounts& counts, const std::string& a, const std::string& b) {
    auto it = a < b ? counts.find({a, b}) : counts.find({b, a});
    return it == counts.end() ? 0 : it->second;
}

double specific_degree(std::size_t co_count, std::size_t first_count) {
    if (first_count == 0) {
        throw Error(ErrorCode::UndefinedInput, "specific degree undefined: first field has no publications");
    }
    return static_cast<double>(co_count) / static_cast<double>(first_count);
}

std::vector<PairProfile> identify_pairs(const Corpus& corpus, double threshold, std::size_t min_first_count) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "threshold must lie in (0, 1]");
    }
    auto c = count_fields(corpus);
    std::vector<PairProfile> out;
    for (std::uint32_t a = 0; a < c.n; ++a) {
        auto first_count = c.single[a];
        if (first_count == 0 || first_count < min_first_count) continue;
        for (std::uint32_t b = 0; b < c.n; ++b) {
            if (a == b) continue;
            auto co = c.co(FieldId{a}, FieldId{b});
            double degree = specific_degree(co, first_count);
            if (degree > threshold) {
                out.push_back({corpus.scheme().code(FieldId{a}), corpus.scheme().code(FieldId{b}), co,
                               first_count, degree});
            }
        }
    }
    return out;
}

std::vector<PairProfile> profile_pairs(const Corpus& corpus, std::span<const FieldPair> pairs,
                                       std::vector<std::string>* warnings) {
    auto c = count_fields(corpus);
    std::set<FieldPair> unique(pairs.begin(), pairs.end());
    std::vector<PairProfile> out;
    for (const auto& p : unique) {
        auto a = corpus.scheme().require(p.first);
        auto b = corpus.scheme().require(p.second);
        if (a == b) throw Error(ErrorCode::InvalidConfig, "pair " + p.label() + " repeats one field");
        auto first_count = c.single[a.value];
        if (first_count == 0) {
            if (warnings) warnings->push_back("pair " + p.label() + " skipped: " + p.first + " has no publications");
            continue;
        }
        auto co = c.co(a, b);
        out.push_back({p.first, p.second, co, first_count, specific_degree(co, first_count)});
    }
    return out;
}

std::vector<FieldPair> load_pair_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    csv::Reader reader(in, path.filename().string());
    auto where = [&] { return path.filename().string() + ":" + std::to_string(reader.line()) + ": "; };
    auto header = reader.next();
    if (!header || *header != csv::Row{"first_field", "second_field"}) {
        throw Error(ErrorCode::MalformedRow, where() + "expected header 'first_field,second_field'");
    }
    std::vector<FieldPair> out;
    while (auto row = reader.next()) {
        if (row->size() != 2 || (*row)[0].empty() || (*row)[1].empty()) {
            throw Error(ErrorCode::MalformedRow, where() + "expected two nonempty cells");
        }
        out.push_back({(*row)[0], (*row)[1]});
    }
    return out;
}

double simpson_index(std::span<const std::uint64_t> counts) {
    long double total = 0;
    for (auto x : counts) total += x;
    if (total <= 0) throw Error(ErrorCode::UndefinedInput, "Simpson index undefined for an all-zero count vector");
    long double concentration = 0;
    for (auto x : counts) {
        long double p = x / total;
        concentration += p * p;
    }
    return static_cast<double>(1.0L - concentration);
}

}  // namespace idr

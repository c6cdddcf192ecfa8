#include "idr/pairing.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "builders.hpp"
#include "idr/error.hpp"
#include "temp_dir.hpp"

namespace idr {
namespace {

using testing::CorpusBuilder;

// Field sets recomputed from the raw author lists.
std::vector<std::set<std::string>> brute_field_sets(const Corpus& corpus) {
    std::map<std::string, std::string> field_of;
    for (const auto& a : corpus.authors()) field_of[a.author_id] = a.field_code;
    std::vector<std::set<std::string>> out;
    for (const auto& p : corpus.publications()) {
        std::set<std::string> fs;
        for (const auto& a : p.author_ids) fs.insert(field_of.at(a));
        out.push_back(fs);
    }
    return out;
}

TEST(FieldPubCounts, OnePublicationTwoFields) {
    auto corpus = CorpusBuilder()
                      .field("A")
                      .field("B")
                      .author("a", "A")
                      .author("b", "B")
                      .journal("J", 2005, 1.0, {"C"})
                      .pub("p", 2005, "J", 1, {"a", "b"})
                      .build();
    EXPECT_EQ(field_pub_counts(corpus), (std::map<std::string, std::size_t>{{"A", 1}, {"B", 1}}));
}

TEST(FieldPubCounts, EmptyCorpus) {
    EXPECT_TRUE(field_pub_counts(Corpus{}).empty());
    EXPECT_TRUE(co_pub_counts(Corpus{}).empty());
}

TEST(CoPubCounts, ThreeFieldsContributeOncePerPair) {
    auto corpus = CorpusBuilder()
                      .field("A")
                      .field("B")
                      .field("C")
                      .author("a", "A")
                      .author("a2", "A")
                      .author("b", "B")
                      .author("c", "C")
                      .journal("J", 2005, 1.0, {"X"})
                      .pub("p", 2005, "J", 1, {"a", "a2", "b", "c"})
                      .build();
    auto co = co_pub_counts(corpus);
    EXPECT_EQ(co.size(), 3u);
    EXPECT_EQ(lookup_co_count(co, "A", "B"), 1u);
    EXPECT_EQ(lookup_co_count(co, "C", "A"), 1u);
    EXPECT_EQ(lookup_co_count(co, "B", "C"), 1u);
}

TEST(CoPubCounts, SingleFieldPublicationGivesEmptyMap) {
    auto corpus = CorpusBuilder()
                      .field("A")
                      .author("a", "A")
                      .author("a2", "A")
                      .journal("J", 2005, 1.0, {"X"})
                      .pub("p", 2005, "J", 1, {"a", "a2"})
                      .build();
    EXPECT_TRUE(co_pub_counts(corpus).empty());
}

TEST(CountsProperty, MatchBruteForceOnRandomCorpora) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto corpus = testing::random_corpus(seed, 50);
        auto sets = brute_field_sets(corpus);
        std::map<std::string, std::size_t> fc;
        CoCounts cc;
        for (const auto& fs : sets) {
            for (const auto& f : fs) ++fc[f];
            for (auto i = fs.begin(); i != fs.end(); ++i) {
                for (auto j = std::next(i); j != fs.end(); ++j) ++cc[{*i, *j}];
            }
        }
        EXPECT_EQ(field_pub_counts(corpus), fc) << seed;
        EXPECT_EQ(co_pub_counts(corpus), cc) << seed;
    }
}

TEST(SpecificDegree, AnnexRows) {
    EXPECT_DOUBLE_EQ(specific_degree(38, 281), 38.0 / 281.0);
    EXPECT_NEAR(specific_degree(38, 281), 0.13523, 1e-5);
    EXPECT_NEAR(specific_degree(159, 520), 0.30577, 1e-5);
    EXPECT_EQ(specific_degree(0, 17), 0.0);
}

TEST(SpecificDegree, ZeroFirstCountIsUndefined) {
    try {
        specific_degree(0, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UndefinedInput);
    }
}

// A has 100 publications; `joint` of them also carry a B author.
Corpus threshold_corpus(int joint) {
    CorpusBuilder b;
    b.field("A").field("B").author("a", "A").author("b", "B").journal("J", 2005, 1.0, {"X"});
    for (int i = 0; i < 100; ++i) {
        std::vector<std::string> team{"a"};
        if (i < joint) team.push_back("b");
        b.pub("p" + std::to_string(1000 + i), 2005, "J", 1, team);
    }
    return b.build();
}

TEST(IdentifyPairs, ElevenOfHundredQualifies) {
    auto pairs = identify_pairs(threshold_corpus(11), 0.10, 100);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].first_field, "A");
    EXPECT_EQ(pairs[0].second_field, "B");
    EXPECT_EQ(pairs[0].co_count, 11u);
    EXPECT_EQ(pairs[0].first_count, 100u);
    EXPECT_DOUBLE_EQ(pairs[0].degree, 0.11);
}

TEST(IdentifyPairs, ThresholdIsStrict) {
    EXPECT_TRUE(identify_pairs(threshold_corpus(10), 0.10, 100).empty());
}

TEST(IdentifyPairs, MinFirstCountFiltersSmallFields) {
    // B has only 11 publications, all with A: degree 1.0 but below 100.
    auto pairs = identify_pairs(threshold_corpus(11), 0.10, 12);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].first_field, "A");
    EXPECT_EQ(identify_pairs(threshold_corpus(11), 0.10, 11).size(), 2u);
}

TEST(IdentifyPairs, InvalidThresholdRejected) {
    auto corpus = threshold_corpus(11);
    EXPECT_THROW(identify_pairs(corpus, 0.0, 1), Error);
    EXPECT_THROW(identify_pairs(corpus, 1.5, 1), Error);
    EXPECT_NO_THROW(identify_pairs(corpus, 1.0, 1));
}

TEST(IdentifyPairs, MatchesBruteForceFilter) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto corpus = testing::random_corpus(seed, 150);
        auto sets = brute_field_sets(corpus);
        std::vector<std::string> codes;
        for (const auto& e : corpus.scheme().entries()) codes.push_back(e.field_code);
        for (double threshold : {0.05, 0.10, 0.3}) {
            for (std::size_t min_first : {1u, 20u}) {
                std::vector<std::pair<std::string, std::string>> expected;
                for (const auto& a : codes) {
                    for (const auto& b : codes) {
                        if (a == b) continue;
                        std::size_t first = 0, co = 0;
                        for (const auto& fs : sets) {
                            if (!fs.count(a)) continue;
                            ++first;
                            if (fs.count(b)) ++co;
                        }
                        if (first >= min_first && first > 0 &&
                            static_cast<double>(co) / static_cast<double>(first) > threshold) {
                            expected.emplace_back(a, b);
                        }
                    }
                }
                std::vector<std::pair<std::string, std::string>> got;
                for (const auto& p : identify_pairs(corpus, threshold, min_first)) {
                    got.emplace_back(p.first_field, p.second_field);
                }
                EXPECT_EQ(got, expected) << "seed " << seed << " threshold " << threshold;
            }
        }
    }
}

TEST(IdentifyPairs, DegreeTimesFirstCountIsSymmetricCoCount) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto corpus = testing::random_corpus(seed);
        auto pairs = identify_pairs(corpus, 1e-9, 1);
        std::map<std::pair<std::string, std::string>, PairProfile> by;
        for (const auto& p : pairs) by[{p.first_field, p.second_field}] = p;
        for (const auto& [key, p] : by) {
            EXPECT_NEAR(p.degree * static_cast<double>(p.first_count), static_cast<double>(p.co_count), 1e-9);
            auto reverse = by.find({key.second, key.first});
            ASSERT_NE(reverse, by.end());
            EXPECT_EQ(reverse->second.co_count, p.co_count);
            EXPECT_NEAR(reverse->second.degree * static_cast<double>(reverse->second.first_count),
                        p.degree * static_cast<double>(p.first_count), 1e-9);
            EXPECT_GE(p.degree, 0.0);
            EXPECT_LE(p.degree, 1.0);
        }
    }
}

TEST(IdentifyPairs, InvariantToPublicationOrder) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto corpus = testing::random_corpus(seed);
        CorpusParts parts;
        parts.scheme = corpus.scheme();
        parts.authors.assign(corpus.authors().begin(), corpus.authors().end());
        parts.journals.assign(corpus.journals().begin(), corpus.journals().end());
        parts.publications.assign(corpus.publications().begin(), corpus.publications().end());
        std::mt19937_64 rng(seed);
        std::shuffle(parts.publications.begin(), parts.publications.end(), rng);
        for (auto& p : parts.publications) std::shuffle(p.author_ids.begin(), p.author_ids.end(), rng);
        Corpus shuffled(std::move(parts), {});
        auto a = identify_pairs(corpus, 0.1, 5);
        auto b = identify_pairs(shuffled, 0.1, 5);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].pair(), b[i].pair());
            EXPECT_EQ(a[i].co_count, b[i].co_count);
        }
    }
}

TEST(ProfilePairs, SkipsFieldsWithoutPublications) {
    auto corpus = threshold_corpus(11);
    std::vector<std::string> warnings;
    std::vector<FieldPair> list{{"B", "A"}, {"A", "B"}};
    auto profiles = profile_pairs(corpus, list, &warnings);
    ASSERT_EQ(profiles.size(), 2u);
    EXPECT_EQ(profiles[0].first_field, "A");
    EXPECT_EQ(profiles[1].co_count, 11u);
    EXPECT_DOUBLE_EQ(profiles[1].degree, 1.0);
    EXPECT_TRUE(warnings.empty());
}

TEST(ProfilePairs, UnknownFieldIsDangling) {
    auto corpus = threshold_corpus(11);
    std::vector<FieldPair> list{{"A", "Z"}};
    EXPECT_THROW(profile_pairs(corpus, list), Error);
}

TEST(LoadPairList, ReadsCsv) {
    testing::TempDir dir;
    testing::write_file(dir / "pairs.csv", "first_field,second_field\nA,B\nB,A\n");
    auto pairs = load_pair_list(dir / "pairs.csv");
    ASSERT_EQ(pairs.size(), 2u);
    EXPECT_EQ(pairs[1], (FieldPair{"B", "A"}));
    testing::write_file(dir / "bad.csv", "x,y\nA,B\n");
    EXPECT_THROW(load_pair_list(dir / "bad.csv"), Error);
}

TEST(SimpsonIndex, Examples) {
    std::vector<std::uint64_t> one{4}, even{2, 2}, skew{3, 1};
    EXPECT_DOUBLE_EQ(simpson_index(one), 0.0);
    EXPECT_DOUBLE_EQ(simpson_index(even), 0.5);
    EXPECT_DOUBLE_EQ(simpson_index(skew), 0.375);
}

TEST(SimpsonIndex, ZeroTotalIsUndefined) {
    std::vector<std::uint64_t> zeros{0, 0};
    EXPECT_THROW(simpson_index(zeros), Error);
    EXPECT_THROW(simpson_index({}), Error);
}

TEST(SimpsonIndex, ScalingAndPermutationInvariant) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> count(0, 50);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint64_t> x(1 + trial % 7);
        for (auto& v : x) v = count(rng);
        x[0] += 1;
        double base = simpson_index(x);
        EXPECT_GE(base, 0.0);
        EXPECT_LT(base, 1.0);
        auto scaled = x;
        for (auto& v : scaled) v *= 7;
        EXPECT_NEAR(simpson_index(scaled), base, 1e-12);
        std::shuffle(x.begin(), x.end(), rng);
        EXPECT_NEAR(simpson_index(x), base, 1e-12);
    }
}

}  // namespace
}  // namespace idr

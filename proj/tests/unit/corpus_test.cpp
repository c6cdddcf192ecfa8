#include "idr/corpus.hpp"

#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "builders.hpp"
#include "idr/error.hpp"
#include "temp_dir.hpp"

namespace idr {
namespace {

using testing::CorpusBuilder;
using testing::TempDir;
using testing::write_file;

const char* kFields =
    "field_code,field_name,area_code,area_name\n"
    "AGR/04,Horticulture,07,Agriculture\n"
    "AGR/02,Agronomy,07,Agriculture\n"
    "MAT/05,Analysis,01,Mathematics\n";
const char* kAuthors =
    "author_id,field_code\n"
    "a1,AGR/04\n"
    "a2,AGR/02\n"
    "a3,MAT/05\n";
const char* kJournals =
    "journal_id,year,impact_factor,categories\n"
    "J1,2005,1.5,C1\n"
    "J1,2006,1.7,C1\n"
    "J2,2005,,C1|C2\n";

void write_tables(const TempDir& dir, const std::string& publications, const std::string& journals = kJournals) {
    write_file(dir / "fields.csv", kFields);
    write_file(dir / "authors.csv", kAuthors);
    write_file(dir / "journals.csv", journals);
    write_file(dir / "publications.csv", publications);
}

ErrorCode load_error(const TempDir& dir, std::string* message = nullptr) {
    try {
        load_corpus(CorpusPaths::in_directory(dir.path()));
    } catch (const Error& e) {
        if (message) *message = e.what();
        return e.code();
    }
    ADD_FAILURE() << "load succeeded";
    return ErrorCode::Io;
}

TEST(LoadCorpus, WellFormedTablesLoadWithoutWarnings) {
    TempDir dir;
    write_tables(dir,
                 "pub_id,year,journal_id,citations,author_ids,categories\n"
                 "p3,2005,J1,4,a1|a2,\n"
                 "p1,2006,J1,0,a1,\n"
                 "p2,2005,J2,7,a3,C2\n");
    auto corpus = load_corpus(CorpusPaths::in_directory(dir.path()));
    ASSERT_EQ(corpus.size(), 3u);
    EXPECT_TRUE(corpus.provenance().warnings.empty());
    EXPECT_EQ(corpus.publication(0).pub_id, "p1");
    EXPECT_EQ(corpus.publication(2).pub_id, "p3");
    // default categories from the journal record, explicit ones kept
    EXPECT_EQ(corpus.publication(0).categories, std::vector<std::string>{"C1"});
    EXPECT_EQ(corpus.publication(1).categories, std::vector<std::string>{"C2"});
    EXPECT_TRUE(corpus.publication(1).explicit_categories);
    auto fs = corpus.field_set(2);
    ASSERT_EQ(fs.size(), 2u);
    EXPECT_EQ(corpus.scheme().code(fs[0]), "AGR/02");
    EXPECT_EQ(corpus.scheme().code(fs[1]), "AGR/04");
}

TEST(LoadCorpus, StrictModeRejectsUnknownJournal) {
    TempDir dir;
    write_tables(dir,
                 "pub_id,year,journal_id,citations,author_ids,categories\n"
                 "p1,2005,J1,4,a1,\n"
                 "p2,2005,JX,4,a1,\n"
                 "p3,2005,J1,4,a2,\n");
    std::string message;
    EXPECT_EQ(load_error(dir, &message), ErrorCode::DanglingReference);
    EXPECT_NE(message.find("p2"), std::string::npos);
    EXPECT_NE(message.find("JX"), std::string::npos);
}

TEST(LoadCorpus, LenientModeDropsUnknownJournalWithOneWarning) {
    TempDir dir;
    write_tables(dir,
                 "pub_id,year,journal_id,citations,author_ids,categories\n"
                 "p1,2005,J1,4,a1,\n"
                 "p2,2005,JX,4,a1,\n"
                 "p3,2005,J1,4,a2,\n");
    LoadOptions lenient;
    lenient.lenient = true;
    auto corpus = load_corpus(CorpusPaths::in_directory(dir.path()), lenient);
    EXPECT_EQ(corpus.size(), 2u);
    EXPECT_EQ(corpus.provenance().warnings.size(), 1u);
    EXPECT_FALSE(corpus.find_publication("p2"));
    EXPECT_EQ(validate(corpus).load_warnings, 1u);
}

TEST(LoadCorpus, UnknownAuthorIsDangling) {
    TempDir dir;
    write_tables(dir,
                 "pub_id,year,journal_id,citations,author_ids,categories\n"
                 "p1,2005,J1,4,a1|zz,\n");
    EXPECT_EQ(load_error(dir), ErrorCode::DanglingReference);
}

TEST(LoadCorpus, MalformedRowReportsFileAndLine) {
    TempDir dir;
    write_tables(dir,
                 "pub_id,year,journal_id,citations,author_ids,categories\n"
                 "p1,2005,J1,4,a1,\n"
                 "p2,20x5,J1,4,a1,\n");
    std::string message;
    EXPECT_EQ(load_error(dir, &message), ErrorCode::MalformedRow);
    EXPECT_NE(message.find("publications.csv:3"), std::string::npos) << message;
}

TEST(LoadCorpus, WrongCellCountIsMalformed) {
    TempDir dir;
    write_tables(dir,
                 "pub_id,year,journal_id,citations,author_ids,categories\n"
                 "p1,2005,J1,4\n");
    EXPECT_EQ(load_error(dir), ErrorCode::MalformedRow);
}

TEST(LoadCorpus, WrongHeaderIsMalformed) {
    TempDir dir;
    write_tables(dir, "id,year,journal,citations,authors,categories\n");
    EXPECT_EQ(load_error(dir), ErrorCode::MalformedRow);
}

TEST(LoadCorpus, NegativeCitationsAreMalformed) {
    TempDir dir;
    write_tables(dir,
                 "pub_id,year,journal_id,citations,author_ids,categories\n"
                 "p1,2005,J1,-1,a1,\n");
    EXPECT_EQ(load_error(dir), ErrorCode::MalformedRow);
}

TEST(LoadCorpus, DuplicatePubIdIsRejected) {
    TempDir dir;
    write_tables(dir,
                 "pub_id,year,journal_id,citations,author_ids,categories\n"
                 "p1,2005,J1,4,a1,\n"
                 "p1,2006,J1,4,a1,\n");
    std::string message;
    EXPECT_EQ(load_error(dir, &message), ErrorCode::Duplicate);
    EXPECT_NE(message.find("publications.csv:3"), std::string::npos) << message;
}

TEST(LoadCorpus, DuplicateAuthorIdIsRejected) {
    TempDir dir;
    write_tables(dir, "pub_id,year,journal_id,citations,author_ids,categories\n");
    write_file(dir / "authors.csv", "author_id,field_code\na1,AGR/04\na1,AGR/02\n");
    EXPECT_EQ(load_error(dir), ErrorCode::Duplicate);
}

TEST(LoadCorpus, DuplicateJournalYearIsRejected) {
    TempDir dir;
    write_tables(dir, "pub_id,year,journal_id,citations,author_ids,categories\n",
                 "journal_id,year,impact_factor,categories\nJ1,2005,1,C1\nJ1,2005,2,C1\n");
    EXPECT_EQ(load_error(dir), ErrorCode::Duplicate);
}

TEST(LoadCorpus, MissingFileIsIoError) {
    TempDir dir;
    write_file(dir / "fields.csv", kFields);
    EXPECT_EQ(load_error(dir), ErrorCode::Io);
}

TEST(FieldSchemeTest, EveryFieldHasExactlyOneArea) {
    FieldScheme scheme({{"B", "b", "X", "Area X"}, {"A", "a", "X", "Area X"}, {"C", "c", "Y", "Area Y"}});
    ASSERT_EQ(scheme.size(), 3u);
    EXPECT_EQ(scheme.code(FieldId{0}), "A");
    EXPECT_EQ(scheme.area_of(*scheme.find("C")), "Y");
    EXPECT_EQ(scheme.areas().size(), 2u);
    EXPECT_FALSE(scheme.find("Z"));
    EXPECT_THROW(scheme.require("Z"), Error);
    EXPECT_THROW(FieldScheme({{"A", "a", "X", "n"}, {"A", "a", "Y", "m"}}), Error);
    EXPECT_THROW(FieldScheme({{"A", "a", "X", "n"}, {"B", "b", "X", "other"}}), Error);
}

TEST(LoadCorpus, LoadingIsDeterministicAndRoundTrips) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto original = testing::random_corpus(seed);
        TempDir dir;
        write_corpus(original, dir.path());
        auto first = load_corpus(CorpusPaths::in_directory(dir.path()));
        auto second = load_corpus(CorpusPaths::in_directory(dir.path()));
        EXPECT_EQ(serialize(first), serialize(second));
        EXPECT_EQ(serialize(first), serialize(original));
    }
}

TEST(LoadCorpus, InputRowOrderDoesNotMatter) {
    TempDir a, b;
    write_tables(a,
                 "pub_id,year,journal_id,citations,author_ids,categories\n"
                 "p1,2005,J1,4,a1,\np2,2006,J1,1,a2|a1,\np3,2005,J2,0,a3,\n");
    write_tables(b,
                 "pub_id,year,journal_id,citations,author_ids,categories\n"
                 "p3,2005,J2,0,a3,\np2,2006,J1,1,a2|a1,\np1,2005,J1,4,a1,\n");
    EXPECT_EQ(serialize(load_corpus(CorpusPaths::in_directory(a.path()))),
              serialize(load_corpus(CorpusPaths::in_directory(b.path()))));
}

TEST(Validate, EveryJournalWithImpactFactorGivesNoFlags) {
    auto corpus = CorpusBuilder()
                      .field("A")
                      .author("a", "A")
                      .journal("J", 2005, 1.0, {"C"})
                      .pub("p1", 2005, "J", 1, {"a"})
                      .pub("p2", 2005, "J", 1, {"a"})
                      .build();
    auto r = validate(corpus);
    EXPECT_TRUE(r.missing_impact_factor.empty());
    EXPECT_EQ(r.publications, 2u);
    EXPECT_EQ(r.single_classified_author, 2u);
}

TEST(Validate, ImpactFactorlessJournalFlagsItsTwoPublications) {
    auto corpus = CorpusBuilder()
                      .field("A")
                      .author("a", "A")
                      .journal("J", 2005, 1.0, {"C"})
                      .journal("K", 2005, std::nullopt, {"C"})
                      .pub("p1", 2005, "J", 1, {"a"})
                      .pub("p2", 2005, "K", 1, {"a"})
                      .pub("p3", 2005, "K", 1, {})
                      .build();
    auto r = validate(corpus);
    EXPECT_EQ(r.missing_impact_factor, (std::vector<std::string>{"p2", "p3"}));
    EXPECT_EQ(r.empty_authors, std::vector<std::string>{"p3"});
}

TEST(Validate, EmptyCorpusHasZeroCounts) {
    auto r = validate(Corpus{});
    EXPECT_EQ(r.publications, 0u);
    EXPECT_EQ(r.authors, 0u);
    EXPECT_EQ(r.fields, 0u);
    EXPECT_EQ(r.journals, 0u);
    EXPECT_TRUE(r.empty_categories.empty());
    EXPECT_TRUE(r.missing_impact_factor.empty());
}

TEST(Validate, PublicationYearWithoutJournalRecordHasNoCategories) {
    auto corpus = CorpusBuilder()
                      .field("A")
                      .author("a", "A")
                      .journal("J", 2005, 1.0, {"C"})
                      .pub("p1", 2007, "J", 1, {"a"})
                      .build();
    auto r = validate(corpus);
    EXPECT_EQ(r.empty_categories, std::vector<std::string>{"p1"});
    EXPECT_EQ(r.missing_impact_factor, std::vector<std::string>{"p1"});
}

std::vector<std::vector<std::string>> raw_rows(const std::filesystem::path& path) {
    std::istringstream in(testing::read_file(path));
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

// Flags recomputed from the raw CSV text, without the loader.
TEST(Validate, FlagsMatchRawFileScan) {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        TempDir dir;
        write_corpus(testing::random_corpus(seed), dir.path());
        std::map<std::pair<std::string, int>, std::pair<bool, bool>> records;  // has IF, has categories
        for (const auto& r : raw_rows(dir / "journals.csv")) {
            records[{r[0], std::stoi(r[1])}] = {!r[2].empty(), !r[3].empty()};
        }
        std::vector<std::string> no_if, no_cat, no_author;
        for (const auto& r : raw_rows(dir / "publications.csv")) {
            auto it = records.find({r[2], std::stoi(r[1])});
            bool has_if = it != records.end() && it->second.first;
            bool has_cat = !r[5].empty() || (it != records.end() && it->second.second);
            if (!has_if) no_if.push_back(r[0]);
            if (!has_cat) no_cat.push_back(r[0]);
            if (r[4].empty()) no_author.push_back(r[0]);
        }
        auto report = validate(load_corpus(CorpusPaths::in_directory(dir.path())));
        EXPECT_EQ(report.missing_impact_factor, no_if) << seed;
        EXPECT_EQ(report.empty_categories, no_cat) << seed;
        EXPECT_EQ(report.empty_authors, no_author) << seed;
    }
}

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(1.5), "1.5");
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(3.0), "3");
    double x = 1.0 / 3.0;
    EXPECT_EQ(std::stod(format_double(x)), x);
}

}  // namespace
}  // namespace idr

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace idr {

/// Dense index of a field within its scheme. Schemes keep fields sorted by
/// code, so ordering ids orders codes.
struct FieldId {
    std::uint32_t value = 0;
    auto operator<=>(const FieldId&) const = default;
};

using PubIndex = std::uint32_t;

struct FieldEntry {
    std::string field_code;
    std::string field_name;
    std::string area_code;
    std::string area_name;
};

class FieldScheme {
public:
    FieldScheme() = default;
    /// Throws Error(Duplicate) on repeated field codes and Error(MalformedRow)
    /// when one area code carries two different names.
    explicit FieldScheme(std::vector<FieldEntry> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::vector<FieldEntry>& entries() const noexcept { return entries_; }
    const FieldEntry& entry(FieldId id) const { return entries_.at(id.value); }
    const std::string& code(FieldId id) const { return entries_.at(id.value).field_code; }
    const std::string& area_of(FieldId id) const { return entries_.at(id.value).area_code; }

    std::optional<FieldId> find(std::string_view code) const;
    /// Like find(), but throws Error(DanglingReference) for unknown codes.
    FieldId require(std::string_view code) const;

    /// Area code -> area name, sorted by code.
    const std::map<std::string, std::string>& areas() const noexcept { return areas_; }

private:
    std::vector<FieldEntry> entries_;
    std::unordered_map<std::string, FieldId> index_;
    std::map<std::string, std::string> areas_;
};

struct Author {
    std::string author_id;
    std::string field_code;
};

struct JournalYear {
    int year = 0;
    std::optional<double> impact_factor;
    std::vector<std::string> categories;
};

struct Journal {
    std::string journal_id;
    std::vector<JournalYear> records;  // sorted by year, unique years

    const JournalYear* record(int year) const;
};

struct Publication {
    std::string pub_id;
    int year = 0;
    std::string journal_id;
    std::int64_t citations = 0;
    std::vector<std::string> author_ids;  // classified authors only
    std::vector<std::string> categories;  // resolved (explicit or journal default)
    bool explicit_categories = false;
};

struct Provenance {
    std::vector<std::string> sources;
    std::string loaded_at;  // ISO-8601 UTC, informational only
    std::vector<std::string> warnings;
};

struct LoadOptions {
    bool lenient = false;
    std::optional<int> min_year;
    std::optional<int> max_year;
};

/// Raw, not-yet-cross-referenced corpus content.
struct CorpusParts {
    FieldScheme scheme;
    std::vector<Author> authors;
    std::vector<Journal> journals;
    std::vector<Publication> publications;
};

/// Immutable, fully cross-referenced publication corpus. Publications are
/// stored sorted by pub_id; PubIndex values index that order.
class Corpus {
public:
    Corpus() = default;
    /// Resolves every reference. Strict mode throws on the first dangling
    /// reference; lenient mode drops the offending author or publication and
    /// records a warning in provenance().warnings.
    Corpus(CorpusParts parts, const LoadOptions& options, Provenance provenance = {});

    const FieldScheme& scheme() const noexcept { return scheme_; }
    std::span<const Author> authors() const noexcept { return authors_; }
    std::span<const Journal> journals() const noexcept { return journals_; }
    std::span<const Publication> publications() const noexcept { return publications_; }
    const Publication& publication(PubIndex i) const { return publications_.at(i); }
    std::size_t size() const noexcept { return publications_.size(); }

    /// Distinct fields of the publication's classified authors, sorted.
    std::span<const FieldId> field_set(PubIndex i) const;

    /// Publications with at least one classified author in the field, ascending.
    std::span<const PubIndex> publications_of(FieldId field) const { return by_field_.at(field.value); }

    const Journal* find_journal(std::string_view journal_id) const;
    const JournalYear* journal_record(std::string_view journal_id, int year) const;
    std::optional<PubIndex> find_publication(std::string_view pub_id) const;

    const Provenance& provenance() const noexcept { return provenance_; }

private:
    FieldScheme scheme_;
    std::vector<Author> authors_;
    std::vector<Journal> journals_;
    std::vector<Publication> publications_;
    std::vector<std::uint32_t> field_offsets_;
    std::vector<FieldId> field_sets_;
    std::vector<std::vector<PubIndex>> by_field_;
    std::unordered_map<std::string, std::size_t> journal_index_;
    Provenance provenance_;
};

/// Locations of the four corpus tables.
struct CorpusPaths {
    std::filesystem::path fields;
    std::filesystem::path authors;
    std::filesystem::path journals;
    std::filesystem::path publications;

    /// fields.csv, authors.csv, journals.csv and publications.csv under dir.
    static CorpusPaths in_directory(const std::filesystem::path& dir);
};

Corpus load_corpus(const CorpusPaths& paths, const LoadOptions& options = {});

/// Writes the four tables in canonical order (sorted ids, shortest
/// round-trip number formatting).
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

/// Canonical text form of the corpus content (all four tables, excluding
/// provenance). Equal corpora serialize to identical bytes.
std::string serialize(const Corpus& corpus);

struct ValidationReport {
    std::size_t publications = 0;
    std::size_t authors = 0;
    std::size_t fields = 0;
    std::size_t areas = 0;
    std::size_t journals = 0;
    std::vector<std::string> empty_categories;  // pub ids
    std::vector<std::string> empty_authors;     // pub ids
    std::vector<std::string> missing_impact_factor;  // pub ids
    std::size_t single_classified_author = 0;
    std::size_t load_warnings = 0;
};

ValidationReport validate(const Corpus& corpus);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

}  // namespace idr

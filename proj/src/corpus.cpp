#include "idr/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "idr/csv.hpp"
#include "idr/error.hpp"

namespace idr {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedRow: return "malformed-row";
        case ErrorCode::Duplicate: return "duplicate";
        case ErrorCode::DanglingReference: return "dangling-reference";
        case ErrorCode::UndefinedInput: return "undefined-input";
        case ErrorCode::SampleTooSmall: return "sample-too-small";
        case ErrorCode::DegenerateSample: return "degenerate-sample";
        case ErrorCode::NotInScope: return "not-in-scope";
        case ErrorCode::InvalidConfig: return "invalid-config";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// FieldScheme

FieldScheme::FieldScheme(std::vector<FieldEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const FieldEntry& a, const FieldEntry& b) { return a.field_code < b.field_code; });
    for (std::uint32_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!index_.emplace(e.field_code, FieldId{i}).second) {
            throw Error(ErrorCode::Duplicate, "duplicate field_code '" + e.field_code + "'");
        }
        auto [it, inserted] = areas_.emplace(e.area_code, e.area_name);
        if (!inserted && it->second != e.area_name) {
            throw Error(ErrorCode::MalformedRow, "area '" + e.area_code + "' has two names: '" +
                                                     it->second + "' and '" + e.area_name + "'");
        }
    }
}

std::optional<FieldId> FieldScheme::find(std::string_view code) const {
    auto it = index_.find(std::string(code));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

FieldId FieldScheme::require(std::string_view code) const {
    if (auto id = find(code)) return *id;
    throw Error(ErrorCode::DanglingReference, "unknown field_code '" + std::string(code) + "'");
}

// ---------------------------------------------------------------------------
// Corpus

const JournalYear* Journal::record(int year) const {
    auto it = std::lower_bound(records.begin(), records.end(), year,
                               [](const JournalYear& r, int y) { return r.year < y; });
    return (it != records.end() && it->year == year) ? &*it : nullptr;
}

Corpus::Corpus(CorpusParts parts, const LoadOptions& options, Provenance provenance)
    : scheme_(std::move(parts.scheme)),
      authors_(std::move(parts.authors)),
      journals_(std::move(parts.journals)),
      provenance_(std::move(provenance)) {
    auto warn_or_throw = [&](const std::string& message) {
        if (!options.lenient) throw Error(ErrorCode::DanglingReference, message);
        provenance_.warnings.push_back(message);
    };

    std::sort(authors_.begin(), authors_.end(),
              [](const Author& a, const Author& b) { return a.author_id < b.author_id; });
    for (std::size_t i = 1; i < authors_.size(); ++i) {
        if (authors_[i].author_id == authors_[i - 1].author_id) {
            throw Error(ErrorCode::Duplicate, "duplicate author_id '" + authors_[i].author_id + "'");
        }
    }
    std::unordered_map<std::string, FieldId> author_field;
    std::vector<Author> kept_authors;
    kept_authors.reserve(authors_.size());
    for (auto& a : authors_) {
        auto id = scheme_.find(a.field_code);
        if (!id) {
            warn_or_throw("author '" + a.author_id + "' references unknown field '" + a.field_code + "'");
            continue;
        }
        author_field.emplace(a.author_id, *id);
        kept_authors.push_back(std::move(a));
    }
    authors_ = std::move(kept_authors);

    std::sort(journals_.begin(), journals_.end(),
              [](const Journal& a, const Journal& b) { return a.journal_id < b.journal_id; });
    for (std::size_t i = 0; i < journals_.size(); ++i) {
        auto& j = journals_[i];
        if (i > 0 && journals_[i - 1].journal_id == j.journal_id) {
            throw Error(ErrorCode::Duplicate, "duplicate journal_id '" + j.journal_id + "'");
        }
        std::sort(j.records.begin(), j.records.end(),
                  [](const JournalYear& a, const JournalYear& b) { return a.year < b.year; });
        for (std::size_t k = 1; k < j.records.size(); ++k) {
            if (j.records[k].year == j.records[k - 1].year) {
                throw Error(ErrorCode::Duplicate, "journal '" + j.journal_id + "' has two records for year " +
                                                      std::to_string(j.records[k].year));
            }
        }
        journal_index_.emplace(j.journal_id, i);
    }

    auto pubs = std::move(parts.publications);
    std::sort(pubs.begin(), pubs.end(),
              [](const Publication& a, const Publication& b) { return a.pub_id < b.pub_id; });
    for (std::size_t i = 1; i < pubs.size(); ++i) {
        if (pubs[i].pub_id == pubs[i - 1].pub_id) {
            throw Error(ErrorCode::Duplicate, "duplicate pub_id '" + pubs[i].pub_id + "'");
        }
    }

    publications_.reserve(pubs.size());
    field_offsets_.reserve(pubs.size() + 1);
    field_offsets_.push_back(0);
    std::vector<FieldId> fields;
    by_field_.resize(scheme_.size());
    for (auto& p : pubs) {
        if (p.citations < 0) {
            throw Error(ErrorCode::MalformedRow, "publication '" + p.pub_id + "' has negative citations");
        }
        if ((options.min_year && p.year < *options.min_year) || (options.max_year && p.year > *options.max_year)) {
            warn_or_throw("publication '" + p.pub_id + "' year " + std::to_string(p.year) +
                          " outside the corpus year range");
            continue;
        }
        auto jt = journal_index_.find(p.journal_id);
        if (jt == journal_index_.end()) {
            warn_or_throw("publication '" + p.pub_id + "' references unknown journal '" + p.journal_id + "'");
            continue;
        }
        fields.clear();
        bool dangling = false;
        for (const auto& aid : p.author_ids) {
            auto at = author_field.find(aid);
            if (at == author_field.end()) {
                warn_or_throw("publication '" + p.pub_id + "' references unknown author '" + aid + "'");
                dangling = true;
                break;
            }
            fields.push_back(at->second);
        }
        if (dangling) continue;
        std::sort(fields.begin(), fields.end());
        fields.erase(std::unique(fields.begin(), fields.end()), fields.end());

        if (!p.explicit_categories || p.categories.empty()) {
            p.explicit_categories = false;
            const auto* rec = journals_[jt->second].record(p.year);
            p.categories = rec ? rec->categories : std::vector<std::string>{};
        }
        auto index = static_cast<PubIndex>(publications_.size());
        for (auto f : fields) by_field_[f.value].push_back(index);
        field_sets_.insert(field_sets_.end(), fields.begin(), fields.end());
        field_offsets_.push_back(static_cast<std::uint32_t>(field_sets_.size()));
        publications_.push_back(std::move(p));
    }
}

std::span<const FieldId> Corpus::field_set(PubIndex i) const {
    return std::span<const FieldId>(field_sets_).subspan(field_offsets_.at(i),
                                                         field_offsets_.at(i + 1) - field_offsets_[i]);
}

const Journal* Corpus::find_journal(std::string_view journal_id) const {
    auto it = journal_index_.find(std::string(journal_id));
    return it == journal_index_.end() ? nullptr : &journals_[it->second];
}

const JournalYear* Corpus::journal_record(std::string_view journal_id, int year) const {
    const auto* j = find_journal(journal_id);
    return j ? j->record(year) : nullptr;
}

std::optional<PubIndex> Corpus::find_publication(std::string_view pub_id) const {
    auto it = std::lower_bound(publications_.begin(), publications_.end(), pub_id,
                               [](const Publication& p, std::string_view id) { return p.pub_id < id; });
    if (it == publications_.end() || it->pub_id != pub_id) return std::nullopt;
    return static_cast<PubIndex>(it - publications_.begin());
}

// ---------------------------------------------------------------------------
// Loading

CorpusPaths CorpusPaths::in_directory(const std::filesystem::path& dir) {
    return {dir / "fields.csv", dir / "authors.csv", dir / "journals.csv", dir / "publications.csv"};
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

class TableReader {
public:
    TableReader(const std::filesystem::path& path, const std::vector<std::string>& header)
        : file_(path), name_(path.filename().string()), reader_(file_, name_), width_(header.size()) {
        if (!file_) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
        auto head = reader_.next();
        if (!head) fail("missing header row");
        if (*head != header) {
            std::string expected = csv::join_list(header);
            std::replace(expected.begin(), expected.end(), '|', ',');
            fail("unexpected header, expected '" + expected + "'");
        }
    }

    std::optional<csv::Row> next() {
        auto row = reader_.next();
        if (row && row->size() != width_) {
            fail("expected " + std::to_string(width_) + " cells, found " + std::to_string(row->size()));
        }
        return row;
    }

    [[noreturn]] void fail(const std::string& what, ErrorCode code = ErrorCode::MalformedRow) const {
        throw Error(code, name_ + ":" + std::to_string(reader_.line()) + ": " + what);
    }

    std::int64_t integer(const std::string& cell, const char* column) const {
        std::int64_t v = 0;
        auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (cell.empty() || res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
            fail(std::string("column ") + column + ": '" + cell + "' is not an integer");
        }
        return v;
    }

    double decimal(const std::string& cell, const char* column) const {
        double v = 0;
        auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (cell.empty() || res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
            fail(std::string("column ") + column + ": '" + cell + "' is not a number");
        }
        return v;
    }

    void require_nonempty(const std::string& cell, const char* column) const {
        if (cell.empty()) fail(std::string("column ") + column + " is empty");
    }

private:
    std::ifstream file_;
    std::string name_;
    csv::Reader reader_;
    std::size_t width_;
};

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

Corpus load_corpus(const CorpusPaths& paths, const LoadOptions& options) {
    CorpusParts parts;

    {
        TableReader t(paths.fields, {"field_code", "field_name", "area_code", "area_name"});
        std::vector<FieldEntry> entries;
        std::set<std::string> seen;
        while (auto row = t.next()) {
            auto& r = *row;
            t.require_nonempty(r[0], "field_code");
            t.require_nonempty(r[2], "area_code");
            if (!seen.insert(r[0]).second) t.fail("duplicate field_code '" + r[0] + "'", ErrorCode::Duplicate);
            entries.push_back({r[0], r[1], r[2], r[3]});
        }
        parts.scheme = FieldScheme(std::move(entries));
    }
    {
        TableReader t(paths.authors, {"author_id", "field_code"});
        std::set<std::string> seen;
        while (auto row = t.next()) {
            auto& r = *row;
            t.require_nonempty(r[0], "author_id");
            if (!seen.insert(r[0]).second) t.fail("duplicate author_id '" + r[0] + "'", ErrorCode::Duplicate);
            t.require_nonempty(r[1], "field_code");
            parts.authors.push_back({r[0], r[1]});
        }
    }
    {
        TableReader t(paths.journals, {"journal_id", "year", "impact_factor", "categories"});
        std::map<std::string, Journal> journals;
        while (auto row = t.next()) {
            auto& r = *row;
            t.require_nonempty(r[0], "journal_id");
            JournalYear rec;
            rec.year = static_cast<int>(t.integer(r[1], "year"));
            if (!r[2].empty()) {
                double impact = t.decimal(r[2], "impact_factor");
                if (!(impact >= 0.0)) t.fail("impact_factor must be nonnegative");
                rec.impact_factor = impact;
            }
            rec.categories = csv::split_list(r[3]);
            if (rec.categories.empty()) t.fail("journal categories must be nonempty");
            auto& j = journals[r[0]];
            j.journal_id = r[0];
            if (std::any_of(j.records.begin(), j.records.end(), [&](const auto& x) { return x.year == rec.year; })) {
                t.fail("duplicate record for journal '" + r[0] + "' year " + r[1], ErrorCode::Duplicate);
            }
            j.records.push_back(std::move(rec));
        }
        for (auto& [id, j] : journals) parts.journals.push_back(std::move(j));
    }
    {
        TableReader t(paths.publications, {"pub_id", "year", "journal_id", "citations", "author_ids", "categories"});
        std::set<std::string> seen;
        while (auto row = t.next()) {
            auto& r = *row;
            t.require_nonempty(r[0], "pub_id");
            t.require_nonempty(r[2], "journal_id");
            if (!seen.insert(r[0]).second) t.fail("duplicate pub_id '" + r[0] + "'", ErrorCode::Duplicate);
            Publication p;
            p.pub_id = r[0];
            p.year = static_cast<int>(t.integer(r[1], "year"));
            p.journal_id = r[2];
            p.citations = t.integer(r[3], "citations");
            if (p.citations < 0) t.fail("citations must be nonnegative");
            p.author_ids = csv::split_list(r[4]);
            p.categories = csv::split_list(r[5]);
            p.explicit_categories = !p.categories.empty();
            parts.publications.push_back(std::move(p));
        }
    }

    Provenance prov;
    for (const auto* p : {&paths.fields, &paths.authors, &paths.journals, &paths.publications}) {
        prov.sources.push_back(p->string());
    }
    prov.loaded_at = utc_timestamp();
    return Corpus(std::move(parts), options, std::move(prov));
}

// ---------------------------------------------------------------------------
// Writing

namespace {

void write_fields(std::ostream& out, const Corpus& c) {
    csv::write_row(out, {"field_code", "field_name", "area_code", "area_name"});
    for (const auto& e : c.scheme().entries()) {
        csv::write_row(out, {e.field_code, e.field_name, e.area_code, e.area_name});
    }
}

void write_authors(std::ostream& out, const Corpus& c) {
    csv::write_row(out, {"author_id", "field_code"});
    for (const auto& a : c.authors()) csv::write_row(out, {a.author_id, a.field_code});
}

void write_journals(std::ostream& out, const Corpus& c) {
    csv::write_row(out, {"journal_id", "year", "impact_factor", "categories"});
    for (const auto& j : c.journals()) {
        for (const auto& r : j.records) {
            csv::write_row(out, {j.journal_id, std::to_string(r.year),
                                 r.impact_factor ? format_double(*r.impact_factor) : std::string{},
                                 csv::join_list(r.categories)});
        }
    }
}

void write_publications(std::ostream& out, const Corpus& c) {
    csv::write_row(out, {"pub_id", "year", "journal_id", "citations", "author_ids", "categories"});
    for (const auto& p : c.publications()) {
        csv::write_row(out, {p.pub_id, std::to_string(p.year), p.journal_id, std::to_string(p.citations),
                             csv::join_list(p.author_ids),
                             p.explicit_categories ? csv::join_list(p.categories) : std::string{}});
    }
}

void write_file(const std::filesystem::path& path, void (*writer)(std::ostream&, const Corpus&),
                const Corpus& c) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    writer(out, c);
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
    auto paths = CorpusPaths::in_directory(dir);
    write_file(paths.fields, write_fields, corpus);
    write_file(paths.authors, write_authors, corpus);
    write_file(paths.journals, write_journals, corpus);
    write_file(paths.publications, write_publications, corpus);
}

std::string serialize(const Corpus& corpus) {
    std::ostringstream out;
    out << "# fields\n";
    write_fields(out, corpus);
    out << "# authors\n";
    write_authors(out, corpus);
    out << "# journals\n";
    write_journals(out, corpus);
    out << "# publications\n";
    write_publications(out, corpus);
    return out.str();
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate(const Corpus& corpus) {
    ValidationReport r;
    r.publications = corpus.size();
    r.authors = corpus.authors().size();
    r.fields = corpus.scheme().size();
    r.areas = corpus.scheme().areas().size();
    r.journals = corpus.journals().size();
    r.load_warnings = corpus.provenance().warnings.size();
    for (PubIndex i = 0; i < corpus.size(); ++i) {
        const auto& p = corpus.publication(i);
        if (p.categories.empty()) r.empty_categories.push_back(p.pub_id);
        if (p.author_ids.empty()) r.empty_authors.push_back(p.pub_id);
        if (p.author_ids.size() == 1) ++r.single_classified_author;
        const auto* rec = corpus.journal_record(p.journal_id, p.year);
        if (!rec || !rec->impact_factor) r.missing_impact_factor.push_back(p.pub_id);
    }
    return r;
}

}  // namespace idr

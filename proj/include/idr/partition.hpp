#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idr/corpus.hpp"
#include "idr/pairing.hpp"

namespace idr {

enum class SetLabel {
    Set1,  // co-authored with the second field of the pair (specific IDR)
    Set2,  // co-authored with other fields only (generic IDR)
    Set3,  // first field only (non-IDR)
};

/// Assigns a publication of the first field to its set relative to the pair.
/// field_set must be sorted; throws Error(NotInScope) if it lacks `first`.
SetLabel classify_publication(std::span<const FieldId> field_set, FieldId first, FieldId second);

/// Partition of one first field's publications, either relative to a pair
/// (set1/set2/set3) or at field level (union12/set3 only). All id lists are
/// ascending PubIndex values.
struct PublicationSets {
    std::string first_field;
    std::optional<std::string> second_field;  // empty for field scope
    std::vector<PubIndex> set1;
    std::vector<PubIndex> set2;
    std::vector<PubIndex> set3;
    std::vector<PubIndex> union12;
    std::size_t single_author = 0;  // set3 publications with one classified author

    bool is_pair() const { return second_field.has_value(); }
    std::size_t total() const { return union12.size() + set3.size(); }
};

PublicationSets partition_pair(const Corpus& corpus, const FieldPair& pair);
PublicationSets partition_field(const Corpus& corpus, std::string_view field);

struct SetCounts {
    std::size_t set1 = 0;
    std::size_t set2 = 0;
    std::size_t set3 = 0;
    std::size_t union12 = 0;
    std::size_t total = 0;

    bool operator==(const SetCounts&) const = default;
};

SetCounts count_sets(const PublicationSets& sets);

/// Row totals summed over the listing, next to totals in which every
/// publication counts once per set category.
struct DedupTotals {
    SetCounts summed;
    SetCounts distinct;
};

DedupTotals dedup_totals(std::span<const PublicationSets> rows);

}  // namespace idr

#include "idr/partition.hpp"

#include <algorithm>
#include <unordered_set>

#include "idr/error.hpp"

namespace idr {

SetLabel classify_publication(std::span<const FieldId> field_set, FieldId first, FieldId second) {
    if (!std::binary_search(field_set.begin(), field_set.end(), first)) {
        throw Error(ErrorCode::NotInScope, "publication has no classified author in the pair's first field");
    }
    if (std::binary_search(field_set.begin(), field_set.end(), second)) return SetLabel::Set1;
    return field_set.size() > 1 ? SetLabel::Set2 : SetLabel::Set3;
}

PublicationSets partition_pair(const Corpus& corpus, const FieldPair& pair) {
    auto a = corpus.scheme().require(pair.first);
    auto b = corpus.scheme().require(pair.second);
    PublicationSets sets;
    sets.first_field = pair.first;
    sets.second_field = pair.second;
    for (auto i : corpus.publications_of(a)) {
        switch (classify_publication(corpus.field_set(i), a, b)) {
            case SetLabel::Set1:
                sets.set1.push_back(i);
                sets.union12.push_back(i);
                break;
            case SetLabel::Set2:
                sets.set2.push_back(i);
                sets.union12.push_back(i);
                break;
            case SetLabel::Set3:
                sets.set3.push_back(i);
                if (corpus.publication(i).author_ids.size() == 1) ++sets.single_author;
                break;
        }
    }
    return sets;
}

PublicationSets partition_field(const Corpus& corpus, std::string_view field) {
    auto a = corpus.scheme().require(field);
    PublicationSets sets;
    sets.first_field = std::string(field);
    for (auto i : corpus.publications_of(a)) {
        if (corpus.field_set(i).size() > 1) {
            sets.union12.push_back(i);
        } else {
            sets.set3.push_back(i);
            if (corpus.publication(i).author_ids.size() == 1) ++sets.single_author;
        }
    }
    return sets;
}

SetCounts count_sets(const PublicationSets& sets) {
    return {sets.set1.size(), sets.set2.size(), sets.set3.size(), sets.union12.size(), sets.total()};
}

DedupTotals dedup_totals(std::span<const PublicationSets> rows) {
    DedupTotals out;
    std::unordered_set<PubIndex> s1, s2, s3, u12;
    for (const auto& r : rows) {
        auto c = count_sets(r);
        out.summed.set1 += c.set1;
        out.summed.set2 += c.set2;
        out.summed.set3 += c.set3;
        out.summed.union12 += c.union12;
        out.summed.total += c.total;
        s1.insert(r.set1.begin(), r.set1.end());
        s2.insert(r.set2.begin(), r.set2.end());
        s3.insert(r.set3.begin(), r.set3.end());
        u12.insert(r.union12.begin(), r.union12.end());
    }
    out.distinct.set1 = s1.size();
    out.distinct.set2 = s2.size();
    out.distinct.set3 = s3.size();
    out.distinct.union12 = u12.size();
    // set3 and union12 are disjoint across rows: a set3 publication has a
    // single-field field-set, so it is union12 in no other row.
    out.distinct.total = s3.size() + u12.size();
    return out;
}

}  // namespace idr

#include "peeragree/aggregation.hpp"

#include <unordered_map>

#include "peeragree/error.hpp"

namespace peeragree {

AggregationResult aggregate(const Corpus& corpus, std::span<const ScoreSeries> series, std::size_t min_pubs) {
    if (min_pubs == 0) throw ValidationError("min_pubs must be positive");
    AggregationResult result;
    if (series.empty()) return result;

    const auto& reference = series.front().values;
    for (const auto& s : series) {
        bool same = s.values.size() == reference.size();
        for (auto a = s.values.begin(), b = reference.begin(); same && a != s.values.end(); ++a, ++b) {
            same = a->first == b->first;
        }
        if (!same) {
            throw ValidationError("series '" + std::string(to_string(s.label)) + "' covers different publications than '" +
                                  std::string(to_string(series.front().label)) + "'");
        }
    }

    std::unordered_map<std::string_view, const PublicationRecord*> by_id;
    by_id.reserve(corpus.records.size());
    for (const auto& r : corpus.records) by_id.emplace(r.pub_id, &r);

    struct Accumulator {
        std::size_t n = 0;
        std::vector<double> totals;
    };
    // (area, institution) -> running sums; pub_ids arrive in ascending order from the series maps.
    std::map<std::pair<std::string, std::string>, Accumulator> groups;
    std::vector<typename std::map<std::string, double>::const_iterator> cursors;
    for (const auto& s : series) cursors.push_back(s.values.begin());

    for (const auto& [pub_id, unused] : reference) {
        const auto rec = by_id.find(pub_id);
        if (rec == by_id.end()) throw ValidationError("scored publication not in corpus", pub_id);
        auto& acc = groups[{rec->second->area_id, rec->second->institution_id}];
        if (acc.totals.empty()) acc.totals.assign(series.size(), 0.0);
        ++acc.n;
        for (std::size_t k = 0; k < series.size(); ++k) {
            acc.totals[k] += cursors[k]->second;
            ++cursors[k];
        }
    }

    for (const auto& [key, acc] : groups) {
        if (acc.n < min_pubs) {
            result.excluded.push_back({key.second, key.first, acc.n});
            continue;
        }
        InstitutionAggregate agg;
        agg.area_id = key.first;
        agg.institution_id = key.second;
        agg.pub_count = acc.n;
        for (std::size_t k = 0; k < series.size(); ++k) {
            agg.total_score[series[k].label] = acc.totals[k];
            agg.mean_score[series[k].label] = acc.totals[k] / static_cast<double>(acc.n);
        }
        result.aggregates.push_back(std::move(agg));
    }
    return result;
}

}  // namespace peeragree

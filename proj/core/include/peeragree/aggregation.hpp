#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "peeragree/corpus.hpp"
#include "peeragree/scores.hpp"

namespace peeragree {

struct ScoreSeries {
    ScoreLabel label;
    std::map<std::string, double> values;  // pub_id -> score
};

struct InstitutionAggregate {
    std::string institution_id;
    std::string area_id;
    std::size_t pub_count = 0;
    std::map<ScoreLabel, double> mean_score;
    std::map<ScoreLabel, double> total_score;
};

struct ExcludedInstitution {
    std::string institution_id;
    std::string area_id;
    std::size_t pub_count = 0;
};

struct AggregationResult {
    std::vector<InstitutionAggregate> aggregates;  // sorted by (area, institution)
    std::vector<ExcludedInstitution> excluded;     // below min_pubs
};

/// Folds series into per-(institution, area) totals and means. Publications are the
/// pub_ids covered by the series; every series must cover the same set and each id
/// must exist in the corpus (otherwise ValidationError).
AggregationResult aggregate(const Corpus& corpus, std::span<const ScoreSeries> series, std::size_t min_pubs = 1);

}  // namespace peeragree

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "peeragree/aggregation.hpp"
#include "peeragree/agreement.hpp"
#include "peeragree/corpus.hpp"
#include "peeragree/indicators.hpp"
#include "peeragree/scores.hpp"

namespace peeragree {

/// Everything that is recomputed for a (re)sampled corpus.
struct PipelineConfig {
    std::string multidisciplinary_label = kDefaultMultidisciplinaryLabel;
    std::size_t min_pubs = 1;
    ScoreLabel baseline = ScoreLabel::reviewer1;
    std::vector<ScoreLabel> metrics{kDefaultMetrics.begin(), kDefaultMetrics.end()};
};

/// Per-record steps that do not depend on the rest of the sample: reviewer role
/// assignment and multidisciplinary reassignment.
struct PreparedCorpus {
    Corpus corpus;
    std::vector<RecordFlag> flagged;
};

PreparedCorpus prepare(const Corpus& corpus, const PipelineConfig& config, std::uint64_t seed);

struct Evaluation {
    FieldYearBaseline baselines;
    IndicatorTable indicators;
    std::vector<ScoreSeries> series;  // one per ScoreLabel, in kAllScoreLabels order
    AggregationResult aggregation;
    AgreementResult agreement;
};

/// Baselines, indicators, aggregation and agreement on a prepared corpus.
Evaluation evaluate(const Corpus& prepared, const PipelineConfig& config);

/// Per-publication series for every label over the records present in `indicators.ncs`.
std::vector<ScoreSeries> build_series(const Corpus& corpus, const IndicatorTable& indicators);

}  // namespace peeragree

#include "peeragree/pipeline.hpp"

#include <set>
#include <utility>

#include "peeragree/error.hpp"
#include "peeragree/rng.hpp"

namespace peeragree {

PreparedCorpus prepare(const Corpus& corpus, const PipelineConfig& config, std::uint64_t seed) {
    Corpus roles = assign_reviewer_roles(corpus, derive_seed(seed, {fnv1a64("reviewer-roles")}));
    auto reassigned = reassign_multidisciplinary(roles, config.multidisciplinary_label);
    return {std::move(reassigned.corpus), std::move(reassigned.flagged)};
}

std::vector<ScoreSeries> build_series(const Corpus& corpus, const IndicatorTable& indicators) {
    std::vector<ScoreSeries> series;
    for (ScoreLabel label : kAllScoreLabels) series.push_back({label, {}});
    for (const auto& r : corpus.records) {
        const auto ncs = indicators.ncs.find(r.pub_id);
        if (ncs == indicators.ncs.end()) continue;
        if (!r.review_a || !r.review_b) throw ValidationError("both reviewer scores are required", r.pub_id);
        const auto put = [&](ScoreLabel l, double v) { series[index_of(l)].values.emplace(r.pub_id, v); };
        put(ScoreLabel::reviewer1, overall_score(*r.review_a));
        put(ScoreLabel::reviewer2, overall_score(*r.review_b));
        put(ScoreLabel::ncs, ncs->second);
        put(ScoreLabel::njs, indicators.njs.at(r.pub_id));
        put(ScoreLabel::citation_percentile, indicators.citation_percentile.at(r.pub_id));
        put(ScoreLabel::journal_percentile, indicators.journal_percentile.at(r.pub_id));
    }
    return series;
}

Evaluation evaluate(const Corpus& prepared, const PipelineConfig& config) {
    Evaluation ev;
    ev.baselines = compute_baselines(prepared);
    ev.indicators = compute_indicators(prepared, ev.baselines);
    ev.series = build_series(prepared, ev.indicators);
    ev.aggregation = aggregate(prepared, ev.series, config.min_pubs);
    if (ev.aggregation.excluded.empty()) {
        ev.agreement = run_agreement(ev.aggregation.aggregates, prepared, ev.series, config.baseline, config.metrics);
        return ev;
    }
    // Publications of excluded institutions leave the publication-level fits too.
    std::set<std::pair<std::string, std::string>> dropped;
    for (const auto& e : ev.aggregation.excluded) dropped.emplace(e.institution_id, e.area_id);
    std::vector<ScoreSeries> kept = ev.series;
    for (const auto& r : prepared.records) {
        if (!dropped.contains({r.institution_id, r.area_id})) continue;
        for (auto& s : kept) s.values.erase(r.pub_id);
    }
    ev.agreement = run_agreement(ev.aggregation.aggregates, prepared, kept, config.baseline, config.metrics);
    return ev;
}

}  // namespace peeragree

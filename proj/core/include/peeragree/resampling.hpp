#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peeragree/agreement.hpp"
#include "peeragree/corpus.hpp"
#include "peeragree/pipeline.hpp"

namespace peeragree {

struct BootstrapConfig {
    std::size_t n_replicates = 1000;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    double interval_mass = 0.95;
    /// Statistics with a larger fraction of missing replicates carry a warning.
    double missing_warning_fraction = 0.10;
    /// Keep per-replicate values in the result (memory grows with replicates x statistics).
    bool keep_replicates = false;
};

struct BootstrapResult {
    StatisticKey key;
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::size_t n_replicates = 0;
    std::size_t n_missing = 0;
    std::uint64_t seed = 0;
    bool warning = false;
};

struct BootstrapRun {
    std::vector<BootstrapResult> results;  // sorted by key
    /// Replicate values indexed by replicate number; nullopt where the statistic was undefined.
    std::map<StatisticKey, std::vector<std::optional<double>>> replicates;
};

/// Resamples publications with replacement inside each area, keeping per-area counts.
/// Copies get ids "<pub_id>#<draw>" so they stay distinct. Replicate `k` uses a stream
/// seeded by (seed, k).
Corpus resample_within_areas(const Corpus& corpus, std::uint64_t seed, std::size_t replicate);

/// Percentile bootstrap of every agreement statistic, re-running the whole evaluation
/// on each replicate. Output is independent of `workers`.
BootstrapRun bootstrap(const Corpus& prepared, const PipelineConfig& pipeline, const BootstrapConfig& config);

/// Same, with precomputed full-sample statistics as point estimates.
BootstrapRun bootstrap(const Corpus& prepared, const PipelineConfig& pipeline, const BootstrapConfig& config,
                       std::span<const AgreementStatistic> point_estimates);

struct StratifiedSample {
    Corpus corpus;
    std::vector<std::string> empty_strata;
};

/// Selects round(fraction * n) records uniformly without replacement in each area.
/// `strata` lists the areas to sample; empty means every area in the corpus. Areas that
/// are listed but have no records (or round to zero) are reported in `empty_strata`.
/// Selected records keep their input order.
StratifiedSample stratified_sample(const Corpus& population, double fraction, std::span<const std::string> strata,
                                   std::uint64_t seed);

struct CoverageDiagnostic {
    std::string institution_id;
    std::size_t sample_count = 0;
    std::optional<std::int64_t> population_count;
    std::optional<double> coverage_ratio;  // nullopt when the population is unknown
};

std::vector<CoverageDiagnostic> coverage_report(const Corpus& sample,
                                                const std::map<std::string, std::int64_t>& population_counts);

}  // namespace peeragree

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peeragree/aggregation.hpp"
#include "peeragree/agreement.hpp"
#include "peeragree/corpus_io.hpp"
#include "peeragree/pipeline.hpp"
#include "peeragree/resampling.hpp"

namespace peeragree {

/// Fully resolved configuration of one run. Every random choice derives from `seed`.
struct RunConfig {
    PipelineConfig pipeline{};
    SchemaOptions schema{};
    std::uint64_t seed = 20151231;
    bool bootstrap = true;
    std::size_t n_replicates = 1000;
    std::size_t workers = 1;
    std::optional<std::filesystem::path> population_file;
};

/// Reads a JSON configuration; absent keys keep their defaults. Throws ValidationError.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string to_json(const RunConfig& config);

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct RunReport {
    RunConfig config;
    std::size_t n_records = 0;
    std::size_t n_evaluated = 0;
    std::map<std::string, std::size_t> flagged_records;  // reason -> count
    std::size_t imputed_citation_percentiles = 0;
    std::size_t imputed_journal_percentiles = 0;
    std::vector<InstitutionAggregate> aggregates;
    std::vector<ExcludedInstitution> excluded_institutions;
    AgreementResult agreement;
    std::optional<BootstrapRun> bootstrap;
    std::optional<std::vector<CoverageDiagnostic>> coverage;  // nullopt: population counts unavailable
    std::vector<StageTiming> timing;
};

/// Runs every stage on an in-memory corpus.
RunReport run_pipeline(const Corpus& corpus, const RunConfig& config);

/// Loads the corpus, runs the pipeline, and writes report.json, the figure tables and
/// timing.json into `output_dir` (created if needed).
RunReport run(const RunConfig& config, const std::filesystem::path& corpus_path,
              const std::filesystem::path& output_dir);

/// report.json. Wall-clock timings are kept out of it so identical inputs give identical bytes.
std::string report_to_json(const RunReport& report);

/// Writes one CSV per figure shape and returns the paths written, in a fixed order:
/// fig_mad_institution.csv, fig_mapd_institution.csv, fig_mad_publication.csv,
/// scatter_metric_vs_reviewer1.csv, scatter_reviewer2_vs_reviewer1.csv, aggregates.csv,
/// and coverage.csv when coverage is available.
std::vector<std::filesystem::path> emit_figure_tables(const RunReport& report,
                                                      const std::filesystem::path& output_dir);

}  // namespace peeragree

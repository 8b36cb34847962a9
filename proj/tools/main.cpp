// peeragree: agreement between bibliometric indicators and peer review.
//
// Subcommands:
//   run       full pipeline, writes report.json and figure tables
//   generate  synthetic corpus
//   sample    stratified subsample of a corpus
//   validate  corpus lint
//
// Exit codes: 0 success, 1 invalid input, 2 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "peeragree/corpus_io.hpp"
#include "peeragree/error.hpp"
#include "peeragree/report.hpp"
#include "peeragree/resampling.hpp"
#include "peeragree/synth.hpp"

namespace fs = std::filesystem;
using namespace peeragree;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

CorpusFormat format_for(const fs::path& path) {
    const auto ext = path.extension().string();
    return ext == ".jsonl" || ext == ".ndjson" ? CorpusFormat::jsonl : CorpusFormat::delimited;
}

char delimiter_for(const fs::path& path) { return path.extension() == ".tsv" ? '\t' : ','; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Field-normalized indicators and metrics/peer-review agreement statistics"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "Run the full pipeline on a corpus");
    fs::path corpus_path, out_dir, config_path, population_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicates, min_pubs, workers;
    std::optional<int> census_year;
    bool no_bootstrap = false;
    run_cmd->add_option("--corpus", corpus_path, "Corpus file (delimited or JSONL)")->required();
    run_cmd->add_option("--config", config_path, "JSON run configuration");
    run_cmd->add_option("--out", out_dir, "Output directory")->required();
    run_cmd->add_option("--seed", seed, "Master seed");
    run_cmd->add_option("--replicates", replicates, "Bootstrap replicates (default 1000)");
    run_cmd->add_option("--min-pubs", min_pubs, "Minimum publications per institution and area (default 1)");
    run_cmd->add_option("--census-year", census_year, "Last citation year");
    run_cmd->add_option("--workers", workers, "Bootstrap worker threads");
    run_cmd->add_option("--population", population_path, "Population counts table for coverage diagnostics");
    run_cmd->add_flag("--no-bootstrap", no_bootstrap, "Skip bootstrap intervals");

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "Write a seeded synthetic corpus");
    fs::path synth_config_path, gen_out, gen_population;
    std::optional<std::uint64_t> gen_seed;
    gen_cmd->add_option("--config", synth_config_path, "JSON synthetic configuration");
    gen_cmd->add_option("--out", gen_out, "Corpus file to write (.csv, .tsv or .jsonl)")->required();
    gen_cmd->add_option("--seed", gen_seed, "Generator seed");
    gen_cmd->add_option("--population", gen_population, "Also write population counts here");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Stratified subsample by research area");
    fs::path sample_in, sample_out;
    double fraction = 0.1;
    std::uint64_t sample_seed = 0;
    std::vector<std::string> strata;
    std::optional<int> sample_census;
    sample_cmd->add_option("--corpus", sample_in, "Input corpus")->required();
    sample_cmd->add_option("--out", sample_out, "Output corpus")->required();
    sample_cmd->add_option("--fraction", fraction, "Fraction per area, in (0,1]")->required();
    sample_cmd->add_option("--seed", sample_seed, "Sampling seed");
    sample_cmd->add_option("--strata", strata, "Areas to sample (default: all)");
    sample_cmd->add_option("--census-year", sample_census, "Last citation year");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Check a corpus file against the schema");
    fs::path validate_in, validate_config;
    std::optional<int> validate_census;
    validate_cmd->add_option("--corpus", validate_in, "Corpus file")->required();
    validate_cmd->add_option("--config", validate_config, "JSON run configuration (format, year window)");
    validate_cmd->add_option("--census-year", validate_census, "Last citation year");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*run_cmd) {
            RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
            if (seed) config.seed = *seed;
            if (replicates) config.n_replicates = *replicates;
            if (min_pubs) config.pipeline.min_pubs = *min_pubs;
            if (census_year) config.schema.census_year = *census_year;
            if (workers) config.workers = *workers;
            if (!population_path.empty()) config.population_file = population_path;
            if (no_bootstrap) config.bootstrap = false;
            if (config.pipeline.min_pubs == 0) throw ValidationError("--min-pubs must be positive");
            if (config.n_replicates == 0) throw ValidationError("--replicates must be positive");
            const auto report = run(config, corpus_path, out_dir);
            std::cerr << "peeragree: " << report.n_evaluated << " of " << report.n_records << " publications, "
                      << report.aggregates.size() << " institution-area aggregates, "
                      << report.agreement.statistics.size() << " statistics -> " << out_dir.string() << '\n';
        } else if (*gen_cmd) {
            SynthConfig config = synth_config_path.empty() ? SynthConfig{} : load_synth_config(synth_config_path);
            if (gen_seed) config.seed = *gen_seed;
            const Corpus corpus = generate(config);
            save_corpus(gen_out, corpus, format_for(gen_out), delimiter_for(gen_out));
            if (!gen_population.empty() && corpus.population_counts) {
                save_population_counts(gen_population, *corpus.population_counts);
            }
            std::cerr << "peeragree: wrote " << corpus.records.size() << " records to " << gen_out.string() << '\n';
        } else if (*sample_cmd) {
            SchemaOptions opts;
            opts.census_year = sample_census;
            const Corpus population = load_corpus(sample_in, opts);
            const auto sample = stratified_sample(population, fraction, strata, sample_seed);
            for (const auto& area : sample.empty_strata) std::cerr << "peeragree: empty stratum '" << area << "'\n";
            save_corpus(sample_out, sample.corpus, format_for(sample_out), delimiter_for(sample_out));
            std::cerr << "peeragree: sampled " << sample.corpus.records.size() << " of " << population.records.size()
                      << " records\n";
        } else if (*validate_cmd) {
            SchemaOptions opts = validate_config.empty() ? SchemaOptions{} : load_run_config(validate_config).schema;
            if (validate_census) opts.census_year = *validate_census;
            const Corpus corpus = load_corpus(validate_in, opts);
            std::cout << "ok: " << corpus.records.size() << " records, census year " << corpus.census_year << '\n';
        }
    } catch (const ParseError& e) {
        std::cerr << "peeragree: parse error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const ValidationError& e) {
        std::cerr << "peeragree: validation error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "peeragree: error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return EXIT_SUCCESS;
}

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "peeragree/corpus_io.hpp"
#include "peeragree/error.hpp"
#include "peeragree/report.hpp"
#include "peeragree/synth.hpp"
#include "support/fixtures.hpp"

using namespace peeragree;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("peeragree-report-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

Corpus synthetic(std::size_t n_areas, std::size_t institutions, std::size_t pubs, std::uint64_t seed = 2) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.n_areas = n_areas;
    cfg.n_institutions = institutions;
    cfg.pubs_per_institution.constant = pubs;
    return generate(cfg);
}

RunConfig all_labels(bool with_bootstrap) {
    RunConfig cfg;
    cfg.bootstrap = with_bootstrap;
    cfg.n_replicates = 20;
    cfg.pipeline.metrics.assign(kAllScoreLabels.begin(), kAllScoreLabels.end());
    return cfg;
}

}  // namespace

TEST_CASE("run writes every output file", "[report]") {
    const fs::path dir = scratch("files");
    const Corpus corpus = synthetic(2, 20, 25);
    save_corpus(dir / "corpus.csv", corpus);
    save_population_counts(dir / "population.csv", *corpus.population_counts);
    RunConfig cfg = all_labels(true);
    cfg.population_file = dir / "population.csv";
    const auto report = run(cfg, dir / "corpus.csv", dir / "out");
    for (const char* f : {"report.json", "timing.json", "fig_mad_institution.csv", "fig_mapd_institution.csv",
                          "fig_mad_publication.csv", "scatter_metric_vs_reviewer1.csv",
                          "scatter_reviewer2_vs_reviewer1.csv", "aggregates.csv", "coverage.csv"}) {
        INFO(f);
        CHECK(fs::exists(dir / "out" / f));
    }
    CHECK(report.n_records == 500);
    REQUIRE(report.bootstrap.has_value());
    CHECK(report.bootstrap->results.size() == report.agreement.statistics.size());

    SECTION("2 areas x 6 metrics gives 12 rows per statistic table") {
        CHECK(lines(dir / "out" / "fig_mad_institution.csv").size() == 13);
        CHECK(lines(dir / "out" / "fig_mapd_institution.csv").size() == 13);
        CHECK(lines(dir / "out" / "fig_mad_publication.csv").size() == 13);
    }
    SECTION("scatter tables have one row per aggregate") {
        CHECK(lines(dir / "out" / "scatter_reviewer2_vs_reviewer1.csv").size() == report.aggregates.size() + 1);
        CHECK(lines(dir / "out" / "coverage.csv").size() == 21);
    }
    SECTION("every configured statistic is accounted for") {
        CHECK(report.agreement.statistics.size() + report.agreement.skips.size() == 2 * 6 * 3);
    }
}

TEST_CASE("identical runs give identical bytes", "[report]") {
    const fs::path dir = scratch("determinism");
    save_corpus(dir / "corpus.csv", synthetic(2, 15, 20));
    RunConfig cfg = all_labels(true);
    cfg.workers = 1;
    run(cfg, dir / "corpus.csv", dir / "a");
    cfg.workers = 2;
    run(cfg, dir / "corpus.csv", dir / "b");
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        const auto name = entry.path().filename();
        if (name == "timing.json") continue;
        INFO(name.string());
        CHECK(slurp(entry.path()) == slurp(dir / "b" / name));
        ++compared;
    }
    CHECK(compared >= 7);
}

TEST_CASE("bootstrap disabled leaves interval columns empty", "[report]") {
    const fs::path dir = scratch("nobootstrap");
    save_corpus(dir / "corpus.csv", synthetic(2, 12, 10));
    const auto report = run(all_labels(false), dir / "corpus.csv", dir / "out");
    CHECK_FALSE(report.bootstrap.has_value());
    const auto rows = lines(dir / "out" / "fig_mad_institution.csv");
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] == "area_id,metric,n_units,mad,lower,upper,n_missing,warning");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].ends_with(",,,,"));
    CHECK_FALSE(fs::exists(dir / "out" / "coverage.csv"));
    CHECK(slurp(dir / "out" / "report.json").find("\"coverage\": \"unavailable\"") != std::string::npos);
}

TEST_CASE("zero-citation field-year is flagged and the run succeeds", "[report]") {
    Corpus corpus = synthetic(1, 10, 12);
    for (auto& r : corpus.records) {
        if (r.year == 2012) r.citations = 0;
    }
    RunConfig cfg = all_labels(false);
    const auto report = run_pipeline(corpus, cfg);
    CHECK(report.flagged_records.at("zero_mean_cell") > 0);
    CHECK(report.n_evaluated < report.n_records);
    CHECK_FALSE(report.agreement.statistics.empty());
}

TEST_CASE("min_pubs exclusions are counted", "[report]") {
    SynthConfig sc;
    sc.n_institutions = 30;
    sc.pubs_per_institution.kind = PubsPerInstitution::Kind::skewed;
    sc.pubs_per_institution.min = 1;
    sc.pubs_per_institution.max = 40;
    RunConfig cfg = all_labels(false);
    cfg.pipeline.min_pubs = 5;
    const auto report = run_pipeline(generate(sc), cfg);
    CHECK_FALSE(report.excluded_institutions.empty());
    std::size_t below = 0;
    for (const auto& e : report.excluded_institutions) below += e.pub_count;
    CHECK(report.flagged_records.at("below_min_pubs") == below);
    for (const auto& a : report.aggregates) CHECK(a.pub_count >= 5);
}

TEST_CASE("figure tables need a writable directory", "[report]") {
    const fs::path dir = scratch("unwritable");
    const auto report = run_pipeline(synthetic(1, 8, 6), all_labels(false));
    std::ofstream(dir / "file") << "x";
    CHECK_THROWS(emit_figure_tables(report, dir / "file" / "sub"));
    CHECK_THROWS(emit_figure_tables(report, dir / "missing"));
}

TEST_CASE("run configuration parsing", "[report]") {
    const RunConfig cfg = parse_run_config(R"({"seed": 17, "replicates": 50, "min_pubs": 3, "bootstrap": false,
        "metrics": ["ncs", "reviewer2"], "census_year": 2016, "first_year": 2011, "last_year": 2014,
        "format": "jsonl"})");
    CHECK(cfg.seed == 17);
    CHECK(cfg.n_replicates == 50);
    CHECK(cfg.pipeline.min_pubs == 3);
    CHECK_FALSE(cfg.bootstrap);
    REQUIRE(cfg.pipeline.metrics.size() == 2);
    CHECK(cfg.pipeline.metrics[1] == ScoreLabel::reviewer2);
    CHECK(cfg.schema.census_year == 2016);
    CHECK(cfg.schema.window.first == 2011);
    CHECK(cfg.schema.format == CorpusFormat::jsonl);
    CHECK(to_json(parse_run_config(to_json(cfg))) == to_json(cfg));
    CHECK_THROWS_AS(parse_run_config(R"({"replicate": 3})"), ValidationError);
    CHECK_THROWS_AS(parse_run_config(R"({"metrics": ["h_index"]})"), ValidationError);
    CHECK_THROWS_AS(parse_run_config("[1, 2"), ParseError);
}

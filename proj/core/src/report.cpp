#include "peeragree/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "peeragree/error.hpp"

namespace peeragree {
namespace {

using json = nlohmann::ordered_json;

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}
    void lap(std::string stage) {
        const auto now = std::chrono::steady_clock::now();
        sink_.push_back({std::move(stage), std::chrono::duration<double>(now - last_).count()});
        last_ = now;
    }

private:
    std::vector<StageTiming>& sink_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::string format_name(CorpusFormat f) {
    switch (f) {
        case CorpusFormat::automatic: return "auto";
        case CorpusFormat::delimited: return "delimited";
        case CorpusFormat::jsonl: return "jsonl";
    }
    return "auto";
}

json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string{}; }

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

json key_json(const StatisticKey& k) {
    return {{"area_id", k.area_id},
            {"metric", to_string(k.metric)},
            {"level", to_string(k.level)},
            {"view", to_string(k.view)},
            {"statistic", k.view == View::size_dependent ? "mapd_percent" : "mad"}};
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("run config: ") + e.what(), 0);
    }
    if (!j.is_object()) throw ValidationError("run config must be a JSON object");
    RunConfig c;
    auto label = [](const nlohmann::json& v) {
        const auto text = v.get<std::string>();
        const auto l = parse_score_label(text);
        if (!l) throw ValidationError("run config: unknown score label '" + text + "'");
        return *l;
    };
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "bootstrap") c.bootstrap = v.get<bool>();
            else if (key == "replicates") c.n_replicates = v.get<std::size_t>();
            else if (key == "workers") c.workers = v.get<std::size_t>();
            else if (key == "min_pubs") c.pipeline.min_pubs = v.get<std::size_t>();
            else if (key == "multidisciplinary_label") c.pipeline.multidisciplinary_label = v.get<std::string>();
            else if (key == "baseline") c.pipeline.baseline = label(v);
            else if (key == "metrics") {
                c.pipeline.metrics.clear();
                for (const auto& m : v) c.pipeline.metrics.push_back(label(m));
            } else if (key == "census_year") {
                if (!v.is_null()) c.schema.census_year = v.get<int>();
            } else if (key == "first_year") c.schema.window.first = v.get<int>();
            else if (key == "last_year") c.schema.window.last = v.get<int>();
            else if (key == "population_file") {
                if (!v.is_null()) c.population_file = v.get<std::string>();
            } else if (key == "format") {
                const auto f = v.get<std::string>();
                if (f == "auto") c.schema.format = CorpusFormat::automatic;
                else if (f == "delimited" || f == "csv" || f == "tsv") c.schema.format = CorpusFormat::delimited;
                else if (f == "jsonl") c.schema.format = CorpusFormat::jsonl;
                else throw ValidationError("run config: unknown format '" + f + "'");
            } else if (key == "delimiter") {
                const auto d = v.get<std::string>();
                if (d.size() != 1) throw ValidationError("run config: delimiter must be one character");
                c.schema.delimiter = d[0];
            } else {
                throw ValidationError("run config: unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("run config: ") + e.what());
    }
    if (c.pipeline.min_pubs == 0) throw ValidationError("run config: min_pubs must be positive");
    if (c.n_replicates == 0) throw ValidationError("run config: replicates must be positive");
    if (c.pipeline.metrics.empty()) throw ValidationError("run config: metrics must not be empty");
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    RunConfig c = parse_run_config(buf.str());
    if (c.population_file && c.population_file->is_relative()) {
        c.population_file = path.parent_path() / *c.population_file;
    }
    return c;
}

std::string to_json(const RunConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["bootstrap"] = c.bootstrap;
    j["replicates"] = c.n_replicates;
    j["workers"] = c.workers;
    j["min_pubs"] = c.pipeline.min_pubs;
    j["multidisciplinary_label"] = c.pipeline.multidisciplinary_label;
    j["baseline"] = to_string(c.pipeline.baseline);
    j["metrics"] = json::array();
    for (ScoreLabel m : c.pipeline.metrics) j["metrics"].push_back(to_string(m));
    j["census_year"] = c.schema.census_year ? json(*c.schema.census_year) : json(nullptr);
    j["first_year"] = c.schema.window.first;
    j["last_year"] = c.schema.window.last;
    j["population_file"] = c.population_file ? json(c.population_file->generic_string()) : json(nullptr);
    j["format"] = format_name(c.schema.format);
    j["delimiter"] = std::string(1, c.schema.delimiter);
    return j.dump(2);
}

RunReport run_pipeline(const Corpus& corpus, const RunConfig& config) {
    RunReport report;
    report.config = config;
    StageClock clock(report.timing);

    validate_corpus(corpus, config.schema.window);
    report.n_records = corpus.records.size();
    clock.lap("validate");

    const auto prepared = prepare(corpus, config.pipeline, config.seed);
    clock.lap("prepare");

    auto ev = evaluate(prepared.corpus, config.pipeline);
    clock.lap("evaluate");

    for (FlagReason reason : {FlagReason::unredistributable_multidisciplinary, FlagReason::undefined_baseline,
                              FlagReason::zero_mean_cell}) {
        report.flagged_records[std::string(to_string(reason))] = 0;
    }
    for (const auto& f : prepared.flagged) ++report.flagged_records[std::string(to_string(f.reason))];
    for (const auto& f : ev.indicators.flagged) ++report.flagged_records[std::string(to_string(f.reason))];
    std::size_t below = 0;
    for (const auto& e : ev.aggregation.excluded) below += e.pub_count;
    report.flagged_records["below_min_pubs"] = below;

    report.n_evaluated = ev.indicators.ncs.size();
    report.imputed_citation_percentiles = ev.indicators.imputed_citation_percentiles;
    report.imputed_journal_percentiles = ev.indicators.imputed_journal_percentiles;
    report.aggregates = std::move(ev.aggregation.aggregates);
    report.excluded_institutions = std::move(ev.aggregation.excluded);
    report.agreement = std::move(ev.agreement);

    if (config.bootstrap) {
        BootstrapConfig bc;
        bc.n_replicates = config.n_replicates;
        bc.seed = config.seed;
        bc.workers = config.workers;
        report.bootstrap = bootstrap(prepared.corpus, config.pipeline, bc, report.agreement.statistics);
        clock.lap("bootstrap");
    }

    std::optional<std::map<std::string, std::int64_t>> population = corpus.population_counts;
    if (config.population_file) population = load_population_counts(*config.population_file);
    if (population) report.coverage = coverage_report(corpus, *population);
    clock.lap("coverage");
    return report;
}

RunReport run(const RunConfig& config, const std::filesystem::path& corpus_path,
              const std::filesystem::path& output_dir) {
    std::vector<StageTiming> load_timing;
    StageClock clock(load_timing);
    const Corpus corpus = load_corpus(corpus_path, config.schema);
    clock.lap("load");

    RunReport report = run_pipeline(corpus, config);
    report.timing.insert(report.timing.begin(), load_timing.begin(), load_timing.end());

    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) throw Error("cannot create output directory " + output_dir.string() + ": " + ec.message());
    write_file(output_dir / "report.json", report_to_json(report));
    emit_figure_tables(report, output_dir);

    json timing = {{"workers", config.workers}, {"stages", json::array()}};
    for (const auto& t : report.timing) timing["stages"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
    write_file(output_dir / "timing.json", timing.dump(2) + "\n");
    return report;
}

std::string report_to_json(const RunReport& r) {
    json j;
    // Worker count cannot change any result, so it is echoed in timing.json instead.
    j["config_echo"] = json::parse(to_json(r.config));
    j["config_echo"].erase("workers");
    j["n_records"] = r.n_records;
    j["n_evaluated"] = r.n_evaluated;
    j["flagged_records"] = r.flagged_records;
    j["imputed_percentiles"] = {{"citation", r.imputed_citation_percentiles},
                                {"journal", r.imputed_journal_percentiles}};

    j["excluded_institutions"] = json::array();
    for (const auto& e : r.excluded_institutions) {
        j["excluded_institutions"].push_back(
            {{"institution_id", e.institution_id}, {"area_id", e.area_id}, {"pub_count", e.pub_count}});
    }

    j["statistics"] = json::array();
    for (const auto& s : r.agreement.statistics) {
        json e = key_json(s.key);
        e["value"] = real(s.value);
        e["n_units"] = s.n_units;
        j["statistics"].push_back(std::move(e));
    }
    auto fits = [](const std::vector<CalibrationFit>& list) {
        json out = json::array();
        for (const auto& f : list) {
            out.push_back({{"area_id", f.area_id},
                           {"metric", to_string(f.metric)},
                           {"intercept", real(f.intercept)},
                           {"slope", real(f.slope)},
                           {"n_points", f.n_points}});
        }
        return out;
    };
    j["calibration"] = {{"institution", fits(r.agreement.institution_fits)},
                        {"publication", fits(r.agreement.publication_fits)}};
    j["skipped"] = json::array();
    for (const auto& s : r.agreement.skips) {
        j["skipped"].push_back({{"area_id", s.area_id},
                                {"metric", to_string(s.metric)},
                                {"level", to_string(s.level)},
                                {"reason", s.reason}});
    }

    if (r.bootstrap) {
        json b = json::array();
        for (const auto& res : r.bootstrap->results) {
            json e = key_json(res.key);
            e["point"] = real(res.point);
            e["lower"] = real(res.lower);
            e["upper"] = real(res.upper);
            e["n_replicates"] = res.n_replicates;
            e["n_missing"] = res.n_missing;
            e["seed"] = res.seed;
            e["warning"] = res.warning;
            b.push_back(std::move(e));
        }
        j["bootstrap"] = std::move(b);
    } else {
        j["bootstrap"] = nullptr;
    }

    if (r.coverage) {
        json c = json::array();
        for (const auto& d : *r.coverage) {
            c.push_back({{"institution_id", d.institution_id},
                         {"sample_count", d.sample_count},
                         {"population_count", d.population_count ? json(*d.population_count) : json(nullptr)},
                         {"coverage_ratio", d.coverage_ratio ? real(*d.coverage_ratio) : json("unavailable")}});
        }
        j["coverage"] = std::move(c);
    } else {
        j["coverage"] = "unavailable";
    }
    return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_figure_tables(const RunReport& report,
                                                      const std::filesystem::path& output_dir) {
    if (!std::filesystem::is_directory(output_dir)) {
        throw Error("output directory " + output_dir.string() + " does not exist");
    }
    std::map<StatisticKey, const BootstrapResult*> intervals;
    if (report.bootstrap) {
        for (const auto& b : report.bootstrap->results) intervals.emplace(b.key, &b);
    }
    std::vector<std::filesystem::path> written;

    auto statistic_table = [&](const std::string& name, Level level, View view, const char* value_column) {
        std::ostringstream out;
        out << "area_id,metric,n_units," << value_column << ",lower,upper,n_missing,warning\n";
        for (const auto& s : report.agreement.statistics) {
            if (s.key.level != level || s.key.view != view) continue;
            out << s.key.area_id << ',' << to_string(s.key.metric) << ',' << s.n_units << ',' << cell(s.value) << ',';
            const auto it = intervals.find(s.key);
            if (it != intervals.end()) {
                const auto& b = *it->second;
                out << cell(b.lower) << ',' << cell(b.upper) << ',' << b.n_missing << ',' << (b.warning ? 1 : 0);
            } else {
                out << ",,,";
            }
            out << '\n';
        }
        const auto path = output_dir / name;
        write_file(path, out.str());
        written.push_back(path);
    };
    statistic_table("fig_mad_institution.csv", Level::institution, View::size_independent, "mad");
    statistic_table("fig_mapd_institution.csv", Level::institution, View::size_dependent, "mapd_percent");
    statistic_table("fig_mad_publication.csv", Level::publication, View::size_independent, "mad");

    std::map<std::pair<std::string, ScoreLabel>, const CalibrationFit*> fits;
    for (const auto& f : report.agreement.institution_fits) fits.emplace(std::pair{f.area_id, f.metric}, &f);
    auto predicted = [&](const InstitutionAggregate& a, ScoreLabel m) -> std::string {
        const auto it = fits.find({a.area_id, m});
        const auto mean = a.mean_score.find(m);
        if (it == fits.end() || mean == a.mean_score.end()) return {};
        return cell(it->second->predict(mean->second));
    };
    auto mean_of = [](const InstitutionAggregate& a, ScoreLabel l) -> std::string {
        const auto it = a.mean_score.find(l);
        return it == a.mean_score.end() ? std::string{} : cell(it->second);
    };
    const ScoreLabel baseline = report.config.pipeline.baseline;
    const std::string base_name(to_string(baseline));
    {
        std::ostringstream out;
        out << "area_id,institution_id,pub_count,mean_" << base_name;
        for (ScoreLabel m : report.config.pipeline.metrics) {
            out << ",mean_" << to_string(m) << ",predicted_" << base_name << "_from_" << to_string(m);
        }
        out << '\n';
        for (const auto& a : report.aggregates) {
            out << a.area_id << ',' << a.institution_id << ',' << a.pub_count << ',' << mean_of(a, baseline);
            for (ScoreLabel m : report.config.pipeline.metrics) out << ',' << mean_of(a, m) << ',' << predicted(a, m);
            out << '\n';
        }
        const auto path = output_dir / ("scatter_metric_vs_" + base_name + ".csv");
        write_file(path, out.str());
        written.push_back(path);
    }
    {
        std::ostringstream out;
        out << "area_id,institution_id,pub_count,mean_reviewer2,mean_" << base_name << ",predicted_" << base_name
            << '\n';
        for (const auto& a : report.aggregates) {
            out << a.area_id << ',' << a.institution_id << ',' << a.pub_count << ','
                << mean_of(a, ScoreLabel::reviewer2) << ',' << mean_of(a, baseline) << ','
                << predicted(a, ScoreLabel::reviewer2) << '\n';
        }
        const auto path = output_dir / ("scatter_reviewer2_vs_" + base_name + ".csv");
        write_file(path, out.str());
        written.push_back(path);
    }
    {
        std::ostringstream out;
        out << "area_id,institution_id,pub_count";
        for (ScoreLabel l : kAllScoreLabels) out << ",mean_" << to_string(l) << ",total_" << to_string(l);
        out << '\n';
        for (const auto& a : report.aggregates) {
            out << a.area_id << ',' << a.institution_id << ',' << a.pub_count;
            for (ScoreLabel l : kAllScoreLabels) {
                const auto m = a.mean_score.find(l);
                const auto t = a.total_score.find(l);
                out << ',' << (m == a.mean_score.end() ? std::string{} : cell(m->second)) << ','
                    << (t == a.total_score.end() ? std::string{} : cell(t->second));
            }
            out << '\n';
        }
        const auto path = output_dir / "aggregates.csv";
        write_file(path, out.str());
        written.push_back(path);
    }
    if (report.coverage) {
        std::ostringstream out;
        out << "institution_id,sample_count,population_count,coverage_ratio\n";
        for (const auto& d : *report.coverage) {
            out << d.institution_id << ',' << d.sample_count << ','
                << (d.population_count ? std::to_string(*d.population_count) : std::string{}) << ','
                << (d.coverage_ratio ? cell(*d.coverage_ratio) : std::string("unavailable")) << '\n';
        }
        const auto path = output_dir / "coverage.csv";
        write_file(path, out.str());
        written.push_back(path);
    }
    return written;
}

}  // namespace peeragree

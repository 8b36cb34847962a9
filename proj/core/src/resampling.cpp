#include "peeragree/resampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "peeragree/error.hpp"
#include "peeragree/rng.hpp"
#include "peeragree/stats.hpp"

namespace peeragree {
namespace {

// area -> record indices in ascending pub_id order, so draws do not depend on file order.
std::map<std::string, std::vector<std::size_t>> strata_of(const Corpus& corpus) {
    std::map<std::string, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < corpus.records.size(); ++i) strata[corpus.records[i].area_id].push_back(i);
    for (auto& [area, idx] : strata) {
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return corpus.records[a].pub_id < corpus.records[b].pub_id;
        });
    }
    return strata;
}

constexpr std::uint64_t kBootstrapStream = fnv1a64("bootstrap");
constexpr std::uint64_t kSampleStream = fnv1a64("stratified-sample");

}  // namespace

Corpus resample_within_areas(const Corpus& corpus, std::uint64_t seed, std::size_t replicate) {
    Corpus out;
    out.census_year = corpus.census_year;
    out.population_counts = corpus.population_counts;
    out.records.reserve(corpus.records.size());
    for (const auto& [area, idx] : strata_of(corpus)) {
        Engine eng = make_engine(seed, {kBootstrapStream, replicate, fnv1a64(area)});
        for (std::size_t draw = 0; draw < idx.size(); ++draw) {
            PublicationRecord copy = corpus.records[idx[uniform_below(eng, idx.size())]];
            copy.pub_id += '#';
            copy.pub_id += std::to_string(draw);
            out.records.push_back(std::move(copy));
        }
    }
    return out;
}

BootstrapRun bootstrap(const Corpus& prepared, const PipelineConfig& pipeline, const BootstrapConfig& config) {
    const auto point = evaluate(prepared, pipeline);
    return bootstrap(prepared, pipeline, config, point.agreement.statistics);
}

BootstrapRun bootstrap(const Corpus& prepared, const PipelineConfig& pipeline, const BootstrapConfig& config,
                       std::span<const AgreementStatistic> point_estimates) {
    if (config.n_replicates == 0) throw ValidationError("bootstrap needs at least one replicate");
    if (!(config.interval_mass > 0.0 && config.interval_mass < 1.0)) {
        throw ValidationError("interval mass must lie in (0,1)");
    }
    std::vector<StatisticKey> keys;
    for (const auto& s : point_estimates) keys.push_back(s.key);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::map<StatisticKey, std::size_t> slot;
    for (std::size_t i = 0; i < keys.size(); ++i) slot.emplace(keys[i], i);

    constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
    // values[k * keys.size() + i]: replicate k of statistic i; NaN when undefined.
    std::vector<double> values(config.n_replicates * keys.size(), kMissing);

    auto run_replicate = [&](std::size_t k) {
        Evaluation ev;
        try {
            ev = evaluate(resample_within_areas(prepared, config.seed, k), pipeline);
        } catch (const Error&) {
            return;  // whole replicate undefined
        }
        for (const auto& s : ev.agreement.statistics) {
            const auto it = slot.find(s.key);
            if (it != slot.end()) values[k * keys.size() + it->second] = s.value;
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, config.n_replicates));
    if (workers == 1) {
        for (std::size_t k = 0; k < config.n_replicates; ++k) run_replicate(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t k = next++; k < config.n_replicates; k = next++) run_replicate(k);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    BootstrapRun run;
    const double tail = (1.0 - config.interval_mass) / 2.0;
    for (const auto& s : point_estimates) {
        const std::size_t i = slot.at(s.key);
        BootstrapResult r;
        r.key = s.key;
        r.point = s.value;
        r.n_replicates = config.n_replicates;
        r.seed = config.seed;
        std::vector<double> valid;
        std::vector<std::optional<double>> kept;
        for (std::size_t k = 0; k < config.n_replicates; ++k) {
            const double v = values[k * keys.size() + i];
            if (std::isnan(v)) {
                ++r.n_missing;
                if (config.keep_replicates) kept.emplace_back(std::nullopt);
            } else {
                valid.push_back(v);
                if (config.keep_replicates) kept.emplace_back(v);
            }
        }
        if (valid.empty()) {
            r.lower = r.upper = kMissing;
        } else {
            r.lower = midrank_quantile(valid, tail);
            r.upper = midrank_quantile(std::move(valid), 1.0 - tail);
        }
        r.warning = static_cast<double>(r.n_missing) > config.missing_warning_fraction * static_cast<double>(config.n_replicates);
        run.results.push_back(r);
        if (config.keep_replicates) run.replicates.emplace(s.key, std::move(kept));
    }
    std::sort(run.results.begin(), run.results.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    return run;
}

StratifiedSample stratified_sample(const Corpus& population, double fraction, std::span<const std::string> strata,
                                   std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ValidationError("sampling fraction must lie in (0,1]");
    const auto all = strata_of(population);
    std::set<std::string> wanted(strata.begin(), strata.end());
    if (wanted.empty()) {
        for (const auto& [area, idx] : all) wanted.insert(area);
    }
    StratifiedSample out;
    std::vector<char> keep(population.records.size(), 0);
    for (const auto& area : wanted) {
        const auto it = all.find(area);
        if (it == all.end()) {
            out.empty_strata.push_back(area);
            continue;
        }
        std::vector<std::size_t> idx = it->second;
        const auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(idx.size())));
        if (take == 0) {
            out.empty_strata.push_back(area);
            continue;
        }
        Engine eng = make_engine(seed, {kSampleStream, fnv1a64(area)});
        for (std::size_t j = 0; j < take; ++j) {
            const std::size_t pick = j + uniform_below(eng, idx.size() - j);
            std::swap(idx[j], idx[pick]);
            keep[idx[j]] = 1;
        }
    }
    out.corpus.census_year = population.census_year;
    out.corpus.population_counts = population.population_counts;
    for (std::size_t i = 0; i < population.records.size(); ++i) {
        if (keep[i]) out.corpus.records.push_back(population.records[i]);
    }
    return out;
}

std::vector<CoverageDiagnostic> coverage_report(const Corpus& sample,
                                                const std::map<std::string, std::int64_t>& population_counts) {
    std::map<std::string, std::size_t> counts;
    for (const auto& r : sample.records) ++counts[r.institution_id];
    std::vector<CoverageDiagnostic> out;
    for (const auto& [inst, n] : counts) {
        CoverageDiagnostic d;
        d.institution_id = inst;
        d.sample_count = n;
        const auto it = population_counts.find(inst);
        if (it != population_counts.end() && it->second > 0) {
            d.population_count = it->second;
            d.coverage_ratio = static_cast<double>(n) / static_cast<double>(it->second);
        }
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace peeragree

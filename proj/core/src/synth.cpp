#include "peeragree/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "peeragree/error.hpp"
#include "peeragree/rng.hpp"

namespace peeragree {
namespace {

using json = nlohmann::json;

// Criterion score = 1 + number of thresholds below the noisy standardized quality.
constexpr std::array<double, 9> kCriterionThresholds = {-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};

int discretize(double latent) {
    int score = 1;
    for (double t : kCriterionThresholds) score += latent > t ? 1 : 0;
    return score;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Standard normal via Box-Muller; std::normal_distribution caches its second draw,
// which would couple consecutive calls.
double standard_normal(Engine& eng) {
    constexpr double kTwoPi = 6.283185307179586;
    const double u1 = (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

std::string padded(char prefix, std::size_t value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, value);
    return buf;
}

std::string area_label(std::size_t a) { return padded('A', a, 2); }
std::string field_label(std::size_t a, std::size_t f) { return area_label(a) + "-F" + std::to_string(f); }

std::size_t institution_size(const SynthConfig& cfg, std::size_t inst) {
    const auto& sizes = cfg.pubs_per_institution;
    if (sizes.kind == PubsPerInstitution::Kind::constant) return sizes.constant;
    Engine eng = make_engine(cfg.seed, {fnv1a64("institution-size"), inst});
    const double u = uniform01(eng);
    const double lo = std::log(static_cast<double>(sizes.min));
    const double hi = std::log(static_cast<double>(sizes.max) + 1.0);
    const auto n = static_cast<std::size_t>(std::floor(std::exp(lo + u * u * (hi - lo))));
    return std::clamp(n, sizes.min, sizes.max);
}

}  // namespace

void validate(const SynthConfig& c) {
    auto fail = [](const std::string& what) { throw ValidationError("synthetic config: " + what); };
    if (c.n_institutions == 0) fail("n_institutions must be positive");
    if (c.n_areas == 0) fail("n_areas must be positive");
    if (c.n_fields_per_area == 0) fail("n_fields_per_area must be positive");
    if (c.journals_per_field == 0) fail("journals_per_field must be positive");
    const auto& p = c.pubs_per_institution;
    if (p.kind == PubsPerInstitution::Kind::constant && p.constant == 0) fail("constant pubs_per_institution must be positive");
    if (p.kind == PubsPerInstitution::Kind::skewed && (p.min == 0 || p.min > p.max)) fail("skewed sizes need 1 <= min <= max");
    if (!(c.latent_quality_sd > 0.0)) fail("latent_quality_sd must be positive");
    if (!(c.reviewer_noise_sd >= 0.0)) fail("reviewer_noise_sd must be non-negative");
    if (!(c.citation_dispersion > 0.0)) fail("citation_dispersion must be positive");
    if (!(c.institution_effect_sd >= 0.0)) fail("institution_effect_sd must be non-negative");
    if (!(c.metric_quality_correlation >= 0.0 && c.metric_quality_correlation <= 1.0)) {
        fail("metric_quality_correlation must lie in [0,1]");
    }
    if (!(c.mean_citations > 0.0)) fail("mean_citations must be positive");
    for (double share : {c.multi_category_share, c.multidisciplinary_share}) {
        if (!(share >= 0.0 && share <= 1.0)) fail("shares must lie in [0,1]");
    }
    if (c.multidisciplinary_share > 0.0 && c.multidisciplinary_label.empty()) fail("empty multidisciplinary label");
    if (c.first_year > c.last_year || c.last_year > c.census_year) fail("need first_year <= last_year <= census_year");
    if (!(c.coverage_min > 0.0 && c.coverage_min <= c.coverage_max && c.coverage_max <= 1.0)) {
        fail("coverage range must satisfy 0 < min <= max <= 1");
    }
}

Corpus generate(const SynthConfig& cfg) {
    validate(cfg);
    const double rho = cfg.metric_quality_correlation;
    const double rho_c = std::sqrt(1.0 - rho * rho);
    const double quality_sd = std::hypot(cfg.institution_effect_sd, cfg.latent_quality_sd);
    const auto years = static_cast<std::uint64_t>(cfg.last_year - cfg.first_year + 1);

    std::vector<double> area_cumulative;
    double total_share = 0.0;
    for (std::size_t a = 0; a < cfg.n_areas; ++a) {
        total_share += std::pow(static_cast<double>(a + 1), cfg.area_size_skew);
        area_cumulative.push_back(total_share);
    }

    // Field citation levels differ, which is what normalisation removes.
    std::vector<double> field_effect(cfg.n_areas * cfg.n_fields_per_area);
    for (std::size_t f = 0; f < field_effect.size(); ++f) {
        Engine eng = make_engine(cfg.seed, {fnv1a64("field-effect"), f});
        field_effect[f] = std::exp(0.5 * standard_normal(eng));
    }

    // Journal bins split the standardized quality axis at equal-probability cut points.
    std::vector<double> journal_cuts;
    for (std::size_t j = 1; j < cfg.journals_per_field; ++j) {
        const double target = static_cast<double>(j) / static_cast<double>(cfg.journals_per_field);
        double lo = -8.0, hi = 8.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (normal_cdf(mid) < target ? lo : hi) = mid;
        }
        journal_cuts.push_back(0.5 * (lo + hi));
    }

    Corpus corpus;
    corpus.census_year = cfg.census_year;
    std::map<std::string, std::int64_t> population;
    std::size_t next_pub = 0;
    for (std::size_t inst = 0; inst < cfg.n_institutions; ++inst) {
        const std::string inst_id = padded('U', inst, 3);
        Engine inst_eng = make_engine(cfg.seed, {fnv1a64("institution"), inst});
        const double inst_effect = cfg.institution_effect_sd * standard_normal(inst_eng);
        const double coverage = cfg.coverage_min + (cfg.coverage_max - cfg.coverage_min) * uniform01(inst_eng);
        const std::size_t n_pubs = institution_size(cfg, inst);
        population[inst_id] = std::max<std::int64_t>(
            static_cast<std::int64_t>(n_pubs), std::llround(static_cast<double>(n_pubs) / coverage));

        for (std::size_t k = 0; k < n_pubs; ++k, ++next_pub) {
            Engine eng = make_engine(cfg.seed, {fnv1a64("publication"), next_pub});
            PublicationRecord r;
            r.pub_id = padded('P', next_pub, 6);
            r.institution_id = inst_id;

            const double pick = uniform01(eng) * total_share;
            const auto area = static_cast<std::size_t>(
                std::min<std::ptrdiff_t>(std::upper_bound(area_cumulative.begin(), area_cumulative.end(), pick) -
                                             area_cumulative.begin(),
                                         static_cast<std::ptrdiff_t>(cfg.n_areas - 1)));
            r.area_id = area_label(area);
            const std::size_t f1 = uniform_below(eng, cfg.n_fields_per_area);
            const bool two_fields = cfg.n_fields_per_area > 1 && uniform01(eng) < cfg.multi_category_share;
            const std::size_t f2 = (f1 + 1 + uniform_below(eng, std::max<std::size_t>(1, cfg.n_fields_per_area - 1))) %
                                   cfg.n_fields_per_area;
            constexpr std::array<double, 3> kSplits = {0.5, 0.6, 0.75};
            const double split = kSplits[uniform_below(eng, kSplits.size())];
            WeightMap fields;
            if (two_fields) {
                fields[field_label(area, f1)] = split;
                fields[field_label(area, f2)] = 1.0 - split;
            } else {
                fields[field_label(area, f1)] = 1.0;
            }
            if (uniform01(eng) < cfg.multidisciplinary_share) {
                r.category_weights[cfg.multidisciplinary_label] = 1.0;
                r.ref_category_weights = fields;
            } else {
                r.category_weights = fields;
            }
            r.year = cfg.first_year + static_cast<int>(uniform_below(eng, years));

            const double quality = (inst_effect + cfg.latent_quality_sd * standard_normal(eng)) / quality_sd;
            std::array<int, 6> criteria{};
            for (int& c : criteria) c = discretize(quality + cfg.reviewer_noise_sd * standard_normal(eng));
            r.review_a = ReviewerScore{criteria[0], criteria[1], criteria[2]};
            r.review_b = ReviewerScore{criteria[3], criteria[4], criteria[5]};

            const double signal = rho * quality + rho_c * standard_normal(eng);
            const double journal_axis = quality + 0.3 * standard_normal(eng);
            const auto bin = static_cast<std::size_t>(
                std::upper_bound(journal_cuts.begin(), journal_cuts.end(), journal_axis) - journal_cuts.begin());
            r.journal_id = field_label(area, f1) + "-J" + std::to_string(bin);

            if (cfg.external_percentiles) {
                r.ext_citation_percentile = 100.0 * normal_cdf(signal + 0.3 * standard_normal(eng));
                Engine journal_eng = make_engine(cfg.seed, {fnv1a64("journal"), fnv1a64(r.journal_id)});
                const double bin_center = journal_cuts.empty() ? 0.0
                                          : bin == 0            ? journal_cuts.front() - 0.5
                                          : bin == journal_cuts.size()
                                              ? journal_cuts.back() + 0.5
                                              : 0.5 * (journal_cuts[bin - 1] + journal_cuts[bin]);
                r.ext_journal_percentile =
                    100.0 * normal_cdf(rho * bin_center + rho_c * standard_normal(journal_eng));
            }

            const double age = static_cast<double>(cfg.census_year - r.year) + 1.0;
            const double mu = cfg.mean_citations * field_effect[area * cfg.n_fields_per_area + f1] * (age / 2.5) *
                              std::exp(0.8 * signal - 0.32);
            Engine count_eng = make_engine(cfg.seed, {fnv1a64("citations"), next_pub});
            std::gamma_distribution<double> rate(1.0 / cfg.citation_dispersion, mu * cfg.citation_dispersion);
            const double lambda = rate(count_eng);
            std::poisson_distribution<std::int64_t> count(std::max(lambda, 1e-12));
            r.citations = count(count_eng);

            corpus.records.push_back(std::move(r));
        }
    }
    corpus.population_counts = std::move(population);
    return corpus;
}

SynthConfig parse_synth_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("synthetic config: ") + e.what(), 0);
    }
    if (!j.is_object()) throw ValidationError("synthetic config must be a JSON object");
    SynthConfig c;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "n_institutions") c.n_institutions = v.get<std::size_t>();
            else if (key == "pubs_per_institution") {
                if (v.is_number()) {
                    c.pubs_per_institution.kind = PubsPerInstitution::Kind::constant;
                    c.pubs_per_institution.constant = v.get<std::size_t>();
                } else {
                    const auto kind = v.value("kind", std::string("constant"));
                    if (kind == "constant") {
                        c.pubs_per_institution.kind = PubsPerInstitution::Kind::constant;
                        c.pubs_per_institution.constant = v.value("value", c.pubs_per_institution.constant);
                    } else if (kind == "skewed") {
                        c.pubs_per_institution.kind = PubsPerInstitution::Kind::skewed;
                        c.pubs_per_institution.min = v.value("min", c.pubs_per_institution.min);
                        c.pubs_per_institution.max = v.value("max", c.pubs_per_institution.max);
                    } else {
                        throw ValidationError("synthetic config: unknown pubs_per_institution kind '" + kind + "'");
                    }
                }
            } else if (key == "n_areas") c.n_areas = v.get<std::size_t>();
            else if (key == "n_fields_per_area") c.n_fields_per_area = v.get<std::size_t>();
            else if (key == "latent_quality_sd") c.latent_quality_sd = v.get<double>();
            else if (key == "reviewer_noise_sd") c.reviewer_noise_sd = v.get<double>();
            else if (key == "citation_dispersion") c.citation_dispersion = v.get<double>();
            else if (key == "metric_quality_correlation") c.metric_quality_correlation = v.get<double>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "institution_effect_sd") c.institution_effect_sd = v.get<double>();
            else if (key == "area_size_skew") c.area_size_skew = v.get<double>();
            else if (key == "multi_category_share") c.multi_category_share = v.get<double>();
            else if (key == "multidisciplinary_share") c.multidisciplinary_share = v.get<double>();
            else if (key == "multidisciplinary_label") c.multidisciplinary_label = v.get<std::string>();
            else if (key == "journals_per_field") c.journals_per_field = v.get<std::size_t>();
            else if (key == "mean_citations") c.mean_citations = v.get<double>();
            else if (key == "first_year") c.first_year = v.get<int>();
            else if (key == "last_year") c.last_year = v.get<int>();
            else if (key == "census_year") c.census_year = v.get<int>();
            else if (key == "external_percentiles") c.external_percentiles = v.get<bool>();
            else if (key == "coverage_min") c.coverage_min = v.get<double>();
            else if (key == "coverage_max") c.coverage_max = v.get<double>();
            else throw ValidationError("synthetic config: unknown key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("synthetic config: ") + e.what());
    }
    validate(c);
    return c;
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open synthetic config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_synth_config(buf.str());
}

std::string to_json(const SynthConfig& c) {
    json j;
    j["n_institutions"] = c.n_institutions;
    if (c.pubs_per_institution.kind == PubsPerInstitution::Kind::constant) {
        j["pubs_per_institution"] = {{"kind", "constant"}, {"value", c.pubs_per_institution.constant}};
    } else {
        j["pubs_per_institution"] = {
            {"kind", "skewed"}, {"min", c.pubs_per_institution.min}, {"max", c.pubs_per_institution.max}};
    }
    j["n_areas"] = c.n_areas;
    j["n_fields_per_area"] = c.n_fields_per_area;
    j["latent_quality_sd"] = c.latent_quality_sd;
    j["reviewer_noise_sd"] = c.reviewer_noise_sd;
    j["citation_dispersion"] = c.citation_dispersion;
    j["metric_quality_correlation"] = c.metric_quality_correlation;
    j["seed"] = c.seed;
    j["institution_effect_sd"] = c.institution_effect_sd;
    j["area_size_skew"] = c.area_size_skew;
    j["multi_category_share"] = c.multi_category_share;
    j["multidisciplinary_share"] = c.multidisciplinary_share;
    j["multidisciplinary_label"] = c.multidisciplinary_label;
    j["journals_per_field"] = c.journals_per_field;
    j["mean_citations"] = c.mean_citations;
    j["first_year"] = c.first_year;
    j["last_year"] = c.last_year;
    j["census_year"] = c.census_year;
    j["external_percentiles"] = c.external_percentiles;
    j["coverage_min"] = c.coverage_min;
    j["coverage_max"] = c.coverage_max;
    return j.dump(2);
}

}  // namespace peeragree

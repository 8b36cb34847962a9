#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "peeragree/corpus.hpp"

namespace peeragree {

struct PubsPerInstitution {
    enum class Kind { constant, skewed };
    Kind kind = Kind::constant;
    std::size_t constant = 58;
    /// Skewed sizes are log-uniform in u^2 between min and max, so small institutions dominate.
    std::size_t min = 1;
    std::size_t max = 200;
};

struct SynthConfig {
    std::size_t n_institutions = 78;
    PubsPerInstitution pubs_per_institution{};
    std::size_t n_areas = 3;
    std::size_t n_fields_per_area = 4;
    double latent_quality_sd = 1.0;
    double reviewer_noise_sd = 0.8;
    double citation_dispersion = 0.7;
    double metric_quality_correlation = 0.6;
    std::uint64_t seed = 1;

    double institution_effect_sd = 0.5;
    /// Area a receives a share of publications proportional to (a + 1)^area_size_skew.
    double area_size_skew = 1.0;
    double multi_category_share = 0.3;
    double multidisciplinary_share = 0.05;
    std::string multidisciplinary_label = "Multidisciplinary Sciences";
    std::size_t journals_per_field = 6;
    double mean_citations = 8.0;
    int first_year = 2011;
    int last_year = 2014;
    int census_year = 2015;
    bool external_percentiles = true;
    /// Population counts are sample counts divided by a coverage drawn from this range.
    double coverage_min = 0.06;
    double coverage_max = 0.10;
};

/// Throws ValidationError describing the first infeasible setting.
void validate(const SynthConfig& config);

/// Publications carry a latent quality q (institution effect plus noise). Reviewers
/// score each criterion by discretising q plus independent noise; citations are a
/// gamma-Poisson draw whose mean grows with a signal correlated with q; journals bin q.
/// Every publication draws from its own stream so configs that differ only in
/// correlation share their noise.
Corpus generate(const SynthConfig& config);

SynthConfig parse_synth_config(std::string_view json_text);
SynthConfig load_synth_config(const std::filesystem::path& path);
std::string to_json(const SynthConfig& config);

}  // namespace peeragree

// Test-only builders for records and small random corpora.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "peeragree/corpus.hpp"
#include "peeragree/synth.hpp"

namespace peeragree::testing {

inline PublicationRecord make_record(std::string id, std::string inst, std::string area, int year,
                                     std::int64_t citations, WeightMap weights, std::string journal = "J1",
                                     ReviewerScore a = {5, 5, 5}, ReviewerScore b = {5, 5, 5}) {
    PublicationRecord r;
    r.pub_id = std::move(id);
    r.institution_id = std::move(inst);
    r.area_id = std::move(area);
    r.year = year;
    r.citations = citations;
    r.journal_id = std::move(journal);
    r.category_weights = std::move(weights);
    r.review_a = a;
    r.review_b = b;
    return r;
}

inline Corpus make_corpus(std::vector<PublicationRecord> records, int census_year = 2015) {
    Corpus c;
    c.records = std::move(records);
    c.census_year = census_year;
    return c;
}

/// Random corpus of `n` publications over a handful of fields, journals, years and
/// institutions. Every field-year cell that appears has at least one cited record, so
/// no record is flagged.
inline Corpus random_fixture(std::uint64_t seed, std::size_t n, std::size_t n_areas = 2) {
    std::mt19937_64 eng(seed);
    auto pick = [&](std::size_t k) { return static_cast<std::size_t>(eng() % k); };
    const std::vector<std::string> fields = {"F0", "F1", "F2", "F3"};
    Corpus c;
    c.census_year = 2015;
    for (std::size_t i = 0; i < n; ++i) {
        WeightMap w;
        const std::size_t i1 = pick(fields.size());
        const std::string& f1 = fields[i1];
        if (pick(3) == 0) {
            const std::string& f2 = fields[(i1 + 1 + pick(fields.size() - 1)) % fields.size()];
            const double split = (1.0 + static_cast<double>(pick(8))) / 10.0;
            w[f1] = split;
            w[f2] = 1.0 - split;
        } else {
            w[f1] = 1.0;
        }
        auto score = [&] {
            return ReviewerScore{1 + static_cast<int>(pick(10)), 1 + static_cast<int>(pick(10)),
                                 1 + static_cast<int>(pick(10))};
        };
        auto r = make_record("P" + std::to_string(1000 + i), "U" + std::to_string(pick(5)),
                             "A" + std::to_string(pick(n_areas)), 2012 + static_cast<int>(pick(2)),
                             1 + static_cast<std::int64_t>(pick(40)), std::move(w), "J" + std::to_string(pick(4)),
                             score(), score());
        if (pick(2) == 0) r.ext_citation_percentile = static_cast<double>(pick(1001)) / 10.0;
        if (pick(2) == 0) r.ext_journal_percentile = static_cast<double>(pick(1001)) / 10.0;
        c.records.push_back(std::move(r));
    }
    return c;
}

/// Synthetic corpus matching the desk-scale setting used throughout the tests:
/// 78 institutions of 58 publications over three areas.
inline SynthConfig desk_scale_config(std::uint64_t seed) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.n_institutions = 78;
    cfg.pubs_per_institution.kind = PubsPerInstitution::Kind::constant;
    cfg.pubs_per_institution.constant = 58;
    return cfg;
}

}  // namespace peeragree::testing

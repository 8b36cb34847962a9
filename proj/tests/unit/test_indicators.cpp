#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "oracles/oracles.hpp"
#include "peeragree/indicators.hpp"
#include "peeragree/synth.hpp"
#include "support/fixtures.hpp"

using namespace peeragree;
using peeragree::testing::make_corpus;
using peeragree::testing::make_record;

TEST_CASE("multidisciplinary weight follows the reference profile", "[indicators]") {
    const std::string multi = "MULTI";
    SECTION("full redistribution") {
        auto r = make_record("P1", "U", "A", 2012, 1, {{multi, 1.0}});
        r.ref_category_weights = WeightMap{{"PHY", 0.75}, {"CHE", 0.25}};
        const auto out = reassign_multidisciplinary(make_corpus({r}), multi);
        CHECK(out.flagged.empty());
        CHECK(out.corpus.records[0].category_weights == WeightMap{{"CHE", 0.25}, {"PHY", 0.75}});
    }
    SECTION("partial redistribution") {
        auto r = make_record("P1", "U", "A", 2012, 1, {{multi, 0.5}, {"BIO", 0.5}});
        r.ref_category_weights = WeightMap{{"PHY", 1.0}};
        const auto out = reassign_multidisciplinary(make_corpus({r}), multi);
        CHECK(out.corpus.records[0].category_weights == WeightMap{{"BIO", 0.5}, {"PHY", 0.5}});
    }
    SECTION("the label itself is excluded from the profile") {
        auto r = make_record("P1", "U", "A", 2012, 1, {{multi, 1.0}});
        r.ref_category_weights = WeightMap{{"PHY", 0.3}, {multi, 0.4}, {"CHE", 0.3}};
        const auto w = reassign_multidisciplinary(make_corpus({r}), multi).corpus.records[0].category_weights;
        CHECK(w.at("PHY") == Catch::Approx(0.5));
        CHECK(w.at("CHE") == Catch::Approx(0.5));
        CHECK_FALSE(w.contains(multi));
    }
    SECTION("no multidisciplinary mass: unchanged") {
        auto r = make_record("P1", "U", "A", 2012, 1, {{"BIO", 1.0}});
        r.ref_category_weights = WeightMap{{"PHY", 1.0}};
        const auto out = reassign_multidisciplinary(make_corpus({r}), multi);
        CHECK(out.corpus.records[0] == r);
        CHECK(out.flagged.empty());
    }
    SECTION("missing or self-only profile: unchanged and flagged") {
        auto missing = make_record("P1", "U", "A", 2012, 1, {{multi, 1.0}});
        auto self = make_record("P2", "U", "A", 2012, 1, {{multi, 1.0}});
        self.ref_category_weights = WeightMap{{multi, 1.0}};
        const auto out = reassign_multidisciplinary(make_corpus({missing, self}), multi);
        REQUIRE(out.flagged.size() == 2);
        CHECK(out.flagged[0] == RecordFlag{"P1", FlagReason::unredistributable_multidisciplinary});
        CHECK(out.corpus.records[1].category_weights == self.category_weights);
    }
}

TEST_CASE("reassignment preserves total weight", "[indicators][property]") {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<PublicationRecord> records;
    for (int i = 0; i < 300; ++i) {
        const double m = std::min(1.0, u(eng));
        WeightMap w{{"MULTI", m}};
        if (m < 1.0) w["F" + std::to_string(i % 3)] = 1.0 - m;
        auto r = make_record("P" + std::to_string(i), "U", "A", 2012, 1, w);
        WeightMap refs;
        for (int k = 0; k < 1 + i % 4; ++k) refs["F" + std::to_string(k)] = u(eng);
        r.ref_category_weights = refs;
        records.push_back(r);
    }
    const auto out = reassign_multidisciplinary(make_corpus(records), "MULTI");
    for (const auto& r : out.corpus.records) {
        double s = 0.0;
        for (const auto& [f, w] : r.category_weights) s += w;
        CHECK(std::abs(s - 1.0) <= 1e-9);
        CHECK_FALSE(r.category_weights.contains("MULTI"));
    }
}

TEST_CASE("baselines under fractional counting", "[indicators]") {
    SECTION("plain mean") {
        const auto b = compute_baselines(make_corpus({make_record("P1", "U", "A", 2012, 2, {{"A", 1.0}}),
                                                      make_record("P2", "U", "A", 2012, 4, {{"A", 1.0}})}));
        CHECK(b.find("A", 2012)->mean_citations == 3.0);
        CHECK(b.find("A", 2013) == nullptr);
    }
    SECTION("fractional contribution") {
        const auto b = compute_baselines(make_corpus({make_record("P1", "U", "A", 2012, 10, {{"A", 0.5}, {"B", 0.5}})}));
        CHECK(b.find("A", 2012)->weight_mass == 0.5);
        CHECK(b.find("B", 2012)->weight_mass == 0.5);
        CHECK(b.find("A", 2012)->mean_citations == 10.0);
        CHECK(b.find("B", 2012)->mean_citations == 10.0);
    }
    SECTION("six-record mixed-weight fixture matches direct summation") {
        const auto c = make_corpus({
            make_record("P1", "U", "A", 2012, 7, {{"A", 1.0}}),
            make_record("P2", "U", "A", 2012, 2, {{"A", 0.25}, {"B", 0.75}}),
            make_record("P3", "U", "A", 2012, 11, {{"B", 0.6}, {"C", 0.4}}),
            make_record("P4", "U", "A", 2013, 0, {{"A", 0.5}, {"C", 0.5}}),
            make_record("P5", "U", "A", 2013, 5, {{"C", 1.0}}),
            make_record("P6", "U", "A", 2012, 13, {{"A", 0.1}, {"B", 0.2}, {"C", 0.7}}),
        });
        const auto b = compute_baselines(c);
        CHECK(b.cells.size() == 5);
        for (const auto& [key, cell] : b.cells) {
            CHECK(std::abs(cell.mean_citations - oracle::cell_mean(c, key.field, key.year)) <= 1e-12);
            CHECK(std::abs(cell.weight_mass - oracle::cell_mass(c, key.field, key.year)) <= 1e-12);
        }
        // (A, 2012): (7*1 + 2*0.25 + 13*0.1) / 1.35
        CHECK(b.find("A", 2012)->mean_citations == Catch::Approx(8.8 / 1.35).epsilon(1e-14));
    }
    SECTION("independent of record order") {
        auto c = testing::random_fixture(17, 50);
        const auto before = compute_baselines(c);
        std::reverse(c.records.begin(), c.records.end());
        const auto after = compute_baselines(c);
        REQUIRE(before.cells.size() == after.cells.size());
        for (const auto& [key, cell] : before.cells) {
            CHECK(after.cells.at(key).mean_citations == cell.mean_citations);
        }
    }
}

TEST_CASE("NCS", "[indicators]") {
    SECTION("self-normalisation") {
        const auto c = make_corpus({make_record("P1", "U", "A", 2012, 3, {{"A", 1.0}}),
                                    make_record("P2", "U", "A", 2012, 3, {{"A", 1.0}})});
        CHECK(compute_ncs(c.records[0], compute_baselines(c)) == 1.0);
    }
    SECTION("weighted mean of per-field ratios") {
        FieldYearBaseline b;
        b.cells[{"A", 2012}] = {1.0, 2.0, 2.0};
        b.cells[{"B", 2012}] = {1.0, 6.0, 6.0};
        const auto r = make_record("P1", "U", "A", 2012, 6, {{"A", 0.5}, {"B", 0.5}});
        CHECK(compute_ncs(r, b) == Catch::Approx(2.0));
    }
    SECTION("undefined and zero-mean cells raise flags") {
        FieldYearBaseline b;
        b.cells[{"A", 2012}] = {1.0, 0.0, 0.0};
        const auto zero = make_record("P1", "U", "A", 2012, 0, {{"A", 1.0}});
        const auto missing = make_record("P2", "U", "A", 2013, 1, {{"A", 1.0}});
        try {
            compute_ncs(zero, b);
            FAIL("expected zero-mean flag");
        } catch (const IndicatorUndefined& e) {
            CHECK(e.reason() == FlagReason::zero_mean_cell);
        }
        try {
            compute_ncs(missing, b);
            FAIL("expected undefined-baseline flag");
        } catch (const IndicatorUndefined& e) {
            CHECK(e.reason() == FlagReason::undefined_baseline);
        }
    }
    SECTION("20-record random fixtures match the brute-force oracle") {
        for (std::uint64_t seed = 100; seed < 110; ++seed) {
            const auto c = testing::random_fixture(seed, 20);
            const auto b = compute_baselines(c);
            for (const auto& r : c.records) {
                CHECK(oracle::close_rel(compute_ncs(r, b), oracle::ncs(c, r), 1e-12));
            }
        }
    }
    SECTION("homogeneous of degree one in citations with baselines fixed") {
        const auto c = testing::random_fixture(3, 30);
        const auto b = compute_baselines(c);
        for (auto r : c.records) {
            const double base = compute_ncs(r, b);
            r.citations *= 3;
            CHECK(compute_ncs(r, b) == Catch::Approx(3.0 * base).epsilon(1e-14));
        }
    }
    SECTION("scaling every citation count in a cell leaves NCS unchanged") {
        // Single-field records in one year, so the whole cell scales together.
        std::vector<PublicationRecord> records;
        for (int i = 0; i < 12; ++i) {
            records.push_back(make_record("P" + std::to_string(i), "U", "A", 2012, 1 + i * 3, {{"F", 1.0}}));
        }
        auto c = make_corpus(records);
        auto scaled = c;
        for (auto& r : scaled.records) r.citations *= 7;
        const auto b = compute_baselines(c);
        const auto bs = compute_baselines(scaled);
        for (std::size_t i = 0; i < c.records.size(); ++i) {
            CHECK(compute_ncs(scaled.records[i], bs) == Catch::Approx(compute_ncs(c.records[i], b)).epsilon(1e-14));
        }
    }
}

TEST_CASE("NJS", "[indicators]") {
    SECTION("group mean and singleton") {
        const auto c = make_corpus({make_record("P1", "U", "A", 2012, 1, {{"A", 1.0}}, "J1"),
                                    make_record("P2", "U", "A", 2012, 1, {{"A", 1.0}}, "J1"),
                                    make_record("P3", "U", "A", 2012, 1, {{"A", 1.0}}, "J2")});
        const std::map<std::string, double> ncs = {{"P1", 1.0}, {"P2", 3.0}, {"P3", 0.7}};
        const auto njs = compute_njs(c, ncs);
        CHECK(njs.at("P1") == 2.0);
        CHECK(njs.at("P2") == 2.0);
        CHECK(njs.at("P3") == 0.7);
    }
    SECTION("15-record fixture with 4 journals matches the grouping oracle") {
        for (std::uint64_t seed = 200; seed < 205; ++seed) {
            const auto c = testing::random_fixture(seed, 15);
            std::set<std::string> journals;
            for (const auto& r : c.records) journals.insert(r.journal_id);
            const auto b = compute_baselines(c);
            std::map<std::string, double> ncs;
            for (const auto& r : c.records) ncs[r.pub_id] = compute_ncs(r, b);
            const auto njs = compute_njs(c, ncs);
            for (const auto& r : c.records) CHECK(oracle::close_rel(njs.at(r.pub_id), oracle::njs(c, r), 1e-12));
        }
    }
    SECTION("records without NCS do not enter the group") {
        const auto c = make_corpus({make_record("P1", "U", "A", 2012, 1, {{"A", 1.0}}, "J1"),
                                    make_record("P2", "U", "A", 2012, 1, {{"A", 1.0}}, "J1")});
        const auto njs = compute_njs(c, {{"P1", 4.0}});
        CHECK(njs.size() == 1);
        CHECK(njs.at("P1") == 4.0);
    }
}

TEST_CASE("mid-rank percentiles", "[indicators]") {
    auto run = [](std::vector<double> values) {
        std::vector<std::pair<std::string, double>> v;
        std::map<std::string, std::string> g;
        for (std::size_t i = 0; i < values.size(); ++i) {
            v.emplace_back("P" + std::to_string(i), values[i]);
            g["P" + std::to_string(i)] = "G";
        }
        return percentile_normalize(v, g);
    };
    SECTION("three values") {
        const auto p = run({1, 2, 3});
        CHECK(p.at("P0") == Catch::Approx(100.0 / 6.0));
        CHECK(p.at("P1") == 50.0);
        CHECK(p.at("P2") == Catch::Approx(500.0 / 6.0));
    }
    SECTION("ties share the mean rank") {
        const auto p = run({5, 5});
        CHECK(p.at("P0") == 50.0);
        CHECK(p.at("P1") == 50.0);
    }
    SECTION("maximum of 100 distinct values") {
        std::vector<double> v;
        for (int i = 0; i < 100; ++i) v.push_back(i * 1.5);
        CHECK(run(v).at("P99") == 99.5);
    }
    SECTION("missing group is an error") {
        const std::vector<std::pair<std::string, double>> v = {{"P0", 1.0}};
        CHECK_THROWS_AS(percentile_normalize(v, {}), ValidationError);
    }
    SECTION("matches the counting oracle and averages 50 per group") {
        std::mt19937_64 eng(23);
        std::vector<std::pair<std::string, double>> v;
        std::map<std::string, std::string> g;
        std::map<std::string, std::vector<double>> groups;
        for (int i = 0; i < 400; ++i) {
            const std::string id = "P" + std::to_string(i);
            const double x = static_cast<double>(eng() % 25);
            const std::string grp = "G" + std::to_string(eng() % 6);
            v.emplace_back(id, x);
            g[id] = grp;
            groups[grp].push_back(x);
        }
        const auto p = percentile_normalize(v, g);
        std::map<std::string, double> sums;
        for (const auto& [id, x] : v) {
            CHECK(p.at(id) == Catch::Approx(oracle::midrank_percentile(groups[g[id]], x)).epsilon(1e-14));
            sums[g[id]] += p.at(id);
        }
        for (const auto& [grp, s] : sums) {
            CHECK(std::abs(s / static_cast<double>(groups[grp].size()) - 50.0) <= 1e-9);
        }
    }
}

TEST_CASE("indicator table flags and imputes", "[indicators]") {
    SECTION("all-zero field-year cell is flagged, not zeroed") {
        auto c = make_corpus({make_record("P1", "U", "A", 2012, 0, {{"Z", 1.0}}),
                              make_record("P2", "U", "A", 2012, 0, {{"Z", 1.0}}),
                              make_record("P3", "U", "A", 2012, 4, {{"F", 1.0}})});
        const auto t = compute_indicators(c, compute_baselines(c));
        CHECK(t.flagged.size() == 2);
        CHECK(t.flagged[0].reason == FlagReason::zero_mean_cell);
        CHECK(t.ncs.size() == 1);
        CHECK_FALSE(t.njs.contains("P1"));
    }
    SECTION("external percentiles are taken as given, missing ones are imputed") {
        auto c = make_corpus({make_record("P1", "U", "A", 2012, 1, {{"F", 1.0}}),
                              make_record("P2", "U", "A", 2012, 5, {{"F", 1.0}})});
        c.records[0].ext_citation_percentile = 12.5;
        const auto t = compute_indicators(c, compute_baselines(c));
        CHECK(t.citation_percentile.at("P1") == 12.5);
        CHECK(t.citation_percentile.at("P2") == 75.0);  // rank 2 of 2 in (F, 2012)
        CHECK(t.imputed_citation_percentiles == 1);
        CHECK(t.imputed_journal_percentiles == 2);
    }
}

TEST_CASE("normalisation closure on synthetic corpora", "[indicators][property]") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        SynthConfig cfg;
        cfg.seed = seed;
        cfg.n_institutions = 20;
        cfg.pubs_per_institution.constant = 30;
        const Corpus c = reassign_multidisciplinary(generate(cfg), cfg.multidisciplinary_label).corpus;
        const auto t = compute_indicators(c, compute_baselines(c));
        REQUIRE(t.flagged.empty());
        std::map<int, std::pair<double, double>> per_year;  // weighted NCS sum, weight sum
        double ncs_sum = 0.0, njs_sum = 0.0;
        for (const auto& r : c.records) {
            double w = 0.0;
            for (const auto& [f, x] : r.category_weights) w += x;
            per_year[r.year].first += w * t.ncs.at(r.pub_id);
            per_year[r.year].second += w;
            ncs_sum += t.ncs.at(r.pub_id);
            njs_sum += t.njs.at(r.pub_id);
        }
        for (const auto& [year, s] : per_year) CHECK(std::abs(s.first / s.second - 1.0) <= 1e-9);
        CHECK(std::abs(ncs_sum - njs_sum) <= 1e-9 * static_cast<double>(c.records.size()));
    }
}

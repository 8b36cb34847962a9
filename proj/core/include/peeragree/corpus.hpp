#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace peeragree {

/// Ordered so that iteration (and therefore summation) order is deterministic.
using WeightMap = std::map<std::string, double>;

inline constexpr double kWeightSumTolerance = 1e-9;

struct ReviewerScore {
    int originality = 1;
    int rigour = 1;
    int impact = 1;

    friend bool operator==(const ReviewerScore&, const ReviewerScore&) = default;
};

/// Sum of the three criteria, in [3, 30] for a valid score.
constexpr int overall_score(const ReviewerScore& r) noexcept {
    return r.originality + r.rigour + r.impact;
}

struct PublicationRecord {
    std::string pub_id;
    std::string institution_id;
    std::string area_id;
    int year = 0;
    std::int64_t citations = 0;
    std::string journal_id;
    WeightMap category_weights;
    std::optional<WeightMap> ref_category_weights;
    // Both reviews are required by validation; the optionals exist so a partially
    // constructed record can be represented and rejected with a precise message.
    std::optional<ReviewerScore> review_a;
    std::optional<ReviewerScore> review_b;
    std::optional<double> ext_citation_percentile;
    std::optional<double> ext_journal_percentile;

    friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

struct Corpus {
    std::vector<PublicationRecord> records;
    int census_year = 0;
    std::optional<std::map<std::string, std::int64_t>> population_counts;

    friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Inclusive year range accepted by validation.
struct YearWindow {
    int first = 0;
    int last = 9999;
};

/// Throws ValidationError naming the record on the first violated invariant.
void validate_record(const PublicationRecord& record, const YearWindow& window);

/// Validates every record plus corpus-level invariants (unique ids, year <= census year).
void validate_corpus(const Corpus& corpus, const YearWindow& window = {});

/// For each record independently, swaps (review_a, review_b) with probability 1/2 using
/// a coin keyed by (seed, pub_id). The result does not depend on record order.
/// Throws ValidationError if any record lacks a review.
Corpus assign_reviewer_roles(const Corpus& corpus, std::uint64_t seed);

/// True when the record's reviews are swapped under `seed`.
bool reviewer_roles_swapped(std::uint64_t seed, const std::string& pub_id) noexcept;

}  // namespace peeragree

#include "peeragree/corpus.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "peeragree/error.hpp"
#include "peeragree/rng.hpp"

namespace peeragree {
namespace {

void validate_criterion(int value, const char* name, const char* reviewer, const std::string& id) {
    if (value < 1 || value > 10) {
        throw ValidationError(std::string(reviewer) + " " + name + " = " + std::to_string(value) +
                                  " outside 1..10",
                              id);
    }
}

void validate_review(const std::optional<ReviewerScore>& review, const char* reviewer, const std::string& id) {
    if (!review) throw ValidationError(std::string(reviewer) + " score missing", id);
    validate_criterion(review->originality, "originality", reviewer, id);
    validate_criterion(review->rigour, "rigour", reviewer, id);
    validate_criterion(review->impact, "impact", reviewer, id);
}

void validate_percentile(const std::optional<double>& value, const char* name, const std::string& id) {
    if (value && !(*value >= 0.0 && *value <= 100.0)) {
        std::ostringstream msg;
        msg << name << " = " << *value << " outside [0,100]";
        throw ValidationError(msg.str(), id);
    }
}

}  // namespace

void validate_record(const PublicationRecord& r, const YearWindow& window) {
    if (r.pub_id.empty()) throw ValidationError("empty pub_id");
    const std::string& id = r.pub_id;
    if (r.institution_id.empty()) throw ValidationError("empty institution_id", id);
    if (r.area_id.empty()) throw ValidationError("empty area_id", id);
    if (r.citations < 0) throw ValidationError("negative citations " + std::to_string(r.citations), id);
    if (r.year < window.first || r.year > window.last) {
        throw ValidationError("year " + std::to_string(r.year) + " outside assessment window " +
                                  std::to_string(window.first) + ".." + std::to_string(window.last),
                              id);
    }
    if (r.category_weights.empty()) throw ValidationError("no category weights", id);
    double sum = 0.0;
    for (const auto& [label, w] : r.category_weights) {
        if (label.empty()) throw ValidationError("empty category label", id);
        if (!(w > 0.0 && w <= 1.0)) {
            std::ostringstream msg;
            msg << "category weight " << label << ":" << w << " outside (0,1]";
            throw ValidationError(msg.str(), id);
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance) {
        std::ostringstream msg;
        msg << "category weights sum " << sum << ", expected 1";
        throw ValidationError(msg.str(), id);
    }
    if (r.ref_category_weights) {
        for (const auto& [label, w] : *r.ref_category_weights) {
            if (label.empty() || !(w > 0.0) || !std::isfinite(w)) {
                throw ValidationError("invalid reference category weight for '" + label + "'", id);
            }
        }
    }
    validate_review(r.review_a, "reviewer 1", id);
    validate_review(r.review_b, "reviewer 2", id);
    validate_percentile(r.ext_citation_percentile, "ext_citation_percentile", id);
    validate_percentile(r.ext_journal_percentile, "ext_journal_percentile", id);
}

void validate_corpus(const Corpus& corpus, const YearWindow& window) {
    std::set<std::string_view> seen;
    for (const auto& r : corpus.records) {
        validate_record(r, window);
        if (!seen.insert(r.pub_id).second) throw ValidationError("duplicate pub_id", r.pub_id);
        if (r.year > corpus.census_year) {
            throw ValidationError("year " + std::to_string(r.year) + " after census year " +
                                      std::to_string(corpus.census_year),
                                  r.pub_id);
        }
    }
    if (corpus.population_counts) {
        for (const auto& [inst, count] : *corpus.population_counts) {
            if (count <= 0) throw ValidationError("non-positive population count for institution '" + inst + "'");
        }
    }
}

bool reviewer_roles_swapped(std::uint64_t seed, const std::string& pub_id) noexcept {
    return (derive_seed(seed, {fnv1a64(pub_id)}) >> 63) != 0;
}

Corpus assign_reviewer_roles(const Corpus& corpus, std::uint64_t seed) {
    Corpus out = corpus;
    for (auto& r : out.records) {
        if (!r.review_a || !r.review_b) throw ValidationError("both reviewer scores are required", r.pub_id);
        if (reviewer_roles_swapped(seed, r.pub_id)) std::swap(r.review_a, r.review_b);
    }
    return out;
}

}  // namespace peeragree

#pragma once

#include <map>
#include <span>
#include <string_view>
#include <string>
#include <utility>
#include <vector>

#include "peeragree/corpus.hpp"
#include "peeragree/error.hpp"

namespace peeragree {

inline constexpr const char* kDefaultMultidisciplinaryLabel = "Multidisciplinary Sciences";

enum class FlagReason {
    unredistributable_multidisciplinary,  // multidisciplinary weight but no usable reference profile
    undefined_baseline,                   // a (field, year) cell is missing from the baselines
    zero_mean_cell,                       // a (field, year) cell has mean citation count 0
};

std::string_view to_string(FlagReason reason) noexcept;

struct RecordFlag {
    std::string pub_id;
    FlagReason reason;

    friend bool operator==(const RecordFlag&, const RecordFlag&) = default;
};

struct Reassignment {
    Corpus corpus;
    std::vector<RecordFlag> flagged;
};

/// Moves each record's multidisciplinary weight onto the categories of its reference
/// profile, proportionally, with the multidisciplinary label itself excluded from the
/// profile. Single pass. Records without a usable profile stay unchanged and are flagged.
Reassignment reassign_multidisciplinary(const Corpus& corpus, const std::string& multidisciplinary_label);

struct FieldYear {
    std::string field;
    int year = 0;

    friend auto operator<=>(const FieldYear&, const FieldYear&) = default;
};

struct BaselineCell {
    double weight_mass = 0.0;
    double weighted_citations = 0.0;
    double mean_citations = 0.0;
};

/// Mean citations per (field, year) under fractional counting.
struct FieldYearBaseline {
    std::map<FieldYear, BaselineCell> cells;

    const BaselineCell* find(const std::string& field, int year) const;
};

/// Sums run over records in ascending pub_id order, so the result does not depend on
/// record order. Cells with zero weight mass never appear.
FieldYearBaseline compute_baselines(const Corpus& corpus);

/// Thrown by compute_ncs; carries the reason the record must be flagged.
class IndicatorUndefined : public Error {
public:
    IndicatorUndefined(FlagReason reason, const std::string& what) : Error(what), reason_(reason) {}
    FlagReason reason() const noexcept { return reason_; }

private:
    FlagReason reason_;
};

/// Weighted mean over the record's categories of citations / cell mean.
double compute_ncs(const PublicationRecord& record, const FieldYearBaseline& baselines);

/// Mean NCS per (journal, year) over records present in `ncs`.
std::map<std::string, double> compute_njs(const Corpus& corpus, const std::map<std::string, double>& ncs);

/// Mid-rank percentile within each group: rank r of n (ties take the mean rank)
/// maps to 100 (r - 0.5) / n.
std::map<std::string, double> percentile_normalize(std::span<const std::pair<std::string, double>> values,
                                                   const std::map<std::string, std::string>& grouping);

/// Category with the largest weight; ties go to the lexicographically first label.
const std::string& dominant_category(const PublicationRecord& record);

struct IndicatorTable {
    std::map<std::string, double> ncs;
    std::map<std::string, double> njs;
    std::map<std::string, double> citation_percentile;
    std::map<std::string, double> journal_percentile;
    std::vector<RecordFlag> flagged;
    /// Records whose external percentile was missing and was replaced by an internal one.
    std::size_t imputed_citation_percentiles = 0;
    std::size_t imputed_journal_percentiles = 0;
    /// Size of every (journal, year) group used for NJS, keyed "journal|year".
    std::map<std::string, std::size_t> journal_group_sizes;
};

/// Computes NCS and NJS, and takes the external percentiles when present. A missing
/// external percentile is replaced by the mid-rank percentile of citations (or of NJS)
/// within the record's dominant-category and year group. Flagged records are absent
/// from every mapping.
IndicatorTable compute_indicators(const Corpus& corpus, const FieldYearBaseline& baselines);

}  // namespace peeragree

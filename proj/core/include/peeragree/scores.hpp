#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace peeragree {

/// Per-publication scores tracked through aggregation and agreement.
enum class ScoreLabel : std::size_t {
    reviewer1 = 0,
    reviewer2,
    ncs,
    njs,
    citation_percentile,
    journal_percentile,
};

inline constexpr std::size_t kScoreLabelCount = 6;

inline constexpr std::array<ScoreLabel, kScoreLabelCount> kAllScoreLabels = {
    ScoreLabel::reviewer1,           ScoreLabel::reviewer2,          ScoreLabel::ncs,
    ScoreLabel::njs,                 ScoreLabel::citation_percentile, ScoreLabel::journal_percentile,
};

/// Metrics compared against reviewer 1 by default. Reviewer 2 is one of them.
inline constexpr std::array<ScoreLabel, 5> kDefaultMetrics = {
    ScoreLabel::reviewer2, ScoreLabel::ncs, ScoreLabel::njs,
    ScoreLabel::citation_percentile, ScoreLabel::journal_percentile,
};

std::string_view to_string(ScoreLabel label) noexcept;
std::optional<ScoreLabel> parse_score_label(std::string_view text) noexcept;

constexpr std::size_t index_of(ScoreLabel label) noexcept { return static_cast<std::size_t>(label); }

}  // namespace peeragree

#include "peeragree/scores.hpp"

namespace peeragree {

std::string_view to_string(ScoreLabel label) noexcept {
    switch (label) {
        case ScoreLabel::reviewer1: return "reviewer1";
        case ScoreLabel::reviewer2: return "reviewer2";
        case ScoreLabel::ncs: return "ncs";
        case ScoreLabel::njs: return "njs";
        case ScoreLabel::citation_percentile: return "citation_percentile";
        case ScoreLabel::journal_percentile: return "journal_percentile";
    }
    return "unknown";
}

std::optional<ScoreLabel> parse_score_label(std::string_view text) noexcept {
    for (ScoreLabel label : kAllScoreLabels) {
        if (to_string(label) == text) return label;
    }
    return std::nullopt;
}

}  // namespace peeragree

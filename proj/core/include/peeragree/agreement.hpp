#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "peeragree/aggregation.hpp"
#include "peeragree/corpus.hpp"
#include "peeragree/scores.hpp"

namespace peeragree {

/// Fits with fewer points than this are rejected: two points always fit exactly.
inline constexpr std::size_t kMinCalibrationPoints = 3;

struct CalibrationPoint {
    double x = 0.0;  // metric
    double y = 0.0;  // baseline reviewer score
};

/// OLS line predicting the baseline reviewer score from a metric.
struct CalibrationFit {
    std::string area_id;
    ScoreLabel metric = ScoreLabel::ncs;
    double intercept = 0.0;
    double slope = 0.0;
    std::size_t n_points = 0;

    double predict(double x) const noexcept { return intercept + slope * x; }
};

/// Closed-form least squares on centred sums. Throws DegenerateFitError when there are
/// fewer than kMinCalibrationPoints points or x is constant.
CalibrationFit fit_calibration(std::span<const CalibrationPoint> points, std::string area_id, ScoreLabel metric);

struct Residual {
    double y = 0.0;
    double y_hat = 0.0;
};

/// Median over units of |y - y_hat|. Throws Error on empty input.
double mad(std::span<const Residual> units);

struct SizedResidual {
    double y = 0.0;      // mean reviewer score of the unit
    double y_hat = 0.0;  // predicted mean
    std::size_t p = 1;   // publications behind the unit
};

/// Median over units of |p y - p y_hat| / (p y), as a percentage. The scaled totals are
/// formed and differenced in extended precision, so the result equals the one obtained
/// with every p set to 1. Throws ValidationError when some y <= 0, Error on empty input.
double mapd(std::span<const SizedResidual> units);

enum class Level { institution, publication };
enum class View { size_independent, size_dependent };

std::string_view to_string(Level level) noexcept;
std::string_view to_string(View view) noexcept;

/// MAD for size-independent views, MAPD (percent) for the size-dependent one.
struct StatisticKey {
    std::string area_id;
    ScoreLabel metric = ScoreLabel::ncs;
    Level level = Level::institution;
    View view = View::size_independent;

    friend auto operator<=>(const StatisticKey&, const StatisticKey&) = default;
    friend bool operator==(const StatisticKey&, const StatisticKey&) = default;
};

std::string to_string(const StatisticKey& key);

struct AgreementStatistic {
    StatisticKey key;
    double value = 0.0;
    std::size_t n_units = 0;
};

struct FitSkip {
    std::string area_id;
    ScoreLabel metric = ScoreLabel::ncs;
    Level level = Level::institution;
    std::string reason;
};

struct AgreementResult {
    std::vector<AgreementStatistic> statistics;  // sorted by key
    std::vector<CalibrationFit> institution_fits;
    std::vector<CalibrationFit> publication_fits;
    std::vector<FitSkip> skips;
};

/// Per area and per metric: an institution-level fit of mean baseline on mean metric
/// yields MAD (size-independent) and MAPD (size-dependent, predictions scaled by p);
/// a separate publication-level fit yields a publication MAD.
/// `publication_series` must contain the baseline and every metric; areas come from `corpus`.
AgreementResult run_agreement(std::span<const InstitutionAggregate> aggregates, const Corpus& corpus,
                              std::span<const ScoreSeries> publication_series, ScoreLabel baseline,
                              std::span<const ScoreLabel> metrics);

}  // namespace peeragree

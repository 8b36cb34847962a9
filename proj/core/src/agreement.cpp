#include "peeragree/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <unordered_map>

#include "peeragree/error.hpp"
#include "peeragree/stats.hpp"

namespace peeragree {
namespace {

#if defined(__SIZEOF_FLOAT128__)
using Wide = __float128;
#else
using Wide = long double;
#endif

// |p y - p y_hat| / (p y). With a 113-bit significand the products are exact, so the
// ratio rounds from the same real number whatever p is.
double scaled_relative_deviation(double y, double y_hat, std::size_t p) {
    const Wide scale = static_cast<Wide>(p);
    const Wide total = scale * static_cast<Wide>(y);
    const Wide predicted = scale * static_cast<Wide>(y_hat);
    Wide diff = total - predicted;
    if (diff < 0) diff = -diff;
    return static_cast<double>(diff / total);
}

const ScoreSeries& find_series(std::span<const ScoreSeries> series, ScoreLabel label) {
    for (const auto& s : series) {
        if (s.label == label) return s;
    }
    throw ValidationError("publication scores lack series '" + std::string(to_string(label)) + "'");
}

}  // namespace

CalibrationFit fit_calibration(std::span<const CalibrationPoint> points, std::string area_id, ScoreLabel metric) {
    if (points.size() < kMinCalibrationPoints) {
        throw DegenerateFitError("need at least " + std::to_string(kMinCalibrationPoints) + " points, have " +
                                 std::to_string(points.size()));
    }
    const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                              [](const auto& a, const auto& b) { return a.x < b.x; });
    if (lo->x == hi->x) throw DegenerateFitError("predictor is constant");

    const double n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& p : points) {
        sx += p.x;
        sy += p.y;
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        sxx += (p.x - mx) * (p.x - mx);
        sxy += (p.x - mx) * (p.y - my);
    }
    CalibrationFit fit;
    fit.area_id = std::move(area_id);
    fit.metric = metric;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.n_points = points.size();
    return fit;
}

double mad(std::span<const Residual> units) {
    if (units.empty()) throw Error("MAD of an empty unit list");
    std::vector<double> dev;
    dev.reserve(units.size());
    for (const auto& u : units) dev.push_back(std::abs(u.y - u.y_hat));
    return median(std::move(dev));
}

double mapd(std::span<const SizedResidual> units) {
    if (units.empty()) throw Error("MAPD of an empty unit list");
    std::vector<double> dev;
    dev.reserve(units.size());
    for (const auto& u : units) {
        if (!(u.y > 0.0)) throw ValidationError("MAPD needs positive observed scores, got " + std::to_string(u.y));
        if (u.p == 0) throw ValidationError("MAPD unit with zero publications");
        dev.push_back(scaled_relative_deviation(u.y, u.y_hat, u.p));
    }
    return 100.0 * median(std::move(dev));
}

std::string_view to_string(Level level) noexcept {
    return level == Level::institution ? "institution" : "publication";
}

std::string_view to_string(View view) noexcept {
    return view == View::size_independent ? "size_independent" : "size_dependent";
}

std::string to_string(const StatisticKey& key) {
    return key.area_id + "/" + std::string(to_string(key.metric)) + "/" + std::string(to_string(key.level)) + "/" +
           std::string(to_string(key.view));
}

AgreementResult run_agreement(std::span<const InstitutionAggregate> aggregates, const Corpus& corpus,
                              std::span<const ScoreSeries> publication_series, ScoreLabel baseline,
                              std::span<const ScoreLabel> metrics) {
    AgreementResult result;

    std::unordered_map<std::string_view, const std::string*> area_of;
    area_of.reserve(corpus.records.size());
    for (const auto& r : corpus.records) area_of.emplace(r.pub_id, &r.area_id);

    const ScoreSeries& base = find_series(publication_series, baseline);
    std::set<std::string> areas;
    for (const auto& a : aggregates) areas.insert(a.area_id);
    for (const auto& [id, v] : base.values) {
        const auto it = area_of.find(id);
        if (it == area_of.end()) throw ValidationError("scored publication not in corpus", id);
        areas.insert(*it->second);
    }

    for (ScoreLabel metric : metrics) {
        const ScoreSeries& series = find_series(publication_series, metric);
        if (series.values.size() != base.values.size()) {
            throw ValidationError("series '" + std::string(to_string(metric)) + "' and baseline cover different publications");
        }
        std::map<std::string, std::vector<CalibrationPoint>> pub_points;
        for (auto b = base.values.begin(), m = series.values.begin(); b != base.values.end(); ++b, ++m) {
            if (b->first != m->first) {
                throw ValidationError("series '" + std::string(to_string(metric)) + "' lacks publication", b->first);
            }
            pub_points[*area_of.at(b->first)].push_back({m->second, b->second});
        }

        for (const auto& area : areas) {
            // Institution level: one fit on size-independent means; MAPD reuses it scaled by p.
            std::vector<CalibrationPoint> inst_points;
            std::vector<const InstitutionAggregate*> members;
            for (const auto& a : aggregates) {
                if (a.area_id != area) continue;
                inst_points.push_back({a.mean_score.at(metric), a.mean_score.at(baseline)});
                members.push_back(&a);
            }
            try {
                auto fit = fit_calibration(inst_points, area, metric);
                std::vector<Residual> residuals;
                std::vector<SizedResidual> sized;
                for (std::size_t i = 0; i < inst_points.size(); ++i) {
                    const double y_hat = fit.predict(inst_points[i].x);
                    residuals.push_back({inst_points[i].y, y_hat});
                    sized.push_back({inst_points[i].y, y_hat, members[i]->pub_count});
                }
                result.statistics.push_back(
                    {{area, metric, Level::institution, View::size_independent}, mad(residuals), residuals.size()});
                result.statistics.push_back(
                    {{area, metric, Level::institution, View::size_dependent}, mapd(sized), sized.size()});
                result.institution_fits.push_back(std::move(fit));
            } catch (const DegenerateFitError& e) {
                result.skips.push_back({area, metric, Level::institution, e.what()});
            }

            const auto pts = pub_points.find(area);
            try {
                if (pts == pub_points.end()) throw DegenerateFitError("no publications");
                auto fit = fit_calibration(pts->second, area, metric);
                std::vector<Residual> residuals;
                residuals.reserve(pts->second.size());
                for (const auto& p : pts->second) residuals.push_back({p.y, fit.predict(p.x)});
                result.statistics.push_back(
                    {{area, metric, Level::publication, View::size_independent}, mad(residuals), residuals.size()});
                result.publication_fits.push_back(std::move(fit));
            } catch (const DegenerateFitError& e) {
                result.skips.push_back({area, metric, Level::publication, e.what()});
            }
        }
    }
    std::sort(result.statistics.begin(), result.statistics.end(),
              [](const auto& a, const auto& b) { return a.key < b.key; });
    auto fit_order = [](const CalibrationFit& a, const CalibrationFit& b) {
        return std::tie(a.area_id, a.metric) < std::tie(b.area_id, b.metric);
    };
    std::sort(result.institution_fits.begin(), result.institution_fits.end(), fit_order);
    std::sort(result.publication_fits.begin(), result.publication_fits.end(), fit_order);
    std::sort(result.skips.begin(), result.skips.end(), [](const FitSkip& a, const FitSkip& b) {
        return std::tie(a.area_id, a.metric, a.level) < std::tie(b.area_id, b.metric, b.level);
    });
    return result;
}

}  // namespace peeragree

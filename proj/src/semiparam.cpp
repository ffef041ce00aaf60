#include "qclob/semiparam.hpp"

#include <stdexcept>

#include "qclob/fit.hpp"

namespace qclob {

namespace {

std::optional<TrimmedMoments> try_moments(const EmpiricalDistribution& day, double trim) {
    try {
        TrimmedMoments m = trimmed_moments(day, trim);
        if (!(m.stddev > 0.0)) return std::nullopt;
        return m;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

}  // namespace

SemiParamModel build_semiparam(const std::vector<EmpiricalDistribution>& days,
                               double trim_threshold) {
    if (days.empty()) throw std::invalid_argument("build_semiparam: no days");
    SemiParamModel model;
    model.trim_threshold = trim_threshold;

    std::vector<EmpiricalDistribution> rescaled;
    rescaled.reserve(days.size());
    for (std::size_t d = 0; d < days.size(); ++d) {
        const auto m = try_moments(days[d], trim_threshold);
        if (!m) {
            model.excluded_days.push_back(d);
            continue;
        }
        // z = (x - mu) / sigma
        rescaled.push_back(days[d].affine(-m->mean / m->stddev, 1.0 / m->stddev));
    }
    if (rescaled.empty()) throw std::domain_error("build_semiparam: every day failed trimming");

    std::vector<const EmpiricalDistribution*> parts;
    parts.reserve(rescaled.size());
    for (const auto& r : rescaled) parts.push_back(&r);
    model.pooled = EmpiricalDistribution::pool(parts);
    model.days_used = rescaled.size();
    return model;
}

EmpiricalDistribution apply_semiparam(const SemiParamModel& model, double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("apply_semiparam: sigma must be positive");
    return model.pooled.affine(mu, sigma);
}

EmpiricalDistribution rescaled_rest_ecdf(const std::vector<EmpiricalDistribution>& days,
                                         std::size_t day_index, double trim_threshold) {
    if (days.size() < 2) throw std::invalid_argument("rescaled_rest_ecdf: need at least 2 days");
    if (day_index >= days.size()) throw std::out_of_range("rescaled_rest_ecdf: day index");

    std::vector<EmpiricalDistribution> rest;
    rest.reserve(days.size() - 1);
    for (std::size_t d = 0; d < days.size(); ++d)
        if (d != day_index) rest.push_back(days[d]);
    const SemiParamModel model = build_semiparam(rest, trim_threshold);

    const auto own = try_moments(days[day_index], trim_threshold);
    if (!own) throw std::domain_error("rescaled_rest_ecdf: target day fails trimmed moments");
    return apply_semiparam(model, own->mean, own->stddev);
}

CollapseReport collapse_ratio(const std::vector<EmpiricalDistribution>& days, DistanceKind kind,
                              double trim_threshold) {
    if (days.size() < 2) throw std::invalid_argument("collapse_ratio: need at least 2 days");

    std::vector<std::optional<TrimmedMoments>> moments(days.size());
    for (std::size_t d = 0; d < days.size(); ++d) moments[d] = try_moments(days[d], trim_threshold);

    auto distance = [&](const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
        return kind == DistanceKind::CvM ? cvm_distance(a, b) : ks_distance(a, b);
    };

    CollapseReport report;
    report.kind = kind;
    double ratio_sum = 0.0;
    for (std::size_t d1 = 0; d1 < days.size(); ++d1) {
        for (std::size_t d2 = 0; d2 < days.size(); ++d2) {
            if (d1 == d2) continue;
            PairRatio pair;
            pair.d1 = d1;
            pair.d2 = d2;
            if (!moments[d1] || !moments[d2]) {
                pair.excluded = true;
                report.pairs.push_back(pair);
                ++report.pairs_excluded;
                continue;
            }
            pair.raw_distance = distance(days[d1], days[d2]);
            // Standardize day d2 by its own moments, then invert with day
            // d1's, so the comparison stays in price units.
            const double scale = moments[d1]->stddev / moments[d2]->stddev;
            const EmpiricalDistribution transferred =
                days[d2].affine(moments[d1]->mean - moments[d2]->mean * scale, scale);
            pair.rescaled_distance = distance(days[d1], transferred);
            if (pair.rescaled_distance <= 0.0) {
                pair.excluded = true;
                report.pairs.push_back(pair);
                ++report.pairs_excluded;
                continue;
            }
            pair.ratio = pair.raw_distance / pair.rescaled_distance;
            ratio_sum += pair.ratio;
            ++report.pairs_used;
            report.pairs.push_back(pair);
        }
    }
    if (report.pairs_used == 0)
        throw std::domain_error("collapse_ratio: every ordered pair was excluded");
    report.mean_ratio = ratio_sum / static_cast<double>(report.pairs_used);
    return report;
}

}  // namespace qclob

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qclob/empirical.hpp"

namespace qclob {

enum class DistanceKind : std::uint8_t { CvM, KS };

// Pooled standardized sample: every contributing day rescaled to trimmed
// mean 0 and trimmed standard deviation 1 before aggregation.
struct SemiParamModel {
    EmpiricalDistribution pooled;
    std::size_t days_used = 0;
    std::vector<std::size_t> excluded_days;  // indices whose moments failed
    double trim_threshold = 1000.0;
};

SemiParamModel build_semiparam(const std::vector<EmpiricalDistribution>& days,
                               double trim_threshold);

// De-standardizes the pooled sample with the target day's moments:
// x -> mu + sigma * x.
EmpiricalDistribution apply_semiparam(const SemiParamModel& model, double mu, double sigma);

// The leave-one-out prediction F-hat_{-d}: pool every day except d in
// standardized units, then invert the rescaling with day d's own trimmed
// moments.
EmpiricalDistribution rescaled_rest_ecdf(const std::vector<EmpiricalDistribution>& days,
                                         std::size_t day_index, double trim_threshold);

struct PairRatio {
    std::size_t d1 = 0;
    std::size_t d2 = 0;
    double raw_distance = 0.0;       // C1: between the raw ECDFs
    double rescaled_distance = 0.0;  // C2: after moment transfer d2 -> d1
    double ratio = 0.0;
    bool excluded = false;           // C2 == 0 or moments unavailable
};

struct CollapseReport {
    DistanceKind kind = DistanceKind::CvM;
    double mean_ratio = 0.0;  // C-bar over included ordered pairs
    std::size_t pairs_used = 0;
    std::size_t pairs_excluded = 0;
    std::vector<PairRatio> pairs;
};

// Mean ratio of pre- to post-rescaling distances over all ordered day
// pairs. For each (d1, d2): C1 compares the raw ECDFs; C2 standardizes
// day d2 by its own trimmed moments and de-standardizes with day d1's, so
// both distances are measured in price units. Degenerate pairs (C2 = 0)
// are excluded and reported; throws when no pair survives.
CollapseReport collapse_ratio(const std::vector<EmpiricalDistribution>& days, DistanceKind kind,
                              double trim_threshold);

}  // namespace qclob

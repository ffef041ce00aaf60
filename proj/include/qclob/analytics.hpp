#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qclob/empirical.hpp"
#include "qclob/fft.hpp"
#include "qclob/replay.hpp"

namespace qclob {

// Empirical distribution over signed relative ticks for one flow kind,
// frame, and day. Histogram masses are lots (size-weighted) unless built
// count-weighted; for mean depth the masses are mean resting lots.
struct RelativeDistribution {
    Frame frame = Frame::QuoteRelative;
    FlowKind flow = FlowKind::LimitArrivals;
    std::string day_label;
    bool count_weighted = false;

    std::map<Tick, double> histogram;
    double total_mass = 0.0;
    EmpiricalDistribution ecdf;
    std::optional<TrimmedMoments> moments;  // unset when too few in-range values

    std::vector<WeightedValue> weighted_sample() const;
};

RelativeDistribution relative_distribution(const SessionResult& session, Frame frame,
                                           FlowKind flow, bool count_weighted = false,
                                           std::string day_label = {});

struct FlowAggregate {
    double total_size = 0.0;
    std::uint64_t count = 0;
    std::optional<double> mean_interarrival_s;  // session length / count
    std::optional<Lots> modal_size;             // smallest of the tied modes
    double mean_size = 0.0;
};

struct ActivitySummary {
    bool empty_session = false;
    FlowAggregate limit_orders;
    FlowAggregate market_orders;
    FlowAggregate cancellations;
    double pct_multi_price = 0.0;      // % of market orders filling at >= 2 prices
    double mean_total_resting = 0.0;   // event-time average
    double mean_best_depth = 0.0;      // depth at b(t) plus depth at a(t)
};

ActivitySummary activity_summary(const SessionResult& session);

struct SpreadStats {
    double defined_time_s = 0.0;  // time base: both sides nonempty
    std::optional<Tick> min;
    std::optional<Tick> max;
    std::optional<Tick> median;  // time-weighted lower median
    std::optional<double> mean;  // time-weighted
    double negative_fraction = 0.0;
    std::uint64_t negative_episodes = 0;
    std::optional<double> mean_negative_duration_s;
    std::optional<double> mean_crossed_volume;  // sampled at episode starts
};

SpreadStats spread_stats(const SessionResult& session);

// Queue-consumption ratios h of all market orders with nonzero pre-arrival
// depth at the first matched price.
std::vector<double> queue_consumption_ratios(const SessionResult& session);

struct DecileRow {
    int decile = 0;  // 1..10
    std::size_t count = 0;
    double mean_queue = 0.0;
    double mean_size = 0.0;
};

// Market orders binned into deciles by pre-arrival queue length; empty when
// fewer than 10 market orders have a defined queue.
std::vector<DecileRow> size_vs_queue_deciles(const SessionResult& session);

// Pointwise quotient of cancelled mass over mean depth; ticks with zero
// mean depth are omitted.
std::map<Tick, double> cancellation_ratio(const RelativeDistribution& cancels,
                                          const RelativeDistribution& mean_depth);

// |DFT| of the histogram laid out on a contiguous 1-tick grid with gaps
// zero-filled. Frequencies are cycles per tick.
std::vector<SpectrumPoint> magnitude_spectrum(const std::map<Tick, double>& histogram);

struct EcdfDistancePoint {
    double position = 0.0;
    double difference = 0.0;  // F_d - F_rest
};

// F_d(p) - F_{-d}(p) on the union of both distributions' observed values,
// where F_{-d} pools every day except d.
std::vector<EcdfDistancePoint> ecdf_distance_to_rest(const std::vector<RelativeDistribution>& days,
                                                     std::size_t day_index);

}  // namespace qclob

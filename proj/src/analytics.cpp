#include "qclob/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qclob {

std::vector<WeightedValue> RelativeDistribution::weighted_sample() const {
    std::vector<WeightedValue> out;
    out.reserve(histogram.size());
    for (const auto& [tick, mass] : histogram)
        out.push_back({static_cast<double>(tick), mass});
    return out;
}

RelativeDistribution relative_distribution(const SessionResult& session, Frame frame,
                                           FlowKind flow, bool count_weighted,
                                           std::string day_label) {
    RelativeDistribution dist;
    dist.frame = frame;
    dist.flow = flow;
    dist.day_label = std::move(day_label);
    dist.count_weighted = count_weighted;

    auto add_flow = [&](const std::vector<FlowEvent>& events) {
        for (const auto& e : events) {
            const auto rel = frame == Frame::QuoteRelative ? e.quote_rel : e.trade_rel;
            if (!rel) continue;
            dist.histogram[*rel] += count_weighted ? 1.0 : static_cast<double>(e.size);
        }
    };

    switch (flow) {
        case FlowKind::LimitArrivals:
            add_flow(session.limit_arrivals);
            break;
        case FlowKind::Cancellations:
            add_flow(session.cancellations);
            break;
        case FlowKind::MeanDepth: {
            const auto& sums = frame == Frame::QuoteRelative ? session.depth_sum_quote
                                                             : session.depth_sum_trade;
            if (session.depth_samples > 0)
                for (const auto& [tick, sum] : sums)
                    dist.histogram[tick] = sum / static_cast<double>(session.depth_samples);
            break;
        }
    }

    dist.total_mass = 0.0;
    for (const auto& [tick, mass] : dist.histogram) dist.total_mass += mass;
    dist.ecdf = EmpiricalDistribution(dist.weighted_sample());
    double threshold = static_cast<double>(session.config.trim_ticks);
    if (session.config.trim_mode == TrimMode::Percentile && !dist.histogram.empty()) {
        // threshold at the (100 - p)th weighted percentile of |relative price|
        std::vector<WeightedValue> magnitudes;
        magnitudes.reserve(dist.histogram.size());
        for (const auto& [tick, mass] : dist.histogram)
            magnitudes.push_back({std::abs(static_cast<double>(tick)), mass});
        const EmpiricalDistribution abs_dist(std::move(magnitudes));
        threshold = abs_dist.quantile(1.0 - session.config.trim_percentile / 100.0);
    }
    try {
        dist.moments = trimmed_moments(dist.weighted_sample(), threshold);
    } catch (const std::domain_error&) {
        dist.moments.reset();
    }
    return dist;
}

namespace {

FlowAggregate aggregate_sizes(const std::vector<Lots>& sizes, double session_seconds) {
    FlowAggregate agg;
    agg.count = sizes.size();
    std::map<Lots, std::uint64_t> freq;
    for (Lots s : sizes) {
        agg.total_size += static_cast<double>(s);
        ++freq[s];
    }
    if (agg.count > 0) {
        agg.mean_size = agg.total_size / static_cast<double>(agg.count);
        agg.mean_interarrival_s = session_seconds / static_cast<double>(agg.count);
        std::uint64_t best = 0;
        for (const auto& [size, n] : freq) {
            if (n > best) {
                best = n;
                agg.modal_size = size;
            }
        }
    }
    return agg;
}

}  // namespace

ActivitySummary activity_summary(const SessionResult& session) {
    ActivitySummary out;
    out.empty_session = session.empty_session();
    const double seconds = session.config.session_seconds();

    std::vector<Lots> limit_sizes, cancel_sizes, market_sizes;
    limit_sizes.reserve(session.limit_arrivals.size());
    for (const auto& e : session.limit_arrivals) limit_sizes.push_back(e.size);
    cancel_sizes.reserve(session.cancellations.size());
    for (const auto& e : session.cancellations) cancel_sizes.push_back(e.size);
    market_sizes.reserve(session.market_orders.size());
    std::size_t multi = 0;
    for (const auto& m : session.market_orders) {
        market_sizes.push_back(m.total_size);
        if (m.multi_price) ++multi;
    }

    out.limit_orders = aggregate_sizes(limit_sizes, seconds);
    out.cancellations = aggregate_sizes(cancel_sizes, seconds);
    out.market_orders = aggregate_sizes(market_sizes, seconds);
    if (!session.market_orders.empty())
        out.pct_multi_price =
            100.0 * static_cast<double>(multi) / static_cast<double>(session.market_orders.size());
    if (session.depth_samples > 0) {
        out.mean_total_resting =
            session.resting_size_sum / static_cast<double>(session.depth_samples);
        out.mean_best_depth = session.best_depth_sum / static_cast<double>(session.depth_samples);
    }
    return out;
}

SpreadStats spread_stats(const SessionResult& session) {
    SpreadStats out;
    double defined_ms = 0.0;
    double negative_ms = 0.0;
    double weighted_sum = 0.0;
    std::map<Tick, double> time_at;  // spread value -> ms spent there

    for (const auto& seg : session.spread_segments) {
        if (!seg.spread) continue;
        const double dur = static_cast<double>(seg.end_ms - seg.start_ms);
        if (dur <= 0.0) continue;
        defined_ms += dur;
        weighted_sum += dur * static_cast<double>(*seg.spread);
        time_at[*seg.spread] += dur;
        if (*seg.spread < 0) negative_ms += dur;
        if (!out.min || *seg.spread < *out.min) out.min = *seg.spread;
        if (!out.max || *seg.spread > *out.max) out.max = *seg.spread;
    }
    out.defined_time_s = defined_ms / 1000.0;
    if (defined_ms > 0.0) {
        out.mean = weighted_sum / defined_ms;
        out.negative_fraction = negative_ms / defined_ms;
        double run = 0.0;
        for (const auto& [value, ms] : time_at) {
            run += ms;
            if (run >= defined_ms / 2.0) {
                out.median = value;
                break;
            }
        }
    }

    out.negative_episodes = session.negative_episodes.size();
    if (!session.negative_episodes.empty()) {
        double dur_sum = 0.0, crossed_sum = 0.0;
        for (const auto& ep : session.negative_episodes) {
            dur_sum += static_cast<double>(ep.end_ms - ep.start_ms);
            crossed_sum += static_cast<double>(ep.crossed_at_start);
        }
        const double n = static_cast<double>(session.negative_episodes.size());
        out.mean_negative_duration_s = dur_sum / n / 1000.0;
        out.mean_crossed_volume = crossed_sum / n;
    }
    return out;
}

std::vector<double> queue_consumption_ratios(const SessionResult& session) {
    std::vector<double> out;
    out.reserve(session.market_orders.size());
    for (const auto& m : session.market_orders)
        if (m.h_ratio) out.push_back(*m.h_ratio);
    return out;
}

std::vector<DecileRow> size_vs_queue_deciles(const SessionResult& session) {
    struct Entry {
        Lots queue;
        Lots size;
        std::size_t order;  // stable tie-break by occurrence
    };
    std::vector<Entry> entries;
    for (const auto& m : session.market_orders)
        if (m.queue_before > 0) entries.push_back({m.queue_before, m.total_size, entries.size()});
    if (entries.size() < 10) return {};

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.queue != b.queue ? a.queue < b.queue : a.order < b.order;
    });

    std::vector<DecileRow> rows;
    const std::size_t n = entries.size();
    std::size_t start = 0;
    for (int d = 0; d < 10; ++d) {
        const std::size_t count = n / 10 + (static_cast<std::size_t>(d) < n % 10 ? 1 : 0);
        DecileRow row;
        row.decile = d + 1;
        row.count = count;
        for (std::size_t i = start; i < start + count; ++i) {
            row.mean_queue += static_cast<double>(entries[i].queue);
            row.mean_size += static_cast<double>(entries[i].size);
        }
        if (count > 0) {
            row.mean_queue /= static_cast<double>(count);
            row.mean_size /= static_cast<double>(count);
        }
        rows.push_back(row);
        start += count;
    }
    return rows;
}

std::map<Tick, double> cancellation_ratio(const RelativeDistribution& cancels,
                                          const RelativeDistribution& mean_depth) {
    std::map<Tick, double> out;
    for (const auto& [tick, depth] : mean_depth.histogram) {
        if (depth <= 0.0) continue;
        auto it = cancels.histogram.find(tick);
        out[tick] = (it == cancels.histogram.end() ? 0.0 : it->second) / depth;
    }
    return out;
}

std::vector<SpectrumPoint> magnitude_spectrum(const std::map<Tick, double>& histogram) {
    if (histogram.empty()) return {};
    const Tick lo = histogram.begin()->first;
    const Tick hi = histogram.rbegin()->first;
    std::vector<double> density(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const auto& [tick, mass] : histogram) density[static_cast<std::size_t>(tick - lo)] = mass;
    return magnitude_spectrum(density);
}

std::vector<EcdfDistancePoint> ecdf_distance_to_rest(const std::vector<RelativeDistribution>& days,
                                                     std::size_t day_index) {
    if (days.size() < 2) throw std::invalid_argument("ecdf_distance_to_rest needs >= 2 days");
    if (day_index >= days.size()) throw std::out_of_range("day index");

    std::vector<const EmpiricalDistribution*> rest;
    for (std::size_t i = 0; i < days.size(); ++i)
        if (i != day_index) rest.push_back(&days[i].ecdf);
    const EmpiricalDistribution pooled = EmpiricalDistribution::pool(rest);
    const EmpiricalDistribution& own = days[day_index].ecdf;

    std::vector<double> grid;
    grid.reserve(own.atom_count() + pooled.atom_count());
    for (const auto& a : own.atoms()) grid.push_back(a.value);
    for (const auto& a : pooled.atoms()) grid.push_back(a.value);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<EcdfDistancePoint> out;
    out.reserve(grid.size());
    for (double p : grid) out.push_back({p, own.cdf(p) - pooled.cdf(p)});
    return out;
}

}  // namespace qclob

#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qclob/book.hpp"
#include "qclob/coordinates.hpp"
#include "qclob/ingest.hpp"
#include "qclob/types.hpp"

namespace qclob {

enum class FlowKind : std::uint8_t { LimitArrivals, Cancellations, MeanDepth };

// One limit arrival or cancellation with its relative prices at the event
// instant. Relative prices are taken against the pre-event book state and
// the current trade refs; unavailable references leave the field unset.
struct FlowEvent {
    Millis time_ms = 0;
    Side side = Side::Buy;
    Lots size = 0;
    std::optional<Tick> quote_rel;
    std::optional<Tick> trade_rel;
};

// One grouped market order as replayed.
struct MarketOrderStat {
    Millis time_ms = 0;
    TradeDirection direction = TradeDirection::BuyerInitiated;
    Lots total_size = 0;
    bool multi_price = false;
    Tick first_price = 0;
    Lots queue_before = 0;  // pre-arrival depth at the first matched price
    std::optional<double> h_ratio;  // total_size / queue_before
    std::size_t fill_count = 0;
};

// Piecewise-constant spread trajectory. Zero-length states (overwritten
// within the same millisecond) are dropped.
struct SpreadSegment {
    Millis start_ms = 0;
    Millis end_ms = 0;
    std::optional<Tick> spread;  // unset while a side is empty
};

struct NegativeEpisode {
    Millis start_ms = 0;
    Millis end_ms = 0;
    Lots crossed_at_start = 0;
};

struct SessionResult {
    SessionConfig config;
    EventTime final_event_time = 0;
    std::size_t arrival_count = 0;
    std::size_t departure_count = 0;
    std::size_t skipped_outside_window = 0;

    std::vector<FlowEvent> limit_arrivals;
    std::vector<FlowEvent> cancellations;
    std::vector<MarketOrderStat> market_orders;

    // Depth-profile accumulators: one snapshot per limit arrival, summed
    // per relative tick. Mean depth = sum / depth_samples.
    std::map<Tick, double> depth_sum_quote;
    std::map<Tick, double> depth_sum_trade;
    std::uint64_t depth_samples = 0;

    double resting_size_sum = 0.0;  // same sampling as depth profiles
    double best_depth_sum = 0.0;

    std::vector<SpreadSegment> spread_segments;
    std::vector<NegativeEpisode> negative_episodes;

    BookState final_book;
    TradeRefState final_refs;

    bool empty_session() const { return arrival_count == 0 && market_orders.empty(); }
};

// Reconstructs one session from validated tick and trade streams. Tick
// events drive the book; trade records drive the trade refs and market
// order statistics. At equal timestamps trades are applied first, so
// queue-consumption ratios see the book before the matched orders depart.
SessionResult replay(const std::vector<TickEvent>& ticks, const std::vector<TradeRecord>& trades,
                     const SessionConfig& config);

}  // namespace qclob

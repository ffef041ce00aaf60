#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qclob/types.hpp"

namespace qclob {

// One line of the canonical tick file: a limit order arrival or the
// departure of a previously seen order.
struct TickEvent {
    enum class Kind : std::uint8_t { Arrival, Departure };

    Millis time_ms = 0;
    Kind kind = Kind::Arrival;
    OrderId id = 0;
    // arrival fields; unused on departures
    Side side = Side::Buy;
    Tick price = 0;
    Lots size = 0;

    friend bool operator==(const TickEvent&, const TickEvent&) = default;
};

// One line of the canonical trade file: one (partial) matching.
struct TradeRecord {
    Millis time_ms = 0;
    TradeDirection direction = TradeDirection::BuyerInitiated;
    Tick price = 0;
    Lots size = 0;

    friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

struct ParseIssue {
    std::size_t line = 0;  // 1-based, header is line 1
    std::string message;
};

template <typename Record>
struct ParseResult {
    std::vector<Record> records;
    std::vector<ParseIssue> issues;

    bool ok() const { return issues.empty(); }
};

// Tick file: header `time_ms,kind,order_id,side,price_ticks,size_lots`,
// kind A/D, side B/S. Departures carry three fields. Validates field
// syntax, ranges, nondecreasing timestamps, id uniqueness, and that
// departures reference live orders. Offending lines are reported and
// skipped; parsing continues.
ParseResult<TickEvent> parse_tick_file(std::string_view text);

// Trade file: header `time_ms,direction,price_ticks,size_lots`,
// direction B (buyer-initiated) / S (seller-initiated).
ParseResult<TradeRecord> parse_trade_file(std::string_view text);

// Canonical serializations; parse followed by serialize is byte-identical
// for files in canonical form.
std::string serialize_tick_events(const std::vector<TickEvent>& events);
std::string serialize_trade_records(const std::vector<TradeRecord>& records);

enum class TrimMode : std::uint8_t { Ticks, Percentile };

// Flat key=value session parameters.
struct SessionConfig {
    double tick_size = 0.00001;
    double lot_size = 0.01;
    Millis session_open_ms = 28800000;   // 08:00:00.000
    Millis session_close_ms = 61200000;  // 17:00:00.000, inclusive
    Millis group_window_ms = 1;
    Tick trim_ticks = 1000;
    // moment trimming: fixed tick threshold, or everything beyond the
    // top trim_percentile of absolute relative prices
    TrimMode trim_mode = TrimMode::Ticks;
    double trim_percentile = 1.0;

    double session_seconds() const {
        return static_cast<double>(session_close_ms - session_open_ms) / 1000.0;
    }

    static SessionConfig parse(std::string_view text, std::vector<ParseIssue>& issues);
    std::string serialize() const;
};

// Counts limit order arrivals; the first arrival of a session has
// event_time 1. Reset per trading day.
struct EventClock {
    EventTime event_time = 0;

    void on_arrival() { ++event_time; }
    void reset() { event_time = 0; }
};

// Trade records of the same direction whose consecutive gaps are at most
// the grouping window, merged into one market order.
struct MarketOrderGroup {
    TradeDirection direction = TradeDirection::BuyerInitiated;
    Millis first_time = 0;
    Millis last_time = 0;
    Lots total_size = 0;
    std::vector<TradeRecord> fills;
    bool multi_price = false;
};

std::vector<MarketOrderGroup> group_market_orders(const std::vector<TradeRecord>& trades,
                                                  Millis window_ms = 1);

enum class DepartureLabel : std::uint8_t { Cancellation };

struct DepartureClassification {
    OrderId id = 0;
    Millis time_ms = 0;
    DepartureLabel label = DepartureLabel::Cancellation;
};

// Labels every departure a cancellation. The tick data cannot distinguish
// matched departures from cancellations, so flow statistics adopt the
// all-cancellations convention; the label is recorded so downstream
// reports can state it.
std::vector<DepartureClassification> classify_departures(const std::vector<TickEvent>& ticks,
                                                         const std::vector<TradeRecord>& trades);

}  // namespace qclob

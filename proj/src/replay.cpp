#include "qclob/replay.hpp"

#include <cassert>
#include <stdexcept>

namespace qclob {

namespace {

class SpreadTracker {
public:
    explicit SpreadTracker(SessionResult& out) : out_(out) {}

    // Called after every book mutation at `now`.
    void on_state(Millis now, std::optional<Tick> spread, const BookState& book) {
        if (current_ && *current_ == spread) return;
        close_segment(now);
        segment_start_ = now;
        current_ = spread;
        const bool negative = spread && *spread < 0;
        if (negative && !in_negative_) {
            in_negative_ = true;
            episode_start_ = now;
            episode_crossed_ = book.crossed_volume();
        } else if (!negative && in_negative_) {
            end_episode(now);
        }
    }

    void finish(Millis close) {
        close_segment(close);
        if (in_negative_) end_episode(close);
    }

private:
    void close_segment(Millis now) {
        if (!current_init_()) return;
        if (now > segment_start_)
            out_.spread_segments.push_back({segment_start_, now, *current_});
    }

    bool current_init_() const { return current_.has_value(); }

    void end_episode(Millis now) {
        in_negative_ = false;
        if (now > episode_start_)
            out_.negative_episodes.push_back({episode_start_, now, episode_crossed_});
    }

    SessionResult& out_;
    Millis segment_start_ = 0;
    // outer optional: tracker initialized; inner: spread defined
    std::optional<std::optional<Tick>> current_;
    bool in_negative_ = false;
    Millis episode_start_ = 0;
    Lots episode_crossed_ = 0;
};

void sample_depth(SessionResult& out, const BookState& book, const TradeRefState& refs) {
    ++out.depth_samples;
    out.resting_size_sum += static_cast<double>(book.total_resting());

    const auto b = book.best_bid();
    const auto a = book.best_ask();
    double best_depth = 0.0;
    if (b) best_depth += static_cast<double>(book.depth_at(Side::Buy, *b));
    if (a) best_depth += static_cast<double>(book.depth_at(Side::Sell, *a));
    out.best_depth_sum += best_depth;

    for (const auto& [price, level] : book.bids()) {
        Lots depth = 0;
        for (const auto& r : level) depth += r.remaining;
        if (b) out.depth_sum_quote[*b - price] += static_cast<double>(depth);
        if (refs.B) out.depth_sum_trade[*refs.B - price] += static_cast<double>(depth);
    }
    for (const auto& [price, level] : book.asks()) {
        Lots depth = 0;
        for (const auto& r : level) depth += r.remaining;
        if (a) out.depth_sum_quote[price - *a] += static_cast<double>(depth);
        if (refs.A) out.depth_sum_trade[price - *refs.A] += static_cast<double>(depth);
    }
}

}  // namespace

SessionResult replay(const std::vector<TickEvent>& ticks, const std::vector<TradeRecord>& trades,
                     const SessionConfig& config) {
    SessionResult out;
    out.config = config;
    const Millis open = config.session_open_ms;
    const Millis close = config.session_close_ms;

    // Map each trade record to its market-order group so group statistics
    // can be snapshotted when the group's first in-window fill is reached.
    const auto groups = group_market_orders(trades, config.group_window_ms);
    std::vector<std::size_t> group_of(trades.size());
    {
        std::size_t record = 0;
        for (std::size_t g = 0; g < groups.size(); ++g)
            for (std::size_t k = 0; k < groups[g].fills.size(); ++k) group_of[record++] = g;
    }
    std::vector<std::optional<MarketOrderStat>> group_stats(groups.size());

    BookState book;
    TradeRefState refs;
    EventClock clock;
    SpreadTracker spread_tracker(out);
    spread_tracker.on_state(open, std::nullopt, book);

    std::size_t ti = 0;  // index into ticks
    std::size_t ri = 0;  // index into trade records

    auto process_trade_record = [&](std::size_t index) {
        const TradeRecord& fill = trades[index];
        if (fill.time_ms < open || fill.time_ms > close) {
            ++out.skipped_outside_window;
            return;
        }
        auto& stat = group_stats[group_of[index]];
        if (!stat) {
            stat.emplace();
            stat->direction = fill.direction;
            stat->multi_price = groups[group_of[index]].multi_price;
            stat->time_ms = fill.time_ms;
            stat->first_price = fill.price;
            const Side passive =
                fill.direction == TradeDirection::BuyerInitiated ? Side::Sell : Side::Buy;
            stat->queue_before = book.depth_at(passive, fill.price);
        }
        stat->total_size += fill.size;
        ++stat->fill_count;
        refs = update_refs(refs, fill.direction, fill.price);
    };

    auto process_tick = [&](const TickEvent& e) {
        if (e.time_ms < open || e.time_ms > close) {
            ++out.skipped_outside_window;
            return;
        }
        if (e.kind == TickEvent::Kind::Arrival) {
            FlowEvent flow;
            flow.time_ms = e.time_ms;
            flow.side = e.side;
            flow.size = e.size;
            if (auto q = quote_relative(e.price, e.side, book.best_bid(), book.best_ask()))
                flow.quote_rel = q->value;
            if (auto t = trade_relative(e.price, e.side, refs)) flow.trade_rel = t->value;

            clock.on_arrival();
            ++out.arrival_count;
            Order order = Order::make(e.id, 0, e.side, e.price, e.size, clock.event_time, e.time_ms);
            if (!book.insert(order, e.size))
                throw std::invalid_argument("replay: duplicate order id in validated input");
            out.limit_arrivals.push_back(flow);
            sample_depth(out, book, refs);
        } else {
            const RestingOrder* resting = book.find(e.id);
            if (!resting)
                throw std::invalid_argument("replay: departure of unknown id in validated input");
            FlowEvent flow;
            flow.time_ms = e.time_ms;
            flow.side = resting->order.side();
            flow.size = resting->remaining;
            if (auto q = quote_relative(resting->order.price, flow.side, book.best_bid(),
                                        book.best_ask()))
                flow.quote_rel = q->value;
            if (auto t = trade_relative(resting->order.price, flow.side, refs))
                flow.trade_rel = t->value;
            book.remove(e.id);
            ++out.departure_count;
            out.cancellations.push_back(flow);
        }
        spread_tracker.on_state(e.time_ms, book.spread(), book);
    };

    while (ti < ticks.size() || ri < trades.size()) {
        const bool have_tick = ti < ticks.size();
        const bool have_trade = ri < trades.size();
        // Trades first at equal timestamps.
        if (have_trade && (!have_tick || trades[ri].time_ms <= ticks[ti].time_ms)) {
            process_trade_record(ri++);
        } else {
            process_tick(ticks[ti++]);
        }
    }

    for (auto& stat : group_stats) {
        if (!stat) continue;
        if (stat->queue_before > 0)
            stat->h_ratio =
                static_cast<double>(stat->total_size) / static_cast<double>(stat->queue_before);
        out.market_orders.push_back(*stat);
    }

    spread_tracker.finish(close);
    out.final_event_time = clock.event_time;
    out.final_book = std::move(book);
    out.final_refs = refs;
    return out;
}

}  // namespace qclob

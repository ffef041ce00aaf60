#include "qclob/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "qclob/rng.hpp"

namespace qclob {

std::vector<std::string> GeneratorSpec::validate() const {
    std::vector<std::string> issues;
    if (institutions < 2) issues.push_back("institutions: need at least 2");
    if (!(arrival_rate > 0.0)) issues.push_back("arrival_rate: must be positive");
    if (cancel_rate < 0.0) issues.push_back("cancel_rate: must be non-negative");
    if (market_rate < 0.0) issues.push_back("market_rate: must be non-negative");
    if (!(day_sigma > 0.0)) issues.push_back("day_sigma: must be positive");
    if (round_lot < 1) issues.push_back("round_lot: must be at least 1 lot");
    if (round_weight < 0.0 || round_weight > 1.0) issues.push_back("round_weight: must lie in [0,1]");
    if (full_consume_prob < 0.0 || full_consume_prob > 1.0)
        issues.push_back("full_consume_prob: must lie in [0,1]");
    if (multi_price_prob < 0.0 || multi_price_prob > 1.0)
        issues.push_back("multi_price_prob: must lie in [0,1]");
    if (initial_price < 1) issues.push_back("initial_price: must be positive");
    if (initial_half_spread < 1) issues.push_back("initial_half_spread: must be positive");
    if (session_close_ms <= session_open_ms)
        issues.push_back("session_close_ms: must exceed session_open_ms");
    try {
        base_law.validate();
    } catch (const std::exception& e) {
        issues.push_back(std::string("base_law: ") + e.what());
    }
    if (ccl_rule == CclRule::Explicit) {
        if (explicit_ccls.empty()) issues.push_back("explicit_ccls: empty for explicit rule");
        for (const auto& c : explicit_ccls) {
            if (c.from == c.to) issues.push_back("explicit_ccls: self-limit entry");
            if (c.from < 0 || c.from >= institutions || c.to < 0 || c.to >= institutions)
                issues.push_back("explicit_ccls: institution out of range");
            if (c.limit && *c.limit < 0) issues.push_back("explicit_ccls: negative limit");
        }
    }
    return issues;
}

bool GroundTruth::matches_book(const BookState& book) const {
    using Key = std::pair<Tick, int>;
    std::map<Key, std::multiset<std::pair<OrderId, Lots>>> expected, actual;
    for (const auto& e : final_book)
        expected[{e.price, e.side == Side::Buy ? 0 : 1}].insert({e.id, e.size});
    book.for_each([&](const RestingOrder& r) {
        actual[{r.order.price, r.order.side() == Side::Buy ? 0 : 1}].insert(
            {r.order.id, r.remaining});
    });
    return expected == actual;
}

namespace {

CreditMatrix build_credit(const GeneratorSpec& spec, Rng& rng) {
    CreditMatrix credit;
    for (InstitutionId i = 0; i < spec.institutions; ++i) credit.register_institution(i);
    switch (spec.ccl_rule) {
        case CclRule::AllInfinite:
            for (InstitutionId i = 0; i < spec.institutions; ++i)
                for (InstitutionId j = 0; j < spec.institutions; ++j)
                    if (i != j) credit.set_limit(i, j, CreditAmount::unlimited());
            break;
        case CclRule::CorePeriphery: {
            // A clique of creditworthy institutions plus peripherals that can
            // reach exactly one core partner with a finite limit.
            const InstitutionId core = std::max<InstitutionId>(2, spec.institutions / 2);
            for (InstitutionId i = 0; i < core; ++i)
                for (InstitutionId j = 0; j < core; ++j)
                    if (i != j) credit.set_limit(i, j, CreditAmount::unlimited());
            for (InstitutionId p = core; p < spec.institutions; ++p) {
                const InstitutionId partner = static_cast<InstitutionId>(
                    rng.uniform_int(0, core - 1));
                const Lots limit = rng.uniform_int(50, 400);
                credit.set_limit(p, partner, CreditAmount::unlimited());
                credit.set_limit(partner, p, CreditAmount(limit));
            }
            break;
        }
        case CclRule::Explicit:
            for (const auto& c : spec.explicit_ccls)
                credit.set_limit(c.from, c.to,
                                 c.limit ? CreditAmount(*c.limit) : CreditAmount::unlimited());
            break;
    }
    return credit;
}

class SessionBuilder {
public:
    SessionBuilder(const GeneratorSpec& spec, std::uint64_t seed)
        : spec_(spec), rng_(seed) {
        credit_ = build_credit(spec, rng_);
        out_.truth.seed = seed;
        out_.truth.day_mu = spec.day_mu;
        out_.truth.day_sigma = spec.day_sigma;
    }

    GeneratedSession run() {
        const double total_rate = spec_.arrival_rate + spec_.cancel_rate + spec_.market_rate;
        Millis now = spec_.session_open_ms;
        std::uint64_t steps = 0;
        for (;;) {
            const double gap_s = rng_.exponential(total_rate);
            const Millis gap = std::max<Millis>(1, std::llround(gap_s * 1000.0));
            now += gap;
            if (now > spec_.session_close_ms) break;
            if (spec_.max_events && steps >= *spec_.max_events) break;
            ++steps;

            const double pick = rng_.uniform() * total_rate;
            if (pick < spec_.arrival_rate) {
                do_arrival(now);
            } else if (pick < spec_.arrival_rate + spec_.cancel_rate) {
                do_cancel(now);
            } else {
                do_market(now);
            }
        }
        finalize();
        return std::move(out_);
    }

private:
    Lots draw_size() {
        if (rng_.bernoulli(spec_.round_weight)) {
            const Lots mult = rng_.bernoulli(0.8) ? 1 : rng_.uniform_int(2, 5);
            return spec_.round_lot * mult;
        }
        return rng_.uniform_int(1, 2 * spec_.round_lot);
    }

    // Reference price the draw is anchored from; unset before the first
    // trade of the relevant direction (trade frame) or while the side is
    // empty (quote frame).
    std::optional<Tick> anchor_for(Side side) const {
        if (spec_.anchor_frame == Frame::TradeRelative)
            return side == Side::Buy ? refs_.B : refs_.A;
        return side == Side::Buy ? book_.best_bid() : book_.best_ask();
    }

    // Tightest opposite-side price the owner could trade against: visible
    // counterparty orders plus the owner's own resting orders. Prices at or
    // through this bound would match or cross what the owner can see.
    std::optional<Tick> marketable_bound(InstitutionId owner, Side side) const {
        std::optional<Tick> bound;
        auto consider = [&](Tick price) {
            if (!bound || (side == Side::Buy ? price < *bound : price > *bound)) bound = price;
        };
        auto scan = [&](const auto& levels) {
            for (const auto& [price, level] : levels) {
                for (const auto& r : level) {
                    if (r.order.owner == owner) {
                        consider(price);
                        return true;
                    }
                    if (spec_.mode == MatchMode::Centralized ||
                        !credit_.headroom(owner, r.order.owner).is_zero()) {
                        consider(price);
                        return true;
                    }
                }
            }
            return false;
        };
        if (side == Side::Buy)
            scan(book_.asks());
        else
            scan(book_.bids());
        return bound;
    }

    void do_arrival(Millis now) {
        const auto owner = static_cast<InstitutionId>(rng_.uniform_int(0, spec_.institutions - 1));
        const Side side = rng_.bernoulli(0.5) ? Side::Buy : Side::Sell;
        const double z = gent_draw(spec_.base_law, rng_);
        const Tick rel = std::llround(spec_.day_mu + spec_.day_sigma * z);

        const auto anchor = anchor_for(side);
        const Tick base = anchor ? *anchor
                                 : (side == Side::Buy ? spec_.initial_price - spec_.initial_half_spread
                                                      : spec_.initial_price + spec_.initial_half_spread);
        Tick price = side == Side::Buy ? base - rel : base + rel;
        if (price < 1) price = 1;

        // Keep generated limit orders passive with respect to everything the
        // owner could actually hit; trades come only from market events.
        bool clamped = false;
        if (const auto bound = marketable_bound(owner, side)) {
            if (side == Side::Buy && price >= *bound) {
                price = *bound - 1;
                clamped = true;
            } else if (side == Side::Sell && price <= *bound) {
                price = *bound + 1;
                clamped = true;
            }
        }
        if (price < 1) return;  // no room below the bound

        const Lots size = draw_size();
        const OrderId id = next_id_++;
        const auto outcome =
            submit(book_, credit_, Order::make(id, owner, side, price, size, 0, now), spec_.mode);
        if (!outcome.accepted() || !outcome.trades.empty() || !outcome.residual)
            throw std::logic_error("generator arrival unexpectedly traded");

        add_live(id);
        out_.ticks.push_back({now, TickEvent::Kind::Arrival, id, side, price, size});
        ++out_.truth.emitted_arrivals;
        ++out_.truth.generated_limit_orders;
        if (anchor && !clamped) out_.truth.anchored_rel_draws.push_back(rel);
    }

    void do_cancel(Millis now) {
        if (live_.empty()) return;
        const std::size_t k = static_cast<std::size_t>(
            rng_.uniform_int(0, static_cast<std::int64_t>(live_.size()) - 1));
        const OrderId engine_id = live_[k];
        remove_live_at(k);
        if (!cancel(book_, engine_id)) throw std::logic_error("generator lost a live order");
        const OrderId rep = reported_.at(engine_id);
        reported_.erase(engine_id);
        emit_departure(now, rep, DepartureCause::Cancelled);
    }

    // Lots the taker can actually fill at one price level: per owner, the
    // smaller of the resting size and the headroom left after the fills
    // already planned against that owner.
    Lots fillable_at(InstitutionId taker, Side passive, Tick price,
                     std::map<InstitutionId, Lots>& planned) const {
        const auto& levels_bids = book_.bids();
        const auto& levels_asks = book_.asks();
        const BookState::Level* level = nullptr;
        if (passive == Side::Buy) {
            auto it = levels_bids.find(price);
            if (it != levels_bids.end()) level = &it->second;
        } else {
            auto it = levels_asks.find(price);
            if (it != levels_asks.end()) level = &it->second;
        }
        if (!level) return 0;
        std::map<InstitutionId, Lots> resting_per_owner;
        for (const auto& r : *level)
            if (r.order.owner != taker) resting_per_owner[r.order.owner] += r.remaining;
        Lots total = 0;
        for (const auto& [owner, resting] : resting_per_owner) {
            Lots can = resting;
            if (spec_.mode == MatchMode::Qclob) {
                const CreditAmount room = credit_.headroom(taker, owner).minus(planned[owner]);
                can = room.cap(can);
            }
            planned[owner] += can;
            total += can;
        }
        return total;
    }

    void do_market(Millis& now) {
        const auto taker = static_cast<InstitutionId>(rng_.uniform_int(0, spec_.institutions - 1));
        const Side side = rng_.bernoulli(0.5) ? Side::Buy : Side::Sell;

        // First price level holding an order this taker can fill.
        std::optional<Tick> first_price;
        auto find_first = [&](const auto& levels) {
            for (const auto& [price, level] : levels) {
                for (const auto& r : level) {
                    if (r.order.owner == taker) continue;
                    if (spec_.mode == MatchMode::Qclob &&
                        credit_.headroom(taker, r.order.owner).is_zero())
                        continue;
                    first_price = price;
                    return;
                }
            }
        };
        if (side == Side::Buy)
            find_first(book_.asks());
        else
            find_first(book_.bids());
        if (!first_price) return;  // nothing tradable for this taker

        // Keep trade groups separated: grouping joins same-direction fills
        // with gaps at most the grouping window.
        if (last_trade_ms_ >= 0 && now - last_trade_ms_ < 2) now = last_trade_ms_ + 2;
        if (now > spec_.session_close_ms) return;

        const Side passive = opposite(side);
        const Lots q1 = book_.depth_at(passive, *first_price);
        std::map<InstitutionId, Lots> planned;
        const Lots fillable1 = fillable_at(taker, passive, *first_price, planned);
        if (fillable1 < 1) return;

        // Sized against what the taker can reach, so the order never leaves
        // a residue resting through its own or invisible liquidity.
        Tick limit_price = *first_price;
        Lots size;
        if (rng_.bernoulli(spec_.full_consume_prob)) {
            size = fillable1;
        } else {
            const double h = rng_.uniform(0.05, 1.0);
            size = std::clamp<Lots>(std::llround(h * static_cast<double>(q1)), 1, fillable1);
        }
        if (rng_.bernoulli(spec_.multi_price_prob)) {
            // Price through the adjacent level as well.
            std::optional<Tick> second;
            auto find_second = [&](const auto& levels) {
                for (const auto& [price, level] : levels)
                    if (side == Side::Buy ? price > *first_price : price < *first_price) {
                        second = price;
                        return;
                    }
            };
            if (side == Side::Buy)
                find_second(book_.asks());
            else
                find_second(book_.bids());
            if (second) {
                const Lots q2 = book_.depth_at(passive, *second);
                const Lots fillable2 = fillable_at(taker, passive, *second, planned);
                if (fillable2 >= 1) {
                    limit_price = *second;
                    size = fillable1 +
                           std::clamp<Lots>(std::llround(rng_.uniform(0.05, 1.0) *
                                                         static_cast<double>(q2)),
                                            1, fillable2);
                }
            }
        }

        const OrderId id = next_id_++;
        const auto outcome = submit(
            book_, credit_, Order::make(id, taker, side, limit_price, size, 0, now), spec_.mode);
        if (!outcome.accepted()) throw std::logic_error("generator market order rejected");
        if (outcome.trades.empty()) return;  // eligibility shifted; no-op
        if (outcome.residual)
            throw std::logic_error("generator market order unexpectedly rested");

        for (const auto& trade : outcome.trades) {
            out_.trades.push_back({now,
                                   side == Side::Buy ? TradeDirection::BuyerInitiated
                                                     : TradeDirection::SellerInitiated,
                                   trade.price, trade.size});
            refs_ = update_refs(refs_, out_.trades.back().direction, trade.price);
            handle_maker_fill(now, trade.maker_order);
        }
        last_trade_ms_ = now;
        ++out_.truth.market_order_groups;
        out_.truth.market_h_values.push_back(static_cast<double>(sum_trades(outcome)) /
                                             static_cast<double>(q1));
    }

    static Lots sum_trades(const SubmitOutcome& outcome) {
        Lots total = 0;
        for (const auto& t : outcome.trades) total += t.size;
        return total;
    }

    // After a fill the maker either departed (fully matched) or remains
    // with a reduced size. The emitted stream reports the reduction as a
    // departure plus re-arrival under a fresh id, which keeps the tick file
    // a complete record of the book.
    void handle_maker_fill(Millis now, OrderId maker_engine_id) {
        auto rep_it = reported_.find(maker_engine_id);
        if (rep_it == reported_.end()) return;  // already handled this event
        const OrderId rep = rep_it->second;
        const RestingOrder* still = book_.find(maker_engine_id);
        if (!still) {
            drop_live(maker_engine_id);
            reported_.erase(rep_it);
            emit_departure(now, rep, DepartureCause::FullyMatched);
            return;
        }
        emit_departure(now, rep, DepartureCause::PartialFillReissue);
        const OrderId fresh = next_id_++;
        rep_it->second = fresh;
        out_.ticks.push_back({now, TickEvent::Kind::Arrival, fresh,
                              still->order.side(), still->order.price, still->remaining});
        ++out_.truth.emitted_arrivals;
    }

    void add_live(OrderId engine_id) {
        live_pos_[engine_id] = live_.size();
        live_.push_back(engine_id);
        reported_[engine_id] = engine_id;
    }

    void remove_live_at(std::size_t k) {
        live_pos_.erase(live_[k]);
        if (k + 1 != live_.size()) {
            live_[k] = live_.back();
            live_pos_[live_[k]] = k;
        }
        live_.pop_back();
    }

    void drop_live(OrderId engine_id) {
        auto it = live_pos_.find(engine_id);
        if (it != live_pos_.end()) remove_live_at(it->second);
    }

    void emit_departure(Millis now, OrderId reported_id, DepartureCause cause) {
        out_.ticks.push_back({now, TickEvent::Kind::Departure, reported_id, Side::Buy, 0, 0});
        ++out_.truth.emitted_departures;
        out_.truth.departure_causes[reported_id] = cause;
    }

    void finalize() {
        book_.for_each([&](const RestingOrder& r) {
            out_.truth.final_book.push_back({reported_.at(r.order.id), r.order.owner,
                                             r.order.side(), r.order.price, r.remaining});
        });
    }

    const GeneratorSpec& spec_;
    Rng rng_;
    CreditMatrix credit_;
    BookState book_;
    TradeRefState refs_;
    GeneratedSession out_;
    OrderId next_id_ = 1;
    Millis last_trade_ms_ = -1;
    std::vector<OrderId> live_;  // engine ids of cancellable orders
    std::unordered_map<OrderId, std::size_t> live_pos_;
    std::unordered_map<OrderId, OrderId> reported_;  // engine id -> reported id
};

}  // namespace

GeneratedSession generate_session(const GeneratorSpec& spec, int day_index) {
    const auto issues = spec.validate();
    if (!issues.empty()) throw std::invalid_argument("invalid generator spec: " + issues.front());
    SessionBuilder builder(spec, derive_seed(spec.seed, static_cast<std::uint64_t>(day_index)));
    return builder.run();
}

std::vector<GeneratedSession> generate_family(const GeneratorSpec& spec,
                                              const std::vector<DayParams>& schedule) {
    if (schedule.size() < 1) throw std::invalid_argument("generate_family: empty schedule");
    std::vector<GeneratedSession> out;
    out.reserve(schedule.size());
    for (std::size_t d = 0; d < schedule.size(); ++d) {
        GeneratorSpec day_spec = spec;
        day_spec.day_mu = schedule[d].mu;
        day_spec.day_sigma = schedule[d].sigma;
        out.push_back(generate_session(day_spec, static_cast<int>(d)));
    }
    return out;
}

}  // namespace qclob

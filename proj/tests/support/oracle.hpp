#pragma once

// Reference implementations kept independent of the engine under test.
// The matcher rescans the whole book for the best eligible order before
// every fill instead of walking level queues.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "qclob/book.hpp"
#include "qclob/credit.hpp"
#include "qclob/types.hpp"

namespace qclob::testing {

struct FlatOrder {
    Order order;
    Lots remaining = 0;
    std::uint64_t seq = 0;
};

class BruteForceBook {
public:
    struct Outcome {
        bool accepted = true;
        std::vector<Trade> trades;
        std::optional<Order> residual;
    };

    Outcome submit(CreditMatrix& credit, const Order& order, MatchMode mode) {
        Outcome out;
        for (const auto& r : resting_) {
            if (r.order.id == order.id) {
                out.accepted = false;
                return out;
            }
        }
        if (mode == MatchMode::Qclob && !credit.is_registered(order.owner)) {
            out.accepted = false;
            return out;
        }

        Lots remaining = order.size();
        while (remaining > 0) {
            // Full rescan: best price first, then earliest arrival.
            FlatOrder* best = nullptr;
            for (auto& r : resting_) {
                if (r.order.side() == order.side()) continue;
                if (r.order.owner == order.owner) continue;
                const bool compatible = order.side() == Side::Buy
                                            ? r.order.price <= order.price
                                            : r.order.price >= order.price;
                if (!compatible) continue;
                if (mode == MatchMode::Qclob &&
                    credit.headroom(order.owner, r.order.owner).is_zero())
                    continue;
                if (!best) {
                    best = &r;
                    continue;
                }
                const bool better_price = order.side() == Side::Buy
                                              ? r.order.price < best->order.price
                                              : r.order.price > best->order.price;
                if (better_price ||
                    (r.order.price == best->order.price && r.seq < best->seq))
                    best = &r;
            }
            if (!best) break;

            Lots fill = std::min(remaining, best->remaining);
            if (mode == MatchMode::Qclob)
                fill = credit.headroom(order.owner, best->order.owner).cap(fill);
            out.trades.push_back(Trade{order.calendar_time, best->order.price, fill,
                                       order.side() == Side::Buy
                                           ? TradeDirection::BuyerInitiated
                                           : TradeDirection::SellerInitiated,
                                       best->order.owner, order.owner, best->order.id, order.id});
            if (mode == MatchMode::Qclob)
                credit.add_exposure(order.owner, best->order.owner, fill);
            remaining -= fill;
            best->remaining -= fill;
            if (best->remaining == 0)
                resting_.erase(resting_.begin() + (best - resting_.data()));
        }

        if (remaining > 0) {
            Order residual = order;
            residual.signed_size = order.side() == Side::Buy ? -remaining : remaining;
            resting_.push_back({residual, remaining, next_seq_++});
            out.residual = residual;
        }
        return out;
    }

    bool cancel(OrderId id) {
        for (std::size_t i = 0; i < resting_.size(); ++i) {
            if (resting_[i].order.id == id) {
                resting_.erase(resting_.begin() + static_cast<std::ptrdiff_t>(i));
                return true;
            }
        }
        return false;
    }

    const std::vector<FlatOrder>& resting() const { return resting_; }

private:
    std::vector<FlatOrder> resting_;
    std::uint64_t next_seq_ = 0;
};

// (side, price) -> (id, remaining) in queue order; comparable across the
// engine and the flat reference book.
using LevelDump = std::map<std::pair<int, Tick>, std::vector<std::pair<OrderId, Lots>>>;

inline LevelDump level_dump(const BruteForceBook& book) {
    std::map<std::pair<int, Tick>, std::vector<std::tuple<std::uint64_t, OrderId, Lots>>> tmp;
    for (const auto& r : book.resting())
        tmp[{r.order.side() == Side::Buy ? 0 : 1, r.order.price}].push_back(
            {r.seq, r.order.id, r.remaining});
    LevelDump out;
    for (auto& [key, v] : tmp) {
        std::sort(v.begin(), v.end());
        for (const auto& [seq, id, rem] : v) out[key].push_back({id, rem});
    }
    return out;
}

inline LevelDump level_dump(const BookState& book) {
    LevelDump out;
    book.for_each([&](const RestingOrder& r) {
        out[{r.order.side() == Side::Buy ? 0 : 1, r.order.price}].push_back(
            {r.order.id, r.remaining});
    });
    return out;
}

}  // namespace qclob::testing

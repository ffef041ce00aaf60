#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "qclob/credit.hpp"
#include "qclob/types.hpp"

namespace qclob {

enum class MatchMode : std::uint8_t { Centralized, Qclob };

class BookState;
struct SubmitOutcome;
SubmitOutcome submit(BookState& book, CreditMatrix& credit, const Order& order, MatchMode mode);

struct RestingOrder {
    Order order;          // as submitted
    Lots remaining = 0;   // lots still resting
    std::uint64_t seq = 0;  // arrival sequence, FIFO tie-break within a price

    friend bool operator==(const RestingOrder&, const RestingOrder&) = default;
};

// Price-ordered queues of resting orders, FIFO within a price level.
// Best level first on both sides.
class BookState {
public:
    using Level = std::list<RestingOrder>;
    using BidMap = std::map<Tick, Level, std::greater<Tick>>;
    using AskMap = std::map<Tick, Level, std::less<Tick>>;

    std::optional<Tick> best_bid() const;
    std::optional<Tick> best_ask() const;
    std::optional<Tick> spread() const;     // a(t) - b(t)
    std::optional<double> mid() const;      // [b(t) + a(t)] / 2

    Lots depth_at(Side side, Tick price) const;
    Lots total_resting() const { return total_resting_; }

    // Total size of sell orders priced below b(t) plus buy orders priced
    // above a(t); 0 whenever the book is not crossed or a side is empty.
    Lots crossed_volume() const;

    bool contains(OrderId id) const { return index_.find(id) != index_.end(); }
    const RestingOrder* find(OrderId id) const;

    const BidMap& bids() const { return bids_; }
    const AskMap& asks() const { return asks_; }

    // Inserts at the back of its price level. Fails on duplicate id.
    bool insert(const Order& order, Lots remaining);

    // Removes an order outright; returns it, or nullopt for unknown ids.
    std::optional<RestingOrder> remove(OrderId id);

    // Consumes lots from a resting order; erases it when exhausted.
    // Returns the order's state before consumption.
    RestingOrder consume(OrderId id, Lots fill);

    void for_each(const std::function<void(const RestingOrder&)>& fn) const;

    friend bool operator==(const BookState& a, const BookState& b) {
        return a.bids_ == b.bids_ && a.asks_ == b.asks_;
    }

private:
    struct Locator {
        Side side;
        Tick price;
        Level::iterator pos;
    };

    friend SubmitOutcome submit(BookState&, CreditMatrix&, const Order&, MatchMode);

    BidMap bids_;
    AskMap asks_;
    std::unordered_map<OrderId, Locator> index_;
    std::uint64_t next_seq_ = 0;
    Lots total_resting_ = 0;
};

// Credit-filtered view of the book for one institution. Each other owner's
// order is truncated to the current bilateral headroom; invisible orders
// are dropped. The viewer's own orders are listed separately.
struct LocalBookView {
    struct VisibleOrder {
        OrderId id;
        InstitutionId owner;
        Tick price;
        Lots visible_size;
    };

    InstitutionId viewer = 0;
    std::vector<VisibleOrder> bids;  // best first
    std::vector<VisibleOrder> asks;  // best first
    std::vector<RestingOrder> own_orders;

    std::optional<Tick> local_bid() const;
    std::optional<Tick> local_ask() const;
    std::optional<Tick> local_spread() const;
    std::optional<double> local_mid() const;
};

LocalBookView local_book(const BookState& book, const CreditMatrix& credit, InstitutionId viewer);

enum class OrderClass : std::uint8_t { Limit, Market, Mixed };

struct SubmitOutcome {
    enum class Status : std::uint8_t { Accepted, DuplicateId, UnknownOwner };

    Status status = Status::Accepted;
    std::vector<Trade> trades;
    std::optional<Order> residual;  // the part that rested, if any
    OrderClass order_class = OrderClass::Limit;

    bool accepted() const { return status == Status::Accepted; }
};

// Price-time-priority matching. Centralized mode matches any
// price-compatible order; qclob mode additionally requires positive
// bilateral headroom between taker and maker, caps each fill by it, and
// charges the traded lots to the pair's exposure. Resting orders of the
// incoming order's owner are skipped in both modes.
SubmitOutcome submit(BookState& book, CreditMatrix& credit, const Order& order, MatchMode mode);

// Removes a resting order; nullopt if the id is unknown.
std::optional<Order> cancel(BookState& book, OrderId id);

}  // namespace qclob

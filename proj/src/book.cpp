#include "qclob/book.hpp"

#include <algorithm>
#include <cassert>

namespace qclob {

std::optional<Tick> BookState::best_bid() const {
    if (bids_.empty()) return std::nullopt;
    return bids_.begin()->first;
}

std::optional<Tick> BookState::best_ask() const {
    if (asks_.empty()) return std::nullopt;
    return asks_.begin()->first;
}

std::optional<Tick> BookState::spread() const {
    auto b = best_bid();
    auto a = best_ask();
    if (!b || !a) return std::nullopt;
    return *a - *b;
}

std::optional<double> BookState::mid() const {
    auto b = best_bid();
    auto a = best_ask();
    if (!b || !a) return std::nullopt;
    return (static_cast<double>(*b) + static_cast<double>(*a)) / 2.0;
}

Lots BookState::depth_at(Side side, Tick price) const {
    const Level* level = nullptr;
    if (side == Side::Buy) {
        auto it = bids_.find(price);
        if (it != bids_.end()) level = &it->second;
    } else {
        auto it = asks_.find(price);
        if (it != asks_.end()) level = &it->second;
    }
    if (!level) return 0;
    Lots total = 0;
    for (const auto& r : *level) total += r.remaining;
    return total;
}

Lots BookState::crossed_volume() const {
    auto b = best_bid();
    auto a = best_ask();
    if (!b || !a) return 0;
    Lots total = 0;
    for (const auto& [price, level] : asks_) {
        if (price >= *b) break;
        for (const auto& r : level) total += r.remaining;
    }
    for (const auto& [price, level] : bids_) {
        if (price <= *a) break;
        for (const auto& r : level) total += r.remaining;
    }
    return total;
}

const RestingOrder* BookState::find(OrderId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    return &*it->second.pos;
}

bool BookState::insert(const Order& order, Lots remaining) {
    assert(remaining >= 1);
    if (index_.count(order.id)) return false;
    RestingOrder resting{order, remaining, next_seq_++};
    Level::iterator pos;
    if (order.side() == Side::Buy) {
        auto& level = bids_[order.price];
        pos = level.insert(level.end(), resting);
    } else {
        auto& level = asks_[order.price];
        pos = level.insert(level.end(), resting);
    }
    index_.emplace(order.id, Locator{order.side(), order.price, pos});
    total_resting_ += remaining;
    return true;
}

std::optional<RestingOrder> BookState::remove(OrderId id) {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    const Locator loc = it->second;
    RestingOrder out = *loc.pos;
    if (loc.side == Side::Buy) {
        auto lvl = bids_.find(loc.price);
        lvl->second.erase(loc.pos);
        if (lvl->second.empty()) bids_.erase(lvl);
    } else {
        auto lvl = asks_.find(loc.price);
        lvl->second.erase(loc.pos);
        if (lvl->second.empty()) asks_.erase(lvl);
    }
    index_.erase(it);
    total_resting_ -= out.remaining;
    return out;
}

RestingOrder BookState::consume(OrderId id, Lots fill) {
    auto it = index_.find(id);
    assert(it != index_.end());
    RestingOrder before = *it->second.pos;
    assert(fill >= 1 && fill <= before.remaining);
    if (fill == before.remaining) {
        remove(id);
    } else {
        it->second.pos->remaining -= fill;
        total_resting_ -= fill;
    }
    return before;
}

void BookState::for_each(const std::function<void(const RestingOrder&)>& fn) const {
    for (const auto& [price, level] : bids_)
        for (const auto& r : level) fn(r);
    for (const auto& [price, level] : asks_)
        for (const auto& r : level) fn(r);
}

std::optional<Tick> LocalBookView::local_bid() const {
    if (bids.empty()) return std::nullopt;
    return bids.front().price;
}

std::optional<Tick> LocalBookView::local_ask() const {
    if (asks.empty()) return std::nullopt;
    return asks.front().price;
}

std::optional<Tick> LocalBookView::local_spread() const {
    auto b = local_bid();
    auto a = local_ask();
    if (!b || !a) return std::nullopt;
    return *a - *b;
}

std::optional<double> LocalBookView::local_mid() const {
    auto b = local_bid();
    auto a = local_ask();
    if (!b || !a) return std::nullopt;
    return (static_cast<double>(*b) + static_cast<double>(*a)) / 2.0;
}

LocalBookView local_book(const BookState& book, const CreditMatrix& credit, InstitutionId viewer) {
    LocalBookView view;
    view.viewer = viewer;
    auto visit = [&](const RestingOrder& r, std::vector<LocalBookView::VisibleOrder>& out) {
        if (r.order.owner == viewer) {
            view.own_orders.push_back(r);
            return;
        }
        const CreditAmount room = credit.headroom(viewer, r.order.owner);
        if (room.is_zero()) return;
        out.push_back({r.order.id, r.order.owner, r.order.price, room.cap(r.remaining)});
    };
    for (const auto& [price, level] : book.bids())
        for (const auto& r : level) visit(r, view.bids);
    for (const auto& [price, level] : book.asks())
        for (const auto& r : level) visit(r, view.asks);
    return view;
}

namespace {

// Walks opposite-side levels best-first, filling against eligible resting
// orders in FIFO order. Own orders and (in qclob mode) zero-headroom makers
// are skipped. Headroom only shrinks while matching, so skipped orders stay
// ineligible and a single forward pass preserves price-time priority.
template <typename LevelMap, typename Compatible>
void walk_and_fill(BookState& book, CreditMatrix& credit, const Order& order, Lots& remaining,
                   MatchMode mode, LevelMap& levels, Compatible compatible, TradeDirection dir,
                   std::vector<Trade>& trades) {
    auto level_it = levels.begin();
    while (remaining > 0 && level_it != levels.end() && compatible(level_it->first)) {
        const Tick level_price = level_it->first;
        auto it = level_it->second.begin();
        bool level_erased = false;
        while (remaining > 0 && it != level_it->second.end()) {
            if (it->order.owner == order.owner) {
                ++it;  // self-match skip
                continue;
            }
            Lots fill = std::min(remaining, it->remaining);
            if (mode == MatchMode::Qclob) {
                const CreditAmount room = credit.headroom(order.owner, it->order.owner);
                if (room.is_zero()) {
                    ++it;
                    continue;
                }
                fill = room.cap(fill);
            }
            trades.push_back(Trade{order.calendar_time, it->order.price, fill, dir,
                                   it->order.owner, order.owner, it->order.id, order.id});
            if (mode == MatchMode::Qclob) credit.add_exposure(order.owner, it->order.owner, fill);
            remaining -= fill;

            const OrderId maker_id = it->order.id;
            const bool exhausts = fill == it->remaining;
            ++it;  // advance before consume invalidates the maker's iterator
            book.consume(maker_id, fill);
            if (exhausts && levels.find(level_price) == levels.end()) {
                level_erased = true;  // consumed the level's last order
                break;
            }
        }
        level_it = level_erased ? levels.upper_bound(level_price) : std::next(level_it);
    }
}

}  // namespace

SubmitOutcome submit(BookState& book, CreditMatrix& credit, const Order& order, MatchMode mode) {
    SubmitOutcome out;
    if (book.contains(order.id)) {
        out.status = SubmitOutcome::Status::DuplicateId;
        return out;
    }
    if (mode == MatchMode::Qclob && !credit.is_registered(order.owner)) {
        out.status = SubmitOutcome::Status::UnknownOwner;
        return out;
    }

    Lots remaining = order.size();
    if (order.side() == Side::Buy) {
        walk_and_fill(book, credit, order, remaining, mode, book.asks_,
                      [&](Tick p) { return p <= order.price; }, TradeDirection::BuyerInitiated,
                      out.trades);
    } else {
        walk_and_fill(book, credit, order, remaining, mode, book.bids_,
                      [&](Tick p) { return p >= order.price; }, TradeDirection::SellerInitiated,
                      out.trades);
    }

    if (remaining > 0) {
        Order residual = order;
        residual.signed_size = order.side() == Side::Buy ? -remaining : remaining;
        book.insert(residual, remaining);
        out.residual = residual;
    }

    if (out.trades.empty())
        out.order_class = OrderClass::Limit;
    else
        out.order_class = remaining == 0 ? OrderClass::Market : OrderClass::Mixed;
    return out;
}

std::optional<Order> cancel(BookState& book, OrderId id) {
    auto removed = book.remove(id);
    if (!removed) return std::nullopt;
    Order o = removed->order;
    o.signed_size = o.side() == Side::Buy ? -removed->remaining : removed->remaining;
    return o;
}

}  // namespace qclob

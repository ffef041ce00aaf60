#pragma once

#include <optional>

#include "qclob/types.hpp"

namespace qclob {

enum class Frame : std::uint8_t { QuoteRelative, TradeRelative };

// Prices of the most recent seller-initiated (B) and buyer-initiated (A)
// trades at or before now. Unset until the first trade of that direction;
// reset at the start of each trading day.
struct TradeRefState {
    std::optional<Tick> B;
    std::optional<Tick> A;
};

struct RelativePrice {
    Tick value = 0;
    Frame frame = Frame::QuoteRelative;
    Side side = Side::Buy;
};

// b - p for buys, p - a for sells. The sign convention makes every resting
// order's quote-relative price non-negative. Unavailable when the side's
// reference quote is undefined.
inline std::optional<RelativePrice> quote_relative(Tick price, Side side, std::optional<Tick> bid,
                                                   std::optional<Tick> ask) {
    if (side == Side::Buy) {
        if (!bid) return std::nullopt;
        return RelativePrice{*bid - price, Frame::QuoteRelative, side};
    }
    if (!ask) return std::nullopt;
    return RelativePrice{price - *ask, Frame::QuoteRelative, side};
}

// B - p for buys, p - A for sells. Unavailable before the first trade of
// the relevant direction; such events are excluded from trade-relative
// statistics.
inline std::optional<RelativePrice> trade_relative(Tick price, Side side,
                                                   const TradeRefState& refs) {
    if (side == Side::Buy) {
        if (!refs.B) return std::nullopt;
        return RelativePrice{*refs.B - price, Frame::TradeRelative, side};
    }
    if (!refs.A) return std::nullopt;
    return RelativePrice{price - *refs.A, Frame::TradeRelative, side};
}

inline TradeRefState update_refs(TradeRefState refs, const Trade& trade) {
    if (trade.direction == TradeDirection::SellerInitiated)
        refs.B = trade.price;
    else
        refs.A = trade.price;
    return refs;
}

inline TradeRefState update_refs(TradeRefState refs, TradeDirection direction, Tick price) {
    if (direction == TradeDirection::SellerInitiated)
        refs.B = price;
    else
        refs.A = price;
    return refs;
}

}  // namespace qclob

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace qclob {

using Tick = std::int64_t;          // prices, whole ticks
using Lots = std::int64_t;          // sizes, whole lots
using Millis = std::int64_t;        // calendar time, ms since session midnight
using EventTime = std::int64_t;     // limit-arrival counter, resets daily
using OrderId = std::int64_t;
using InstitutionId = std::int32_t;

enum class Side : std::uint8_t { Buy, Sell };

inline Side opposite(Side s) { return s == Side::Buy ? Side::Sell : Side::Buy; }

enum class TradeDirection : std::uint8_t { BuyerInitiated, SellerInitiated };

// Lot count that may be unlimited. Unlimited compares above every finite
// value; arithmetic saturates (unlimited minus anything stays unlimited).
class CreditAmount {
public:
    constexpr CreditAmount() : lots_(0), infinite_(false) {}
    constexpr explicit CreditAmount(Lots lots) : lots_(lots), infinite_(false) {}
    static constexpr CreditAmount unlimited() {
        CreditAmount c;
        c.infinite_ = true;
        return c;
    }

    constexpr bool is_unlimited() const { return infinite_; }
    constexpr Lots lots() const { return infinite_ ? std::numeric_limits<Lots>::max() : lots_; }

    constexpr bool is_zero() const { return !infinite_ && lots_ <= 0; }

    friend constexpr bool operator==(const CreditAmount& a, const CreditAmount& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.lots_ == b.lots_);
    }
    friend constexpr bool operator<(const CreditAmount& a, const CreditAmount& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.lots_ < b.lots_;
    }

    static constexpr CreditAmount min(const CreditAmount& a, const CreditAmount& b) {
        return a < b ? a : b;
    }

    // Headroom left after `used` lots of exposure, floored at zero.
    constexpr CreditAmount minus(Lots used) const {
        if (infinite_) return *this;
        return CreditAmount(lots_ > used ? lots_ - used : 0);
    }

    // Caps a finite lot count by this amount.
    constexpr Lots cap(Lots size) const {
        if (infinite_) return size;
        return size < lots_ ? size : lots_;
    }

    std::string str() const { return infinite_ ? "inf" : std::to_string(lots_); }

private:
    Lots lots_;
    bool infinite_;
};

// One limit/market order. Size is signed: negative = buy, positive = sell.
struct Order {
    OrderId id = 0;
    InstitutionId owner = 0;
    Tick price = 0;
    Lots signed_size = 0;
    EventTime submit_time = 0;
    Millis calendar_time = 0;

    Side side() const { return signed_size < 0 ? Side::Buy : Side::Sell; }
    Lots size() const { return signed_size < 0 ? -signed_size : signed_size; }

    friend bool operator==(const Order&, const Order&) = default;

    static Order make(OrderId id, InstitutionId owner, Side side, Tick price, Lots size,
                      EventTime t = 0, Millis when = 0) {
        if (size < 1) throw std::invalid_argument("order size must be at least 1 lot");
        Order o;
        o.id = id;
        o.owner = owner;
        o.price = price;
        o.signed_size = side == Side::Buy ? -size : size;
        o.submit_time = t;
        o.calendar_time = when;
        return o;
    }
};

struct Trade {
    Millis calendar_time = 0;
    Tick price = 0;
    Lots size = 0;
    TradeDirection direction = TradeDirection::BuyerInitiated;
    InstitutionId maker = 0;
    InstitutionId taker = 0;
    OrderId maker_order = 0;
    OrderId taker_order = 0;

    friend bool operator==(const Trade&, const Trade&) = default;
};

}  // namespace qclob

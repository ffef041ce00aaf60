#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qclob/book.hpp"
#include "qclob/coordinates.hpp"
#include "qclob/rng.hpp"

using namespace qclob;

TEST_CASE("quote-relative prices follow the sign convention") {
    const std::optional<Tick> b = 100, a = 104;
    CHECK(quote_relative(100, Side::Buy, b, a)->value == 0);
    CHECK(quote_relative(109, Side::Sell, b, a)->value == 5);
    CHECK(quote_relative(103, Side::Buy, b, a)->value == -3);  // crossing bid
    CHECK(quote_relative(104, Side::Sell, b, a)->value == 0);

    CHECK(!quote_relative(100, Side::Buy, std::nullopt, a).has_value());
    CHECK(!quote_relative(100, Side::Sell, b, std::nullopt).has_value());
    CHECK(quote_relative(100, Side::Sell, std::nullopt, a).has_value());  // only a is needed
}

TEST_CASE("trade-relative prices reference the last trades") {
    TradeRefState refs;
    CHECK(!trade_relative(100, Side::Buy, refs).has_value());
    CHECK(!trade_relative(100, Side::Sell, refs).has_value());

    refs.B = 120;
    refs.A = 125;
    CHECK(trade_relative(120, Side::Buy, refs)->value == 0);
    CHECK(trade_relative(132, Side::Sell, refs)->value == 7);
    CHECK(trade_relative(118, Side::Buy, refs)->value == 2);
}

TEST_CASE("refs update only for their own direction") {
    TradeRefState refs;
    refs = update_refs(refs, TradeDirection::SellerInitiated, 120);
    CHECK(refs.B == 120);
    CHECK(!refs.A.has_value());
    refs = update_refs(refs, TradeDirection::BuyerInitiated, 125);
    CHECK(refs.A == 125);
    CHECK(refs.B == 120);

    Trade t;
    t.direction = TradeDirection::SellerInitiated;
    t.price = 118;
    refs = update_refs(refs, t);
    CHECK(refs.B == 118);
}

TEST_CASE("a grouped multi-price fill leaves the last fill price in the refs") {
    TradeRefState refs;
    for (Tick price : {101, 102, 104}) refs = update_refs(refs, TradeDirection::BuyerInitiated, price);
    CHECK(refs.A == 104);
    CHECK(!refs.B.has_value());
}

TEST_CASE("every resting order has non-negative quote-relative price") {
    Rng rng(404);
    BookState book;
    CreditMatrix credit;
    for (InstitutionId i = 0; i < 5; ++i) credit.register_institution(i);
    for (InstitutionId i = 0; i < 5; ++i)
        for (InstitutionId j = 0; j < 5; ++j)
            if (i != j && rng.bernoulli(0.6))
                credit.set_limit(i, j, CreditAmount(rng.uniform_int(0, 30)));
    OrderId next = 1;
    for (int e = 0; e < 500; ++e) {
        submit(book, credit,
               Order::make(next++, static_cast<InstitutionId>(rng.uniform_int(0, 4)),
                           rng.bernoulli(0.5) ? Side::Buy : Side::Sell, rng.uniform_int(95, 105),
                           rng.uniform_int(1, 8)),
               MatchMode::Qclob);
        book.for_each([&](const RestingOrder& r) {
            const auto rel = quote_relative(r.order.price, r.order.side(), book.best_bid(),
                                            book.best_ask());
            REQUIRE(rel.has_value());
            CHECK(rel->value >= 0);
        });
    }
}

TEST_CASE("mirroring buys and sells with book negation mirrors relative prices") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Tick price = rng.uniform_int(-50, 150);
        const Tick b = rng.uniform_int(-50, 150);
        const Tick a = b + rng.uniform_int(1, 20);
        const auto orig = quote_relative(price, Side::Buy, b, a);
        const auto mirrored = quote_relative(-price, Side::Sell, -a, -b);
        REQUIRE(orig.has_value());
        REQUIRE(mirrored.has_value());
        CHECK(orig->value == mirrored->value);

        TradeRefState refs;
        refs.B = rng.uniform_int(-50, 150);
        refs.A = rng.uniform_int(-50, 150);
        TradeRefState flipped;
        flipped.B = -*refs.A;
        flipped.A = -*refs.B;
        CHECK(trade_relative(price, Side::Buy, refs)->value ==
              trade_relative(-price, Side::Sell, flipped)->value);
    }
}

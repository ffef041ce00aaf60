#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qclob/book.hpp"
#include "qclob/coordinates.hpp"
#include "qclob/gent.hpp"
#include "qclob/ingest.hpp"

namespace qclob {

enum class CclRule : std::uint8_t { AllInfinite, CorePeriphery, Explicit };

struct ExplicitCcl {
    InstitutionId from = 0;
    InstitutionId to = 0;
    std::optional<Lots> limit;  // unset = unlimited
};

// Everything that pins down one synthetic session family. The seed fixes
// the full output byte-for-byte.
struct GeneratorSpec {
    int institutions = 6;
    CclRule ccl_rule = CclRule::CorePeriphery;
    std::vector<ExplicitCcl> explicit_ccls;
    MatchMode mode = MatchMode::Qclob;
    Frame anchor_frame = Frame::TradeRelative;

    GenTParams base_law{12.0, 8.0, 0.0, 5.0};  // relative-price law, ticks
    double day_mu = 0.0;     // affine shift applied to base draws
    double day_sigma = 1.0;  // affine scale applied to base draws

    double arrival_rate = 40.0;  // events per second
    double cancel_rate = 36.0;
    double market_rate = 0.4;

    Lots round_lot = 100;       // the 1-million analog in lots
    double round_weight = 0.5;  // mass on round-number multiples
    double full_consume_prob = 0.35;
    double multi_price_prob = 0.08;

    Tick initial_price = 130000;
    Tick initial_half_spread = 15;
    Millis session_open_ms = 28800000;
    Millis session_close_ms = 61200000;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> max_events;  // cap on generator steps

    // Returns field-level problems; empty means valid.
    std::vector<std::string> validate() const;
};

// Per-day affine parameters for a family.
struct DayParams {
    double mu = 0.0;
    double sigma = 1.0;
};

enum class DepartureCause : std::uint8_t { Cancelled, FullyMatched, PartialFillReissue };

// Everything the generator knows that the emitted files do not say.
struct GroundTruth {
    std::uint64_t seed = 0;
    double day_mu = 0.0;
    double day_sigma = 1.0;

    std::uint64_t emitted_arrivals = 0;
    std::uint64_t emitted_departures = 0;
    std::uint64_t generated_limit_orders = 0;  // arrival events drawn by the generator
    std::uint64_t market_order_groups = 0;
    std::map<OrderId, DepartureCause> departure_causes;

    struct BookEntry {
        OrderId id = 0;
        InstitutionId owner = 0;
        Side side = Side::Buy;
        Tick price = 0;
        Lots size = 0;
    };
    std::vector<BookEntry> final_book;

    // Relative-price draws that were anchored off live references and
    // emitted unclamped; replay measures exactly these values.
    std::vector<Tick> anchored_rel_draws;
    // total size / pre-arrival global depth at the first matched price
    std::vector<double> market_h_values;

    // True iff the book holds exactly the recorded entries, compared as a
    // per-(side, price) multiset of (id, size).
    bool matches_book(const BookState& book) const;
};

struct GeneratedSession {
    std::vector<TickEvent> ticks;
    std::vector<TradeRecord> trades;
    GroundTruth truth;
};

// Draws order flow anchored off the running references, routes every order
// through the matching engine, and emits canonical records. A resting
// order hit by a partial fill departs and re-arrives under a fresh id with
// the remaining size, so the tick stream alone reconstructs the book.
GeneratedSession generate_session(const GeneratorSpec& spec, int day_index = 0);

std::vector<GeneratedSession> generate_family(const GeneratorSpec& spec,
                                              const std::vector<DayParams>& schedule);

}  // namespace qclob

#pragma once

// Randomized event sequences driven through the engine and the reference
// matcher side by side.

#include <sstream>
#include <string>
#include <vector>

#include "qclob/book.hpp"
#include "qclob/rng.hpp"
#include "support/oracle.hpp"

namespace qclob::testing {

struct FuzzConfig {
    std::uint64_t seed = 1;
    int events = 200;
    int institutions = 6;
    bool finite_credit = true;  // otherwise every limit is unlimited
    Tick price_lo = 90;
    Tick price_hi = 110;
    Lots max_size = 20;
    double cancel_prob = 0.3;
    int check_stride = 1;  // book/exposure comparison cadence, in events
};

inline CreditMatrix random_credit(const FuzzConfig& cfg, Rng& rng) {
    CreditMatrix credit;
    for (InstitutionId i = 0; i < cfg.institutions; ++i) credit.register_institution(i);
    for (InstitutionId i = 0; i < cfg.institutions; ++i) {
        for (InstitutionId j = 0; j < cfg.institutions; ++j) {
            if (i == j) continue;
            if (!cfg.finite_credit) {
                credit.set_limit(i, j, CreditAmount::unlimited());
                continue;
            }
            const double roll = rng.uniform();
            if (roll < 0.25)
                credit.set_limit(i, j, CreditAmount::unlimited());
            else if (roll < 0.85)
                credit.set_limit(i, j, CreditAmount(rng.uniform_int(1, 60)));
            // else leave unset (defaults to zero credit)
        }
    }
    return credit;
}

struct FuzzReport {
    bool ok = true;
    std::string detail;
    std::size_t fills = 0;
    std::size_t submits = 0;

    void fail(const std::string& msg) {
        if (ok) {
            ok = false;
            detail = msg;
        }
    }
};

// Engine in qclob mode against the rescanning reference matcher, sharing
// one randomized event sequence. Books, trades, and residuals must agree
// after every event; exposures must never exceed the bilateral limits.
inline FuzzReport engine_vs_oracle(const FuzzConfig& cfg) {
    Rng rng(cfg.seed);
    CreditMatrix credit_engine = random_credit(cfg, rng);
    CreditMatrix credit_oracle = credit_engine;

    BookState book;
    BruteForceBook oracle;
    FuzzReport report;
    std::vector<OrderId> live;
    OrderId next_id = 1;

    for (int e = 0; e < cfg.events && report.ok; ++e) {
        if (!live.empty() && rng.uniform() < cfg.cancel_prob) {
            const std::size_t k = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(live.size()) - 1));
            const OrderId id = live[k];
            live[k] = live.back();
            live.pop_back();
            const bool engine_removed = cancel(book, id).has_value();
            const bool oracle_removed = oracle.cancel(id);
            if (engine_removed != oracle_removed) report.fail("cancel outcome diverged");
            continue;
        }

        const Order order = Order::make(
            next_id++, static_cast<InstitutionId>(rng.uniform_int(0, cfg.institutions - 1)),
            rng.bernoulli(0.5) ? Side::Buy : Side::Sell,
            rng.uniform_int(cfg.price_lo, cfg.price_hi), rng.uniform_int(1, cfg.max_size), 0,
            static_cast<Millis>(e));
        ++report.submits;

        const auto engine_out = submit(book, credit_engine, order, MatchMode::Qclob);
        const auto oracle_out = oracle.submit(credit_oracle, order, MatchMode::Qclob);

        if (engine_out.accepted() != oracle_out.accepted) {
            report.fail("acceptance diverged");
            break;
        }
        if (engine_out.trades != oracle_out.trades) {
            std::ostringstream msg;
            msg << "trade lists diverged at event " << e << " (engine " << engine_out.trades.size()
                << " fills, oracle " << oracle_out.trades.size() << ")";
            report.fail(msg.str());
            break;
        }
        report.fills += engine_out.trades.size();
        const bool engine_rest = engine_out.residual.has_value();
        if (engine_rest != oracle_out.residual.has_value() ||
            (engine_rest && engine_out.residual->signed_size != oracle_out.residual->signed_size)) {
            report.fail("residual diverged");
            break;
        }
        if (engine_rest) live.push_back(order.id);
        if (e % cfg.check_stride == 0 || e + 1 == cfg.events) {
            if (level_dump(book) != level_dump(oracle)) {
                report.fail("book state diverged");
                break;
            }
            for (InstitutionId i = 0; i < cfg.institutions && report.ok; ++i) {
                for (InstitutionId j = static_cast<InstitutionId>(i + 1); j < cfg.institutions;
                     ++j) {
                    const auto cap = credit_engine.bilateral_ccl(i, j);
                    if (!cap.is_unlimited() && credit_engine.exposure(i, j) > cap.lots())
                        report.fail("exposure exceeded bilateral limit");
                }
            }
        }
    }
    if (report.ok && level_dump(book) != level_dump(oracle)) report.fail("final book diverged");
    return report;
}

// Centralized mode against qclob with unlimited credit on the same
// sequence: everything must match bit for bit.
inline FuzzReport centralized_vs_unlimited_qclob(const FuzzConfig& cfg) {
    FuzzConfig unlimited = cfg;
    unlimited.finite_credit = false;

    Rng rng(unlimited.seed);
    CreditMatrix credit = random_credit(unlimited, rng);
    CreditMatrix credit_unused = credit;

    BookState central_book, qclob_book;
    FuzzReport report;
    std::vector<OrderId> live;
    OrderId next_id = 1;

    for (int e = 0; e < unlimited.events && report.ok; ++e) {
        if (!live.empty() && rng.uniform() < unlimited.cancel_prob) {
            const std::size_t k = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(live.size()) - 1));
            const OrderId id = live[k];
            live[k] = live.back();
            live.pop_back();
            cancel(central_book, id);
            cancel(qclob_book, id);
            continue;
        }
        const Order order = Order::make(
            next_id++,
            static_cast<InstitutionId>(rng.uniform_int(0, unlimited.institutions - 1)),
            rng.bernoulli(0.5) ? Side::Buy : Side::Sell,
            rng.uniform_int(unlimited.price_lo, unlimited.price_hi),
            rng.uniform_int(1, unlimited.max_size), 0, static_cast<Millis>(e));
        ++report.submits;

        const auto central = submit(central_book, credit_unused, order, MatchMode::Centralized);
        const auto qclob = submit(qclob_book, credit, order, MatchMode::Qclob);
        if (central.trades != qclob.trades) {
            report.fail("trades differ between centralized and unlimited qclob");
            break;
        }
        report.fills += central.trades.size();
        if (central.residual.has_value() != qclob.residual.has_value()) {
            report.fail("residuals differ");
            break;
        }
        if (central.residual) live.push_back(order.id);
        if ((e % cfg.check_stride == 0 || e + 1 == unlimited.events) &&
            !(central_book == qclob_book)) {
            report.fail("book states differ");
            break;
        }
    }
    if (report.ok && !(central_book == qclob_book)) report.fail("final books differ");
    return report;
}

}  // namespace qclob::testing

#include "qclob/ingest.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <unordered_set>

namespace qclob {

namespace {

constexpr std::string_view kTickHeader = "time_ms,kind,order_id,side,price_ticks,size_lots";
constexpr std::string_view kTradeHeader = "time_ms,direction,price_ticks,size_lots";

constexpr Tick kMaxAbsPrice = 1'000'000'000'000'000LL;  // 1e15 ticks
constexpr Lots kMaxSize = 1'000'000'000'000LL;          // 1e12 lots

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.emplace_back(line.data() + start, i - start);
            start = i + 1;
        }
    }
    return out;
}

bool parse_i64(std::string_view sv, std::int64_t& out) {
    if (sv.empty()) return false;
    auto res = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    return res.ec == std::errc{} && res.ptr == sv.data() + sv.size();
}

// Iterates lines without allocating; handles a missing trailing newline.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line(text.data() + start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (!(line.empty() && end == text.size())) fn(line_no, line);
        if (end == text.size()) break;
        start = end + 1;
    }
}

}  // namespace

ParseResult<TickEvent> parse_tick_file(std::string_view text) {
    ParseResult<TickEvent> result;
    std::unordered_set<OrderId> seen;
    std::unordered_set<OrderId> live;
    Millis last_time = std::numeric_limits<Millis>::min();
    bool header_ok = false;

    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (line_no == 1) {
            header_ok = line == kTickHeader;
            if (!header_ok) result.issues.push_back({1, "bad tick header"});
            return;
        }
        auto f = split_fields(line);
        auto fail = [&](std::string msg) { result.issues.push_back({line_no, std::move(msg)}); };

        std::int64_t time = 0, id = 0;
        if (f.size() < 3 || !parse_i64(f[0], time) || !parse_i64(f[2], id)) {
            fail("malformed tick line");
            return;
        }
        if (time < last_time) {
            fail("non-monotone timestamp");
            return;
        }
        if (f[1] == "D") {
            const bool padded = f.size() == 6 && f[3].empty() && f[4].empty() && f[5].empty();
            if (f.size() != 3 && !padded) {
                fail("departure line must carry exactly time, kind, order_id");
                return;
            }
            if (!live.count(id)) {
                fail("departure of unknown order id " + std::to_string(id));
                return;
            }
            live.erase(id);
            last_time = time;
            result.records.push_back({time, TickEvent::Kind::Departure, id, Side::Buy, 0, 0});
            return;
        }
        if (f[1] != "A") {
            fail("kind must be A or D");
            return;
        }
        std::int64_t price = 0, size = 0;
        if (f.size() != 6 || !parse_i64(f[4], price) || !parse_i64(f[5], size)) {
            fail("malformed arrival line");
            return;
        }
        Side side;
        if (f[3] == "B")
            side = Side::Buy;
        else if (f[3] == "S")
            side = Side::Sell;
        else {
            fail("side must be B or S");
            return;
        }
        if (size < 1 || size > kMaxSize) {
            fail("size out of range");
            return;
        }
        if (price < -kMaxAbsPrice || price > kMaxAbsPrice) {
            fail("price out of range");
            return;
        }
        if (seen.count(id)) {
            fail("duplicate order id " + std::to_string(id));
            return;
        }
        seen.insert(id);
        live.insert(id);
        last_time = time;
        result.records.push_back({time, TickEvent::Kind::Arrival, id, side, price, size});
    });
    if (text.empty()) result.issues.push_back({1, "empty file"});
    return result;
}

ParseResult<TradeRecord> parse_trade_file(std::string_view text) {
    ParseResult<TradeRecord> result;
    Millis last_time = std::numeric_limits<Millis>::min();

    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (line_no == 1) {
            if (line != kTradeHeader) result.issues.push_back({1, "bad trade header"});
            return;
        }
        auto f = split_fields(line);
        auto fail = [&](std::string msg) { result.issues.push_back({line_no, std::move(msg)}); };

        std::int64_t time = 0, price = 0, size = 0;
        if (f.size() != 4 || !parse_i64(f[0], time) || !parse_i64(f[2], price) ||
            !parse_i64(f[3], size)) {
            fail("malformed trade line");
            return;
        }
        if (time < last_time) {
            fail("non-monotone timestamp");
            return;
        }
        TradeDirection dir;
        if (f[1] == "B")
            dir = TradeDirection::BuyerInitiated;
        else if (f[1] == "S")
            dir = TradeDirection::SellerInitiated;
        else {
            fail("direction must be B or S");
            return;
        }
        if (size < 1 || size > kMaxSize) {
            fail("size out of range");
            return;
        }
        if (price < -kMaxAbsPrice || price > kMaxAbsPrice) {
            fail("price out of range");
            return;
        }
        last_time = time;
        result.records.push_back({time, dir, price, size});
    });
    if (text.empty()) result.issues.push_back({1, "empty file"});
    return result;
}

std::string serialize_tick_events(const std::vector<TickEvent>& events) {
    std::string out(kTickHeader);
    out.push_back('\n');
    char buf[128];
    for (const auto& e : events) {
        int n;
        if (e.kind == TickEvent::Kind::Departure) {
            n = std::snprintf(buf, sizeof buf, "%" PRId64 ",D,%" PRId64 "\n", e.time_ms, e.id);
        } else {
            n = std::snprintf(buf, sizeof buf, "%" PRId64 ",A,%" PRId64 ",%c,%" PRId64 ",%" PRId64 "\n",
                              e.time_ms, e.id, e.side == Side::Buy ? 'B' : 'S', e.price, e.size);
        }
        out.append(buf, static_cast<std::size_t>(n));
    }
    return out;
}

std::string serialize_trade_records(const std::vector<TradeRecord>& records) {
    std::string out(kTradeHeader);
    out.push_back('\n');
    char buf[128];
    for (const auto& r : records) {
        int n = std::snprintf(buf, sizeof buf, "%" PRId64 ",%c,%" PRId64 ",%" PRId64 "\n", r.time_ms,
                              r.direction == TradeDirection::BuyerInitiated ? 'B' : 'S', r.price,
                              r.size);
        out.append(buf, static_cast<std::size_t>(n));
    }
    return out;
}

SessionConfig SessionConfig::parse(std::string_view text, std::vector<ParseIssue>& issues) {
    SessionConfig cfg;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (line.empty() || line.front() == '#') return;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            issues.push_back({line_no, "expected key=value"});
            return;
        }
        std::string_view key = line.substr(0, eq);
        std::string_view value = line.substr(eq + 1);
        auto as_i64 = [&](Millis& out) {
            std::int64_t v;
            if (parse_i64(value, v))
                out = v;
            else
                issues.push_back({line_no, "bad integer for " + std::string(key)});
        };
        if (key == "tick_size" || key == "lot_size") {
            char* end = nullptr;
            std::string tmp(value);
            double v = std::strtod(tmp.c_str(), &end);
            if (end != tmp.c_str() + tmp.size() || v <= 0) {
                issues.push_back({line_no, "bad value for " + std::string(key)});
                return;
            }
            (key == "tick_size" ? cfg.tick_size : cfg.lot_size) = v;
        } else if (key == "session_open_ms") {
            as_i64(cfg.session_open_ms);
        } else if (key == "session_close_ms") {
            as_i64(cfg.session_close_ms);
        } else if (key == "group_window_ms") {
            as_i64(cfg.group_window_ms);
        } else if (key == "trim_ticks") {
            std::int64_t v;
            if (parse_i64(value, v) && v > 0)
                cfg.trim_ticks = v;
            else
                issues.push_back({line_no, "bad value for trim_ticks"});
        } else if (key == "trim_mode") {
            if (value == "ticks")
                cfg.trim_mode = TrimMode::Ticks;
            else if (value == "percentile")
                cfg.trim_mode = TrimMode::Percentile;
            else
                issues.push_back({line_no, "trim_mode must be ticks or percentile"});
        } else if (key == "trim_percentile") {
            char* end = nullptr;
            std::string tmp(value);
            double v = std::strtod(tmp.c_str(), &end);
            if (end != tmp.c_str() + tmp.size() || v <= 0 || v >= 100)
                issues.push_back({line_no, "trim_percentile must lie in (0, 100)"});
            else
                cfg.trim_percentile = v;
        } else {
            issues.push_back({line_no, "unknown key " + std::string(key)});
        }
    });
    if (cfg.session_close_ms <= cfg.session_open_ms)
        issues.push_back({0, "session_close_ms must exceed session_open_ms"});
    return cfg;
}

std::string SessionConfig::serialize() const {
    char buf[512];
    int n = std::snprintf(buf, sizeof buf,
                          "tick_size=%g\nlot_size=%g\nsession_open_ms=%" PRId64
                          "\nsession_close_ms=%" PRId64 "\ngroup_window_ms=%" PRId64
                          "\ntrim_ticks=%" PRId64 "\ntrim_mode=%s\ntrim_percentile=%g\n",
                          tick_size, lot_size, session_open_ms, session_close_ms, group_window_ms,
                          trim_ticks, trim_mode == TrimMode::Ticks ? "ticks" : "percentile",
                          trim_percentile);
    return std::string(buf, static_cast<std::size_t>(n));
}

std::vector<MarketOrderGroup> group_market_orders(const std::vector<TradeRecord>& trades,
                                                  Millis window_ms) {
    std::vector<MarketOrderGroup> groups;
    for (const auto& r : trades) {
        const bool extend = !groups.empty() && groups.back().direction == r.direction &&
                            r.time_ms - groups.back().last_time <= window_ms;
        if (!extend) {
            MarketOrderGroup g;
            g.direction = r.direction;
            g.first_time = r.time_ms;
            groups.push_back(std::move(g));
        }
        auto& g = groups.back();
        g.last_time = r.time_ms;
        g.total_size += r.size;
        if (!g.fills.empty() && g.fills.front().price != r.price) g.multi_price = true;
        g.fills.push_back(r);
    }
    return groups;
}

std::vector<DepartureClassification> classify_departures(const std::vector<TickEvent>& ticks,
                                                         const std::vector<TradeRecord>&) {
    std::vector<DepartureClassification> out;
    for (const auto& e : ticks)
        if (e.kind == TickEvent::Kind::Departure)
            out.push_back({e.id, e.time_ms, DepartureLabel::Cancellation});
    return out;
}

}  // namespace qclob

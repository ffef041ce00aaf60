#include "qclob/emit.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qclob {

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}
nlohmann::json opt_json(const std::optional<Tick>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json to_json(const FlowAggregate& agg) {
    return {{"total_size", agg.total_size},
            {"count", agg.count},
            {"mean_interarrival_s", opt_json(agg.mean_interarrival_s)},
            {"modal_size", opt_json(agg.modal_size)},
            {"mean_size", agg.mean_size}};
}

const char* frame_name(Frame f) { return f == Frame::QuoteRelative ? "quote" : "trade"; }

const char* flow_name(FlowKind f) {
    switch (f) {
        case FlowKind::LimitArrivals: return "limits";
        case FlowKind::Cancellations: return "cancels";
        case FlowKind::MeanDepth: return "depth";
    }
    return "?";
}

}  // namespace

nlohmann::json to_json(const ActivitySummary& s) {
    return {{"empty_session", s.empty_session},
            {"limit_orders", to_json(s.limit_orders)},
            {"market_orders", to_json(s.market_orders)},
            {"cancellations", to_json(s.cancellations)},
            {"pct_multi_price_market_orders", s.pct_multi_price},
            {"mean_total_resting_size", s.mean_total_resting},
            {"mean_depth_at_best_quotes", s.mean_best_depth}};
}

nlohmann::json to_json(const SpreadStats& s) {
    return {{"defined_time_s", s.defined_time_s},
            {"min_ticks", opt_json(s.min)},
            {"max_ticks", opt_json(s.max)},
            {"median_ticks", opt_json(s.median)},
            {"mean_ticks", opt_json(s.mean)},
            {"negative_fraction", s.negative_fraction},
            {"negative_episodes", s.negative_episodes},
            {"mean_negative_duration_s", opt_json(s.mean_negative_duration_s)},
            {"mean_crossed_volume_lots", opt_json(s.mean_crossed_volume)}};
}

nlohmann::json to_json(const RelativeDistribution& d) {
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& [tick, mass] : d.histogram)
        hist.push_back({{"tick", tick}, {"mass", mass}});
    nlohmann::json j{{"frame", frame_name(d.frame)},
                     {"flow", flow_name(d.flow)},
                     {"day", d.day_label},
                     {"count_weighted", d.count_weighted},
                     {"total_mass", d.total_mass},
                     {"histogram", hist}};
    if (d.moments) {
        j["trimmed_mean"] = d.moments->mean;
        j["trimmed_std"] = d.moments->stddev;
    } else {
        j["trimmed_mean"] = nullptr;
        j["trimmed_std"] = nullptr;
    }
    return j;
}

nlohmann::json to_json(const GenTParams& p) {
    return {{"mu", p.mu}, {"sigma", p.sigma}, {"xi", p.xi}, {"nu", p.nu}};
}

nlohmann::json to_json(const FitResult& f) {
    return {{"params", to_json(f.params)},
            {"objective", f.objective},
            {"iterations", f.iterations},
            {"converged", f.converged},
            {"message", f.message}};
}

nlohmann::json to_json(const CollapseReport& r) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : r.pairs)
        pairs.push_back({{"d1", p.d1},
                         {"d2", p.d2},
                         {"raw", p.raw_distance},
                         {"rescaled", p.rescaled_distance},
                         {"ratio", p.ratio},
                         {"excluded", p.excluded}});
    return {{"distance", r.kind == DistanceKind::CvM ? "cvm" : "ks"},
            {"mean_ratio", r.mean_ratio},
            {"pairs_used", r.pairs_used},
            {"pairs_excluded", r.pairs_excluded},
            {"pairs", pairs}};
}

nlohmann::json to_json(const GroundTruth& t) {
    nlohmann::json book = nlohmann::json::array();
    for (const auto& e : t.final_book)
        book.push_back({{"id", e.id},
                        {"owner", e.owner},
                        {"side", e.side == Side::Buy ? "B" : "S"},
                        {"price", e.price},
                        {"size", e.size}});
    nlohmann::json causes = nlohmann::json::object();
    for (const auto& [id, cause] : t.departure_causes) {
        const char* name = cause == DepartureCause::Cancelled ? "cancelled"
                           : cause == DepartureCause::FullyMatched ? "matched"
                                                                   : "partial_reissue";
        causes[std::to_string(id)] = name;
    }
    return {{"seed", t.seed},
            {"day_mu", t.day_mu},
            {"day_sigma", t.day_sigma},
            {"emitted_arrivals", t.emitted_arrivals},
            {"emitted_departures", t.emitted_departures},
            {"generated_limit_orders", t.generated_limit_orders},
            {"market_order_groups", t.market_order_groups},
            {"departure_causes", causes},
            {"final_book", book},
            {"anchored_rel_draws", t.anchored_rel_draws},
            {"market_h_values", t.market_h_values}};
}

GroundTruth ground_truth_from_json(const nlohmann::json& j) {
    GroundTruth t;
    t.seed = j.at("seed").get<std::uint64_t>();
    t.day_mu = j.at("day_mu").get<double>();
    t.day_sigma = j.at("day_sigma").get<double>();
    t.emitted_arrivals = j.at("emitted_arrivals").get<std::uint64_t>();
    t.emitted_departures = j.at("emitted_departures").get<std::uint64_t>();
    t.generated_limit_orders = j.at("generated_limit_orders").get<std::uint64_t>();
    t.market_order_groups = j.at("market_order_groups").get<std::uint64_t>();
    for (const auto& [key, value] : j.at("departure_causes").items()) {
        const std::string name = value.get<std::string>();
        DepartureCause cause = DepartureCause::Cancelled;
        if (name == "matched") cause = DepartureCause::FullyMatched;
        if (name == "partial_reissue") cause = DepartureCause::PartialFillReissue;
        t.departure_causes[std::stoll(key)] = cause;
    }
    for (const auto& e : j.at("final_book")) {
        GroundTruth::BookEntry entry;
        entry.id = e.at("id").get<OrderId>();
        entry.owner = e.at("owner").get<InstitutionId>();
        entry.side = e.at("side").get<std::string>() == "B" ? Side::Buy : Side::Sell;
        entry.price = e.at("price").get<Tick>();
        entry.size = e.at("size").get<Lots>();
        t.final_book.push_back(entry);
    }
    t.anchored_rel_draws = j.at("anchored_rel_draws").get<std::vector<Tick>>();
    t.market_h_values = j.at("market_h_values").get<std::vector<double>>();
    return t;
}

GeneratorSpec generator_spec_from_json(const nlohmann::json& j, std::vector<std::string>& issues) {
    GeneratorSpec spec;
    auto grab = [&](const char* key, auto& slot) {
        if (!j.contains(key)) return;
        try {
            slot = j.at(key).get<std::decay_t<decltype(slot)>>();
        } catch (const std::exception&) {
            issues.push_back(std::string(key) + ": wrong type");
        }
    };
    grab("institutions", spec.institutions);
    if (j.contains("ccl_rule")) {
        const std::string rule = j.at("ccl_rule").get<std::string>();
        if (rule == "all_infinite")
            spec.ccl_rule = CclRule::AllInfinite;
        else if (rule == "core_periphery")
            spec.ccl_rule = CclRule::CorePeriphery;
        else if (rule == "explicit")
            spec.ccl_rule = CclRule::Explicit;
        else
            issues.push_back("ccl_rule: expected all_infinite, core_periphery, or explicit");
    }
    if (j.contains("explicit_ccls")) {
        for (const auto& e : j.at("explicit_ccls")) {
            ExplicitCcl c;
            c.from = e.at("from").get<InstitutionId>();
            c.to = e.at("to").get<InstitutionId>();
            if (e.contains("limit") && !e.at("limit").is_null())
                c.limit = e.at("limit").get<Lots>();
            spec.explicit_ccls.push_back(c);
        }
    }
    if (j.contains("mode")) {
        const std::string mode = j.at("mode").get<std::string>();
        if (mode == "centralized")
            spec.mode = MatchMode::Centralized;
        else if (mode == "qclob")
            spec.mode = MatchMode::Qclob;
        else
            issues.push_back("mode: expected centralized or qclob");
    }
    if (j.contains("anchor_frame")) {
        const std::string frame = j.at("anchor_frame").get<std::string>();
        if (frame == "quote")
            spec.anchor_frame = Frame::QuoteRelative;
        else if (frame == "trade")
            spec.anchor_frame = Frame::TradeRelative;
        else
            issues.push_back("anchor_frame: expected quote or trade");
    }
    if (j.contains("base_law")) {
        const auto& b = j.at("base_law");
        spec.base_law.mu = b.value("mu", spec.base_law.mu);
        spec.base_law.sigma = b.value("sigma", spec.base_law.sigma);
        spec.base_law.xi = b.value("xi", spec.base_law.xi);
        spec.base_law.nu = b.value("nu", spec.base_law.nu);
    }
    grab("day_mu", spec.day_mu);
    grab("day_sigma", spec.day_sigma);
    grab("arrival_rate", spec.arrival_rate);
    grab("cancel_rate", spec.cancel_rate);
    grab("market_rate", spec.market_rate);
    grab("round_lot", spec.round_lot);
    grab("round_weight", spec.round_weight);
    grab("full_consume_prob", spec.full_consume_prob);
    grab("multi_price_prob", spec.multi_price_prob);
    grab("initial_price", spec.initial_price);
    grab("initial_half_spread", spec.initial_half_spread);
    grab("session_open_ms", spec.session_open_ms);
    grab("session_close_ms", spec.session_close_ms);
    grab("seed", spec.seed);
    if (j.contains("max_events") && !j.at("max_events").is_null())
        spec.max_events = j.at("max_events").get<std::uint64_t>();
    for (const auto& issue : spec.validate()) issues.push_back(issue);
    return spec;
}

nlohmann::json to_json(const GeneratorSpec& spec) {
    const char* rule = spec.ccl_rule == CclRule::AllInfinite     ? "all_infinite"
                       : spec.ccl_rule == CclRule::CorePeriphery ? "core_periphery"
                                                                 : "explicit";
    nlohmann::json ccls = nlohmann::json::array();
    for (const auto& c : spec.explicit_ccls)
        ccls.push_back({{"from", c.from},
                        {"to", c.to},
                        {"limit", c.limit ? nlohmann::json(*c.limit) : nlohmann::json(nullptr)}});
    nlohmann::json j{{"institutions", spec.institutions},
                     {"ccl_rule", rule},
                     {"mode", spec.mode == MatchMode::Centralized ? "centralized" : "qclob"},
                     {"anchor_frame", spec.anchor_frame == Frame::QuoteRelative ? "quote" : "trade"},
                     {"base_law", to_json(spec.base_law)},
                     {"day_mu", spec.day_mu},
                     {"day_sigma", spec.day_sigma},
                     {"arrival_rate", spec.arrival_rate},
                     {"cancel_rate", spec.cancel_rate},
                     {"market_rate", spec.market_rate},
                     {"round_lot", spec.round_lot},
                     {"round_weight", spec.round_weight},
                     {"full_consume_prob", spec.full_consume_prob},
                     {"multi_price_prob", spec.multi_price_prob},
                     {"initial_price", spec.initial_price},
                     {"initial_half_spread", spec.initial_half_spread},
                     {"session_open_ms", spec.session_open_ms},
                     {"session_close_ms", spec.session_close_ms},
                     {"seed", spec.seed}};
    if (!spec.explicit_ccls.empty()) j["explicit_ccls"] = ccls;
    if (spec.max_events) j["max_events"] = *spec.max_events;
    return j;
}

namespace {

std::string opt_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }
std::string opt_cell(const std::optional<Tick>& v) { return v ? std::to_string(*v) : ""; }

void aggregate_row(std::string& out, const char* name, const FlowAggregate& agg) {
    out += name;
    out += ',' + format_double(agg.total_size) + ',' + std::to_string(agg.count) + ',' +
           opt_cell(agg.mean_interarrival_s) + ',' + opt_cell(agg.modal_size) + ',' +
           format_double(agg.mean_size) + '\n';
}

}  // namespace

std::string activity_summary_csv(const ActivitySummary& s) {
    std::string out = "flow,total_size_lots,count,mean_interarrival_s,modal_size_lots,mean_size_lots\n";
    aggregate_row(out, "limit_orders", s.limit_orders);
    aggregate_row(out, "market_orders", s.market_orders);
    aggregate_row(out, "cancellations", s.cancellations);
    out += "pct_multi_price," + format_double(s.pct_multi_price) + ",,,,\n";
    out += "mean_total_resting_size," + format_double(s.mean_total_resting) + ",,,,\n";
    out += "mean_depth_at_best_quotes," + format_double(s.mean_best_depth) + ",,,,\n";
    return out;
}

std::string spread_stats_csv(const SpreadStats& s) {
    std::string out = "statistic,value\n";
    out += "defined_time_s," + format_double(s.defined_time_s) + '\n';
    out += "min_ticks," + opt_cell(s.min) + '\n';
    out += "max_ticks," + opt_cell(s.max) + '\n';
    out += "median_ticks," + opt_cell(s.median) + '\n';
    out += "mean_ticks," + opt_cell(s.mean) + '\n';
    out += "negative_fraction," + format_double(s.negative_fraction) + '\n';
    out += "negative_episodes," + std::to_string(s.negative_episodes) + '\n';
    out += "mean_negative_duration_s," + opt_cell(s.mean_negative_duration_s) + '\n';
    out += "mean_crossed_volume_lots," + opt_cell(s.mean_crossed_volume) + '\n';
    return out;
}

std::string distribution_csv(const RelativeDistribution& d) {
    std::string out = "relative_tick,mass,ecdf\n";
    double run = 0.0;
    for (const auto& [tick, mass] : d.histogram) {
        run += mass;
        out += std::to_string(tick) + ',' + format_double(mass) + ',' +
               format_double(d.total_mass > 0 ? run / d.total_mass : 0.0) + '\n';
    }
    return out;
}

std::string size_ecdf_csv(const std::vector<Lots>& sizes) {
    std::map<Lots, std::uint64_t> freq;
    for (Lots s : sizes) ++freq[s];
    std::string out = "size_lots,count,ecdf\n";
    std::uint64_t run = 0;
    for (const auto& [size, n] : freq) {
        run += n;
        out += std::to_string(size) + ',' + std::to_string(n) + ',' +
               format_double(static_cast<double>(run) / static_cast<double>(sizes.size())) + '\n';
    }
    return out;
}

std::string spectrum_csv(const std::vector<SpectrumPoint>& spectrum) {
    std::string out = "frequency_per_tick,magnitude\n";
    for (const auto& p : spectrum)
        out += format_double(p.frequency) + ',' + format_double(p.magnitude) + '\n';
    return out;
}

std::string hx_ecdf_csv(const std::vector<double>& ratios) {
    auto sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    std::string out = "h,ecdf\n";
    for (std::size_t i = 0; i < sorted.size(); ++i)
        out += format_double(sorted[i]) + ',' +
               format_double(static_cast<double>(i + 1) / static_cast<double>(sorted.size())) + '\n';
    return out;
}

std::string deciles_csv(const std::vector<DecileRow>& rows) {
    std::string out = "decile,count,mean_queue_lots,mean_size_lots\n";
    for (const auto& r : rows)
        out += std::to_string(r.decile) + ',' + std::to_string(r.count) + ',' +
               format_double(r.mean_queue) + ',' + format_double(r.mean_size) + '\n';
    return out;
}

std::string cancellation_ratio_csv(const std::map<Tick, double>& ratio) {
    std::string out = "relative_tick,cancellation_ratio\n";
    for (const auto& [tick, value] : ratio)
        out += std::to_string(tick) + ',' + format_double(value) + '\n';
    return out;
}

std::string collapse_pairs_csv(const CollapseReport& report) {
    std::string out = "d1,d2,raw_distance,rescaled_distance,ratio,excluded\n";
    for (const auto& p : report.pairs)
        out += std::to_string(p.d1) + ',' + std::to_string(p.d2) + ',' +
               format_double(p.raw_distance) + ',' + format_double(p.rescaled_distance) + ',' +
               format_double(p.ratio) + ',' + (p.excluded ? "1" : "0") + '\n';
    return out;
}

std::string qq_table_csv(const std::vector<double>& empirical_quantiles,
                         const std::vector<double>& model_quantiles) {
    std::string out = "percentile,empirical,model\n";
    for (std::size_t i = 0; i < empirical_quantiles.size() && i < model_quantiles.size(); ++i)
        out += std::to_string(i + 1) + ',' + format_double(empirical_quantiles[i]) + ',' +
               format_double(model_quantiles[i]) + '\n';
    return out;
}

}  // namespace qclob

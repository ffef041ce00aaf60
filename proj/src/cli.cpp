#include "qclob/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qclob/emit.hpp"
#include "qclob/replay.hpp"

namespace qclob {

namespace {

namespace fs = std::filesystem;

struct CliError {
    int code;
    std::string message;
};

std::string issue_text(const fs::path& file, const ParseIssue& issue) {
    return file.filename().string() + ":" + std::to_string(issue.line) + ": " + issue.message;
}

struct SessionInput {
    std::vector<TickEvent> ticks;
    std::vector<TradeRecord> trades;
    SessionConfig config;
};

SessionConfig load_config(const std::string& path) {
    if (path.empty()) return SessionConfig{};
    std::vector<ParseIssue> issues;
    SessionConfig cfg = SessionConfig::parse(read_file(path), issues);
    if (!issues.empty()) throw CliError{cli_exit::parse, issue_text(path, issues.front())};
    return cfg;
}

SessionInput load_session(const std::string& ticks_path, const std::string& trades_path,
                          const std::string& config_path) {
    SessionInput input;
    input.config = load_config(config_path);
    auto ticks = parse_tick_file(read_file(ticks_path));
    if (!ticks.ok()) throw CliError{cli_exit::parse, issue_text(ticks_path, ticks.issues.front())};
    auto trades = parse_trade_file(read_file(trades_path));
    if (!trades.ok())
        throw CliError{cli_exit::parse, issue_text(trades_path, trades.issues.front())};
    input.ticks = std::move(ticks.records);
    input.trades = std::move(trades.records);
    return input;
}

struct DayFiles {
    std::string label;
    fs::path ticks;
    fs::path trades;
};

std::vector<DayFiles> discover_days(const std::string& dir) {
    std::vector<DayFiles> days;
    if (!fs::is_directory(dir))
        throw CliError{cli_exit::parse, dir + " is not a directory"};
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        const std::string suffix = ".ticks.csv";
        if (name.size() <= suffix.size() ||
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0)
            continue;
        const std::string stem = name.substr(0, name.size() - suffix.size());
        DayFiles day;
        day.label = stem;
        day.ticks = entry.path();
        day.trades = entry.path().parent_path() / (stem + ".trades.csv");
        if (!fs::exists(day.trades))
            throw CliError{cli_exit::parse, "missing trade file for day " + stem};
        days.push_back(day);
    }
    std::sort(days.begin(), days.end(),
              [](const DayFiles& a, const DayFiles& b) { return a.label < b.label; });
    if (days.empty())
        throw CliError{cli_exit::parse, "no day_*.ticks.csv files under " + dir};
    return days;
}

std::vector<SessionResult> replay_days(const std::vector<DayFiles>& days,
                                       const std::string& config_path) {
    const SessionConfig cfg = load_config(config_path);
    std::vector<std::future<SessionResult>> futures;
    futures.reserve(days.size());
    for (const auto& day : days) {
        futures.push_back(std::async(std::launch::async, [&day, cfg] {
            auto ticks = parse_tick_file(read_file(day.ticks));
            if (!ticks.ok())
                throw CliError{cli_exit::parse, issue_text(day.ticks, ticks.issues.front())};
            auto trades = parse_trade_file(read_file(day.trades));
            if (!trades.ok())
                throw CliError{cli_exit::parse, issue_text(day.trades, trades.issues.front())};
            return replay(ticks.records, trades.records, cfg);
        }));
    }
    std::vector<SessionResult> sessions;
    sessions.reserve(days.size());
    for (auto& f : futures) sessions.push_back(f.get());
    return sessions;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

Frame frame_of(const std::string& name) {
    return name == "quote" ? Frame::QuoteRelative : Frame::TradeRelative;
}

std::vector<Frame> selected_frames(const std::string& frame_flag) {
    if (frame_flag == "both") return {Frame::QuoteRelative, Frame::TradeRelative};
    return {frame_of(frame_flag)};
}

std::vector<FlowKind> selected_flows(const std::string& flow_flag) {
    if (flow_flag == "limits") return {FlowKind::LimitArrivals};
    if (flow_flag == "cancels") return {FlowKind::Cancellations};
    if (flow_flag == "depth") return {FlowKind::MeanDepth};
    return {FlowKind::LimitArrivals, FlowKind::Cancellations, FlowKind::MeanDepth};
}

const char* frame_tag(Frame f) { return f == Frame::QuoteRelative ? "quote" : "trade"; }

const char* flow_tag(FlowKind f) {
    switch (f) {
        case FlowKind::LimitArrivals: return "limits";
        case FlowKind::Cancellations: return "cancels";
        case FlowKind::MeanDepth: return "depth";
    }
    return "?";
}

int cmd_replay(const std::string& ticks, const std::string& trades, const std::string& config,
               const std::string& out_dir) {
    const SessionInput input = load_session(ticks, trades, config);
    const SessionResult session = replay(input.ticks, input.trades, input.config);
    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    const ActivitySummary summary = activity_summary(session);
    write_json(out / "activity_summary.json", to_json(summary));
    write_file_atomic(out / "activity_summary.csv", activity_summary_csv(summary));

    const SpreadStats spread = spread_stats(session);
    write_json(out / "spread_stats.json", to_json(spread));
    write_file_atomic(out / "spread_stats.csv", spread_stats_csv(spread));

    std::vector<Lots> limit_sizes, market_sizes;
    for (const auto& e : session.limit_arrivals) limit_sizes.push_back(e.size);
    for (const auto& m : session.market_orders) market_sizes.push_back(m.total_size);
    write_file_atomic(out / "limit_order_size_ecdf.csv", size_ecdf_csv(limit_sizes));
    write_file_atomic(out / "market_order_size_ecdf.csv", size_ecdf_csv(market_sizes));
    write_json(out / "session_counts.json",
               {{"arrivals", session.arrival_count},
                {"departures", session.departure_count},
                {"market_order_groups", session.market_orders.size()},
                {"skipped_outside_window", session.skipped_outside_window},
                {"final_event_time", session.final_event_time},
                {"empty_session", session.empty_session()}});

    return session.empty_session() ? cli_exit::empty_session : cli_exit::ok;
}

int cmd_stats(const std::string& ticks, const std::string& trades, const std::string& config,
              const std::string& frame_flag, const std::string& flow_flag,
              const std::string& out_dir, bool count_weighted) {
    const SessionInput input = load_session(ticks, trades, config);
    const SessionResult session = replay(input.ticks, input.trades, input.config);
    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    for (Frame frame : selected_frames(frame_flag)) {
        for (FlowKind flow : selected_flows(flow_flag)) {
            const auto dist = relative_distribution(session, frame, flow, count_weighted);
            const std::string stem = std::string(frame_tag(frame)) + "_" + flow_tag(flow);
            auto j = to_json(dist);
            j["empty"] = dist.histogram.empty();
            write_json(out / (stem + "_distribution.json"), j);
            write_file_atomic(out / (stem + "_distribution.csv"), distribution_csv(dist));
            write_file_atomic(out / (stem + "_spectrum.csv"),
                              spectrum_csv(magnitude_spectrum(dist.histogram)));
        }
        // The ratio needs both cancel and depth profiles regardless of the
        // flow selection.
        const auto cancels = relative_distribution(session, frame, FlowKind::Cancellations);
        const auto depth = relative_distribution(session, frame, FlowKind::MeanDepth);
        write_file_atomic(out / (std::string(frame_tag(frame)) + "_cancellation_ratio.csv"),
                          cancellation_ratio_csv(cancellation_ratio(cancels, depth)));
    }

    write_file_atomic(out / "hx_ecdf.csv", hx_ecdf_csv(queue_consumption_ratios(session)));
    write_file_atomic(out / "size_vs_queue_deciles.csv",
                      deciles_csv(size_vs_queue_deciles(session)));
    return session.empty_session() ? cli_exit::empty_session : cli_exit::ok;
}

int cmd_fit(const std::string& days_dir, const std::string& ticks, const std::string& trades,
            const std::string& config, const std::string& frame_flag,
            const std::string& flow_flag, const std::string& out_dir) {
    std::vector<std::string> labels;
    std::vector<SessionResult> sessions;
    if (!days_dir.empty()) {
        const auto days = discover_days(days_dir);
        sessions = replay_days(days, config);
        for (const auto& d : days) labels.push_back(d.label);
    } else {
        const SessionInput input = load_session(ticks, trades, config);
        sessions.push_back(replay(input.ticks, input.trades, input.config));
        labels.push_back("session");
    }
    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    for (Frame frame : selected_frames(frame_flag)) {
        for (FlowKind flow : selected_flows(flow_flag)) {
            for (std::size_t d = 0; d < sessions.size(); ++d) {
                const auto dist = relative_distribution(sessions[d], frame, flow, false,
                                                        labels[d]);
                const std::string stem = "fit_" + std::string(frame_tag(frame)) + "_" +
                                         flow_tag(flow) + "_" + labels[d];
                nlohmann::json j{{"day", labels[d]},
                                 {"frame", frame_tag(frame)},
                                 {"flow", flow_tag(flow)}};
                try {
                    FitOptions options;
                    options.trim_threshold = static_cast<double>(sessions[d].config.trim_ticks);
                    const FitResult fit = fit_gent(dist.ecdf, std::nullopt, options);
                    j["fit"] = to_json(fit);
                    std::vector<double> emp_q, model_q;
                    for (int p = 1; p <= 99; ++p) {
                        emp_q.push_back(dist.ecdf.quantile(p / 100.0));
                        model_q.push_back(gent_quantile(p / 100.0, fit.params));
                    }
                    write_file_atomic(out / (stem + "_qq.csv"), qq_table_csv(emp_q, model_q));
                } catch (const std::domain_error& e) {
                    j["error"] = e.what();
                }
                write_json(out / (stem + ".json"), j);
            }
        }
    }
    return cli_exit::ok;
}

int cmd_collapse(const std::string& days_dir, const std::string& config,
                 const std::string& frame_flag, const std::string& flow_flag,
                 const std::string& distance_flag, const std::string& out_dir) {
    const auto days = discover_days(days_dir);
    if (days.size() < 2) throw CliError{cli_exit::parse, "collapse needs at least two days"};
    const auto sessions = replay_days(days, config);
    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    std::vector<DistanceKind> kinds;
    if (distance_flag == "cvm" || distance_flag == "both") kinds.push_back(DistanceKind::CvM);
    if (distance_flag == "ks" || distance_flag == "both") kinds.push_back(DistanceKind::KS);

    std::string summary = "frame,flow,distance,mean_ratio,pairs_used,pairs_excluded\n";
    for (Frame frame : selected_frames(frame_flag)) {
        for (FlowKind flow : selected_flows(flow_flag)) {
            std::vector<EmpiricalDistribution> ecdfs;
            for (const auto& session : sessions)
                ecdfs.push_back(relative_distribution(session, frame, flow).ecdf);
            const double trim = static_cast<double>(sessions.front().config.trim_ticks);
            for (DistanceKind kind : kinds) {
                const std::string tag = kind == DistanceKind::CvM ? "cvm" : "ks";
                const std::string stem = "collapse_" + std::string(frame_tag(frame)) + "_" +
                                         flow_tag(flow) + "_" + tag;
                try {
                    const CollapseReport report = collapse_ratio(ecdfs, kind, trim);
                    auto j = to_json(report);
                    nlohmann::json day_labels = nlohmann::json::array();
                    for (const auto& d : days) day_labels.push_back(d.label);
                    j["days"] = day_labels;
                    write_json(out / (stem + ".json"), j);
                    write_file_atomic(out / (stem + ".csv"), collapse_pairs_csv(report));
                    summary += std::string(frame_tag(frame)) + ',' + flow_tag(flow) + ',' + tag +
                               ',' + format_double(report.mean_ratio) + ',' +
                               std::to_string(report.pairs_used) + ',' +
                               std::to_string(report.pairs_excluded) + '\n';
                } catch (const std::domain_error& e) {
                    write_json(out / (stem + ".json"), {{"error", e.what()}});
                    summary += std::string(frame_tag(frame)) + ',' + flow_tag(flow) + ',' + tag +
                               ",,,\n";
                }
            }
        }
    }
    write_file_atomic(out / "collapse_summary.csv", summary);
    return cli_exit::ok;
}

int cmd_generate(const std::string& spec_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override,
                 const std::string& mode_override) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(spec_path));
    } catch (const nlohmann::json::exception& e) {
        throw CliError{cli_exit::parse, std::string("spec: ") + e.what()};
    }
    std::vector<std::string> issues;
    GeneratorSpec spec = generator_spec_from_json(j, issues);
    if (!issues.empty()) {
        std::string msg = "invalid generator spec:";
        for (const auto& issue : issues) msg += "\n  " + issue;
        throw CliError{cli_exit::parse, msg};
    }
    if (seed_override) spec.seed = *seed_override;
    if (mode_override == "centralized") spec.mode = MatchMode::Centralized;
    if (mode_override == "qclob") spec.mode = MatchMode::Qclob;

    std::vector<DayParams> schedule;
    if (j.contains("schedule")) {
        for (const auto& entry : j.at("schedule"))
            schedule.push_back({entry.value("mu", spec.day_mu),
                                entry.value("sigma", spec.day_sigma)});
    } else {
        const int days = j.value("days", 1);
        if (days < 1) throw CliError{cli_exit::parse, "days: must be at least 1"};
        schedule.assign(static_cast<std::size_t>(days), {spec.day_mu, spec.day_sigma});
    }

    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    const auto sessions = generate_family(spec, schedule);
    for (std::size_t d = 0; d < sessions.size(); ++d) {
        char label[32];
        std::snprintf(label, sizeof label, "day_%03zu", d);
        write_file_atomic(out / (std::string(label) + ".ticks.csv"),
                          serialize_tick_events(sessions[d].ticks));
        write_file_atomic(out / (std::string(label) + ".trades.csv"),
                          serialize_trade_records(sessions[d].trades));
        write_json(out / (std::string(label) + ".truth.json"), to_json(sessions[d].truth));
    }
    write_json(out / "generator_spec.json", to_json(spec));
    return cli_exit::ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"quasi-centralized limit order book laboratory"};
    app.require_subcommand(1);

    std::string ticks, trades, config, out_dir, days_dir, spec_path;
    std::string frame_flag = "both", flow_flag = "all", distance_flag = "cvm", mode_flag;
    bool count_weighted = false;
    std::optional<std::uint64_t> seed;

    auto add_session_opts = [&](CLI::App* cmd, bool required_session) {
        auto* t = cmd->add_option("--ticks", ticks, "tick file");
        auto* r = cmd->add_option("--trades", trades, "trade file");
        if (required_session) {
            t->required();
            r->required();
        }
        cmd->add_option("--config", config, "session config file");
        cmd->add_option("--out", out_dir, "output directory")->required();
    };

    auto* replay_cmd = app.add_subcommand("replay", "reconstruct one session");
    add_session_opts(replay_cmd, true);

    auto* stats_cmd = app.add_subcommand("stats", "order-flow and book statistics");
    add_session_opts(stats_cmd, true);
    stats_cmd->add_option("--frame", frame_flag, "quote|trade|both")
        ->check(CLI::IsMember({"quote", "trade", "both"}));
    stats_cmd->add_option("--flow", flow_flag, "limits|cancels|depth|all")
        ->check(CLI::IsMember({"limits", "cancels", "depth", "all"}));
    stats_cmd->add_flag("--count-weighted", count_weighted, "count-weighted histograms");

    auto* fit_cmd_ = app.add_subcommand("fit", "generalized t fits");
    add_session_opts(fit_cmd_, false);
    fit_cmd_->add_option("--days", days_dir, "directory of day_*.{ticks,trades}.csv");
    fit_cmd_->add_option("--frame", frame_flag, "quote|trade|both")
        ->check(CLI::IsMember({"quote", "trade", "both"}));
    fit_cmd_->add_option("--flow", flow_flag, "limits|cancels|depth|all")
        ->check(CLI::IsMember({"limits", "cancels", "depth", "all"}));

    auto* collapse_cmd_ = app.add_subcommand("collapse", "curve-collapse ratios");
    collapse_cmd_->add_option("--days", days_dir, "directory of day files")->required();
    collapse_cmd_->add_option("--config", config, "session config file");
    collapse_cmd_->add_option("--out", out_dir, "output directory")->required();
    collapse_cmd_->add_option("--frame", frame_flag, "quote|trade|both")
        ->check(CLI::IsMember({"quote", "trade", "both"}));
    collapse_cmd_->add_option("--flow", flow_flag, "limits|cancels|depth|all")
        ->check(CLI::IsMember({"limits", "cancels", "depth", "all"}));
    collapse_cmd_->add_option("--distance", distance_flag, "cvm|ks|both")
        ->check(CLI::IsMember({"cvm", "ks", "both"}));

    auto* generate_cmd = app.add_subcommand("generate", "synthetic sessions");
    generate_cmd->add_option("--spec", spec_path, "generator spec JSON")->required();
    generate_cmd->add_option("--out", out_dir, "output directory")->required();
    generate_cmd->add_option("--seed", seed, "seed override");
    generate_cmd->add_option("--mode", mode_flag, "centralized|qclob")
        ->check(CLI::IsMember({"centralized", "qclob"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli_exit::usage;
    }

    try {
        if (replay_cmd->parsed()) return cmd_replay(ticks, trades, config, out_dir);
        if (stats_cmd->parsed())
            return cmd_stats(ticks, trades, config, frame_flag, flow_flag, out_dir,
                             count_weighted);
        if (fit_cmd_->parsed()) {
            if (days_dir.empty() && (ticks.empty() || trades.empty()))
                throw CliError{cli_exit::usage, "fit needs --days or --ticks/--trades"};
            return cmd_fit(days_dir, ticks, trades, config, frame_flag, flow_flag, out_dir);
        }
        if (collapse_cmd_->parsed())
            return cmd_collapse(days_dir, config, frame_flag, flow_flag, distance_flag, out_dir);
        if (generate_cmd->parsed()) return cmd_generate(spec_path, out_dir, seed, mode_flag);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return cli_exit::internal;
    }
    return cli_exit::usage;
}

}  // namespace qclob

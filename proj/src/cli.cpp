#include "crossimpact/cli.hpp"

#include "crossimpact/calibration.hpp"
#include "crossimpact/error.hpp"
#include "crossimpact/execution.hpp"
#include "crossimpact/format.hpp"
#include "crossimpact/ingest.hpp"
#include "crossimpact/io.hpp"
#include "crossimpact/microstructure.hpp"
#include "crossimpact/optimizer.hpp"
#include "crossimpact/parallel.hpp"
#include "crossimpact/synth.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace crossimpact::cli {

namespace {

namespace fs = std::filesystem;

struct Globals {
    bool json = false;
    int threads = 0;
    std::optional<std::uint64_t> seed;
    bool no_timestamp = false;
    bool verbose = false;
};

class Context {
public:
    Context(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {}

    const Globals& globals() const { return g_; }
    std::ostream& out() { return out_; }

    void log(const std::string& msg) {
        if (g_.verbose) err_ << msg << '\n';
    }
    void warn(const std::string& msg) { err_ << "warning: " << msg << '\n'; }

    /// Adds the metadata line unless suppressed.
    Json stamped(Json doc) const {
        if (g_.no_timestamp) return doc;
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::ostringstream ts;
        ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
        doc["generated_at"] = ts.str();
        return doc;
    }

    void emit(const Json& doc) {
        if (g_.json) out_ << doc.dump(2) << '\n';
    }

private:
    Globals g_;
    std::ostream& out_;
    std::ostream& err_;
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ValidationError("cannot create directory " + dir.string());
}

void ensure_parent(const fs::path& file) {
    if (file.has_parent_path()) ensure_dir(file.parent_path());
}

template <class F>
void write_text(const fs::path& path, F&& body) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write " + path.string());
    body(os);
    if (!os) throw ValidationError("failed writing " + path.string());
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError(flag + ": cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw ValidationError(flag + " needs at least one value");
    return out;
}

std::string zeta_tag(double z) { return format_double(z); }

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
    std::string trades_dir, quotes_dir, out;
    std::vector<std::string> tickers;
    int open = 0, close = 23400, edge = 600;
    std::string normalize = "all";
};

void cmd_ingest(Context& ctx, const IngestArgs& a) {
    const SessionSpec session{a.open, a.close, a.edge};
    session.validate();
    if (a.tickers.size() != 2) throw ValidationError("--tickers needs exactly two tickers");
    const std::string quotes_dir = a.quotes_dir.empty() ? a.trades_dir : a.quotes_dir;
    if (!fs::is_directory(quotes_dir)) throw ValidationError("quotes directory " + quotes_dir + " does not exist");
    const auto norm = a.normalize == "trading" ? VolumeNormalization::TradingSeconds : VolumeNormalization::AllSeconds;
    ensure_dir(a.out);

    ctx.log("loading " + a.tickers[0] + " and " + a.tickers[1]);
    PairDays raw{load_stock_days(a.trades_dir, quotes_dir, a.tickers[0]),
                 load_stock_days(a.trades_dir, quotes_dir, a.tickers[1])};
    const auto days = sessionize(raw, session);
    if (days.i.empty()) throw EmptyDomainError("no day has trades for both stocks inside the session window");

    auto bi = build_second_bars(days.i, session, norm);
    auto bj = build_second_bars(days.j, session, norm);
    for (const auto& w : bi.warnings) ctx.warn(a.tickers[0] + ": " + w);
    for (const auto& w : bj.warnings) ctx.warn(a.tickers[1] + ": " + w);

    // keep the days that survived for both stocks
    BarSeries keep_i, keep_j;
    std::size_t q = 0;
    for (auto& day : bi.bars) {
        while (q < bj.bars.size() && bj.bars[q].date < day.date) ++q;
        if (q < bj.bars.size() && bj.bars[q].date == day.date) {
            keep_i.push_back(std::move(day));
            keep_j.push_back(std::move(bj.bars[q]));
        }
    }
    if (keep_i.empty()) throw EmptyDomainError("no day has quotes for both stocks");

    const fs::path out_i = fs::path(a.out) / (a.tickers[0] + ".bars.csv");
    const fs::path out_j = fs::path(a.out) / (a.tickers[1] + ".bars.csv");
    write_bars_csv(keep_i, out_i);
    write_bars_csv(keep_j, out_j);

    Json summary{{"days", keep_i.size()},
                 {"seconds_per_stock", total_seconds(keep_i)},
                 {"flagged_seconds", {{a.tickers[0], bi.flagged_seconds}, {a.tickers[1], bj.flagged_seconds}}},
                 {"skipped_days", bi.warnings.size() + bj.warnings.size()},
                 {"outputs", {out_i.string(), out_j.string()}}};
    ctx.emit(summary);
    if (!ctx.globals().json) {
        ctx.out() << "wrote " << out_i.string() << " and " << out_j.string() << " (" << keep_i.size() << " days)\n";
    }
}

// ---- stats ----------------------------------------------------------------

struct StatsArgs {
    std::string bars_i, bars_j, out_dir;
    int tau_max = 300;
    int bins = 20;
};

void write_response(const fs::path& path, const ResponseCurve& r) {
    write_text(path, [&](std::ostream& os) {
        os << "tau,value,count\n";
        for (std::size_t k = 0; k < r.values.size(); ++k) {
            os << k + 1 << ',' << (r.counts[k] ? format_double(r.values[k]) : "") << ',' << r.counts[k] << '\n';
        }
    });
}

void write_correlator(const fs::path& path, const SignCorrelator& c) {
    write_text(path, [&](std::ostream& os) {
        os << "tau,value,count\n";
        for (std::size_t k = 0; k < c.values.size(); ++k) {
            os << k << ',' << (std::isfinite(c.values[k]) ? format_double(c.values[k]) : "") << ',' << c.counts[k]
               << '\n';
        }
    });
}

void write_conditional(const fs::path& path, const ConditionalResponse& c) {
    write_text(path, [&](std::ostream& os) {
        os << "v_bin,value,count\n";
        for (std::size_t k = 0; k < c.bins(); ++k) {
            os << format_double(c.center[k]) << ',' << (c.counts[k] ? format_double(c.values[k]) : "") << ','
               << c.counts[k] << '\n';
        }
    });
}

ConditionalResponse conditional_for(const BarSeries& target, const BarSeries& source, int bins) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& day : source) {
        for (const auto& b : day.bars) {
            if (b.sign == 0 || !(b.norm_volume > 0.0)) continue;
            lo = std::min(lo, b.norm_volume);
            hi = std::max(hi, b.norm_volume);
        }
    }
    if (!(hi > lo)) throw EmptyDomainError("not enough distinct traded volumes to bin");
    const auto edges = log_bin_edges(lo, hi, bins);
    return conditional_response(target, source, edges, 1);
}

void cmd_stats(Context& ctx, const StatsArgs& a) {
    if (a.tau_max < 1) throw ValidationError("--tau-max must be >= 1");
    if (a.bins < 1) throw ValidationError("--bins must be >= 1");
    const auto bi = read_bars_csv(fs::path(a.bars_i));
    const auto bj = read_bars_csv(fs::path(a.bars_j));
    check_aligned(bi, bj);
    ensure_dir(a.out_dir);
    const fs::path dir(a.out_dir);

    ctx.log("estimating responses");
    const auto r_ij = response_curve(bi, bj, a.tau_max);
    const auto r_ji = response_curve(bj, bi, a.tau_max);
    const auto th_ii = sign_self_correlator(sign_series(bi), a.tau_max);
    const auto th_jj = sign_self_correlator(sign_series(bj), a.tau_max);
    const auto c_ij = conditional_for(bi, bj, a.bins);
    const auto c_ji = conditional_for(bj, bi, a.bins);

    write_response(dir / "response_ij.csv", r_ij);
    write_response(dir / "response_ji.csv", r_ji);
    write_correlator(dir / "sign_ii.csv", th_ii);
    write_correlator(dir / "sign_jj.csv", th_jj);
    write_conditional(dir / "conditional_ij.csv", c_ij);
    write_conditional(dir / "conditional_ji.csv", c_ji);

    auto curve = [](const std::vector<double>& v) {
        Json arr = Json::array();
        for (double x : v) arr.push_back(std::isfinite(x) ? Json(x) : Json(nullptr));
        return arr;
    };
    ctx.emit(Json{{"response_ij", curve(r_ij.values)},
                  {"response_ji", curve(r_ji.values)},
                  {"sign_ii", curve(th_ii.values)},
                  {"sign_jj", curve(th_jj.values)},
                  {"conditional_ij", {{"v", curve(c_ij.center)}, {"value", curve(c_ij.values)}}},
                  {"conditional_ji", {{"v", curve(c_ji.center)}, {"value", curve(c_ji.values)}}}});
    if (!ctx.globals().json) ctx.out() << "wrote statistics to " << dir.string() << '\n';
}

// ---- calibrate --------------------------------------------------------------

struct CalibrateArgs {
    std::string bars_i, bars_j, out, diagnostics;
    CalibrationConfig config;
};

void cmd_calibrate(Context& ctx, const CalibrateArgs& a) {
    const auto bi = read_bars_csv(fs::path(a.bars_i));
    const auto bj = read_bars_csv(fs::path(a.bars_j));
    ensure_parent(a.out);
    ctx.log("calibrating with cut-off " + std::to_string(a.config.cutoff));
    const auto result = calibrate_pair(bi, bj, a.config);

    const Json params = params_to_json(calibrated_params(result));
    Json with_g = params;
    with_g["pairs"]["ij"]["mean_g"] = result.ij.mean_g;
    with_g["pairs"]["ji"]["mean_g"] = result.ji.mean_g;
    write_json_file(a.out, ctx.stamped(with_g));

    fs::path diag = a.diagnostics;
    if (diag.empty()) {
        diag = fs::path(a.out);
        diag.replace_extension(".diagnostics.json");
    }
    ensure_parent(diag);
    write_json_file(diag, ctx.stamped(calibration_diagnostics(result, a.config)));

    for (const auto* d : {&result.ij, &result.ji}) {
        if (d->extraction.ridge) ctx.warn("ridge fallback used in kernel extraction");
        if (!d->fit.converged) ctx.warn("kernel fit did not converge; best iterate reported");
        if (d->low_sample) ctx.warn("low sample size; treat the estimates with care");
    }
    ctx.emit(with_g);
    if (!ctx.globals().json) ctx.out() << "wrote " << a.out << " and " << diag.string() << '\n';
}

// ---- cost -----------------------------------------------------------------

struct CostArgs {
    std::string params, request, out, method = "closed_form";
    std::optional<double> kappa_i, kappa_j, zeta_t;
    Presets presets;
};

void cmd_cost(Context& ctx, const CostArgs& a) {
    CostRequest req;
    if (!a.request.empty()) {
        if (!a.params.empty() || a.kappa_i || a.kappa_j || a.zeta_t) {
            throw ValidationError("--request cannot be combined with --params or strategy flags");
        }
        req = cost_request_from_json(read_json_file(a.request));
    } else {
        if (a.params.empty()) throw ValidationError("cost needs --params or --request");
        if (!a.kappa_i || !a.kappa_j || !a.zeta_t) throw ValidationError("cost needs --kappa-i, --kappa-j and --zeta-t");
        req.model = params_from_json(read_json_file(a.params)).model;
        req.strategy = {*a.kappa_i, *a.kappa_j, *a.zeta_t};
        req.strategy.validate();
        req.presets = a.presets;
        req.presets.validate();
        req.options.method = a.method == "quadrature" ? IntegrationMethod::Quadrature : IntegrationMethod::ClosedForm;
    }
    const auto cost = cross_cost_total(req.presets, req.strategy, req.model, req.options);
    const Json result = cost_result_to_json(req.strategy, cost);
    if (!a.out.empty()) {
        ensure_parent(a.out);
        write_json_file(a.out, ctx.stamped(result));
    }
    ctx.emit(result);
    if (!ctx.globals().json) {
        ctx.out() << "region " << region_name(cost.region.region) << (cost.region.on_boundary ? " (boundary)" : "")
                  << "\nomega_ij " << format_double(cost.omega_ij) << "\nomega_ji " << format_double(cost.omega_ji)
                  << "\nomega_c " << format_double(cost.omega_c) << "\nomega_c_x1e6 "
                  << format_double(cost.omega_c_scaled()) << '\n';
    }
}

// ---- optimize / heatmap ---------------------------------------------------

struct GridArgs {
    std::string params, zeta_t = "0.5,1,2", out, out_dir, region;
    int grid = 50;
    double kappa_min = 0.02, kappa_max = 0.98;
    bool refine = false;
    Presets presets;
};

GridSpec grid_from(const GridArgs& a) {
    GridSpec g;
    g.kappa_steps = a.grid;
    g.kappa_min = a.kappa_min;
    g.kappa_max = a.kappa_max;
    g.zeta_T_values = parse_list(a.zeta_t, "--zeta-t");
    g.validate();
    return g;
}

void cmd_optimize(Context& ctx, const GridArgs& a) {
    const auto grid = grid_from(a);
    std::optional<Region> only;
    if (!a.region.empty()) only = region_from_name(a.region);
    const auto model = params_from_json(read_json_file(a.params)).model;
    a.presets.validate();
    const auto surfaces = build_surfaces(a.presets, model, grid);
    auto best = find_min(surfaces, only);
    Json result{{"grid", optimal_to_json(best)}};
    if (a.refine) {
        RefineOptions ro;
        ro.kappa_min = grid.kappa_min;
        ro.kappa_max = grid.kappa_max;
        ro.lock_region = only.has_value();
        best = refine_min(a.presets, model, best, ro);
        result["refined"] = optimal_to_json(best);
    }
    if (!a.out.empty()) {
        ensure_parent(a.out);
        write_json_file(a.out, ctx.stamped(result));
    }
    ctx.emit(result);
    if (!ctx.globals().json) {
        ctx.out() << "kappa_i " << format_double(best.params.kappa_i) << "\nkappa_j "
                  << format_double(best.params.kappa_j) << "\nzeta_T " << format_double(best.params.zeta_T)
                  << "\nregion " << region_name(best.region) << "\nomega_c " << format_double(best.omega_c)
                  << "\nomega_c_x1e6 " << format_double(best.omega_c * 1e6) << '\n';
    }
}

void cmd_heatmap(Context& ctx, const GridArgs& a) {
    const auto grid = grid_from(a);
    const auto model = params_from_json(read_json_file(a.params)).model;
    a.presets.validate();
    ensure_dir(a.out_dir);
    Json files = Json::array();
    for (double z : grid.zeta_T_values) {
        ctx.log("surface for zeta_T = " + zeta_tag(z));
        const auto s = build_surface(a.presets, model, z, grid);
        const fs::path csv = fs::path(a.out_dir) / ("surface_zeta" + zeta_tag(z) + ".csv");
        const fs::path json = fs::path(a.out_dir) / ("surface_zeta" + zeta_tag(z) + ".json");
        write_text(csv, [&](std::ostream& os) { write_surface_csv(s, os); });
        write_json_file(json, ctx.stamped(surface_to_json(s)));
        files.push_back({{"zeta_T", z}, {"csv", csv.string()}, {"json", json.string()}});
    }
    ctx.emit(Json{{"surfaces", files}});
    if (!ctx.globals().json) ctx.out() << "wrote " << files.size() << " surfaces to " << a.out_dir << '\n';
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
    std::string config, out_dir;
};

void cmd_synth(Context& ctx, const SynthArgs& a) {
    auto config = synth_config_from_json(read_json_file(a.config));
    if (ctx.globals().seed) config.seed = *ctx.globals().seed;
    ensure_dir(a.out_dir);
    ctx.log("generating " + std::to_string(config.days) + " days");
    const auto corpus = generate_corpus(config);
    const fs::path dir(a.out_dir);
    write_bars_csv(corpus.bars_i, dir / "bars_i.csv");
    write_bars_csv(corpus.bars_j, dir / "bars_j.csv");
    const Json truth = synth_truth_json(config, corpus);
    write_json_file(dir / "truth.json", ctx.stamped(truth));
    ctx.emit(truth);
    if (!ctx.globals().json) ctx.out() << "wrote bars_i.csv, bars_j.csv and truth.json to " << dir.string() << '\n';
}

void add_presets(CLI::App* sub, Presets& p) {
    sub->add_option("--zeta-v", p.zeta_v, "total volume ratio v_i / v_j")->capture_default_str();
    sub->add_option("--T-i", p.T_i, "trading period of stock i")->capture_default_str();
    sub->add_option("--vdot-in-i", p.vdot_in_i, "buy rate of stock i")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cross-impact cost modelling and calibration", "crossimpact"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::uint64_t seed = 0;
    app.add_flag("--json", g.json, "echo numeric results as JSON on stdout");
    app.add_option("--threads", g.threads, "thread cap (default: all cores)")->check(CLI::NonNegativeNumber);
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed override");
    app.add_flag("--no-timestamp", g.no_timestamp, "omit generated_at from JSON outputs");
    app.add_flag("-v,--verbose", g.verbose, "progress messages on stderr");

    IngestArgs ingest;
    auto* s_ingest = app.add_subcommand("ingest", "build per-second bars from trade and quote files");
    s_ingest->add_option("--trades-dir", ingest.trades_dir, "directory holding <ticker>/<date>.trades.csv")
        ->required()
        ->check(CLI::ExistingDirectory);
    s_ingest->add_option("--quotes-dir", ingest.quotes_dir, "directory holding <ticker>/<date>.quotes.csv")
        ->check(CLI::ExistingDirectory);
    s_ingest->add_option("--tickers", ingest.tickers, "the two tickers, i first")->required()->delimiter(',');
    s_ingest->add_option("--out", ingest.out, "output directory for <ticker>.bars.csv")->required();
    s_ingest->add_option("--session-open", ingest.open)->capture_default_str();
    s_ingest->add_option("--session-close", ingest.close)->capture_default_str();
    s_ingest->add_option("--edge", ingest.edge, "seconds dropped at each end of the session")->capture_default_str();
    s_ingest->add_option("--normalize", ingest.normalize, "volume normalization base")
        ->check(CLI::IsMember({"all", "trading"}))
        ->capture_default_str();

    StatsArgs stats;
    auto* s_stats = app.add_subcommand("stats", "responses, sign correlators and conditional responses");
    s_stats->add_option("--bars-i", stats.bars_i)->required()->check(CLI::ExistingFile);
    s_stats->add_option("--bars-j", stats.bars_j)->required()->check(CLI::ExistingFile);
    s_stats->add_option("--tau-max", stats.tau_max)->capture_default_str();
    s_stats->add_option("--bins", stats.bins, "volume bins")->capture_default_str();
    s_stats->add_option("--out-dir", stats.out_dir)->required();

    CalibrateArgs cal;
    auto* s_cal = app.add_subcommand("calibrate", "fit volume impacts and kernels in both directions");
    s_cal->add_option("--bars-i", cal.bars_i)->required()->check(CLI::ExistingFile);
    s_cal->add_option("--bars-j", cal.bars_j)->required()->check(CLI::ExistingFile);
    s_cal->add_option("--cutoff", cal.config.cutoff, "size of the sign-correlator system")->capture_default_str();
    s_cal->add_option("--report-len", cal.config.report_len, "lags of tabulated kernel kept")->capture_default_str();
    s_cal->add_option("--fit-first", cal.config.fit_window.first, "first lag of the power-law fit")->capture_default_str();
    s_cal->add_option("--fit-last", cal.config.fit_window.last, "last lag of the fit (0: report length)")
        ->capture_default_str();
    s_cal->add_option("--bins", cal.config.volume_bins, "volume bins on (0, 1]")->capture_default_str();
    s_cal->add_option("--out", cal.out, "parameter file")->required();
    s_cal->add_option("--diagnostics", cal.diagnostics, "diagnostics file (default: next to --out)");

    CostArgs cost;
    auto* s_cost = app.add_subcommand("cost", "cross-impact cost of one strategy");
    s_cost->add_option("--params", cost.params)->check(CLI::ExistingFile);
    s_cost->add_option("--request", cost.request, "JSON request with presets, strategy and pairs")
        ->check(CLI::ExistingFile);
    s_cost->add_option("--kappa-i", cost.kappa_i);
    s_cost->add_option("--kappa-j", cost.kappa_j);
    s_cost->add_option("--zeta-t", cost.zeta_t);
    s_cost->add_option("--method", cost.method)->check(CLI::IsMember({"closed_form", "quadrature"}))->capture_default_str();
    s_cost->add_option("--out", cost.out, "also write the result JSON here");
    add_presets(s_cost, cost.presets);

    GridArgs opt;
    auto* s_opt = app.add_subcommand("optimize", "grid search for the cheapest strategy");
    s_opt->add_option("--params", opt.params)->required()->check(CLI::ExistingFile);
    s_opt->add_option("--zeta-t", opt.zeta_t, "comma-separated zeta_T values")->capture_default_str();
    s_opt->add_option("--grid", opt.grid, "nodes per kappa axis")->capture_default_str();
    s_opt->add_option("--kappa-min", opt.kappa_min)->capture_default_str();
    s_opt->add_option("--kappa-max", opt.kappa_max)->capture_default_str();
    s_opt->add_option("--region", opt.region, "restrict to one region")->check(CLI::IsMember({"I", "II", "III", "IV"}));
    s_opt->add_flag("--refine", opt.refine, "polish the grid optimum with Nelder-Mead");
    s_opt->add_option("--out", opt.out, "also write the result JSON here");
    add_presets(s_opt, opt.presets);

    GridArgs heat;
    auto* s_heat = app.add_subcommand("heatmap", "cost surfaces over (kappa_i, kappa_j), one per zeta_T");
    s_heat->add_option("--params", heat.params)->required()->check(CLI::ExistingFile);
    s_heat->add_option("--zeta-t", heat.zeta_t, "comma-separated zeta_T values")->capture_default_str();
    s_heat->add_option("--grid", heat.grid, "nodes per kappa axis")->capture_default_str();
    s_heat->add_option("--kappa-min", heat.kappa_min)->capture_default_str();
    s_heat->add_option("--kappa-max", heat.kappa_max)->capture_default_str();
    s_heat->add_option("--out-dir", heat.out_dir)->required();
    add_presets(s_heat, heat.presets);

    SynthArgs syn;
    auto* s_syn = app.add_subcommand("synth", "generate a synthetic two-stock corpus");
    s_syn->add_option("--config", syn.config)->required()->check(CLI::ExistingFile);
    s_syn->add_option("--out-dir", syn.out_dir)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidationError;
    }
    if (*seed_opt) g.seed = seed;

    Context ctx(g, out, err);
    const int previous_threads = thread_count();
    set_thread_count(g.threads);
    int code = kOk;
    try {
        if (*s_ingest) cmd_ingest(ctx, ingest);
        else if (*s_stats) cmd_stats(ctx, stats);
        else if (*s_cal) cmd_calibrate(ctx, cal);
        else if (*s_cost) cmd_cost(ctx, cost);
        else if (*s_opt) cmd_optimize(ctx, opt);
        else if (*s_heat) cmd_heatmap(ctx, heat);
        else if (*s_syn) cmd_synth(ctx, syn);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        code = kValidationError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        code = kValidationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        code = kComputationError;
    }
    set_thread_count(previous_threads);
    return code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
    return run(args, out, err);
}

}  // namespace crossimpact::cli

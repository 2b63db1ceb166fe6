#include "crossimpact/ingest.hpp"

#include "crossimpact/error.hpp"
#include "crossimpact/microstructure.hpp"
#include "csv.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>

namespace crossimpact {

namespace {

namespace fs = std::filesystem;

constexpr int kMaxReported = 20;

class LineErrors {
public:
    explicit LineErrors(std::string source) : source_(std::move(source)) {}

    void add(long line, const std::string& what) {
        if (count_++ < kMaxReported) os_ << "\n  line " << line << ": " << what;
    }
    void raise_if_any() const {
        if (count_ == 0) return;
        std::string msg = source_ + ": " + std::to_string(count_) + " bad line(s)" + os_.str();
        if (count_ > kMaxReported) msg += "\n  ...";
        throw IngestError(msg);
    }

private:
    std::string source_;
    std::ostringstream os_;
    int count_ = 0;
};

// Shared reader for the two four-column record files.
template <class Record, class Build>
std::vector<Record> parse_records(std::istream& is, const std::string& source, std::string_view header, Build build) {
    std::string line;
    if (!std::getline(is, line)) return {};  // an empty file holds no records
    if (detail::trim(line) != header) {
        throw IngestError(source + ": expected header " + std::string(header));
    }
    LineErrors errors(source);
    std::vector<Record> out;
    long lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_fields(line);
        if (f.size() != 4) {
            errors.add(lineno, "expected 4 fields, got " + std::to_string(f.size()));
            continue;
        }
        const auto second = detail::parse_number<int>(f[0]);
        const auto ordinal = detail::parse_number<int>(f[1]);
        const auto a = detail::parse_number<double>(f[2]);
        const auto b = detail::parse_number<double>(f[3]);
        if (!second || !ordinal || !a || !b) {
            errors.add(lineno, "unparseable field");
            continue;
        }
        if (*second < 0) {
            errors.add(lineno, "negative second");
            continue;
        }
        Record rec;
        if (const auto problem = build(rec, *second, *ordinal, *a, *b); !problem.empty()) {
            errors.add(lineno, problem);
            continue;
        }
        if (!out.empty()) {
            const auto& prev = out.back();
            if (rec.second < prev.second || (rec.second == prev.second && rec.ordinal <= prev.ordinal)) {
                errors.add(lineno, "timestamp out of order");
                continue;
            }
        }
        out.push_back(rec);
    }
    errors.raise_if_any();
    return out;
}

template <class T>
T load_file(const fs::path& path, T (*parse)(std::istream&, const std::string&)) {
    std::ifstream is(path);
    if (!is) throw IngestError("cannot open " + path.string());
    return parse(is, path.string());
}

std::vector<std::string> dates_in(const fs::path& dir, std::string_view suffix) {
    std::vector<std::string> dates;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
            dates.push_back(name.substr(0, name.size() - suffix.size()));
        }
    }
    std::sort(dates.begin(), dates.end());
    return dates;
}

template <class Record>
std::vector<Record> window(const std::vector<Record>& recs, const SessionSpec& s) {
    std::vector<Record> out;
    for (const auto& r : recs) {
        if (r.second >= s.first_kept() && r.second < s.end_kept()) out.push_back(r);
    }
    return out;
}

struct DayAggregate {
    DayBars day;
    std::vector<double> raw_volume;
    std::size_t flagged = 0;
};

DayAggregate aggregate_day(const std::string& date, const StockDay& rec, const SessionSpec& session) {
    DayAggregate agg;
    agg.day.date = date;
    const int first = session.first_kept();
    const int end = session.end_kept();
    const auto n = static_cast<std::size_t>(std::max(0, end - first));
    agg.day.bars.resize(n);
    agg.raw_volume.assign(n, 0.0);

    // signs: the tick rule runs over the whole day's tape, one second at a time
    std::vector<int> sum_sign(n, 0);
    std::vector<bool> traded(n, false);
    SignState state;
    std::size_t k = 0;
    const auto& trades = rec.trades;
    while (k < trades.size()) {
        std::size_t e = k;
        while (e < trades.size() && trades[e].second == trades[k].second) ++e;
        const std::span<const TradeRecord> block(trades.data() + k, e - k);
        auto classified = classify_signs_intrasecond(block, state);
        state = classified.state;
        const int sec = trades[k].second;
        if (sec >= first && sec < end) {
            const auto slot = static_cast<std::size_t>(sec - first);
            sum_sign[slot] = aggregate_second_sign(classified.signs);
            traded[slot] = true;
            for (const auto& t : block) agg.raw_volume[slot] += t.volume;
        }
        k = e;
    }

    const auto& quotes = rec.quotes;
    const double first_mid = std::log(quotes.front().mid());
    std::size_t q = 0;
    double last_mid = first_mid;
    bool have_prior = false;
    for (std::size_t s = 0; s < n; ++s) {
        const int sec = first + static_cast<int>(s);
        while (q < quotes.size() && quotes[q].second < sec) {
            last_mid = std::log(quotes[q].mid());
            have_prior = true;
            ++q;
        }
        auto& bar = agg.day.bars[s];
        bar.second = sec;
        bar.sign = sum_sign[s];
        bar.log_mid = have_prior ? last_mid : first_mid;
        bar.mid_flagged = !have_prior;
        if (!have_prior) ++agg.flagged;
    }
    return agg;
}

}  // namespace

std::vector<TradeRecord> parse_trades(std::istream& is, const std::string& source) {
    return parse_records<TradeRecord>(is, source, "second,ordinal,price,volume",
                                      [](TradeRecord& r, int s, int o, double price, double volume) -> std::string {
                                          r = {s, o, price, volume};
                                          if (!(price > 0.0) || !std::isfinite(price)) return "price must be positive";
                                          if (!(volume > 0.0) || !std::isfinite(volume)) return "volume must be positive";
                                          return {};
                                      });
}

std::vector<QuoteRecord> parse_quotes(std::istream& is, const std::string& source) {
    return parse_records<QuoteRecord>(is, source, "second,ordinal,bid,ask",
                                      [](QuoteRecord& r, int s, int o, double bid, double ask) -> std::string {
                                          r = {s, o, bid, ask};
                                          if (!(bid > 0.0) || !std::isfinite(bid) || !std::isfinite(ask)) {
                                              return "bid must be positive";
                                          }
                                          if (ask < bid) return "crossed quote (ask < bid)";
                                          return {};
                                      });
}

std::vector<TradeRecord> load_trades(const fs::path& path) { return load_file(path, &parse_trades); }

std::vector<QuoteRecord> load_quotes(const fs::path& path) { return load_file(path, &parse_quotes); }

StockDays load_stock_days(const fs::path& trades_dir, const fs::path& quotes_dir, const std::string& ticker) {
    const fs::path tdir = trades_dir / ticker;
    const fs::path qdir = quotes_dir / ticker;
    if (!fs::is_directory(tdir)) throw IngestError("no trade directory " + tdir.string());
    const auto dates = dates_in(tdir, ".trades.csv");

    std::vector<StockDay> days(dates.size());
    std::vector<std::exception_ptr> failures(dates.size());
#pragma omp parallel for schedule(dynamic)
    for (long d = 0; d < static_cast<long>(dates.size()); ++d) {
        try {
            days[d].trades = load_trades(tdir / (dates[d] + ".trades.csv"));
            const fs::path qfile = qdir / (dates[d] + ".quotes.csv");
            if (fs::exists(qfile)) days[d].quotes = load_quotes(qfile);
        } catch (...) {
            failures[d] = std::current_exception();
        }
    }
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    StockDays out;
    for (std::size_t d = 0; d < dates.size(); ++d) out.emplace(dates[d], std::move(days[d]));
    return out;
}

void SessionSpec::validate() const {
    if (edge < 0) throw ParameterError("session edge must be >= 0");
    if (end_kept() <= first_kept()) throw ParameterError("session leaves no seconds after trimming the edges");
}

PairDays sessionize(const PairDays& days, const SessionSpec& session) {
    session.validate();
    auto trim = [&](const StockDays& in) {
        StockDays out;
        for (const auto& [date, rec] : in) {
            StockDay kept{window(rec.trades, session), window(rec.quotes, session)};
            if (!kept.trades.empty()) out.emplace(date, std::move(kept));
        }
        return out;
    };
    PairDays trimmed{trim(days.i), trim(days.j)};
    PairDays out;
    for (auto& [date, rec] : trimmed.i) {
        auto it = trimmed.j.find(date);
        if (it == trimmed.j.end()) continue;
        out.i.emplace(date, std::move(rec));
        out.j.emplace(date, std::move(it->second));
    }
    return out;
}

BarBuild build_second_bars(const StockDays& days, const SessionSpec& session, VolumeNormalization norm) {
    session.validate();
    std::vector<const std::string*> dates;
    std::vector<const StockDay*> recs;
    BarBuild out;
    for (const auto& [date, rec] : days) {
        if (rec.quotes.empty()) {
            out.warnings.push_back("skipping " + date + ": no quotes");
            continue;
        }
        dates.push_back(&date);
        recs.push_back(&rec);
    }

    std::vector<DayAggregate> aggs(recs.size());
#pragma omp parallel for schedule(dynamic)
    for (long d = 0; d < static_cast<long>(recs.size()); ++d) aggs[d] = aggregate_day(*dates[d], *recs[d], session);

    // corpus-wide normalization pass
    double total = 0.0;
    std::size_t seconds = 0;
    for (const auto& a : aggs) {
        for (double v : a.raw_volume) {
            total += v;
            if (norm == VolumeNormalization::AllSeconds || v > 0.0) ++seconds;
        }
    }
    const double mean = seconds > 0 ? total / static_cast<double>(seconds) : 0.0;
    for (auto& a : aggs) {
        for (std::size_t s = 0; s < a.raw_volume.size(); ++s) {
            a.day.bars[s].norm_volume = mean > 0.0 ? a.raw_volume[s] / mean : 0.0;
        }
        out.flagged_seconds += a.flagged;
        out.bars.push_back(std::move(a.day));
    }
    return out;
}

}  // namespace crossimpact

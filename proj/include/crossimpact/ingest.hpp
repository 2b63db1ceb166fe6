#pragma once

#include "crossimpact/bars.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace crossimpact {

struct TradeRecord {
    int second = 0;   // seconds since session open
    int ordinal = 0;  // order within the second
    double price = 0.0;
    double volume = 0.0;
};

struct QuoteRecord {
    int second = 0;
    int ordinal = 0;
    double bid = 0.0;
    double ask = 0.0;

    double mid() const noexcept { return 0.5 * (bid + ask); }
};

/// Parsers throw IngestError listing every offending line (1-based, header
/// is line 1): malformed fields, non-positive values, crossed quotes, and
/// records out of (second, ordinal) order.
std::vector<TradeRecord> parse_trades(std::istream& is, const std::string& source = "<stream>");
std::vector<QuoteRecord> parse_quotes(std::istream& is, const std::string& source = "<stream>");
std::vector<TradeRecord> load_trades(const std::filesystem::path& path);
std::vector<QuoteRecord> load_quotes(const std::filesystem::path& path);

struct StockDay {
    std::vector<TradeRecord> trades;
    std::vector<QuoteRecord> quotes;
};

/// One stock's records keyed by date string (sorted).
using StockDays = std::map<std::string, StockDay>;

/// Reads <trades_dir>/<ticker>/<date>.trades.csv and the matching
/// <quotes_dir>/<ticker>/<date>.quotes.csv. A date with trades but no quote
/// file gets an empty quote list. Files are parsed concurrently.
StockDays load_stock_days(const std::filesystem::path& trades_dir, const std::filesystem::path& quotes_dir,
                          const std::string& ticker);

struct SessionSpec {
    int open = 0;       // first session second
    int close = 23400;  // one past the last session second
    int edge = 600;     // seconds dropped at each end

    void validate() const;
    int first_kept() const noexcept { return open + edge; }
    int end_kept() const noexcept { return close - edge; }
};

struct PairDays {
    StockDays i;
    StockDays j;
};

/// Drops records within `edge` seconds of the open or close and keeps only
/// days on which both stocks traded. Applying it twice changes nothing.
PairDays sessionize(const PairDays& days, const SessionSpec& session = {});

enum class VolumeNormalization {
    AllSeconds,      // divide by the mean volume over every session second
    TradingSeconds,  // divide by the mean volume over seconds that had trades
};

struct BarBuild {
    BarSeries bars;
    std::vector<std::string> warnings;  // one per skipped day
    std::size_t flagged_seconds = 0;    // seconds priced from the day's first quote
};

/// Per-second sign, normalized volume and causal log-mid for every kept
/// second of every day. Days are aggregated concurrently; normalization is a
/// second corpus-wide pass. A day without quotes is skipped with a warning.
BarBuild build_second_bars(const StockDays& days, const SessionSpec& session = {},
                           VolumeNormalization norm = VolumeNormalization::AllSeconds);

}  // namespace crossimpact

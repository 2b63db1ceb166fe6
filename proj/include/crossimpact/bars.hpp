#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace crossimpact {

/// Market state of one stock over one session second.
struct SecondBar {
    int second = 0;
    int sign = 0;              // -1, 0, +1
    double norm_volume = 0.0;  // traded volume over the corpus-wide per-second mean
    double log_mid = 0.0;      // from the last quote strictly before the second
    bool mid_flagged = false;  // no prior quote; the day's first quote was used
};

struct DayBars {
    std::string date;
    std::vector<SecondBar> bars;
};

/// Bars of one stock, one entry per day in date order.
using BarSeries = std::vector<DayBars>;

/// Throws ValidationError unless both series cover the same dates and seconds.
void check_aligned(const BarSeries& a, const BarSeries& b);

std::size_t total_seconds(const BarSeries& bars) noexcept;

/// Columnar CSV: date,second,sign,norm_volume,log_mid.
void write_bars_csv(const BarSeries& bars, std::ostream& os);
void write_bars_csv(const BarSeries& bars, const std::filesystem::path& path);
BarSeries read_bars_csv(std::istream& is, const std::string& source = "<stream>");
BarSeries read_bars_csv(const std::filesystem::path& path);

}  // namespace crossimpact

#include "crossimpact/bars.hpp"

#include "crossimpact/error.hpp"
#include "crossimpact/format.hpp"
#include "csv.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace crossimpact {

void check_aligned(const BarSeries& a, const BarSeries& b) {
    if (a.size() != b.size()) {
        throw ValidationError("bar series cover different numbers of days (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    }
    for (std::size_t d = 0; d < a.size(); ++d) {
        if (a[d].date != b[d].date) throw ValidationError("bar series dates differ: " + a[d].date + " vs " + b[d].date);
        if (a[d].bars.size() != b[d].bars.size()) {
            throw ValidationError("bar series lengths differ on " + a[d].date);
        }
        for (std::size_t t = 0; t < a[d].bars.size(); ++t) {
            if (a[d].bars[t].second != b[d].bars[t].second) {
                throw ValidationError("bar series seconds differ on " + a[d].date);
            }
        }
    }
}

std::size_t total_seconds(const BarSeries& bars) noexcept {
    std::size_t n = 0;
    for (const auto& day : bars) n += day.bars.size();
    return n;
}

void write_bars_csv(const BarSeries& bars, std::ostream& os) {
    os << "date,second,sign,norm_volume,log_mid\n";
    for (const auto& day : bars) {
        for (const auto& b : day.bars) {
            os << day.date << ',' << b.second << ',' << b.sign << ',' << format_double(b.norm_volume) << ','
               << format_double(b.log_mid) << '\n';
        }
    }
}

void write_bars_csv(const BarSeries& bars, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write " + path.string());
    write_bars_csv(bars, os);
    if (!os) throw ValidationError("failed writing " + path.string());
}

BarSeries read_bars_csv(std::istream& is, const std::string& source) {
    using detail::parse_number;
    std::string line;
    if (!std::getline(is, line) || detail::trim(line) != "date,second,sign,norm_volume,log_mid") {
        throw IngestError(source + ": expected header date,second,sign,norm_volume,log_mid");
    }
    BarSeries out;
    std::set<std::string> seen;
    std::ostringstream problems;
    int bad = 0;
    long lineno = 1;
    auto complain = [&](const std::string& what) {
        if (bad++ < 20) problems << "\n  line " << lineno << ": " << what;
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_fields(line);
        if (f.size() != 5) {
            complain("expected 5 fields");
            continue;
        }
        const std::string date(detail::trim(f[0]));
        const auto second = parse_number<int>(f[1]);
        const auto sign = parse_number<int>(f[2]);
        const auto vol = parse_number<double>(f[3]);
        const auto mid = parse_number<double>(f[4]);
        if (date.empty() || !second || !sign || !vol || !mid) {
            complain("unparseable field");
            continue;
        }
        if (*sign < -1 || *sign > 1) {
            complain("sign must be -1, 0 or 1");
            continue;
        }
        if (!(*vol >= 0.0) || !std::isfinite(*vol) || !std::isfinite(*mid)) {
            complain("norm_volume must be finite and >= 0, log_mid finite");
            continue;
        }
        if (out.empty() || out.back().date != date) {
            if (!seen.insert(date).second) {
                complain("date " + date + " is not contiguous");
                continue;
            }
            out.push_back({date, {}});
        } else if (*second <= out.back().bars.back().second) {
            complain("seconds not increasing");
            continue;
        }
        out.back().bars.push_back({*second, *sign, *vol, *mid, false});
    }
    if (bad > 0) {
        throw IngestError(source + ": " + std::to_string(bad) + " bad line(s)" + problems.str());
    }
    return out;
}

BarSeries read_bars_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open " + path.string());
    return read_bars_csv(is, path.string());
}

}  // namespace crossimpact

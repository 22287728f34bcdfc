#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include "crashlens/errors.hpp"

namespace crashlens {

constexpr std::int64_t kSecondsPerHour = 3600;
constexpr std::int64_t kMillisPerHour = 3'600'000;

// Howard Hinnant's civil-date algorithms; valid far beyond any market data range.
constexpr std::int64_t days_from_civil(int y, unsigned m, unsigned d) noexcept {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    int year;
    unsigned month;
    unsigned day;
};

constexpr CivilDate civil_from_days(std::int64_t z) noexcept {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), m, d};
}

constexpr std::int64_t utc_epoch(int y, unsigned mo, unsigned d, unsigned h = 0,
                                 unsigned mi = 0, unsigned s = 0) noexcept {
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

inline std::int64_t hour_floor(std::int64_t epoch_s) noexcept {
    return epoch_s - (epoch_s % kSecondsPerHour + kSecondsPerHour) % kSecondsPerHour;
}

inline std::int64_t hour_of_ms(std::int64_t epoch_ms) noexcept {
    std::int64_t h = epoch_ms / kMillisPerHour;
    if (epoch_ms < 0 && epoch_ms % kMillisPerHour != 0) --h;
    return h * kSecondsPerHour;
}

// Accepts YYYY-MM-DD, optionally followed by THH:MM, THH:MM:SS and a trailing Z.
inline std::int64_t parse_utc(const std::string& text) {
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
    std::string t = text;
    if (!t.empty() && (t.back() == 'Z' || t.back() == 'z')) t.pop_back();
    int n = 0;
    if (std::sscanf(t.c_str(), "%d-%u-%u%n", &y, &mo, &d, &n) != 3)
        throw ParseError("bad UTC timestamp: " + text);
    std::string rest = t.substr(static_cast<std::size_t>(n));
    if (!rest.empty()) {
        if (rest[0] != 'T' && rest[0] != ' ')
            throw ParseError("bad UTC timestamp: " + text);
        rest = rest.substr(1);
        const int got = std::sscanf(rest.c_str(), "%u:%u:%u", &h, &mi, &s);
        if (got < 2) throw ParseError("bad UTC timestamp: " + text);
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60)
        throw ParseError("bad UTC timestamp: " + text);
    return utc_epoch(y, mo, d, h, mi, s);
}

inline std::string format_utc(std::int64_t epoch_s) {
    const std::int64_t days = epoch_s >= 0 ? epoch_s / 86400
                                           : (epoch_s - 86399) / 86400;
    const std::int64_t sod = epoch_s - days * 86400;
    const CivilDate cd = civil_from_days(days);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                  cd.year, cd.month, cd.day,
                  static_cast<long long>(sod / 3600),
                  static_cast<long long>(sod / 60 % 60),
                  static_cast<long long>(sod % 60));
    return buf;
}

inline std::string format_utc_date(std::int64_t epoch_s) {
    const std::int64_t days = epoch_s >= 0 ? epoch_s / 86400
                                           : (epoch_s - 86399) / 86400;
    const CivilDate cd = civil_from_days(days);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", cd.year, cd.month, cd.day);
    return buf;
}

}  // namespace crashlens

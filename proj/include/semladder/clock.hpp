#pragma once
// RFC-3339 UTC timestamps at second precision. SOURCE_DATE_EPOCH, when set,
// pins the clock so journals are reproducible.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <string>

namespace semladder {

inline std::string format_rfc3339(std::int64_t epoch_seconds) {
    std::time_t t = static_cast<std::time_t>(epoch_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string now_rfc3339() {
    if (const char* pinned = std::getenv("SOURCE_DATE_EPOCH"); pinned != nullptr && *pinned != '\0') {
        char* end = nullptr;
        long long v = std::strtoll(pinned, &end, 10);
        if (end != nullptr && *end == '\0') return format_rfc3339(v);
    }
    auto now = std::chrono::system_clock::now();
    return format_rfc3339(std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
}

}  // namespace semladder

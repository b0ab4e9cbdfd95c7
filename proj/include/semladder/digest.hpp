#pragma once
// 64-bit FNV-1a. Used for deterministic identifiers and embedding buckets,
// so the output must never depend on platform or build settings.

#include <cstdint>
#include <string>
#include <string_view>

namespace semladder {

constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

inline std::string to_hex(std::uint64_t value, int width = 16) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(static_cast<std::size_t>(width), '0');
    for (int i = width - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

inline std::string digest_hex(std::string_view bytes) { return to_hex(fnv1a64(bytes)); }

}  // namespace semladder

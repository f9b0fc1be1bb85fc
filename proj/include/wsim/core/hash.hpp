#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace wsim {

/// FNV-1a, 64 bit.
class Fnv1a {
  public:
    void update(std::string_view bytes) noexcept {
        for (unsigned char c : bytes) {
            state_ ^= c;
            state_ *= 0x100000001B3ULL;
        }
    }
    template <class T>
    void update_pod(const T &v) noexcept {
        update(std::string_view(reinterpret_cast<const char *>(&v), sizeof(T)));
    }
    [[nodiscard]] std::uint64_t digest() const noexcept { return state_; }
    [[nodiscard]] std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
        return buf;
    }

  private:
    std::uint64_t state_ = 0xCBF29CE484222325ULL;
};

inline std::string fnv1a_hex(std::string_view bytes) {
    Fnv1a h;
    h.update(bytes);
    return h.hex();
}

} // namespace wsim

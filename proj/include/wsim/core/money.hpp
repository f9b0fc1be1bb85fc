#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace wsim {

/// Weekly currency amount held as integer cents.
class Cents {
  public:
    constexpr Cents() = default;
    constexpr explicit Cents(std::int64_t cents) : value_(cents) {}

    /// Rounds half away from zero to the nearest cent.
    static Cents from_euros(double euros) { return Cents{std::llround(euros * 100.0)}; }

    [[nodiscard]] constexpr std::int64_t value() const noexcept { return value_; }
    [[nodiscard]] constexpr double euros() const noexcept { return static_cast<double>(value_) / 100.0; }

    constexpr Cents &operator+=(Cents o) noexcept {
        value_ += o.value_;
        return *this;
    }
    constexpr Cents &operator-=(Cents o) noexcept {
        value_ -= o.value_;
        return *this;
    }
    friend constexpr Cents operator+(Cents a, Cents b) noexcept { return Cents{a.value_ + b.value_}; }
    friend constexpr Cents operator-(Cents a, Cents b) noexcept { return Cents{a.value_ - b.value_}; }
    friend constexpr Cents operator*(Cents a, std::int64_t k) noexcept { return Cents{a.value_ * k}; }
    friend constexpr Cents operator-(Cents a) noexcept { return Cents{-a.value_}; }
    friend constexpr auto operator<=>(Cents, Cents) = default;

  private:
    std::int64_t value_ = 0;
};

/// Multiplies by a rate, rounding to the nearest cent.
inline Cents scale(Cents amount, double rate) {
    return Cents{std::llround(static_cast<double>(amount.value()) * rate)};
}

constexpr Cents max(Cents a, Cents b) noexcept { return a < b ? b : a; }
constexpr Cents min(Cents a, Cents b) noexcept { return a < b ? a : b; }

/// "1234.50" style rendering.
std::string to_string(Cents amount);

} // namespace wsim

#include "wsim/core/error.hpp"
#include "wsim/core/money.hpp"

#include <cstdio>

namespace wsim {

ValidationError::ValidationError(const std::string &what, std::size_t row)
    : Error(row == 0 ? what : "row " + std::to_string(row) + ": " + what), row_(row) {}

ConvergenceError::ConvergenceError(const std::string &what, double last_residual)
    : Error(what), last_residual_(last_residual) {}

StageError::StageError(std::string stage, const std::string &cause)
    : Error("[" + stage + "] " + cause), stage_(std::move(stage)) {}

std::string to_string(Cents amount) {
    const auto v = amount.value();
    const auto mag = v < 0 ? -v : v;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", v < 0 ? "-" : "", static_cast<long long>(mag / 100),
                  static_cast<long long>(mag % 100));
    return buf;
}

} // namespace wsim

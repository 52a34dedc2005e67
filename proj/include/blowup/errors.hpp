#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blowup {

enum class ErrorKind {
    invalid_dimension,
    domain,
    invalid_exponent,
    hypothesis_violation,
    configuration,
    past_pole,
    no_blowup,
    nonfinite_state,
    insufficient_data,
    unsolvable,
    io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::domain: return "domain";
    case ErrorKind::invalid_exponent: return "invalid-exponent";
    case ErrorKind::hypothesis_violation: return "hypothesis-violation";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::past_pole: return "past-pole";
    case ErrorKind::no_blowup: return "no-blowup";
    case ErrorKind::nonfinite_state: return "nonfinite-state";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::unsolvable: return "unsolvable";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// A configuration error carrying every violation found, each prefixed by its key path.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : Error(ErrorKind::configuration, join(violations)), violations_(std::move(violations)) {}

    [[nodiscard]] const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out;
        for (const auto& item : items) {
            if (!out.empty()) out += "; ";
            out += item;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

} // namespace blowup

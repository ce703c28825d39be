#pragma once

#include <stdexcept>
#include <string>

namespace fusion {

// Error category, used by the CLI to pick an exit code:
//   config -> 2, numeric -> 3, data -> 4, internal -> 1.
enum class ErrorCategory { config, numeric, data, internal };

// Single exception type carrying a stable machine-readable code
// ("OutOfRange", "Separation", ...) next to the human message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message,
          ErrorCategory category = ErrorCategory::internal)
        : std::runtime_error(code + ": " + message),
          code_(std::move(code)),
          category_(category) {}

    const std::string& code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return category_; }

private:
    std::string code_;
    ErrorCategory category_;
};

inline Error config_error(std::string code, const std::string& msg) {
    return Error(std::move(code), msg, ErrorCategory::config);
}
inline Error numeric_error(std::string code, const std::string& msg) {
    return Error(std::move(code), msg, ErrorCategory::numeric);
}
inline Error data_error(std::string code, const std::string& msg) {
    return Error(std::move(code), msg, ErrorCategory::data);
}

} // namespace fusion

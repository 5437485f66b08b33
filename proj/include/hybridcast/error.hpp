#pragma once

#include <stdexcept>
#include <string>

namespace hybridcast {

/// Bad input: malformed files, invalid options, dimension mismatches.
/// The CLI maps it to exit status 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure could not produce a result (indefinite system,
/// degenerate kernel, singular regression). The CLI maps it to exit status 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Re-throws the active exception with `stage: ` prefixed to its message,
/// preserving its category.
[[noreturn]] void rethrow_with_stage(const std::string& stage);

}  // namespace hybridcast

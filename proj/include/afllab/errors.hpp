#pragma once

#include <stdexcept>
#include <string>

namespace afl {

// Error categories shared between the C++ core and the C API status codes.
enum class ErrorCode : int {
    ok = 0,
    invalid_argument = 1,
    parse = 2,
    division_by_zero = 3,
    zero_argument = 4,
    not_integral = 5,
    zero_polynomial = 6,
    zero_constant_term = 7,
    not_self_reciprocal = 8,
    not_full_rank = 9,
    singular_matrix = 10,
    degenerate_pairing = 11,
    not_contained = 12,
    not_stable = 13,
    complexity_exceeded = 14,
    missing_structure = 15,
    not_regular_semisimple = 16,
    inconsistent_moments = 17,
    not_minuscule = 18,
    wrong_side = 19,
    sampling_exhausted = 20,
    unsupported_rank = 21,
    bound_overflow = 22,
    config_invalid = 23,
    io_error = 24,
    internal = 25,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace afl

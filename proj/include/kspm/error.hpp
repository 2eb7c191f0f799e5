#ifndef KSPM_ERROR_HPP
#define KSPM_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kspm {

enum class Errc {
    InvalidArgument,
    IndexOutOfRange,
    FiringNotEnabled,
    NotStable,
    NotMonotone,
    Overflow,
    GrainLimit,
    WorkLimitExceeded,
    NonIntegral,
    Inconsistent,
    NumericalFailure,
    NoMatch,
    DegenerateFit,
    Parse,
};

inline std::string_view to_string(Errc code)
{
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::FiringNotEnabled: return "FiringNotEnabled";
    case Errc::NotStable: return "NotStable";
    case Errc::NotMonotone: return "NotMonotone";
    case Errc::Overflow: return "Overflow";
    case Errc::GrainLimit: return "GrainLimit";
    case Errc::WorkLimitExceeded: return "WorkLimitExceeded";
    case Errc::NonIntegral: return "NonIntegral";
    case Errc::Inconsistent: return "Inconsistent";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::NoMatch: return "NoMatch";
    case Errc::DegenerateFit: return "DegenerateFit";
    case Errc::Parse: return "Parse";
    }
    return "Unknown";
}

/// All library failures are reported through this type; `code()` tells
/// callers (and the CLI exit-code mapping) what went wrong.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw Error(Errc::Overflow, "integer addition overflow");
    }
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw Error(Errc::Overflow, "integer multiplication overflow");
    }
    return r;
}

// Floor modulo; the result is always in [0, m).
inline std::int64_t floor_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace detail
} // namespace kspm

#endif // KSPM_ERROR_HPP

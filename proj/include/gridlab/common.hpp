#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace gridlab {

/// Thrown when a computation asks for a coefficient (or an operation result)
/// beyond what the tracked precision of a truncated series can guarantee.
struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a construction step cannot complete as specified: a reduction
/// that does not terminate with the expected principal part, a non-unit
/// normalization, an eta-quotient search that comes up empty, and so on.
struct ConstructionFailure : std::runtime_error {
    explicit ConstructionFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown for malformed requests at the API/CLI boundary (bad form names,
/// unsupported parameter combinations). Maps to CLI exit code 2.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Sentinel precision for series that are exact as far as the ring is
/// concerned (polynomials, monomials, zero). Kept well below INT64_MAX so
/// saturating arithmetic has headroom.
constexpr std::int64_t kPrecInf = std::numeric_limits<std::int64_t>::max() / 4;

inline bool prec_is_inf(std::int64_t p) { return p >= kPrecInf; }

/// Addition that saturates at kPrecInf (both directions: anything involving
/// an infinite precision stays infinite; large finite sums clamp).
inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    if (prec_is_inf(a) || prec_is_inf(b)) return kPrecInf;
    std::int64_t s = a + b;  // |a|,|b| < 2^62, no overflow
    return s >= kPrecInf ? kPrecInf : s;
}

/// Multiply a precision by a small positive factor, saturating.
inline std::int64_t sat_mul(std::int64_t a, std::int64_t m) {
    if (prec_is_inf(a)) return kPrecInf;
    if (a != 0 && (a > kPrecInf / m || a < -(kPrecInf / m))) {
        return a > 0 ? kPrecInf : -kPrecInf;
    }
    return a * m;
}

/// Floor division for int64 (C++ division truncates toward zero).
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

/// Ceiling division for int64.
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return -floor_div(-a, b);
}

/// Least nonnegative residue of a mod m (m > 0).
inline std::int64_t mod_nonneg(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace gridlab

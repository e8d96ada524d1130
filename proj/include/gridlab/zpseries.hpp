#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "gridlab/common.hpp"
#include "gridlab/numbers.hpp"

namespace gridlab {

/// Coefficient modulus p^k with p prime and p^k < 2^31, so that products of
/// residues fit in u64 and lazy 128-bit accumulation never overflows across
/// the window sizes this project uses.
struct ZpMod {
    long p = 0;
    int k = 0;
    std::uint64_t m = 0;

    static ZpMod make(long p, int k);
    bool operator==(const ZpMod& o) const { return p == o.p && k == o.k; }
};

/// Truncated Laurent series with coefficients in Z/p^k.
///
/// Same knowledge contract as the exact class: coefficients are known for all
/// exponents below prec() and reading beyond throws PrecisionError. Storage
/// is a dense window [lo, lo + size); exponents below lo or between the end
/// of the window and prec are known zeros (this lets polynomials carry
/// prec = kPrecInf without an infinite array).
class ZpSeries {
  public:
    using Coeff = std::uint64_t;

    ZpSeries() : lo_(0), prec_(kPrecInf) {}

    static ZpSeries zero(ZpMod mod, std::int64_t prec = kPrecInf);
    static ZpSeries monomial(ZpMod mod, std::int64_t e, std::uint64_t c,
                             std::int64_t prec = kPrecInf);
    static ZpSeries from_terms(ZpMod mod,
                               const std::vector<std::pair<std::int64_t, std::int64_t>>& terms,
                               std::int64_t prec);

    const ZpMod& mod() const { return mod_; }
    std::int64_t prec() const { return prec_; }
    bool exact() const { return prec_is_inf(prec_); }
    std::int64_t window_lo() const { return lo_; }

    /// Coefficient of q^e as the least nonnegative residue. Throws
    /// PrecisionError for e >= prec.
    std::uint64_t at(std::int64_t e) const;
    bool known(std::int64_t e) const { return e < prec_; }

    /// Smallest exponent whose residue is nonzero, or prec() if none stored.
    std::int64_t min_exp_bound() const;
    /// Smallest nonzero exponent; throws like the exact class when absent.
    std::int64_t leading_exponent() const;

    std::size_t nonzero_count() const;

    void for_each(const std::function<void(std::int64_t, std::uint64_t)>& fn) const;

    ZpSeries operator+(const ZpSeries& o) const;
    ZpSeries operator-(const ZpSeries& o) const;
    ZpSeries operator-() const;
    ZpSeries operator*(const ZpSeries& o) const;

    ZpSeries scaled(std::uint64_t c) const;
    ZpSeries scaled_long(long c) const;
    /// Multiply by an exact rational. The denominator must be a unit mod p;
    /// a p in the denominator cannot be represented in Z/p^k and raises
    /// ConstructionFailure so callers rebuild at higher k instead.
    ZpSeries scaled_rational(const mpq_class& c) const;

    ZpSeries shifted(std::int64_t k) const;
    ZpSeries dilated(std::int64_t m) const;
    ZpSeries u_image(std::int64_t m) const;
    ZpSeries derived() const;
    ZpSeries alternated() const;
    /// Coefficient transform by a per-exponent integer multiplier.
    ZpSeries mapped_long(const std::function<long(std::int64_t)>& fn) const;

    ZpSeries truncated(std::int64_t new_prec) const;

    /// Multiplicative inverse by division-free Newton iteration. The leading
    /// coefficient must be a unit mod p. Precision drops by twice the leading
    /// exponent, exactly as in the exact class.
    ZpSeries inverted() const;

    std::vector<std::pair<std::int64_t, std::uint64_t>> principal_part() const;

  private:
    ZpSeries(ZpMod mod, std::int64_t lo, std::int64_t prec)
        : mod_(mod), lo_(lo), prec_(prec) {}

    void require_same_mod(const ZpSeries& o, const char* who) const;
    /// Drop leading/trailing stored zeros (window stays within knowledge).
    void trim();
    std::uint64_t reduce_long(long v) const { return static_cast<std::uint64_t>(mod_nonneg(v, static_cast<std::int64_t>(mod_.m))); }

    // Raw convolution helper shared by operator* and the Newton iteration:
    // OUT[t] += sum A[i]*B[j] over i+j = t + (loOut - loA - loB), reduced.
    static void conv_into(const std::vector<std::uint64_t>& a, std::int64_t lo_a,
                          const std::vector<std::uint64_t>& b, std::int64_t lo_b,
                          std::vector<std::uint64_t>& out, std::int64_t lo_out,
                          const ZpMod& mod);

    ZpMod mod_;
    std::int64_t lo_;
    std::int64_t prec_;
    std::vector<std::uint64_t> a_;
};

/// Domain tag for running the shared construction templates mod p^k.
struct ZpDomain {
    using Series = ZpSeries;
    using Coeff = std::uint64_t;
    static constexpr bool exact = false;

    ZpMod mod;

    explicit ZpDomain(ZpMod m) : mod(m) {}
    ZpDomain(long p, int k) : mod(ZpMod::make(p, k)) {}

    Coeff of_long(long v) const {
        return static_cast<Coeff>(mod_nonneg(v, static_cast<std::int64_t>(mod.m)));
    }
    Coeff of_mpq(const mpq_class& v) const;
    bool is_zero(Coeff c) const { return c == 0; }
    bool is_one(Coeff c) const { return c == 1; }
    bool is_unit(Coeff c) const { return c % static_cast<std::uint64_t>(mod.p) != 0; }
    Coeff inv(Coeff c) const;
    Series zero(std::int64_t prec) const { return Series::zero(mod, prec); }
    Series monomial(std::int64_t e, Coeff c, std::int64_t prec = kPrecInf) const {
        return Series::monomial(mod, e, c, prec);
    }
    Series one() const { return Series::monomial(mod, 0, 1); }
};

}  // namespace gridlab

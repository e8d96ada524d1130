#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "gridlab/common.hpp"

namespace gridlab {

/// Truncated Laurent series over Q in one variable q.
///
/// A value represents sum_{e < prec} a_e q^e where all but finitely many of
/// the known coefficients are zero and only finitely many e are negative.
/// `prec` is the smallest exponent whose coefficient is NOT known; reading at
/// or beyond it throws PrecisionError rather than returning a silent zero.
/// Exact objects (polynomials, monomials, zero) carry prec = kPrecInf.
class QSeries {
  public:
    using Coeff = mpq_class;

    QSeries() : prec_(kPrecInf) {}

    static QSeries zero(std::int64_t prec = kPrecInf) { return QSeries(prec); }

    static QSeries monomial(std::int64_t e, const mpq_class& c,
                            std::int64_t prec = kPrecInf) {
        QSeries s(prec);
        if (c != 0 && e < prec) s.terms_.emplace(e, c);
        return s;
    }

    /// Build from explicit terms; zeros are dropped, exponents >= prec rejected.
    static QSeries from_terms(std::vector<std::pair<std::int64_t, mpq_class>> terms,
                              std::int64_t prec);

    std::int64_t prec() const { return prec_; }
    bool exact() const { return prec_is_inf(prec_); }

    /// Smallest stored exponent, or prec() when no nonzero term is stored.
    /// This is the lower bound used in the multiplication precision rule.
    std::int64_t min_exp_bound() const {
        return terms_.empty() ? prec_ : terms_.begin()->first;
    }

    bool known(std::int64_t e) const { return e < prec_; }

    /// Coefficient of q^e; throws PrecisionError if e >= prec.
    const mpq_class& at(std::int64_t e) const;

    std::size_t term_count() const { return terms_.size(); }
    bool identically_zero_on_window() const { return terms_.empty(); }

    /// Smallest exponent with nonzero coefficient. Throws UsageError for the
    /// exact zero series and PrecisionError when the window shows no term
    /// (the series could be zero or could start past the horizon).
    std::int64_t leading_exponent() const;

    void for_each(const std::function<void(std::int64_t, const mpq_class&)>& fn) const {
        for (const auto& [e, c] : terms_) fn(e, c);
    }

    const std::map<std::int64_t, mpq_class>& terms() const { return terms_; }

    // --- ring operations -------------------------------------------------
    QSeries operator+(const QSeries& o) const;
    QSeries operator-(const QSeries& o) const;
    QSeries operator-() const;
    QSeries operator*(const QSeries& o) const;
    QSeries& operator+=(const QSeries& o) { return *this = *this + o; }
    QSeries& operator-=(const QSeries& o) { return *this = *this - o; }

    QSeries scaled(const mpq_class& c) const;
    QSeries scaled_long(long c) const { return scaled(mpq_class(c)); }

    /// Multiply by q^k.
    QSeries shifted(std::int64_t k) const;

    /// V(m): q -> q^m. Exponents scale by m; prec scales by m.
    QSeries dilated(std::int64_t m) const;

    /// U(m): keep exponents divisible by m, divide them by m.
    /// Resulting precision is ceil(prec / m).
    QSeries u_image(std::int64_t m) const;

    /// q d/dq: multiply each coefficient by its exponent.
    QSeries derived() const;

    /// a(n) -> (-1)^n a(n).
    QSeries alternated() const;

    /// Generic coefficient transform c -> fn(e, c); precision is preserved.
    QSeries mapped(const std::function<mpq_class(std::int64_t, const mpq_class&)>& fn) const;

    /// Restrict knowledge to exponents < new_prec. new_prec > prec throws:
    /// truncation never invents coefficients.
    QSeries truncated(std::int64_t new_prec) const;

    /// Multiplicative inverse. Requires a nonzero leading term visible in the
    /// window and finite precision (truncate exact objects first). With
    /// leading exponent m, the result has precision prec - 2m.
    QSeries inverted() const;

    /// All (e, a_e) with e < 0. Requires prec >= 0 so the principal part is
    /// completely known.
    std::vector<std::pair<std::int64_t, mpq_class>> principal_part() const;

    /// True if every stored coefficient is an integer.
    bool all_integral() const;

    /// Render "a q^e + ..." up to `limit` terms, for logs and messages.
    std::string brief(std::size_t limit = 8) const;

  private:
    explicit QSeries(std::int64_t prec) : prec_(prec) {}
    void drop_unknown_and_zero();

    std::int64_t prec_;
    std::map<std::int64_t, mpq_class> terms_;
};

/// Domain tag for running the shared construction templates over QSeries.
struct QDomain {
    using Series = QSeries;
    using Coeff = mpq_class;
    static constexpr bool exact = true;

    static Coeff of_long(long v) { return mpq_class(v); }
    static Coeff of_mpq(const mpq_class& v) { return v; }
    static bool is_zero(const Coeff& c) { return c == 0; }
    static bool is_one(const Coeff& c) { return c == 1; }
    /// Every nonzero rational is invertible.
    static bool is_unit(const Coeff& c) { return c != 0; }
    static Coeff inv(const Coeff& c) {
        if (c == 0) throw UsageError("QDomain::inv of zero");
        return 1 / c;
    }
    static Series zero(std::int64_t prec) { return Series::zero(prec); }
    static Series monomial(std::int64_t e, const Coeff& c,
                           std::int64_t prec = kPrecInf) {
        return Series::monomial(e, c, prec);
    }
    static Series one() { return Series::monomial(0, 1); }
};

}  // namespace gridlab

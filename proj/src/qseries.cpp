#include "gridlab/qseries.hpp"

#include <algorithm>
#include <sstream>

namespace gridlab {

namespace {
constexpr std::int64_t kMaxWindow = 1LL << 25;  // dense scratch guard

void require_window(std::int64_t len, const char* who) {
    if (len > kMaxWindow) {
        throw UsageError(std::string(who) + ": dense window of " +
                         std::to_string(len) + " coefficients exceeds the guard");
    }
}
}  // namespace

QSeries QSeries::from_terms(std::vector<std::pair<std::int64_t, mpq_class>> terms,
                            std::int64_t prec) {
    QSeries s(prec);
    for (auto& [e, c] : terms) {
        if (e >= prec) {
            throw UsageError("from_terms: exponent " + std::to_string(e) +
                             " is not below the declared precision");
        }
        if (c != 0) {
            auto [it, fresh] = s.terms_.emplace(e, c);
            if (!fresh) {
                it->second += c;
                if (it->second == 0) s.terms_.erase(it);
            }
        }
    }
    return s;
}

const mpq_class& QSeries::at(std::int64_t e) const {
    static const mpq_class zero_q(0);
    if (e >= prec_) {
        throw PrecisionError("coefficient of q^" + std::to_string(e) +
                             " requested, but precision is " + std::to_string(prec_));
    }
    auto it = terms_.find(e);
    return it == terms_.end() ? zero_q : it->second;
}

std::int64_t QSeries::leading_exponent() const {
    if (!terms_.empty()) return terms_.begin()->first;
    if (exact()) throw UsageError("leading_exponent: series is identically zero");
    throw PrecisionError("leading_exponent: no nonzero term below precision " +
                         std::to_string(prec_));
}

void QSeries::drop_unknown_and_zero() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->first >= prec_ || it->second == 0) it = terms_.erase(it);
        else ++it;
    }
}

QSeries QSeries::operator+(const QSeries& o) const {
    QSeries out(std::min(prec_, o.prec_));
    out.terms_ = terms_;
    for (const auto& [e, c] : o.terms_) {
        auto [it, fresh] = out.terms_.emplace(e, c);
        if (!fresh) it->second += c;
    }
    out.drop_unknown_and_zero();
    return out;
}

QSeries QSeries::operator-(const QSeries& o) const { return *this + (-o); }

QSeries QSeries::operator-() const {
    QSeries out(prec_);
    for (const auto& [e, c] : terms_) {
        mpq_class n = -c;
        out.terms_.emplace(e, n);
    }
    return out;
}

QSeries QSeries::operator*(const QSeries& o) const {
    // Precision of a product: a term q^e of the result is only known when
    // every split e = i + j with i known in *this forces j known in o and
    // vice versa. With lower bounds on the supports this gives:
    std::int64_t p = std::min(sat_add(prec_, o.min_exp_bound()),
                              sat_add(o.prec_, min_exp_bound()));
    QSeries out(p);
    if (terms_.empty() || o.terms_.empty()) return out;

    std::int64_t lo = terms_.begin()->first + o.terms_.begin()->first;
    std::int64_t hi;
    if (prec_is_inf(p)) {
        hi = terms_.rbegin()->first + o.terms_.rbegin()->first + 1;
    } else {
        hi = p;
    }
    if (hi <= lo) return out;
    require_window(hi - lo, "QSeries::operator*");

    std::vector<mpq_class> buf(static_cast<std::size_t>(hi - lo));
    mpq_t scratch;
    mpq_init(scratch);
    for (const auto& [ea, ca] : terms_) {
        if (ea + o.terms_.begin()->first >= hi) break;
        for (const auto& [eb, cb] : o.terms_) {
            std::int64_t e = ea + eb;
            if (e >= hi) break;
            mpq_mul(scratch, ca.get_mpq_t(), cb.get_mpq_t());
            auto& slot = buf[static_cast<std::size_t>(e - lo)];
            mpq_add(slot.get_mpq_t(), slot.get_mpq_t(), scratch);
        }
    }
    mpq_clear(scratch);

    for (std::int64_t e = lo; e < hi; ++e) {
        auto& v = buf[static_cast<std::size_t>(e - lo)];
        if (v != 0) out.terms_.emplace(e, std::move(v));
    }
    return out;
}

QSeries QSeries::scaled(const mpq_class& c) const {
    if (c == 0) return QSeries(prec_);
    QSeries out(prec_);
    for (const auto& [e, v] : terms_) {
        mpq_class w = v * c;
        out.terms_.emplace(e, w);
    }
    return out;
}

QSeries QSeries::shifted(std::int64_t k) const {
    QSeries out(sat_add(prec_, k));
    for (const auto& [e, c] : terms_) out.terms_.emplace(e + k, c);
    return out;
}

QSeries QSeries::dilated(std::int64_t m) const {
    if (m < 1) throw UsageError("dilated: factor must be >= 1");
    QSeries out(sat_mul(prec_, m));
    for (const auto& [e, c] : terms_) out.terms_.emplace(e * m, c);
    return out;
}

QSeries QSeries::u_image(std::int64_t m) const {
    if (m < 1) throw UsageError("u_image: factor must be >= 1");
    QSeries out(prec_is_inf(prec_) ? kPrecInf : ceil_div(prec_, m));
    for (const auto& [e, c] : terms_) {
        if (e % m == 0) out.terms_.emplace(e / m, c);
    }
    return out;
}

QSeries QSeries::derived() const {
    QSeries out(prec_);
    for (const auto& [e, c] : terms_) {
        if (e == 0) continue;
        mpq_class w = c * mpq_class(static_cast<long>(e));
        out.terms_.emplace(e, w);
    }
    return out;
}

QSeries QSeries::alternated() const {
    QSeries out(prec_);
    for (const auto& [e, c] : terms_) {
        if (e % 2 == 0) out.terms_.emplace(e, c);
        else {
            mpq_class w = -c;
            out.terms_.emplace(e, w);
        }
    }
    return out;
}

QSeries QSeries::mapped(
    const std::function<mpq_class(std::int64_t, const mpq_class&)>& fn) const {
    QSeries out(prec_);
    for (const auto& [e, c] : terms_) {
        mpq_class w = fn(e, c);
        if (w != 0) out.terms_.emplace(e, w);
    }
    return out;
}

QSeries QSeries::truncated(std::int64_t new_prec) const {
    if (new_prec > prec_) {
        throw PrecisionError("truncated: cannot raise precision from " +
                             std::to_string(prec_) + " to " + std::to_string(new_prec));
    }
    QSeries out(new_prec);
    for (const auto& [e, c] : terms_) {
        if (e >= new_prec) break;
        out.terms_.emplace(e, c);
    }
    return out;
}

QSeries QSeries::inverted() const {
    if (exact()) {
        throw PrecisionError("inverted: refuse to invert an exact series; "
                             "truncate to finite precision first");
    }
    std::int64_t m = leading_exponent();  // throws if window shows no term
    const mpq_class& lead = terms_.begin()->second;
    // Normalize to g = 1 + sum_{i>=1} g_i q^i known for i < L = prec - m.
    std::int64_t L = prec_ - m;
    if (L <= 0) throw PrecisionError("inverted: empty window after normalization");
    require_window(L, "QSeries::inverted");
    std::vector<mpq_class> g(static_cast<std::size_t>(L)), h(static_cast<std::size_t>(L));
    for (const auto& [e, c] : terms_) {
        g[static_cast<std::size_t>(e - m)] = c / lead;
    }
    h[0] = 1;
    mpq_t scratch;
    mpq_init(scratch);
    for (std::int64_t n = 1; n < L; ++n) {
        mpq_class acc(0);
        for (std::int64_t i = 1; i <= n; ++i) {
            const auto& gi = g[static_cast<std::size_t>(i)];
            if (gi == 0) continue;
            mpq_mul(scratch, gi.get_mpq_t(), h[static_cast<std::size_t>(n - i)].get_mpq_t());
            mpq_add(acc.get_mpq_t(), acc.get_mpq_t(), scratch);
        }
        h[static_cast<std::size_t>(n)] = -acc;
    }
    mpq_clear(scratch);
    // 1/f = (1/lead) q^{-m} h(q); precision of the result is prec - 2m.
    QSeries out(prec_ - 2 * m);
    mpq_class linv = 1 / lead;
    for (std::int64_t n = 0; n < L; ++n) {
        auto& v = h[static_cast<std::size_t>(n)];
        if (v == 0) continue;
        std::int64_t e = n - m;
        if (e >= out.prec_) break;
        mpq_class w = v * linv;
        out.terms_.emplace(e, w);
    }
    return out;
}

std::vector<std::pair<std::int64_t, mpq_class>> QSeries::principal_part() const {
    if (prec_ < 0) {
        throw PrecisionError("principal_part: precision " + std::to_string(prec_) +
                             " does not cover all negative exponents");
    }
    std::vector<std::pair<std::int64_t, mpq_class>> out;
    for (const auto& [e, c] : terms_) {
        if (e >= 0) break;
        out.emplace_back(e, c);
    }
    return out;
}

bool QSeries::all_integral() const {
    for (const auto& [e, c] : terms_) {
        (void)e;
        if (c.get_den() != 1) return false;
    }
    return true;
}

std::string QSeries::brief(std::size_t limit) const {
    std::ostringstream os;
    std::size_t shown = 0;
    for (const auto& [e, c] : terms_) {
        if (shown++ == limit) {
            os << "+ ...";
            break;
        }
        mpq_class v = c;
        os << (shown > 1 ? " + " : "") << v.get_str() << "*q^" << e;
    }
    if (terms_.empty()) os << "0";
    if (!exact()) os << " + O(q^" << prec_ << ")";
    return os.str();
}

}  // namespace gridlab

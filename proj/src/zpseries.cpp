#include "gridlab/zpseries.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace gridlab {

namespace {
constexpr std::int64_t kMaxWindow = 1LL << 25;

void require_window(std::int64_t len, const char* who) {
    if (len > kMaxWindow) {
        throw UsageError(std::string(who) + ": dense window of " +
                         std::to_string(len) + " coefficients exceeds the guard");
    }
}
}  // namespace

ZpMod ZpMod::make(long p, int k) {
    if (p < 2) throw UsageError("ZpMod: p must be a prime >= 2");
    for (long d = 2; d * d <= p; ++d) {
        if (p % d == 0) throw UsageError("ZpMod: p = " + std::to_string(p) + " is not prime");
    }
    if (k < 1) throw UsageError("ZpMod: exponent must be >= 1");
    ZpMod mod;
    mod.p = p;
    mod.k = k;
    std::uint64_t m = 1;
    for (int i = 0; i < k; ++i) {
        if (m > (1ULL << 31) / static_cast<std::uint64_t>(p)) {
            throw UsageError("ZpMod: p^k must stay below 2^31");
        }
        m *= static_cast<std::uint64_t>(p);
    }
    mod.m = m;
    return mod;
}

ZpSeries ZpSeries::zero(ZpMod mod, std::int64_t prec) {
    return ZpSeries(mod, std::min(prec, kPrecInf), std::min(prec, kPrecInf));
}

ZpSeries ZpSeries::monomial(ZpMod mod, std::int64_t e, std::uint64_t c, std::int64_t prec) {
    c %= mod.m;
    if (e >= prec) throw UsageError("ZpSeries::monomial: exponent not below precision");
    if (c == 0) return zero(mod, prec);
    ZpSeries s(mod, e, prec);
    s.a_.assign(1, c);
    return s;
}

ZpSeries ZpSeries::from_terms(ZpMod mod,
                              const std::vector<std::pair<std::int64_t, std::int64_t>>& terms,
                              std::int64_t prec) {
    ZpSeries s = zero(mod, prec);
    if (terms.empty()) return s;
    std::int64_t lo = terms.front().first, hi = lo;
    for (const auto& [e, v] : terms) {
        (void)v;
        if (e >= prec) throw UsageError("ZpSeries::from_terms: exponent not below precision");
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    require_window(hi + 1 - lo, "ZpSeries::from_terms");
    s.lo_ = lo;
    s.a_.assign(static_cast<std::size_t>(hi + 1 - lo), 0);
    for (const auto& [e, v] : terms) {
        auto& slot = s.a_[static_cast<std::size_t>(e - lo)];
        slot = static_cast<std::uint64_t>(
            mod_nonneg(static_cast<std::int64_t>(slot) + mod_nonneg(v, static_cast<std::int64_t>(mod.m)),
                       static_cast<std::int64_t>(mod.m)));
    }
    s.trim();
    return s;
}

void ZpSeries::require_same_mod(const ZpSeries& o, const char* who) const {
    if (!(mod_ == o.mod_)) {
        throw UsageError(std::string(who) + ": mixed moduli " + std::to_string(mod_.m) +
                         " and " + std::to_string(o.mod_.m));
    }
}

std::uint64_t ZpSeries::at(std::int64_t e) const {
    if (e >= prec_) {
        throw PrecisionError("coefficient of q^" + std::to_string(e) +
                             " requested, but precision is " + std::to_string(prec_));
    }
    if (e < lo_ || e >= lo_ + static_cast<std::int64_t>(a_.size())) return 0;
    return a_[static_cast<std::size_t>(e - lo_)];
}

std::int64_t ZpSeries::min_exp_bound() const {
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i] != 0) return lo_ + static_cast<std::int64_t>(i);
    }
    return prec_;
}

std::int64_t ZpSeries::leading_exponent() const {
    std::int64_t e = min_exp_bound();
    if (e < prec_) return e;
    if (exact()) throw UsageError("leading_exponent: series is identically zero");
    throw PrecisionError("leading_exponent: no nonzero term below precision " +
                         std::to_string(prec_));
}

std::size_t ZpSeries::nonzero_count() const {
    std::size_t n = 0;
    for (auto v : a_) n += (v != 0);
    return n;
}

void ZpSeries::for_each(const std::function<void(std::int64_t, std::uint64_t)>& fn) const {
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i] != 0) fn(lo_ + static_cast<std::int64_t>(i), a_[i]);
    }
}

void ZpSeries::trim() {
    std::size_t b = 0, e = a_.size();
    while (b < e && a_[b] == 0) ++b;
    while (e > b && a_[e - 1] == 0) --e;
    if (b == e) {
        a_.clear();
        lo_ = std::min(lo_, prec_);
        return;
    }
    if (b > 0) {
        std::vector<std::uint64_t> tight(a_.begin() + static_cast<std::ptrdiff_t>(b),
                                         a_.begin() + static_cast<std::ptrdiff_t>(e));
        a_ = std::move(tight);
        lo_ += static_cast<std::int64_t>(b);
    } else {
        a_.resize(e);
    }
}

ZpSeries ZpSeries::operator+(const ZpSeries& o) const {
    require_same_mod(o, "ZpSeries::operator+");
    std::int64_t p = std::min(prec_, o.prec_);
    std::int64_t lo = std::min(min_exp_bound(), o.min_exp_bound());
    std::int64_t hi = std::min(
        p, std::max(lo_ + static_cast<std::int64_t>(a_.size()),
                    o.lo_ + static_cast<std::int64_t>(o.a_.size())));
    if (hi <= lo) return zero(mod_, p);
    require_window(hi - lo, "ZpSeries::operator+");
    ZpSeries out(mod_, lo, p);
    out.a_.assign(static_cast<std::size_t>(hi - lo), 0);
    auto fold = [&](const ZpSeries& s, bool negate) {
        for (std::size_t i = 0; i < s.a_.size(); ++i) {
            std::int64_t e = s.lo_ + static_cast<std::int64_t>(i);
            if (e < lo || e >= hi || s.a_[i] == 0) continue;
            auto& slot = out.a_[static_cast<std::size_t>(e - lo)];
            std::uint64_t v = negate ? mod_.m - s.a_[i] : s.a_[i];
            slot += v;
            if (slot >= mod_.m) slot -= mod_.m;
        }
    };
    fold(*this, false);
    fold(o, false);
    out.trim();
    return out;
}

ZpSeries ZpSeries::operator-(const ZpSeries& o) const { return *this + (-o); }

ZpSeries ZpSeries::operator-() const {
    ZpSeries out = *this;
    for (auto& v : out.a_) {
        if (v != 0) v = mod_.m - v;
    }
    return out;
}

// Residue-class convolution. Both inputs are decomposed by exponent mod 24;
// a class pair convolves into a 128-bit scratch row with one reduction per
// output slot. Dense-in-class and sparse-in-class inputs both come out near
// the true-support cost because zero rows are skipped.
void ZpSeries::conv_into(const std::vector<std::uint64_t>& a, std::int64_t lo_a,
                         const std::vector<std::uint64_t>& b, std::int64_t lo_b,
                         std::vector<std::uint64_t>& out, std::int64_t lo_out,
                         const ZpMod& mod) {
    const std::int64_t n_out = static_cast<std::int64_t>(out.size());
    if (a.empty() || b.empty() || n_out == 0) return;

    // Small problems: direct scatter with per-add reduction.
    std::size_t nnz_a = 0, nnz_b = 0;
    for (auto v : a) nnz_a += (v != 0);
    for (auto v : b) nnz_b += (v != 0);
    if (nnz_a == 0 || nnz_b == 0) return;
    if (static_cast<std::uint64_t>(nnz_a) * nnz_b <= (1ULL << 22)) {
        std::vector<std::pair<std::int64_t, std::uint64_t>> sa, sb;
        sa.reserve(nnz_a);
        sb.reserve(nnz_b);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i]) sa.emplace_back(lo_a + static_cast<std::int64_t>(i), a[i]);
        for (std::size_t i = 0; i < b.size(); ++i)
            if (b[i]) sb.emplace_back(lo_b + static_cast<std::int64_t>(i), b[i]);
        for (const auto& [ea, va] : sa) {
            for (const auto& [eb, vb] : sb) {
                std::int64_t t = ea + eb - lo_out;
                if (t < 0) continue;
                if (t >= n_out) break;
                auto& slot = out[static_cast<std::size_t>(t)];
                slot = static_cast<std::uint64_t>(
                    (static_cast<unsigned __int128>(va) * vb + slot) % mod.m);
            }
        }
        return;
    }

    constexpr int kStride = 24;
    struct Cls {
        std::int64_t base = 0;
        std::vector<std::uint64_t> v;
        bool empty = true;
    };
    auto pack = [&](const std::vector<std::uint64_t>& src, std::int64_t lo_src) {
        std::array<Cls, kStride> cls;
        for (int r = 0; r < kStride; ++r) {
            auto& c = cls[static_cast<std::size_t>(r)];
            c.base = lo_src + mod_nonneg(r - lo_src, kStride);
            std::int64_t end = lo_src + static_cast<std::int64_t>(src.size());
            if (c.base >= end) continue;
            std::size_t len = static_cast<std::size_t>((end - c.base + kStride - 1) / kStride);
            c.v.assign(len, 0);
            for (std::size_t k = 0; k < len; ++k) {
                std::uint64_t val = src[static_cast<std::size_t>(c.base - lo_src) + kStride * k];
                c.v[k] = val;
                if (val) c.empty = false;
            }
        }
        return cls;
    };
    auto ca = pack(a, lo_a);
    auto cb = pack(b, lo_b);

    std::vector<unsigned __int128> scratch;
    for (int r = 0; r < kStride; ++r) {
        const auto& A = ca[static_cast<std::size_t>(r)];
        if (A.empty) continue;
        for (int s = 0; s < kStride; ++s) {
            const auto& B = cb[static_cast<std::size_t>(s)];
            if (B.empty) continue;
            const std::int64_t sum_base = A.base + B.base;
            const std::int64_t la = static_cast<std::int64_t>(A.v.size());
            const std::int64_t lb = static_cast<std::int64_t>(B.v.size());
            // Output slots e = sum_base + 24 t, clipped to the out window.
            std::int64_t tmin = std::max<std::int64_t>(0, ceil_div(lo_out - sum_base, kStride));
            std::int64_t tmax = std::min<std::int64_t>(
                la + lb - 2, floor_div(lo_out + n_out - 1 - sum_base, kStride));
            if (tmin > tmax) continue;
            scratch.assign(static_cast<std::size_t>(tmax - tmin + 1), 0);
            for (std::int64_t k = 0; k < la; ++k) {
                const std::uint64_t va = A.v[static_cast<std::size_t>(k)];
                if (!va) continue;
                const std::int64_t l0 = std::max<std::int64_t>(0, tmin - k);
                const std::int64_t l1 = std::min<std::int64_t>(lb - 1, tmax - k);
                if (l0 > l1) continue;
                unsigned __int128* dst = scratch.data() + (k + l0 - tmin);
                const std::uint64_t* src = B.v.data() + l0;
                const std::int64_t cnt = l1 - l0 + 1;
                for (std::int64_t i = 0; i < cnt; ++i) {
                    dst[i] += static_cast<unsigned __int128>(va) * src[i];
                }
            }
            for (std::int64_t t = tmin; t <= tmax; ++t) {
                std::int64_t idx = sum_base + kStride * t - lo_out;
                auto& slot = out[static_cast<std::size_t>(idx)];
                slot = static_cast<std::uint64_t>(
                    (scratch[static_cast<std::size_t>(t - tmin)] + slot) % mod.m);
            }
        }
    }
}

ZpSeries ZpSeries::operator*(const ZpSeries& o) const {
    require_same_mod(o, "ZpSeries::operator*");
    std::int64_t p = std::min(sat_add(prec_, o.min_exp_bound()),
                              sat_add(o.prec_, min_exp_bound()));
    std::int64_t ma = min_exp_bound(), mb = o.min_exp_bound();
    if (ma >= prec_ || mb >= o.prec_) return zero(mod_, p);

    // Highest stored nonzero exponents (trim keeps windows tight, but be safe).
    std::int64_t hi_a = lo_ + static_cast<std::int64_t>(a_.size()) - 1;
    while (hi_a > lo_ && a_[static_cast<std::size_t>(hi_a - lo_)] == 0) --hi_a;
    std::int64_t hi_b = o.lo_ + static_cast<std::int64_t>(o.a_.size()) - 1;
    while (hi_b > o.lo_ && o.a_[static_cast<std::size_t>(hi_b - o.lo_)] == 0) --hi_b;

    std::int64_t lo = ma + mb;
    std::int64_t hi = prec_is_inf(p) ? hi_a + hi_b + 1 : p;
    if (hi <= lo) return zero(mod_, p);
    require_window(hi - lo, "ZpSeries::operator*");

    ZpSeries out(mod_, lo, p);
    out.a_.assign(static_cast<std::size_t>(hi - lo), 0);
    conv_into(a_, lo_, o.a_, o.lo_, out.a_, lo, mod_);
    out.trim();
    return out;
}

ZpSeries ZpSeries::scaled(std::uint64_t c) const {
    c %= mod_.m;
    if (c == 0) return zero(mod_, prec_);
    ZpSeries out = *this;
    for (auto& v : out.a_) {
        if (v) v = static_cast<std::uint64_t>((static_cast<unsigned __int128>(v) * c) % mod_.m);
    }
    return out;
}

ZpSeries ZpSeries::scaled_long(long c) const { return scaled(reduce_long(c)); }

ZpSeries ZpSeries::scaled_rational(const mpq_class& c) const {
    mpz_class num = c.get_num(), den = c.get_den();
    std::uint64_t m = mod_.m;
    mpz_class num_r = num % static_cast<long>(m);
    std::uint64_t nr = static_cast<std::uint64_t>(mod_nonneg(num_r.get_si(), static_cast<std::int64_t>(m)));
    mpz_class den_r = den % static_cast<long>(m);
    std::uint64_t dr = static_cast<std::uint64_t>(mod_nonneg(den_r.get_si(), static_cast<std::int64_t>(m)));
    if (dr % static_cast<std::uint64_t>(mod_.p) == 0) {
        mpq_class cc = c;
        throw ConstructionFailure("scaled_rational: denominator of " + cc.get_str() +
                                  " is not a unit mod " + std::to_string(mod_.p));
    }
    return scaled(static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(nr) * inv_mod_u64(dr, m)) % m));
}

ZpSeries ZpSeries::shifted(std::int64_t k) const {
    ZpSeries out = *this;
    out.lo_ = sat_add(out.lo_, k);
    out.prec_ = sat_add(out.prec_, k);
    return out;
}

ZpSeries ZpSeries::dilated(std::int64_t m) const {
    if (m < 1) throw UsageError("dilated: factor must be >= 1");
    ZpSeries out(mod_, sat_mul(lo_, m), sat_mul(prec_, m));
    if (!a_.empty()) {
        require_window(static_cast<std::int64_t>(a_.size() - 1) * m + 1, "ZpSeries::dilated");
        out.a_.assign(static_cast<std::size_t>(a_.size() - 1) * static_cast<std::size_t>(m) + 1, 0);
        for (std::size_t i = 0; i < a_.size(); ++i) {
            out.a_[i * static_cast<std::size_t>(m)] = a_[i];
        }
    }
    out.trim();
    return out;
}

ZpSeries ZpSeries::u_image(std::int64_t m) const {
    if (m < 1) throw UsageError("u_image: factor must be >= 1");
    std::int64_t p = prec_is_inf(prec_) ? kPrecInf : ceil_div(prec_, m);
    std::int64_t first = ceil_div(lo_, m);
    std::int64_t last = floor_div(lo_ + static_cast<std::int64_t>(a_.size()) - 1, m);
    if (a_.empty() || last < first) return zero(mod_, p);
    ZpSeries out(mod_, first, p);
    out.a_.assign(static_cast<std::size_t>(last - first + 1), 0);
    for (std::int64_t e = first; e <= last; ++e) {
        std::int64_t src = e * m - lo_;
        if (src >= 0 && src < static_cast<std::int64_t>(a_.size())) {
            out.a_[static_cast<std::size_t>(e - first)] = a_[static_cast<std::size_t>(src)];
        }
    }
    out.trim();
    return out;
}

ZpSeries ZpSeries::derived() const {
    return mapped_long([](std::int64_t e) { return static_cast<long>(e); });
}

ZpSeries ZpSeries::alternated() const {
    ZpSeries out = *this;
    for (std::size_t i = 0; i < out.a_.size(); ++i) {
        std::int64_t e = out.lo_ + static_cast<std::int64_t>(i);
        if (mod_nonneg(e, 2) == 1 && out.a_[i] != 0) out.a_[i] = mod_.m - out.a_[i];
    }
    return out;
}

ZpSeries ZpSeries::mapped_long(const std::function<long(std::int64_t)>& fn) const {
    ZpSeries out = *this;
    for (std::size_t i = 0; i < out.a_.size(); ++i) {
        if (out.a_[i] == 0) continue;
        std::int64_t e = out.lo_ + static_cast<std::int64_t>(i);
        std::uint64_t f = reduce_long(fn(e));
        out.a_[i] = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(out.a_[i]) * f) % mod_.m);
    }
    out.trim();
    return out;
}

ZpSeries ZpSeries::truncated(std::int64_t new_prec) const {
    if (new_prec > prec_) {
        throw PrecisionError("truncated: cannot raise precision from " +
                             std::to_string(prec_) + " to " + std::to_string(new_prec));
    }
    ZpSeries out(mod_, lo_, new_prec);
    std::int64_t keep = std::max<std::int64_t>(
        0, std::min<std::int64_t>(static_cast<std::int64_t>(a_.size()), new_prec - lo_));
    out.a_.assign(a_.begin(), a_.begin() + static_cast<std::ptrdiff_t>(keep));
    out.trim();
    return out;
}

ZpSeries ZpSeries::inverted() const {
    if (exact()) {
        throw PrecisionError("inverted: refuse to invert an exact series; "
                             "truncate to finite precision first");
    }
    std::int64_t mlead = leading_exponent();
    std::uint64_t c0 = at(mlead);
    if (c0 % static_cast<std::uint64_t>(mod_.p) == 0) {
        throw ConstructionFailure("inverted: leading coefficient " + std::to_string(c0) +
                                  " is not a unit mod " + std::to_string(mod_.p));
    }
    std::int64_t L = prec_ - mlead;
    if (L <= 0) throw PrecisionError("inverted: empty window after normalization");
    require_window(L, "ZpSeries::inverted");

    // F = q^{-mlead} * f as a dense window of length L, F[0] = c0.
    std::vector<std::uint64_t> F(static_cast<std::size_t>(L), 0);
    for (std::size_t i = 0; i < a_.size(); ++i) {
        std::int64_t idx = lo_ + static_cast<std::int64_t>(i) - mlead;
        if (idx >= 0 && idx < L) F[static_cast<std::size_t>(idx)] = a_[i];
    }

    std::vector<std::uint64_t> h{inv_mod_u64(c0, mod_.m)};
    std::int64_t t = 1;
    std::vector<std::uint64_t> fh, s, hn;
    while (t < L) {
        std::int64_t l = std::min<std::int64_t>(2 * t, L);
        // fh = (F * h) mod q^l
        fh.assign(static_cast<std::size_t>(l), 0);
        std::vector<std::uint64_t> Fpre(F.begin(), F.begin() + static_cast<std::ptrdiff_t>(l));
        conv_into(Fpre, 0, h, 0, fh, 0, mod_);
        // s = 2*delta_0 - fh
        s.assign(static_cast<std::size_t>(l), 0);
        for (std::int64_t i = 0; i < l; ++i) {
            std::uint64_t v = (i == 0) ? (2 % mod_.m + mod_.m - fh[0]) % mod_.m
                                       : (mod_.m - fh[static_cast<std::size_t>(i)]) % mod_.m;
            s[static_cast<std::size_t>(i)] = v;
        }
        // h <- (h * s) mod q^l
        hn.assign(static_cast<std::size_t>(l), 0);
        conv_into(h, 0, s, 0, hn, 0, mod_);
        h = hn;
        t = l;
    }

    ZpSeries out(mod_, -mlead, prec_ - 2 * mlead);
    std::int64_t keep = std::min<std::int64_t>(L, out.prec_ - out.lo_);
    out.a_.assign(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(std::max<std::int64_t>(0, keep)));
    out.trim();
    return out;
}

std::vector<std::pair<std::int64_t, std::uint64_t>> ZpSeries::principal_part() const {
    if (prec_ < 0) {
        throw PrecisionError("principal_part: precision " + std::to_string(prec_) +
                             " does not cover all negative exponents");
    }
    std::vector<std::pair<std::int64_t, std::uint64_t>> out;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        std::int64_t e = lo_ + static_cast<std::int64_t>(i);
        if (e >= 0) break;
        if (a_[i]) out.emplace_back(e, a_[i]);
    }
    return out;
}

ZpDomain::Coeff ZpDomain::of_mpq(const mpq_class& v) const {
    mpz_class num = v.get_num(), den = v.get_den();
    std::uint64_t m = mod.m;
    mpz_class nr = num % static_cast<long>(m);
    std::uint64_t n = static_cast<std::uint64_t>(mod_nonneg(nr.get_si(), static_cast<std::int64_t>(m)));
    mpz_class drz = den % static_cast<long>(m);
    std::uint64_t d = static_cast<std::uint64_t>(mod_nonneg(drz.get_si(), static_cast<std::int64_t>(m)));
    if (d % static_cast<std::uint64_t>(mod.p) == 0) {
        mpq_class vv = v;
        throw ConstructionFailure("ZpDomain: denominator of " + vv.get_str() +
                                  " is not a unit mod " + std::to_string(mod.p));
    }
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(n) * inv_mod_u64(d, m)) % m);
}

ZpDomain::Coeff ZpDomain::inv(Coeff c) const {
    if (!is_unit(c)) {
        throw ConstructionFailure("ZpDomain::inv: " + std::to_string(c) +
                                  " is not a unit mod " + std::to_string(mod.p));
    }
    return inv_mod_u64(c % mod.m, mod.m);
}

}  // namespace gridlab

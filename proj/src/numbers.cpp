#include "gridlab/numbers.hpp"

#include <cmath>

namespace gridlab {

int kronecker(std::int64_t a, std::int64_t n) {
    // (a | 0) is 1 iff a = +-1.
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    // Split off factors of 2 from n; (a|2) depends on a mod 8.
    while ((n & 1) == 0) {
        n >>= 1;
        if ((a & 1) == 0) return 0;
        std::int64_t am8 = mod_nonneg(a, 8);
        if (am8 == 3 || am8 == 5) result = -result;
    }
    if (n == 1) return result;
    // Now n odd > 1: Jacobi via binary-style reciprocity.
    a = mod_nonneg(a, n);
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            std::int64_t nm8 = n & 7;
            if (nm8 == 3 || nm8 == 5) result = -result;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

long vp_int(const mpz_class& x, long p) {
    if (x == 0) throw UsageError("vp_int: valuation of zero is undefined");
    mpz_class t = x;
    long v = 0;
    while (mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

long vp_rat(const mpq_class& x, long p) {
    if (x == 0) throw UsageError("vp_rat: valuation of zero is undefined");
    mpz_class num = x.get_num(), den = x.get_den();
    long v = vp_int(num, p);
    if (v == 0) v -= vp_int(den, p);
    return v;
}

mpq_class bernoulli(unsigned k) {
    // B_0..B_k by the defining recurrence; fine for the small k used here.
    static std::vector<mpq_class> cache{mpq_class(1)};
    while (cache.size() <= k) {
        unsigned m = static_cast<unsigned>(cache.size());
        // sum_{j=0}^{m} C(m+1, j) B_j = 0  =>  solve for B_m.
        mpq_class acc = 0;
        mpz_class binom = 1;  // C(m+1, 0)
        for (unsigned j = 0; j < m; ++j) {
            mpq_class term = mpq_class(binom) * cache[j];
            acc += term;
            // C(m+1, j+1) = C(m+1, j) * (m+1-j) / (j+1)
            binom *= (m + 1 - j);
            mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), j + 1);
        }
        mpq_class bm = -acc / mpq_class(binom);  // binom = C(m+1, m) = m+1
        bm.canonicalize();
        cache.push_back(bm);
    }
    return cache[k];
}

std::vector<mpz_class> sigma_table(unsigned r, std::int64_t bound) {
    std::vector<mpz_class> out(static_cast<std::size_t>(bound < 1 ? 1 : bound));
    for (std::int64_t d = 1; d < bound; ++d) {
        mpz_class dr;
        mpz_ui_pow_ui(dr.get_mpz_t(), static_cast<unsigned long>(d), r);
        for (std::int64_t n = d; n < bound; n += d) out[static_cast<std::size_t>(n)] += dr;
    }
    return out;
}

std::vector<std::pair<long, int>> factorize(long m) {
    if (m <= 0) throw UsageError("factorize: argument must be positive");
    std::vector<std::pair<long, int>> out;
    for (long p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) { m /= p; ++e; }
            out.emplace_back(p, e);
        }
    }
    if (m > 1) out.emplace_back(m, 1);
    return out;
}

bool is_square(std::int64_t n, std::int64_t* root) {
    if (n < 0) return false;
    std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    if (r * r == n) {
        if (root) *root = r;
        return true;
    }
    return false;
}

void split_even_power(std::int64_t n, long p, long* v, std::int64_t* j) {
    if (n == 0) throw UsageError("split_even_power: n must be nonzero");
    std::int64_t pp = static_cast<std::int64_t>(p) * p;
    long vv = 0;
    while (n % pp == 0) { n /= pp; ++vv; }
    *v = vv;
    *j = n;
}

std::uint64_t pow_mod_u64(std::uint64_t x, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    x %= m;
    while (e) {
        if (e & 1) r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * x) % m);
        x = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * x) % m);
        e >>= 1;
    }
    return r;
}

std::uint64_t inv_mod_u64(std::uint64_t x, std::uint64_t m) {
    // Extended Euclid over signed 128-bit to avoid overflow issues.
    __int128 a = static_cast<__int128>(x % m), b = m, u = 1, w = 0;
    while (b != 0) {
        __int128 q = a / b;
        a -= q * b; std::swap(a, b);
        u -= q * w; std::swap(u, w);
    }
    if (a != 1) throw UsageError("inv_mod_u64: element is not invertible");
    __int128 r = u % static_cast<__int128>(m);
    if (r < 0) r += m;
    return static_cast<std::uint64_t>(r);
}

std::vector<std::uint64_t> sigma_mod_table(unsigned r, std::int64_t bound,
                                           std::uint64_t m) {
    std::vector<std::uint64_t> out(static_cast<std::size_t>(bound < 1 ? 1 : bound), 0);
    for (std::int64_t d = 1; d < bound; ++d) {
        std::uint64_t dr = pow_mod_u64(static_cast<std::uint64_t>(d), r, m);
        if (dr == 0) continue;
        for (std::int64_t n = d; n < bound; n += d) {
            std::uint64_t& slot = out[static_cast<std::size_t>(n)];
            slot += dr;
            if (slot >= m) slot -= m;
        }
    }
    return out;
}

std::uint64_t mpq_mod_u64(const mpq_class& x, std::uint64_t m, long p) {
    mpz_class num = x.get_num();
    mpz_class den = x.get_den();
    if (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p)))
        throw ConstructionFailure("mpq_mod_u64: denominator not coprime to p");
    mpz_class mm(static_cast<unsigned long>(m));
    mpz_class nr = num % mm;
    if (nr < 0) nr += mm;
    mpz_class dr = den % mm;
    std::uint64_t nu = static_cast<std::uint64_t>(nr.get_ui());
    std::uint64_t du = static_cast<std::uint64_t>(dr.get_ui());
    std::uint64_t inv = inv_mod_u64(du, m);
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(nu) * inv) % m);
}

}  // namespace gridlab

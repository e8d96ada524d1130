#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "gridlab/common.hpp"

namespace gridlab {

/// Kronecker symbol (a|n), full extension of the Jacobi symbol: handles
/// n = 0, negative n, and even n, with (a|2) = 0, ±1 by a mod 8 and
/// (a|-1) = sign(a). (0|1) = (0|-1) = 1; (0|n) = 0 otherwise.
int kronecker(std::int64_t a, std::int64_t n);

/// p-adic valuation of a nonzero integer. Throws UsageError on 0.
long vp_int(const mpz_class& x, long p);

/// p-adic valuation of a nonzero rational (num minus den valuation).
long vp_rat(const mpq_class& x, long p);

/// Bernoulli number B_k (B_1 = -1/2 convention), exact, via the
/// standard recurrence sum_{j<=k} C(k+1,j) B_j = 0.
mpq_class bernoulli(unsigned k);

/// sigma_r(n) for 1 <= n < bound, index 0 unused. Exact (mpz).
std::vector<mpz_class> sigma_table(unsigned r, std::int64_t bound);

/// Trial-division factorization of m > 0 as (prime, exponent) pairs,
/// primes ascending.
std::vector<std::pair<long, int>> factorize(long m);

/// True if n is a perfect square (n >= 0); root receives the square root.
bool is_square(std::int64_t n, std::int64_t* root = nullptr);

/// Decompose n = p^{2v} * j with j not divisible by p^2 (j may carry one
/// factor p). n must be nonzero; sign goes with j.
void split_even_power(std::int64_t n, long p, long* v, std::int64_t* j);

/// x^e mod m for u64 (m < 2^31 so products fit in u64 via __int128).
std::uint64_t pow_mod_u64(std::uint64_t x, std::uint64_t e, std::uint64_t m);

/// Modular inverse of x mod m (gcd(x, m) = 1 required; throws otherwise).
std::uint64_t inv_mod_u64(std::uint64_t x, std::uint64_t m);

/// sigma_r(n) mod m for 1 <= n < bound, index 0 unused.
std::vector<std::uint64_t> sigma_mod_table(unsigned r, std::int64_t bound,
                                           std::uint64_t m);

/// Least nonnegative residue of a rational mod m = p^k. The denominator
/// must be coprime to p; throws ConstructionFailure otherwise.
std::uint64_t mpq_mod_u64(const mpq_class& x, std::uint64_t m, long p);

}  // namespace gridlab

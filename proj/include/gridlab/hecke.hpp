#pragma once
// Half-integral-weight Hecke operators on truncated q-series.
//
// On a series of weight k + 1/2 with twist parameter s (the square part of
// the level; s = 1 at level 4, s = 12 at level 144):
//
//   f | T_s(p^2) = f|U(p^2) + p^{k-1} (s/p) f (x) chi(p,k) + p^{2k-1} f|V(p^2)
//
// where (f (x) chi(t,k))(n) = ((-1)^k n / t) a(n).  The two weights used by
// the grids are k = 1 (weight 3/2, operator as written, coefficients 1 and p)
// and k = 0 (weight 1/2), where the operator is used in its normalized form
// p * T_s(p^2) = p U(p^2) + (s/p) chi-twist + V(p^2), which keeps integral
// coefficients integral.
//
// Higher prime powers follow the recursion
//   T(p^{2m}) = T(p^{2m-2}) T(p^2) - p^{2k-1} T(p^{2m-4}),
// whose multiplier becomes p for both the k = 1 operator and the normalized
// k = 0 operator.  Composite T(m^2) is the product over prime powers.

#include <cstdint>
#include <vector>

#include "gridlab/builders.hpp"
#include "gridlab/common.hpp"
#include "gridlab/numbers.hpp"

namespace gridlab {

struct HeckeSpec {
  long p = 3;             // odd prime, coprime to the level
  int n = 1;              // apply T(p^{2n})
  long s = 1;             // twist parameter (1 at level 4, 12 at level 144)
  bool normalized = false;  // true for the weight-1/2 normalized operator
};

// U(m): a(n) -> a(mn)
template <class Dom>
typename Dom::Series op_U(const Dom&, const typename Dom::Series& f,
                          std::int64_t m) {
  return f.u_image(m);
}

// V(m): a(n) -> coefficient carried to exponent mn
template <class Dom>
typename Dom::Series op_V(const Dom&, const typename Dom::Series& f,
                          std::int64_t m) {
  return f.dilated(m);
}

// f (x) chi(t,k): multiply a(n) by the Kronecker symbol ((-1)^k n / t).
template <class Dom>
typename Dom::Series op_twist(const Dom& dom, const typename Dom::Series& f,
                              long t, int k) {
  const bool odd = (k % 2 != 0);
  if constexpr (Dom::exact) {
    (void)dom;
    return f.mapped([&](std::int64_t e, const mpq_class& c) -> mpq_class {
      int m = kronecker(odd ? -e : e, t);
      if (m == 0) return mpq_class(0);
      return m == 1 ? c : mpq_class(-c);
    });
  } else {
    return f.mapped_long(
        [&](std::int64_t e) -> long { return kronecker(odd ? -e : e, t); });
  }
}

namespace detail {
inline bool is_odd_prime(long p) {
  if (p < 3 || p % 2 == 0) return false;
  for (long d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}
}  // namespace detail

// One Hecke step T_s(p^2) (normalized form when `normalized` is set).
// Every branch is pre-truncated to the output precision so intermediate
// windows never exceed the result's window.
template <class Dom>
typename Dom::Series hecke_t_p2(const Dom& dom, const typename Dom::Series& f,
                                long p, long s, bool normalized) {
  if (!detail::is_odd_prime(p))
    throw UsageError("hecke: p must be an odd prime");
  const std::int64_t p2 = static_cast<std::int64_t>(p) * p;
  const std::int64_t P = f.prec();
  const bool inf = prec_is_inf(P);
  const std::int64_t Pout = inf ? kPrecInf : ceil_div(P, p2);

  auto u = f.u_image(p2);
  if (!inf) u = u.truncated(Pout);

  const int sp = kronecker(s, p);
  // twist branch (skipped when (s/p) = 0, which the level guards prevent)
  typename Dom::Series twist_term = dom.zero(Pout);
  if (sp != 0) {
    auto ft = inf ? f : f.truncated(Pout);
    auto t = op_twist(dom, ft, p, normalized ? 0 : 1);
    twist_term = (sp == 1) ? t : -t;
  }

  auto fv = inf ? f : f.truncated(ceil_div(Pout, p2));
  auto v = fv.dilated(p2);
  if (!inf) v = v.truncated(Pout);

  if (normalized) {
    // p U(p^2) + (s/p) twist + V(p^2)
    return u.scaled_long(p) + twist_term + v;
  }
  // U(p^2) + (s/p) twist + p V(p^2)
  return u + twist_term + v.scaled_long(p);
}

// Images of f under T(p^{2m}) for m = 0..n (index m of the result).
template <class Dom>
std::vector<typename Dom::Series> hecke_chain(const Dom& dom,
                                              const typename Dom::Series& f,
                                              long p, int n, long s,
                                              bool normalized) {
  if (n < 0) throw UsageError("hecke: operator power must be >= 0");
  std::vector<typename Dom::Series> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back(f);
  if (n >= 1) out.push_back(hecke_t_p2(dom, f, p, s, normalized));
  for (int m = 2; m <= n; ++m) {
    auto a = hecke_t_p2(dom, out[static_cast<std::size_t>(m - 1)], p, s,
                        normalized);
    auto b = out[static_cast<std::size_t>(m - 2)].scaled_long(p);
    out.push_back(a - b);
  }
  return out;
}

// T(p^{2n})
template <class Dom>
typename Dom::Series hecke_t_p2n(const Dom& dom, const typename Dom::Series& f,
                                 long p, int n, long s, bool normalized) {
  return hecke_chain(dom, f, p, n, s, normalized).back();
}

template <class Dom>
typename Dom::Series hecke_apply(const Dom& dom, const typename Dom::Series& f,
                                 const HeckeSpec& spec) {
  return hecke_t_p2n(dom, f, spec.p, spec.n, spec.s, spec.normalized);
}

/// T(m^2) for composite m coprime to the level: the product of the prime
// power operators.  `level` enables the coprimality guard (4 or 144).
template <class Dom>
typename Dom::Series hecke_composite(const Dom& dom,
                                     const typename Dom::Series& f,
                                     std::int64_t m, long s, bool normalized,
                                     long level) {
  if (m <= 0) throw UsageError("hecke: composite index must be positive");
  if (std::gcd(m, static_cast<std::int64_t>(level)) != 1)
    throw UsageError("hecke: operator index must be coprime to the level");
  auto result = f;
  for (const auto& [p, e] : factorize(static_cast<long>(m)))
    result = hecke_t_p2n(dom, result, p, e, s, normalized);
  return result;
}

}  // namespace gridlab

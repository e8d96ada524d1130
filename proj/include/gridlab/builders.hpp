#pragma once
// Constructors for the classical q-series the grid pipelines are assembled
// from: theta functions, Eisenstein series, eta power products, delta, the
// modular j-invariant, unary theta cusp forms, and Ramanujan's third-order
// mock theta function.  Everything is templated over a coefficient domain
// (exact rationals or integers mod p^K) so the same construction code runs
// in both worlds.

#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "gridlab/common.hpp"
#include "gridlab/numbers.hpp"
#include "gridlab/qseries.hpp"
#include "gridlab/zpseries.hpp"

namespace gridlab {

// ---------------------------------------------------------------------------
// small domain-generic helpers
// ---------------------------------------------------------------------------

template <class Dom>
typename Dom::Series scale_by(const Dom& dom, const typename Dom::Series& s,
                              const mpq_class& c) {
  if constexpr (Dom::exact) {
    (void)dom;
    return s.scaled(c);
  } else {
    return s.scaled_rational(c);
  }
}

template <class Dom>
typename Dom::Series series_from_long_terms(
    const Dom& dom, const std::vector<std::pair<std::int64_t, std::int64_t>>& terms,
    std::int64_t prec) {
  using S = typename Dom::Series;
  if constexpr (Dom::exact) {
    (void)dom;
    std::vector<std::pair<std::int64_t, mpq_class>> t;
    t.reserve(terms.size());
    for (const auto& [e, c] : terms)
      t.emplace_back(e, mpq_class(static_cast<long>(c)));
    return S::from_terms(std::move(t), prec);
  } else {
    return S::from_terms(dom.mod, terms, prec);
  }
}

template <class Dom>
typename Dom::Series one_series(const Dom& dom, std::int64_t prec) {
  return series_from_long_terms(dom, {{0, 1}}, prec);
}

// ---------------------------------------------------------------------------
// theta functions and the unary cusp forms at level 144
// ---------------------------------------------------------------------------

// theta(q) = 1 + 2*sum_{n>=1} q^{n^2}
template <class Dom>
typename Dom::Series theta_series(const Dom& dom, std::int64_t prec) {
  std::vector<std::pair<std::int64_t, std::int64_t>> t;
  t.emplace_back(0, 1);
  for (std::int64_t n = 1; n * n < prec; ++n) t.emplace_back(n * n, 2);
  return series_from_long_terms(dom, t, prec);
}

// theta1(q) = 1 + 2*sum_{n>=1} (-1)^n q^{n^2}
template <class Dom>
typename Dom::Series theta1_series(const Dom& dom, std::int64_t prec) {
  std::vector<std::pair<std::int64_t, std::int64_t>> t;
  t.emplace_back(0, 1);
  for (std::int64_t n = 1; n * n < prec; ++n)
    t.emplace_back(n * n, (n % 2 == 0) ? 2 : -2);
  return series_from_long_terms(dom, t, prec);
}

// B1 = sum_{n>=1} kron(-12, n) * n * q^{n^2}  (weight 3/2 unary cusp form)
template <class Dom>
typename Dom::Series cusp_b1_series(const Dom& dom, std::int64_t prec) {
  std::vector<std::pair<std::int64_t, std::int64_t>> t;
  for (std::int64_t n = 1; n * n < prec; ++n) {
    int chi = kronecker(-12, n);
    if (chi != 0) t.emplace_back(n * n, chi * n);
  }
  return series_from_long_terms(dom, t, prec);
}

// B2 = sum_{m>=1} kron(m, 3) * m * q^{4 m^2}
template <class Dom>
typename Dom::Series cusp_b2_series(const Dom& dom, std::int64_t prec) {
  std::vector<std::pair<std::int64_t, std::int64_t>> t;
  for (std::int64_t m = 1; 4 * m * m < prec; ++m) {
    int chi = kronecker(m, 3);
    if (chi != 0) t.emplace_back(4 * m * m, chi * m);
  }
  return series_from_long_terms(dom, t, prec);
}

// ---------------------------------------------------------------------------
// Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n
// ---------------------------------------------------------------------------

template <class Dom>
typename Dom::Series eisenstein_series(const Dom& dom, unsigned k,
                                       std::int64_t prec) {
  if (k < 2 || k % 2 != 0)
    throw UsageError("eisenstein: weight must be even and >= 2");
  if (prec <= 0) throw UsageError("eisenstein: prec must be positive");
  mpq_class bk = bernoulli(k);
  mpq_class c = mpq_class(-2 * static_cast<long>(k)) / bk;  // -2k/B_k
  using S = typename Dom::Series;
  if constexpr (Dom::exact) {
    (void)dom;
    std::vector<mpz_class> sig = sigma_table(k - 1, prec);
    std::vector<std::pair<std::int64_t, mpq_class>> t;
    t.reserve(static_cast<std::size_t>(prec));
    t.emplace_back(0, mpq_class(1));
    for (std::int64_t n = 1; n < prec; ++n) {
      mpq_class v = c * sig[static_cast<std::size_t>(n)];
      if (v != 0) t.emplace_back(n, v);
    }
    return S::from_terms(std::move(t), prec);
  } else {
    const std::uint64_t m = dom.mod.m;
    std::uint64_t cm = mpq_mod_u64(c, m, dom.mod.p);
    std::vector<std::uint64_t> sig = sigma_mod_table(k - 1, prec, m);
    std::vector<std::pair<std::int64_t, std::int64_t>> terms;
    terms.reserve(static_cast<std::size_t>(prec));
    terms.emplace_back(0, 1);
    for (std::int64_t n = 1; n < prec; ++n) {
      std::uint64_t v =
          static_cast<std::uint64_t>((static_cast<unsigned __int128>(cm) *
                                      sig[static_cast<std::size_t>(n)]) %
                                     m);
      if (v != 0) terms.emplace_back(n, static_cast<std::int64_t>(v));
    }
    return S::from_terms(dom.mod, terms, prec);
  }
}

// ---------------------------------------------------------------------------
// sparse Euler products: single eta tails
// ---------------------------------------------------------------------------

// prod_{n>=1} (1 - q^{delta n}) as a sparse series (pentagonal number theorem).
template <class Dom>
typename Dom::Series pentagonal_series(const Dom& dom, std::int64_t delta,
                                       std::int64_t prec) {
  std::vector<std::pair<std::int64_t, std::int64_t>> t;
  t.emplace_back(0, 1);
  for (std::int64_t k = 1;; ++k) {
    std::int64_t e1 = delta * k * (3 * k - 1) / 2;
    std::int64_t e2 = delta * k * (3 * k + 1) / 2;
    std::int64_t s = (k % 2 == 0) ? 1 : -1;
    bool any = false;
    if (e1 < prec) { t.emplace_back(e1, s); any = true; }
    if (e2 < prec) { t.emplace_back(e2, s); any = true; }
    if (!any) break;
  }
  return series_from_long_terms(dom, t, prec);
}

// prod_{n>=1} (1 - q^{delta n})^3 (Jacobi's identity).
template <class Dom>
typename Dom::Series jacobi_cube_series(const Dom& dom, std::int64_t delta,
                                        std::int64_t prec) {
  std::vector<std::pair<std::int64_t, std::int64_t>> t;
  for (std::int64_t j = 0;; ++j) {
    std::int64_t e = delta * j * (j + 1) / 2;
    if (e >= prec) break;
    std::int64_t c = 2 * j + 1;
    t.emplace_back(e, (j % 2 == 0) ? c : -c);
  }
  return series_from_long_terms(dom, t, prec);
}

// ---------------------------------------------------------------------------
// eta power products  prod_delta eta(delta tau)^{r_delta}
// ---------------------------------------------------------------------------

// Exact route: logarithmic-derivative recurrence for the tail
//   T(q) = prod_delta prod_n (1 - q^{delta n})^{r_delta}
// on the lattice generated by the gcd g of the scales:
//   M*T_M = sum_{u=1..M} cx(u) T_{M-u},
//   cx(u) = -sum_{w | u, w = delta/g} r_delta * w * sigma_1(u/w).
// Mod route: assemble from pentagonal/Jacobi sparse series with binary
// powering; negative total powers go through Newton inversion (valid since
// every tail has leading coefficient 1).
template <class Dom>
typename Dom::Series eta_power_product(const Dom& dom,
                                       const std::map<std::int64_t, int>& expo,
                                       std::int64_t prec) {
  using S = typename Dom::Series;
  std::int64_t weighted = 0;  // sum delta * r_delta
  std::int64_t g = 0;
  for (const auto& [delta, r] : expo) {
    if (delta <= 0) throw UsageError("eta_power_product: scale must be positive");
    if (r == 0) continue;
    weighted += delta * r;
    g = (g == 0) ? delta : std::gcd(g, delta);
  }
  if (weighted % 24 != 0)
    throw ConstructionFailure(
        "eta_power_product: sum(delta * r) must be divisible by 24");
  const std::int64_t shift = weighted / 24;  // leading exponent
  if (g == 0) return one_series(dom, prec);
  const std::int64_t tail_prec = prec - shift;  // needed tail length in q
  if (tail_prec <= 0) return S::zero(prec);

  if constexpr (Dom::exact) {
    (void)dom;
    const std::int64_t len = ceil_div(tail_prec, g);  // lattice coefficients
    std::vector<mpz_class> sig = sigma_table(1, len);
    std::vector<mpz_class> cx(static_cast<std::size_t>(len), mpz_class(0));
    for (const auto& [delta, r] : expo) {
      if (r == 0) continue;
      const std::int64_t w = delta / g;
      for (std::int64_t u = w; u < len; u += w) {
        mpz_class term = sig[static_cast<std::size_t>(u / w)];
        term *= (static_cast<long>(r) * w);
        cx[static_cast<std::size_t>(u)] -= term;
      }
    }
    std::vector<mpz_class> T(static_cast<std::size_t>(len));
    T[0] = 1;
    mpz_class acc;
    for (std::int64_t M = 1; M < len; ++M) {
      acc = 0;
      for (std::int64_t u = 1; u <= M; ++u) {
        if (cx[static_cast<std::size_t>(u)] == 0) continue;
        mpz_addmul(acc.get_mpz_t(), cx[static_cast<std::size_t>(u)].get_mpz_t(),
                   T[static_cast<std::size_t>(M - u)].get_mpz_t());
      }
      if (!mpz_divisible_ui_p(acc.get_mpz_t(), static_cast<unsigned long>(M)))
        throw ConstructionFailure(
            "eta_power_product: non-integral recurrence step");
      mpz_divexact_ui(T[static_cast<std::size_t>(M)].get_mpz_t(),
                      acc.get_mpz_t(), static_cast<unsigned long>(M));
    }
    std::vector<std::pair<std::int64_t, mpq_class>> terms;
    terms.reserve(static_cast<std::size_t>(len));
    for (std::int64_t M = 0; M < len; ++M) {
      if (T[static_cast<std::size_t>(M)] == 0) continue;
      std::int64_t e = shift + M * g;
      if (e < prec)
        terms.emplace_back(e, mpq_class(T[static_cast<std::size_t>(M)]));
    }
    return S::from_terms(std::move(terms), prec);
  } else {
    // prod (1 - q^{delta n})^{r} for r >= 1, via r = 3a + b and Jacobi/
    // pentagonal building blocks with binary powering.
    auto build_power = [&](std::int64_t delta, int r) -> S {
      int a = r / 3, b = r % 3;
      S acc = one_series(dom, tail_prec);
      if (a > 0) {
        S pw = jacobi_cube_series(dom, delta, tail_prec);
        int e = a;
        while (true) {
          if (e & 1) acc = acc * pw;
          e >>= 1;
          if (e == 0) break;
          pw = pw * pw;
        }
      }
      if (b > 0) {
        S pent = pentagonal_series(dom, delta, tail_prec);
        for (int i = 0; i < b; ++i) acc = acc * pent;
      }
      return acc;
    };
    S num = one_series(dom, tail_prec);
    S den = num;
    bool have_den = false;
    for (const auto& [delta, r] : expo) {
      if (r == 0) continue;
      if (r > 0) {
        num = num * build_power(delta, r);
      } else {
        den = den * build_power(delta, -r);
        have_den = true;
      }
    }
    S tail = have_den ? num * den.inverted() : num;
    return tail.shifted(shift).truncated(prec);
  }
}

// ---------------------------------------------------------------------------
// delta, j, and their 4-dilated variants
// ---------------------------------------------------------------------------

template <class Dom>
typename Dom::Series delta_series(const Dom& dom, std::int64_t prec) {
  return eta_power_product(dom, {{1, 24}}, prec);
}

// (E4^3 - E6^2)/1728; needs 1728 invertible, so exact domain or p >= 5.
template <class Dom>
typename Dom::Series delta_from_eisenstein(const Dom& dom, std::int64_t prec) {
  auto e4 = eisenstein_series(dom, 4, prec);
  auto e6 = eisenstein_series(dom, 6, prec);
  auto num = e4 * e4 * e4 - e6 * e6;
  return scale_by(dom, num, mpq_class(1, 1728));
}

// j = E4^3 / delta = q^{-1} + 744 + 196884 q + ...
template <class Dom>
typename Dom::Series j_series(const Dom& dom, std::int64_t prec) {
  const std::int64_t p = prec + 2;
  auto e4 = eisenstein_series(dom, 4, p);
  auto dl = delta_series(dom, p);
  auto res = (e4 * e4 * e4) * dl.inverted();
  return res.truncated(prec);
}

// f(4 tau) for a builder f, to precision prec in q.
template <class Dom, class Builder>
typename Dom::Series dilated4(const Dom& dom, Builder&& build,
                              std::int64_t prec) {
  std::int64_t inner = ceil_div(prec, static_cast<std::int64_t>(4)) + 1;
  return build(dom, inner).dilated(4).truncated(prec);
}

template <class Dom>
typename Dom::Series j4_series(const Dom& dom, std::int64_t prec) {
  return dilated4(
      dom, [](const Dom& d, std::int64_t p) { return j_series(d, p); }, prec);
}

// Psi = E4(4 tau) / eta(4 tau)^6 = q^{-1} + O(q^3), support -1 + 4Z.
template <class Dom>
typename Dom::Series psi_series(const Dom& dom, std::int64_t prec) {
  const std::int64_t p = prec + 4;
  auto e44 = dilated4(
      dom,
      [](const Dom& d, std::int64_t pp) { return eisenstein_series(d, 4, pp); },
      p);
  auto s6 = eta_power_product(dom, {{4, 6}}, p);
  auto res = e44 * s6.inverted();
  return res.truncated(prec);
}

// ---------------------------------------------------------------------------
// Rankin-Cohen style bracket  [f, g] = wf * f * Dg - wg * g * Df
// where D = q d/dq and wf, wg are the weights of f and g.
// ---------------------------------------------------------------------------

template <class Dom>
typename Dom::Series rc_bracket(const Dom& dom, const typename Dom::Series& f,
                                const mpq_class& wf,
                                const typename Dom::Series& g,
                                const mpq_class& wg) {
  auto a = f * g.derived();
  auto b = g * f.derived();
  return scale_by(dom, a, wf) - scale_by(dom, b, wg);
}

// ---------------------------------------------------------------------------
// Ramanujan's third order mock theta function
//   f(q) = 1 + sum_{n>=1} q^{n^2} / ((1+q)^2 (1+q^2)^2 ... (1+q^n)^2)
// computed incrementally: term_n = term_{n-1} * q^{2n-1} * (1+q^n)^{-2},
// with (1+q^n)^{-2} = sum_{i>=0} (-1)^i (i+1) q^{i n}.
// ---------------------------------------------------------------------------

template <class Dom>
typename Dom::Series mock_theta_f(const Dom& dom, std::int64_t prec) {
  using S = typename Dom::Series;
  if (prec <= 0) return S::zero(prec);
  S acc = one_series(dom, prec);
  S term = acc;
  for (std::int64_t n = 1; n * n < prec; ++n) {
    std::vector<std::pair<std::int64_t, std::int64_t>> inv2;
    if (n == 0) break;
    for (std::int64_t i = 0; i * n < prec; ++i) {
      std::int64_t c = i + 1;
      inv2.emplace_back(i * n, (i % 2 == 0) ? c : -c);
    }
    S factor = series_from_long_terms(dom, inv2, prec);
    term = (term.shifted(2 * n - 1) * factor).truncated(prec);
    acc = acc + term;
  }
  return acc;
}

// F1 = q^{-1} (f(q^24) - 2) = -q^{-1} + q^{23} - 2 q^{47} + 3 q^{71} - ...
template <class Dom>
typename Dom::Series fo_f1_series(const Dom& dom, std::int64_t prec) {
  std::int64_t inner = ceil_div(prec + 1, static_cast<std::int64_t>(24)) + 1;
  auto f = mock_theta_f(dom, inner);
  auto shifted =
      (f - series_from_long_terms(dom, {{0, 2}}, inner)).dilated(24).shifted(-1);
  return shifted.truncated(prec);
}

}  // namespace gridlab

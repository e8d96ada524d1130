#pragma once
// p-adic congruence verifiers for the grid families:
//  * valuation scans of difference series (with honest handling of the
//    mod-p^K cap: a zero residue certifies valuation >= K, never more);
//  * stability of Hecke images p-adically: T(p^{2n+4}) vs T(p^{2n});
//  * successive-image congruences T(p^{2n+2}) vs (j/p) T(p^{2n});
//  * duality congruences b(p^{2v} j, p^{2v+2s} i) = 0 mod p^s;
//  * single-coefficient recurrences across Hecke images.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gridlab/common.hpp"
#include "gridlab/grids.hpp"
#include "gridlab/hecke.hpp"
#include "gridlab/numbers.hpp"
#include "gridlab/reports.hpp"

namespace gridlab {

inline constexpr long kValInfinite = std::numeric_limits<long>::max();

inline long vp_u64(std::uint64_t r, long p) {
  if (r == 0) return kValInfinite;
  long v = 0;
  while (r % static_cast<std::uint64_t>(p) == 0) {
    r /= static_cast<std::uint64_t>(p);
    ++v;
  }
  return v;
}

// Valuation of a domain coefficient.  In the mod-p^K domain a zero residue
// returns kValInfinite, meaning only "at least K"; callers must consult the
// cap before treating it as infinite.
template <class Dom>
long coeff_valuation(const Dom& dom, const typename Dom::Coeff& c, long p) {
  if constexpr (Dom::exact) {
    (void)dom;
    if (c == 0) return kValInfinite;
    return vp_rat(c, p);
  } else {
    if (p != dom.mod.p)
      throw UsageError("coeff_valuation: prime does not match the domain");
    return vp_u64(c, p);
  }
}

template <class Dom>
long domain_val_cap(const Dom& dom) {
  if constexpr (Dom::exact) {
    (void)dom;
    return -1;  // exact: no cap
  } else {
    return dom.mod.k;
  }
}

// Minimum valuation of the coefficients of `s` over its own window
// [min_exp_bound, prec).  required: the claimed lower bound.
template <class Dom>
CongruenceReport scan_congruence(const Dom& dom, const typename Dom::Series& s,
                                 long p, long required, std::string statement,
                                 std::map<std::string, std::string> params) {
  CongruenceReport rep;
  rep.statement = std::move(statement);
  rep.params = std::move(params);
  rep.p = p;
  rep.required = required;
  rep.cap = domain_val_cap(dom);
  rep.window_lo = s.min_exp_bound();
  rep.window_hi = s.prec();
  long minv = kValInfinite;
  std::int64_t min_at = 0;
  std::size_t nonzero = 0;
  s.for_each([&](std::int64_t e, const auto& c) {
    long v = coeff_valuation(dom, c, p);
    if (v == kValInfinite) return;  // stored zero: no information here
    ++nonzero;
    if (v < minv) {
      minv = v;
      min_at = e;
    }
  });
  rep.checked = nonzero;
  if (minv == kValInfinite) {
    // every coefficient in the window vanished (mod p^cap if capped)
    rep.observed_at_cap = true;
    rep.observed = (rep.cap >= 0) ? rep.cap : kValInfinite;
    rep.pass = (rep.cap < 0) || (rep.cap >= required);
    rep.detail = "all coefficients vanish on the window";
  } else {
    rep.observed = minv;
    rep.pass = minv >= required;
    rep.witnesses.push_back(
        {min_at, minv, "minimum valuation attained at this exponent"});
  }
  return rep;
}

// w(g) = max over principal exponents alpha (nonzero coefficient) of
// floor(v_p(|alpha|) / 2); 0 if the principal part is empty.
template <class Dom>
long w_of(const typename Dom::Series& s, long p) {
  long w = 0;
  for (const auto& [e, c] : s.principal_part()) {
    (void)c;
    std::int64_t a = e < 0 ? -e : e;
    if (a == 0) continue;
    long v = vp_int(mpz_class(static_cast<long>(a)), p);
    w = std::max(w, v / 2);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Hecke stability: for a weight-3/2 form (or combination) g with invariant
// w = w(g), and n >= w:  g|T(p^{2n+4}) - g|T(p^{2n}) = 0 mod p^{n-w}.
// `s` is the family twist parameter (1 at level 4, 12 at level 144).
// ---------------------------------------------------------------------------

template <class Dom>
CongruenceReport verify_hecke_stability(const Dom& dom,
                                        const typename Dom::Series& g, long p,
                                        int n, long s) {
  const long w = w_of<Dom>(g, p);
  if (n < w) throw UsageError("hecke stability: requires n >= w(g)");
  auto chain = hecke_chain(dom, g, p, n + 2, s, /*normalized=*/false);
  auto diff = chain[static_cast<std::size_t>(n + 2)] -
              chain[static_cast<std::size_t>(n)];
  std::map<std::string, std::string> params{
      {"p", std::to_string(p)},
      {"n", std::to_string(n)},
      {"w", std::to_string(w)},
      {"twist", std::to_string(s)},
  };
  return scan_congruence(dom, diff, p, n - w, "hecke-stability",
                         std::move(params));
}

// ---------------------------------------------------------------------------
// Successive-image congruence for a weight-3/2 grid form of index
// D = p^{2v} j (p^2 does not divide j), n >= v:
//   g_D|T(p^{2n+2}) - (s*j/p) g_D|T(p^{2n}) = 0 mod p^{n-v+1}.
// ---------------------------------------------------------------------------

template <class Dom>
CongruenceReport verify_successive_congruence(const Dom& dom,
                                              const GridBasis<Dom>& basis,
                                              std::int64_t D, long p, int n) {
  if (family_normalized(basis.family))
    throw UsageError("successive congruence: weight-3/2 families only");
  long v = 0;
  std::int64_t j = 0;
  split_even_power(D, p, &v, &j);
  if (n < v) throw UsageError("successive congruence: requires n >= v");
  const long s = family_twist(basis.family);
  const int factor = kronecker(s * j, p);
  auto chain = hecke_chain(dom, basis.form(D), p, n + 1, s,
                           /*normalized=*/false);
  auto& hi = chain[static_cast<std::size_t>(n + 1)];
  auto lo = chain[static_cast<std::size_t>(n)].scaled_long(factor);
  auto diff = hi - lo;
  std::map<std::string, std::string> params{
      {"family", std::string(1, family_letter(basis.family))},
      {"D", std::to_string(D)},
      {"p", std::to_string(p)},
      {"n", std::to_string(n)},
      {"v", std::to_string(v)},
      {"j", std::to_string(j)},
  };
  return scan_congruence(dom, diff, p, n - v + 1, "successive-congruence",
                         std::move(params));
}

// Same difference, restricted to positive exponents (the coefficient-level
// statement b_{p^n}(D,d) - (s*j/p) b_{p^{n-1}}(D,d) = 0 mod p^{n-v}, n >= v).
template <class Dom>
CongruenceReport verify_image_coefficient_congruence(
    const Dom& dom, const GridBasis<Dom>& basis, std::int64_t D, long p,
    int n) {
  if (family_normalized(basis.family))
    throw UsageError("image coefficient congruence: weight-3/2 families only");
  long v = 0;
  std::int64_t j = 0;
  split_even_power(D, p, &v, &j);
  if (n < v || n < 1)
    throw UsageError("image coefficient congruence: requires n >= max(v, 1)");
  const long s = family_twist(basis.family);
  const int factor = kronecker(s * j, p);
  auto chain =
      hecke_chain(dom, basis.form(D), p, n, s, /*normalized=*/false);
  auto diff = chain[static_cast<std::size_t>(n)] -
              chain[static_cast<std::size_t>(n - 1)].scaled_long(factor);
  // positive exponents only
  auto pos = diff - diff.truncated(1);
  std::map<std::string, std::string> params{
      {"family", std::string(1, family_letter(basis.family))},
      {"D", std::to_string(D)},
      {"p", std::to_string(p)},
      {"n", std::to_string(n)},
      {"v", std::to_string(v)},
  };
  return scan_congruence(dom, pos, p, n - v, "image-coefficient-congruence",
                         std::move(params));
}

// ---------------------------------------------------------------------------
// Duality congruence: for a weight-3/2 basis with coefficients b(D, d),
// indices D = p^{2v} j (p^2 not dividing j) and exponents d = p^{2v+2s} i
// with (-i/p) = (j/p):   b(D, d) = 0 mod p^s.
// Scans all (v, s, j <= jmax, i <= imax) combinations that are valid for the
// family; substantive means the residue/value is provably nonzero.
// ---------------------------------------------------------------------------

template <class Dom>
CongruenceReport verify_duality_congruence(const Dom& dom,
                                           const GridBasis<Dom>& basis, long p,
                                           const std::vector<long>& v_list,
                                           const std::vector<long>& s_list,
                                           std::int64_t jmax,
                                           std::int64_t imax) {
  if (family_normalized(basis.family))
    throw UsageError("duality congruence: weight-3/2 families only");
  CongruenceReport rep;
  rep.statement = "duality-congruence";
  rep.p = p;
  rep.cap = domain_val_cap(dom);
  rep.params = {{"family", std::string(1, family_letter(basis.family))},
                {"p", std::to_string(p)},
                {"jmax", std::to_string(jmax)},
                {"imax", std::to_string(imax)}};
  rep.pass = true;
  long min_margin = kValInfinite;  // min over substantive of (observed - s)
  const std::int64_t p2 = static_cast<std::int64_t>(p) * p;
  for (long v : v_list) {
    for (long s : s_list) {
      if (s < 1) throw UsageError("duality congruence: s must be >= 1");
      for (std::int64_t j = 1; j <= jmax; ++j) {
        if (j % (p2) == 0) continue;  // need p^2 not dividing j
        std::int64_t D = j;
        for (long t = 0; t < v; ++t) D *= p2;
        if (!family_valid_index(basis.family, D) || !basis.built(D)) continue;
        for (std::int64_t i = 1; i <= imax; ++i) {
          if (kronecker(-i, p) != kronecker(j, p)) continue;
          std::int64_t d = i;
          for (long t = 0; t < v + s; ++t) d *= p2;
          if (!basis.known(D, d)) continue;
          if (!family_supports_exponent(basis.family, d)) continue;
          auto c = basis.coeff(D, d);
          long val = coeff_valuation(dom, c, p);
          ++rep.checked;
          if (val == kValInfinite) {
            ++rep.vacuous;  // the coefficient itself vanishes: no content
            continue;
          }
          ++rep.substantive;
          if (val < s) {
            rep.pass = false;
            rep.witnesses.push_back(
                {d, val, "coefficient of form index " + std::to_string(D) +
                             " below required p^" + std::to_string(s)});
          }
          if (val - s < min_margin) min_margin = val - s;
        }
      }
    }
  }
  rep.required = 0;  // per-instance requirement varies; margin reported
  rep.observed = (min_margin == kValInfinite) ? -1 : min_margin;
  rep.detail = "observed = minimum (valuation - s) over substantive instances";
  return rep;
}

// ---------------------------------------------------------------------------
// the worked numerical example (CLI statement "example-1-3")
// ---------------------------------------------------------------------------

// The weight-3/2 level-4 form with pole order 4, imaged under T(3^2) and
// T(3^6) mod 3^9: both printed expansions (through q^19, principal parts
// included) are checked bit-for-bit, and the minimum 3-adic valuation of the
// difference of the two images over its full window must equal exactly 2.
struct WorkedExampleResult {
  MatchReport image2;     // the T(3^2) expansion
  MatchReport image6;     // the T(3^6) expansion
  CongruenceReport drop;  // valuation scan of image6 - image2
  bool min_val_exact = false;  // drop.observed == 2 and not a cap artifact
  bool pass = false;
};

WorkedExampleResult run_worked_example();

}  // namespace gridlab

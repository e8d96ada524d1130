#pragma once
// Closed-form Hecke images as grid-form combinations, and the machinery that
// compares a computed Hecke image against such a combination coefficient by
// coefficient.
//
// For a weight-3/2 form of index D = p^{2v} j (p^2 not dividing j):
//   n <  v:  sum_{t=0}^{n}   p^t * form[p^{2v-2n+4t} j]
//   n >= v:  sum_{t=0}^{n-v} (s*j/p)^{n-v-t} p^t * form[p^{2t} j]
//          + sum_{t=1}^{v}   p^{n-v+t} * form[p^{2n-2v+4t} j]
// For a normalized weight-1/2 form of index d = p^{2u} i:
//   n <  u:  sum_{t=0}^{n}   p^{n-t} * form[p^{2u-2n+4t} i]
//   n >= u:  sum_{t=0}^{n-u} (-s*i/p)^{n-u-t} p^u * form[p^{2t} i]
//          + sum_{t=1}^{u}   p^{u-t} * form[p^{2n-2u+4t} i]
// where s is the family twist (1 at level 4, 12 at level 144).

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "gridlab/common.hpp"
#include "gridlab/grids.hpp"
#include "gridlab/hecke.hpp"
#include "gridlab/numbers.hpp"
#include "gridlab/reports.hpp"

namespace gridlab {

struct ComboTerm {
  mpz_class scalar;    // signed integer multiplier
  std::int64_t index;  // grid index of the form it multiplies
};

namespace detail {

inline mpz_class pow_mpz(long p, long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(e));
  return r;
}

inline std::int64_t pow_i64_checked(long p, long e) {
  std::int64_t r = 1;
  for (long t = 0; t < e; ++t) {
    if (r > kPrecInf / p)
      throw UsageError("hecke expansion: grid index overflows");
    r *= p;
  }
  return r;
}

// k^e where k is a Kronecker value in {-1, 0, 1} and 0^0 = 1.
inline long kron_pow(int k, long e) {
  if (e == 0) return 1;
  if (k == 0) return 0;
  return (k == -1 && (e % 2 != 0)) ? -1 : 1;
}

}  // namespace detail

// The Hecke image form|T(p^{2n}) of the grid form with the given index,
// expressed as a combination of grid forms.  Terms with multiplier zero
// (annihilated Kronecker factors) are dropped.
inline std::vector<ComboTerm> hecke_expansion_combo(Family family,
                                                    std::int64_t index, long p,
                                                    int n) {
  if (!family_valid_index(family, index) || index <= 0)
    throw UsageError("hecke expansion: index must be positive and valid");
  if (family_level(family) % p == 0)
    throw UsageError("hecke expansion: p must be coprime to the level");
  long v = 0;
  std::int64_t j = 0;
  split_even_power(index, p, &v, &j);
  const long s = family_twist(family);
  std::map<std::int64_t, mpz_class> acc;
  auto add = [&](const mpz_class& scalar, long exp2, std::int64_t base) {
    if (scalar == 0) return;
    acc[detail::pow_i64_checked(p, exp2) * base] += scalar;
  };
  if (family_normalized(family)) {
    // weight 1/2, d = p^{2u} i with u = v, i = j
    if (n < v) {
      for (long t = 0; t <= n; ++t)
        add(detail::pow_mpz(p, n - t), 2 * v - 2 * n + 4 * t, j);
    } else {
      const int k = kronecker(-s * j, p);
      for (long t = 0; t <= n - v; ++t) {
        mpz_class scalar =
            detail::pow_mpz(p, v) * detail::kron_pow(k, n - v - t);
        add(scalar, 2 * t, j);
      }
      for (long t = 1; t <= v; ++t)
        add(detail::pow_mpz(p, v - t), 2 * n - 2 * v + 4 * t, j);
    }
  } else {
    // weight 3/2, D = p^{2v} j
    if (n < v) {
      for (long t = 0; t <= n; ++t)
        add(detail::pow_mpz(p, t), 2 * v - 2 * n + 4 * t, j);
    } else {
      const int k = kronecker(s * j, p);
      for (long t = 0; t <= n - v; ++t) {
        mpz_class scalar =
            detail::pow_mpz(p, t) * detail::kron_pow(k, n - v - t);
        add(scalar, 2 * t, j);
      }
      for (long t = 1; t <= v; ++t)
        add(detail::pow_mpz(p, n - v + t), 2 * n - 2 * v + 4 * t, j);
    }
  }
  std::vector<ComboTerm> out;
  out.reserve(acc.size());
  for (auto& [idx, scalar] : acc)
    if (scalar != 0) out.push_back({scalar, idx});
  return out;
}

// Evaluate the combination's coefficient at exponent e from basis data.
// Requires basis.known(term.index, e) for every term.
template <class Dom>
typename Dom::Coeff combo_coefficient_at(const Dom& dom,
                                         const GridBasis<Dom>& basis,
                                         const std::vector<ComboTerm>& combo,
                                         std::int64_t e) {
  auto acc = dom.of_long(0);
  for (const auto& term : combo) {
    auto c = basis.coeff(term.index, e);
    add_coeff_inplace(dom, acc, mul_coeff_mpz(dom, c, term.scalar));
  }
  return acc;
}

// Compare a computed Hecke image against a grid-form combination on the
// largest exponent window where both sides are determined:
//   window_hi = min(image precision, each term's known bound)
//   window_lo = min(image lower bound, -max term index)
// Only exponents that can carry a nonzero coefficient on either side are
// visited; everything else is structurally 0 = 0.
template <class Dom>
MatchReport compare_image_with_combo(const Dom& dom,
                                     const GridBasis<Dom>& basis,
                                     const typename Dom::Series& image,
                                     const std::vector<ComboTerm>& combo,
                                     std::string statement,
                                     std::map<std::string, std::string> params) {
  MatchReport rep;
  rep.statement = std::move(statement);
  rep.params = std::move(params);
  std::int64_t hi = image.prec();
  std::int64_t lo = image.min_exp_bound();
  for (const auto& term : combo) {
    hi = std::min(hi, basis.known_bound(term.index));
    lo = std::min(lo, -term.index);
  }
  rep.window_lo = lo;
  rep.window_hi = hi;
  if (hi <= lo) {
    rep.pass = false;
    rep.detail = "empty comparison window";
    return rep;
  }
  std::set<std::int64_t> exps;
  auto note = [&](std::int64_t e) {
    if (e >= lo && e < hi) exps.insert(e);
  };
  image.for_each([&](std::int64_t e, const auto&) { note(e); });
  for (const auto& term : combo) {
    note(-term.index);
    note(0);
    if (basis.built(term.index))
      basis.form(term.index).for_each(
          [&](std::int64_t e, const auto&) { note(e); });
  }
  for (std::int64_t e : exps) {
    auto lhs = image.at(e);
    auto rhs = combo_coefficient_at(dom, basis, combo, e);
    ++rep.checked;
    const bool lz = dom.is_zero(lhs);
    const bool rz = dom.is_zero(rhs);
    if (!lz || !rz) ++rep.substantive;
    bool equal;
    if constexpr (Dom::exact)
      equal = (lhs == rhs);
    else
      equal = (lhs == rhs);
    if (!equal) {
      ++rep.mismatches;
      if (rep.witnesses.size() < 8)
        rep.witnesses.push_back(
            {e, -1,
             "image " + coeff_str(dom, lhs) + " vs combination " +
                 coeff_str(dom, rhs)});
    }
  }
  rep.pass = (rep.mismatches == 0) && (rep.substantive > 0);
  if (rep.pass)
    rep.detail = "all coefficients agree on the window";
  else if (rep.mismatches == 0)
    rep.detail = "window contains no nonzero coefficient (vacuous)";
  return rep;
}

// form|T(p^{2n}) computed by the operator chain, compared with the
// closed-form grid combination.
template <class Dom>
MatchReport verify_hecke_expansion(const Dom& dom, const GridBasis<Dom>& basis,
                                   std::int64_t index, long p, int n) {
  const auto& f = basis.form(index);
  auto image = hecke_t_p2n(dom, f, p, n, family_twist(basis.family),
                           family_normalized(basis.family));
  auto combo = hecke_expansion_combo(basis.family, index, p, n);
  std::map<std::string, std::string> params{
      {"family", std::string(1, family_letter(basis.family))},
      {"index", std::to_string(index)},
      {"p", std::to_string(p)},
      {"n", std::to_string(n)},
  };
  return compare_image_with_combo(dom, basis, image, combo, "hecke-expansion",
                                  std::move(params));
}

// Single-coefficient closed form across Hecke images: the coefficient of
// q^E in form|T(p^{2n}) equals the combination's coefficient at E, for each
// E in [e_lo, e_hi).  This is the coefficient-level restatement checked
// directly from an extracted column.
template <class Dom>
MatchReport verify_coefficient_closed_form(const Dom& dom,
                                           const GridBasis<Dom>& basis,
                                           std::int64_t index, long p, int n,
                                           std::int64_t e_lo,
                                           std::int64_t e_hi) {
  const auto& f = basis.form(index);
  auto image = hecke_t_p2n(dom, f, p, n, family_twist(basis.family),
                           family_normalized(basis.family));
  auto combo = hecke_expansion_combo(basis.family, index, p, n);
  MatchReport rep;
  rep.statement = "coefficient-closed-form";
  rep.params = {{"family", std::string(1, family_letter(basis.family))},
                {"index", std::to_string(index)},
                {"p", std::to_string(p)},
                {"n", std::to_string(n)}};
  std::int64_t hi = std::min(e_hi, image.prec());
  for (const auto& term : combo)
    hi = std::min(hi, basis.known_bound(term.index));
  std::int64_t lo = e_lo;
  rep.window_lo = lo;
  rep.window_hi = hi;
  for (std::int64_t e = lo; e < hi; ++e) {
    auto lhs = image.at(e);
    auto rhs = combo_coefficient_at(dom, basis, combo, e);
    ++rep.checked;
    if (!dom.is_zero(lhs) || !dom.is_zero(rhs)) ++rep.substantive;
    if (!(lhs == rhs)) {
      ++rep.mismatches;
      if (rep.witnesses.size() < 8)
        rep.witnesses.push_back({e, -1,
                                 "image " + coeff_str(dom, lhs) +
                                     " vs closed form " +
                                     coeff_str(dom, rhs)});
    }
  }
  rep.pass = (rep.mismatches == 0) && (rep.substantive > 0);
  return rep;
}

}  // namespace gridlab

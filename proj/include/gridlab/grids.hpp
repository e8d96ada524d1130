#pragma once
// The four grid families and the shared ladder machinery that builds them.
//
//   zagier_f : weight 1/2, level 4,   indices d >= 0, d = 0,3 mod 4,
//              f_d = q^{-d} + O(q),   support on exponents 0,1 mod 4
//   zagier_g : weight 3/2, level 4,   indices D >= 1, D = 0,1 mod 4,
//              g_D = q^{-D} + O(1),   support on exponents 0,3 mod 4
//   fo_F     : weight 1/2, level 144, indices d >= 1, d = 1 mod 24,
//              F_d = -q^{-d} + O(q^23), support on exponents 23 mod 24
//   fo_G     : weight 3/2, level 144, indices D >= 23, D = 23 mod 24,
//              G_D = q^{-D} + O(q),   support on exponents 1 mod 24
//
// Every family is an infinite basis indexed by pole order.  Forms beyond the
// constructed range still have *known* coefficients low in the q-expansion
// (their principal part is a single monomial and the gap up to the first
// positive support exponent is structurally zero); the basis object exposes
// that knowledge so identity checks can clip their windows honestly.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "gridlab/builders.hpp"
#include "gridlab/common.hpp"
#include "gridlab/numbers.hpp"

namespace gridlab {

enum class Family { zagier_f, zagier_g, fo_F, fo_G };

inline char family_letter(Family f) {
  switch (f) {
    case Family::zagier_f: return 'f';
    case Family::zagier_g: return 'g';
    case Family::fo_F: return 'F';
    case Family::fo_G: return 'G';
  }
  return '?';
}

inline Family family_from_letter(char c) {
  switch (c) {
    case 'f': return Family::zagier_f;
    case 'g': return Family::zagier_g;
    case 'F': return Family::fo_F;
    case 'G': return Family::fo_G;
  }
  throw UsageError("unknown family letter");
}

inline long family_level(Family f) {
  return (f == Family::zagier_f || f == Family::zagier_g) ? 4 : 144;
}

inline long family_twist(Family f) {
  return (f == Family::zagier_f || f == Family::zagier_g) ? 1 : 12;
}

// weight-1/2 families use the normalized Hecke operator
inline bool family_normalized(Family f) {
  return f == Family::zagier_f || f == Family::fo_F;
}

inline std::int64_t family_step(Family f) {
  return (f == Family::zagier_f || f == Family::zagier_g) ? 4 : 24;
}

inline bool family_valid_index(Family f, std::int64_t idx) {
  switch (f) {
    case Family::zagier_f:
      return idx >= 0 && (idx % 4 == 0 || idx % 4 == 3);
    case Family::zagier_g:
      return idx >= 1 && (idx % 4 == 0 || idx % 4 == 1);
    case Family::fo_F:
      return idx >= 1 && idx % 24 == 1;
    case Family::fo_G:
      return idx >= 23 && idx % 24 == 23;
  }
  return false;
}

inline bool family_supports_exponent(Family f, std::int64_t e) {
  switch (f) {
    case Family::zagier_f: return mod_nonneg(e, 4) == 0 || mod_nonneg(e, 4) == 1;
    case Family::zagier_g: return mod_nonneg(e, 4) == 0 || mod_nonneg(e, 4) == 3;
    case Family::fo_F: return mod_nonneg(e, 24) == 23;
    case Family::fo_G: return mod_nonneg(e, 24) == 1;
  }
  return false;
}

// Exponent bound up to which the coefficients of an *unconstructed* form of
// the family are structurally known (single-monomial principal part, zero
// constant / gap up to the first positive support exponent).
inline std::int64_t family_deep_bound(Family f) {
  switch (f) {
    case Family::zagier_f: return 1;   // a(-d) = 1, constant 0
    case Family::zagier_g: return 3;   // constant -2*[D square], q^1 = q^2 = 0
    case Family::fo_F: return 23;      // a(-d) = -1, all other exps < 23 are 0
    case Family::fo_G: return 1;       // a(-D) = 1, constant 0
  }
  return 0;
}

// leading coefficient of the canonical form (F_d is -q^{-d} + ...)
inline long family_leading(Family f) { return f == Family::fo_F ? -1 : 1; }

// Coefficient of q^e in the unconstructed (deep) form of the given index,
// valid whenever e < family_deep_bound(f).
inline long family_deep_coefficient(Family f, std::int64_t index,
                                    std::int64_t e) {
  if (e >= family_deep_bound(f))
    throw PrecisionError("deep coefficient unknown");
  if (e == -index) return family_leading(f);
  if (f == Family::zagier_g && e == 0) return is_square(index) ? -2 : 0;
  return 0;
}

// domain-generic coefficient negation
template <class Dom>
typename Dom::Coeff neg_coeff(const Dom& dom, const typename Dom::Coeff& c) {
  if constexpr (Dom::exact) {
    (void)dom;
    return mpq_class(-c);
  } else {
    return c == 0 ? 0 : dom.mod.m - c;
  }
}

// domain-generic: coefficient times a (small or large) integer scalar
template <class Dom>
typename Dom::Coeff mul_coeff_mpz(const Dom& dom, const typename Dom::Coeff& c,
                                  const mpz_class& z) {
  if constexpr (Dom::exact) {
    (void)dom;
    mpq_class r(c);
    r *= z;
    return r;
  } else {
    mpz_class zr = z % static_cast<long>(dom.mod.m);
    if (zr < 0) zr += static_cast<long>(dom.mod.m);
    std::uint64_t zu = zr.get_ui();
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(c) * zu) % dom.mod.m);
  }
}

template <class Dom>
void add_coeff_inplace(const Dom& dom, typename Dom::Coeff& acc,
                       const typename Dom::Coeff& c) {
  if constexpr (Dom::exact) {
    (void)dom;
    acc += c;
  } else {
    acc += c;
    if (acc >= dom.mod.m) acc -= dom.mod.m;
  }
}

// decimal rendering (num or num/den exactly; least nonnegative residue mod p^k)
template <class Dom>
std::string coeff_str(const Dom& dom, const typename Dom::Coeff& c) {
  if constexpr (Dom::exact) {
    (void)dom;
    mpq_class v(c);
    return v.get_str();
  } else {
    (void)dom;
    return std::to_string(c);
  }
}

// ---------------------------------------------------------------------------
// GridBasis: constructed forms plus structural deep knowledge
// ---------------------------------------------------------------------------

template <class Dom>
struct GridBasis {
  using Series = typename Dom::Series;
  using Coeff = typename Dom::Coeff;

  Dom dom;
  Family family;
  std::map<std::int64_t, Series> forms;

  GridBasis(const Dom& d, Family f) : dom(d), family(f) {}

  bool built(std::int64_t index) const { return forms.count(index) != 0; }

  const Series& form(std::int64_t index) const {
    auto it = forms.find(index);
    if (it == forms.end())
      throw UsageError("form with this index was not constructed");
    return it->second;
  }

  // Exponent bound below which coefficient (index, e) is known.
  std::int64_t known_bound(std::int64_t index) const {
    auto it = forms.find(index);
    if (it != forms.end()) return it->second.prec();
    return family_deep_bound(family);
  }

  bool known(std::int64_t index, std::int64_t e) const {
    return e < known_bound(index);
  }

  Coeff coeff(std::int64_t index, std::int64_t e) const {
    if (!family_valid_index(family, index))
      throw UsageError("invalid index for family");
    auto it = forms.find(index);
    if (it != forms.end()) return it->second.at(e);
    return dom.of_long(family_deep_coefficient(family, index, e));
  }
};

// ---------------------------------------------------------------------------
// canonical reduction (the core of every ladder step and seed)
// ---------------------------------------------------------------------------

// Bring `raw` to canonical shape for `family` at pole order `index`:
//  * normalize the coefficient at q^{-index} to the family leading value;
//  * subtract built forms to kill every other principal exponent;
//  * for zagier_f with index > 0, also kill the constant term with f_0.
// Throws ConstructionFailure if a required form is missing, a coefficient
// is not invertible, or the result fails its shape checks.
template <class Dom>
typename Dom::Series reduce_to_canonical(
    const Dom& dom, Family family, std::int64_t index,
    typename Dom::Series raw,
    const std::map<std::int64_t, typename Dom::Series>& forms) {
  const long want = family_leading(family);

  // normalize leading coefficient to `want`
  {
    auto lead = raw.at(-index);
    if (!dom.is_unit(lead))
      throw ConstructionFailure("reduce: leading coefficient is not a unit");
    if (!(lead == dom.of_long(want))) {
      auto factor = dom.inv(lead);
      raw = raw.scaled(factor);
      if (want == -1) raw = -raw;
    }
  }

  // clear all other principal exponents using built forms
  for (const auto& [e, c] : raw.principal_part()) {
    if (e == -index) continue;
    if (dom.is_zero(c)) continue;
    auto it = forms.find(-e);
    if (it == forms.end())
      throw ConstructionFailure(
          "reduce: no built form available to clear a principal exponent");
    // stored form has coefficient `want` at q^{e}; subtract (c/want)*form
    auto factor = (want == 1) ? c : neg_coeff(dom, c);
    raw = raw - it->second.scaled(factor);
  }

  // zagier_f: clear the constant term against f_0 = theta
  if (family == Family::zagier_f && index > 0) {
    auto c0 = raw.at(0);
    if (!dom.is_zero(c0)) {
      auto it = forms.find(0);
      if (it == forms.end())
        throw ConstructionFailure("reduce: f_0 needed to clear constant term");
      raw = raw - it->second.scaled(c0);
    }
  }

  // shape checks
  {
    auto pp = raw.principal_part();
    if (pp.size() != 1 || pp[0].first != -index ||
        !(pp[0].second == dom.of_long(want)))
      throw ConstructionFailure("reduce: principal part failed to normalize");
    if (family == Family::zagier_f && index > 0 && !dom.is_zero(raw.at(0)))
      throw ConstructionFailure("reduce: constant term failed to clear");
  }
  return raw;
}

// verify the support progression of a canonical form (loud check, used at
// store time; zero coefficients are exempt since they carry no information)
template <class Dom>
void check_support(const Dom&, Family family, const typename Dom::Series& s) {
  s.for_each([&](std::int64_t e, const auto& c) {
    (void)c;
    if (!family_supports_exponent(family, e))
      throw ConstructionFailure("form has a coefficient off its progression");
  });
}

// ---------------------------------------------------------------------------
// ladder: extend a family from its seeds up to max_index
// ---------------------------------------------------------------------------

// `ladder` is j(4 tau) for the level-4 families and the eta-quotient hauptmodul
// analogue for level 144; it has a single pole of depth `step` at infinity and
// leading coefficient 1.
template <class Dom>
void extend_ladder(const Dom& dom, GridBasis<Dom>& basis,
                   const typename Dom::Series& ladder,
                   std::int64_t max_index) {
  const std::int64_t step = family_step(basis.family);
  if (basis.forms.empty())
    throw UsageError("extend_ladder: seeds must be present");
  std::int64_t start = basis.forms.rbegin()->first;
  for (std::int64_t idx = start + 1; idx <= max_index; ++idx) {
    if (!family_valid_index(basis.family, idx)) continue;
    if (basis.built(idx)) continue;
    std::int64_t prev = idx - step;
    auto it = basis.forms.find(prev);
    if (it == basis.forms.end())
      throw ConstructionFailure("extend_ladder: predecessor form missing");
    auto raw = it->second * ladder;
    auto canon =
        reduce_to_canonical(dom, basis.family, idx, std::move(raw), basis.forms);
    check_support(dom, basis.family, canon);
    basis.forms.emplace(idx, std::move(canon));
  }
}

}  // namespace gridlab

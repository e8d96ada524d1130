#pragma once
// Construction of the level-4 weight-1/2 (f_d) and weight-3/2 (g_D) grids,
// plus the verification routines specific to them: grid duality, Hecke-grid
// duality, the divisor-sum recursion for first coefficients, and the Hecke
// composition identity.
//
// Seeds:
//   f_0 = theta
//   f_3 = [theta, E_10(4t)]-bracket / Delta(4t), reduced against f_0
//   f_4 = theta * j(4t), reduced against f_0, f_3
//   g_1 = theta1 * Psi
//   g_4 = (-alternated f_3) * Psi, reduced against g_1
// Higher indices follow the j(4t) ladder (extend_ladder).  A second route to
// the pole-5 form (a bracket on g_1 over Delta(4t)) is exposed for
// cross-checking the ladder output.

#include <cstdint>
#include <utility>
#include <vector>

#include "gridlab/builders.hpp"
#include "gridlab/common.hpp"
#include "gridlab/expansion.hpp"
#include "gridlab/grids.hpp"
#include "gridlab/hecke.hpp"
#include "gridlab/reports.hpp"

namespace gridlab {

// ---------------------------------------------------------------------------
// seeds
// ---------------------------------------------------------------------------

// f_3 = q^{-3} - 248 q + 26752 q^4 - ... : the weight-1/2 bracket seed.
template <class Dom>
typename Dom::Series zagier_f3_series(const Dom& dom, std::int64_t prec) {
  const std::int64_t P = prec + 8;
  auto theta = theta_series(dom, P);
  auto e10 = dilated4(
      dom,
      [](const Dom& d, std::int64_t p) { return eisenstein_series(d, 10, p); },
      P);
  auto bracket = rc_bracket(dom, theta, mpq_class(1, 2), e10, mpq_class(10));
  auto delta4_inv = eta_power_product(dom, {{4, -24}}, P - 4);
  auto raw = bracket * delta4_inv;
  std::map<std::int64_t, typename Dom::Series> f0{{0, theta}};
  auto canon = reduce_to_canonical(dom, Family::zagier_f, 3, std::move(raw), f0);
  check_support(dom, Family::zagier_f, canon);
  return canon.truncated(prec);
}

// g_1 = q^{-1} - 2 + 248 q^3 - ... = theta1 * Psi.
template <class Dom>
typename Dom::Series zagier_g1_series(const Dom& dom, std::int64_t prec) {
  const std::int64_t P = prec + 8;
  auto raw = theta1_series(dom, P) * psi_series(dom, P);
  std::map<std::int64_t, typename Dom::Series> none;
  auto canon =
      reduce_to_canonical(dom, Family::zagier_g, 1, std::move(raw), none);
  check_support(dom, Family::zagier_g, canon);
  return canon.truncated(prec);
}

// g_4 = q^{-4} - 2 - 26752 q^3 - ... = (-alternated f_3) * Psi.
template <class Dom>
typename Dom::Series zagier_g4_series(const Dom& dom, std::int64_t prec) {
  const std::int64_t P = prec + 12;
  auto f3 = zagier_f3_series(dom, P);
  auto raw = (-f3.alternated()) * psi_series(dom, P);
  std::map<std::int64_t, typename Dom::Series> g1{
      {1, zagier_g1_series(dom, P)}};
  auto canon =
      reduce_to_canonical(dom, Family::zagier_g, 4, std::move(raw), g1);
  check_support(dom, Family::zagier_g, canon);
  return canon.truncated(prec);
}

// The weight-3/2 bracket quotient [g_1, E_10(4t)] / Delta(4t): a plus-space
// form with leading term 10 q^{-5}, equal to 10 g_5 - 11424 g_1.  Exposed
// (unreduced beyond its natural shape) as an independent cross-check on the
// ladder's pole-5 form.
template <class Dom>
typename Dom::Series zagier_bracket_quotient(const Dom& dom,
                                             std::int64_t prec) {
  const std::int64_t P = prec + 16;
  auto g1 = zagier_g1_series(dom, P);
  auto e10 = dilated4(
      dom,
      [](const Dom& d, std::int64_t p) { return eisenstein_series(d, 10, p); },
      P);
  auto bracket = rc_bracket(dom, g1, mpq_class(3, 2), e10, mpq_class(10));
  auto delta4_inv = eta_power_product(dom, {{4, -24}}, P - 8);
  return (bracket * delta4_inv).truncated(prec);
}

// ---------------------------------------------------------------------------
// grid construction
// ---------------------------------------------------------------------------

template <class Dom>
struct ZagierGrids {
  GridBasis<Dom> f;
  GridBasis<Dom> g;

  explicit ZagierGrids(const Dom& dom)
      : f(dom, Family::zagier_f), g(dom, Family::zagier_g) {}
};

// Build both grids: f up to max(max_f, 4), g up to max(max_g, 4), every form
// with precision >= prec.  The seed and ladder precisions carry enough margin
// that each stored form keeps at least `prec` coefficients.
template <class Dom>
ZagierGrids<Dom> build_zagier(const Dom& dom, std::int64_t max_f,
                              std::int64_t max_g, std::int64_t prec) {
  if (prec < 1) throw UsageError("build_zagier: prec must be >= 1");
  const std::int64_t top = std::max(
      {max_f, max_g, static_cast<std::int64_t>(4)});
  const std::int64_t Ps = prec + top + 16;  // seed precision
  const std::int64_t Pj = Ps + top + 16;    // ladder precision

  ZagierGrids<Dom> grids(dom);

  // f side
  auto theta = theta_series(dom, Ps);
  if (!(theta.at(0) == dom.of_long(1)))
    throw ConstructionFailure("build_zagier: theta seed is malformed");
  grids.f.forms.emplace(0, theta);
  grids.f.forms.emplace(3, zagier_f3_series(dom, Ps));
  auto j4 = j4_series(dom, Pj);
  {
    auto raw = grids.f.form(0) * j4;
    auto f4 = reduce_to_canonical(dom, Family::zagier_f, 4, std::move(raw),
                                  grids.f.forms);
    check_support(dom, Family::zagier_f, f4);
    grids.f.forms.emplace(4, std::move(f4));
  }
  extend_ladder(dom, grids.f, j4, std::max(max_f, static_cast<std::int64_t>(4)));

  // g side
  grids.g.forms.emplace(1, zagier_g1_series(dom, Ps));
  grids.g.forms.emplace(4, zagier_g4_series(dom, Ps));
  extend_ladder(dom, grids.g, j4, std::max(max_g, static_cast<std::int64_t>(4)));

  return grids;
}

// First `count` valid indices of a family, ascending.
std::vector<std::int64_t> first_valid_indices(Family family, std::size_t count);

// ---------------------------------------------------------------------------
// verifications
// ---------------------------------------------------------------------------

// Grid duality: [q^D] f_d = -[q^d] g_D over all valid d <= max_d, D <= max_D
// for which both coefficients are known.
template <class Dom>
MatchReport verify_zagier_duality(const Dom& dom, const ZagierGrids<Dom>& grids,
                                  std::int64_t max_D, std::int64_t max_d) {
  MatchReport rep;
  rep.statement = "duality-zagier";
  rep.params = {{"max_D", std::to_string(max_D)},
                {"max_d", std::to_string(max_d)}};
  rep.window_lo = 0;
  rep.window_hi = max_D + 1;
  rep.pass = true;
  for (std::int64_t d = 0; d <= max_d; ++d) {
    if (!family_valid_index(Family::zagier_f, d) || !grids.f.built(d)) continue;
    for (std::int64_t D = 1; D <= max_D; ++D) {
      if (!family_valid_index(Family::zagier_g, D) || !grids.g.built(D))
        continue;
      if (!grids.f.known(d, D) || !grids.g.known(D, d)) continue;
      auto a = grids.f.coeff(d, D);
      auto b = grids.g.coeff(D, d);
      ++rep.checked;
      if (!dom.is_zero(a) || !dom.is_zero(b)) ++rep.substantive;
      if (!(a == neg_coeff(dom, b))) {
        ++rep.mismatches;
        rep.pass = false;
        if (rep.witnesses.size() < 8)
          rep.witnesses.push_back(
              {D, -1,
               "a(" + std::to_string(D) + "," + std::to_string(d) +
                   ") != -b(" + std::to_string(D) + "," + std::to_string(d) +
                   ")"});
      }
    }
  }
  if (rep.checked == 0) rep.pass = false;
  rep.detail = "a(D,d) = -b(D,d) over the built block";
  return rep;
}

// Hecke-grid duality: [q^D](f_d | T-hat(m^2)) = -[q^d](g_D | T(m^2)) on the
// grid of the first `count` valid indices on each side.
template <class Dom>
MatchReport verify_zagier_hecke_duality(const Dom& dom,
                                        const ZagierGrids<Dom>& grids,
                                        std::int64_t m, std::size_t count) {
  MatchReport rep;
  rep.statement = "hecke-grid-duality";
  rep.params = {{"m", std::to_string(m)}, {"count", std::to_string(count)}};
  rep.pass = true;
  auto ds = first_valid_indices(Family::zagier_f, count);
  auto Ds = first_valid_indices(Family::zagier_g, count);
  rep.window_lo = 0;
  rep.window_hi = Ds.back() + 1;
  std::vector<typename Dom::Series> f_img, g_img;
  for (auto d : ds)
    f_img.push_back(hecke_composite(dom, grids.f.form(d), m, 1, true, 4));
  for (auto D : Ds)
    g_img.push_back(hecke_composite(dom, grids.g.form(D), m, 1, false, 4));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < Ds.size(); ++j) {
      auto a = f_img[i].at(Ds[j]);
      auto b = g_img[j].at(ds[i]);
      ++rep.checked;
      if (!dom.is_zero(a) || !dom.is_zero(b)) ++rep.substantive;
      if (!(a == neg_coeff(dom, b))) {
        ++rep.mismatches;
        rep.pass = false;
        if (rep.witnesses.size() < 8)
          rep.witnesses.push_back(
              {Ds[j], -1,
               "a_m(" + std::to_string(Ds[j]) + "," + std::to_string(ds[i]) +
                   ") != -b_m at m=" + std::to_string(m)});
      }
    }
  }
  if (rep.checked == 0) rep.pass = false;
  rep.detail = "grid duality after T(m^2) on both sides";
  return rep;
}

// First-coefficient recursion: [q^1](f_d | T-hat(m^2)) = sum_{n | m} n * a(n^2, d).
template <class Dom>
MatchReport verify_divisor_recursion(const Dom& dom,
                                     const ZagierGrids<Dom>& grids,
                                     std::int64_t m, std::int64_t max_d) {
  MatchReport rep;
  rep.statement = "divisor-recursion";
  rep.params = {{"m", std::to_string(m)}, {"max_d", std::to_string(max_d)}};
  rep.window_lo = 1;
  rep.window_hi = 2;
  rep.pass = true;
  std::vector<std::int64_t> divisors;
  for (std::int64_t n = 1; n <= m; ++n)
    if (m % n == 0) divisors.push_back(n);
  for (std::int64_t d = 0; d <= max_d; ++d) {
    if (!family_valid_index(Family::zagier_f, d) || !grids.f.built(d)) continue;
    auto img = hecke_composite(dom, grids.f.form(d), m, 1, true, 4);
    auto lhs = img.at(1);
    auto rhs = dom.of_long(0);
    for (auto n : divisors) {
      auto c = grids.f.coeff(d, n * n);
      add_coeff_inplace(dom, rhs, mul_coeff_mpz(dom, c, mpz_class(static_cast<long>(n))));
    }
    ++rep.checked;
    if (!dom.is_zero(lhs) || !dom.is_zero(rhs)) ++rep.substantive;
    if (!(lhs == rhs)) {
      ++rep.mismatches;
      rep.pass = false;
      if (rep.witnesses.size() < 8)
        rep.witnesses.push_back(
            {d, -1, "first-coefficient recursion fails at d=" + std::to_string(d)});
    }
  }
  if (rep.checked == 0) rep.pass = false;
  rep.detail = "a_m(1,d) = sum over divisors n of m of n*a(n^2,d)";
  return rep;
}

// Composition identity: T(p^{2m}) T(p^{2n}) = sum_{t=0..min(m,n)} p^t T(p^{2(n+m-2t)})
// applied to `form`, compared coefficient-for-coefficient on the shared window.
template <class Dom>
MatchReport verify_hecke_composition(const Dom& dom,
                                     const typename Dom::Series& form,
                                     long p, int m, int n, long s,
                                     bool normalized) {
  MatchReport rep;
  rep.statement = "eq3";
  rep.params = {{"p", std::to_string(p)},
                {"m", std::to_string(m)},
                {"n", std::to_string(n)}};
  auto chain = hecke_chain(dom, form, p, m + n, s, normalized);
  auto inner = hecke_t_p2n(dom, form, p, n, s, normalized);
  auto lhs = hecke_t_p2n(dom, inner, p, m, s, normalized);
  auto rhs = dom.zero(lhs.prec());
  mpz_class pw = 1;
  for (int t = 0; t <= std::min(m, n); ++t) {
    auto term = chain[static_cast<std::size_t>(m + n - 2 * t)];
    if constexpr (Dom::exact) {
      rhs = rhs + term.scaled(mpq_class(pw));
    } else {
      rhs = rhs + term.scaled_rational(mpq_class(pw));
    }
    pw *= p;
  }
  auto diff = lhs - rhs;
  rep.window_lo = diff.min_exp_bound();
  rep.window_hi = diff.prec();
  rep.pass = true;
  diff.for_each([&](std::int64_t e, const auto& c) {
    if (dom.is_zero(c)) return;
    ++rep.mismatches;
    rep.pass = false;
    if (rep.witnesses.size() < 8)
      rep.witnesses.push_back({e, -1, "composition identity off at this exponent"});
  });
  // count comparisons: union of both supports
  std::size_t nz = 0;
  lhs.for_each([&](std::int64_t, const auto& c) {
    if (!dom.is_zero(c)) ++nz;
  });
  rep.checked = static_cast<std::size_t>(rep.window_hi - rep.window_lo);
  rep.substantive = nz;
  if (rep.substantive == 0) rep.pass = false;
  rep.detail = "T(p^{2m})T(p^{2n}) matches the p^t-weighted chain combination";
  return rep;
}

}  // namespace gridlab

#pragma once
// Construction of the level-144 grids: F_d (weight 1/2) and G_D (weight 3/2),
// supported on 23 + 24Z and 1 + 24Z respectively.
//
// The base form G_23 is solved exactly inside the span of eta-quotient
// candidates times powers of a weight-0 scaling function (etaquot.hpp).  A
// principal part alone does NOT determine a form here: the unary cusp form
// B1 = q - 5q^25 + 7q^49 - ... has no pole, so the solution space is an
// affine line.  The solve therefore pins interior coefficients to values
// derived from F_1 = q^{-1}(f(q^24) - 2) (Ramanujan's third-order mock theta
// f) through half-integral-weight Hecke steps: the columns F_{m^2} are
// reachable from F_1 alone, and duality prescribes [q^{m^2}] G_D = -[q^D] F_{m^2}.
// Held-out pin exponents are re-checked after elimination, so a wrong span or
// scaling function is rejected loudly (ConstructionFailure), never patched.
//
// Higher G_D follow a ladder step G_{D-24} * (Delta(24t)/Delta(48t)) with the
// principal part re-reduced and the B1 ambiguity re-calibrated against
// [q^1] G_D = -[q^D] F_1 at every step.  F_d columns for d > 1 are then read
// off by duality; F_1 itself keeps its independent mock-theta construction.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gridlab/builders.hpp"
#include "gridlab/common.hpp"
#include "gridlab/etaquot.hpp"
#include "gridlab/expansion.hpp"
#include "gridlab/grids.hpp"
#include "gridlab/hecke.hpp"
#include "gridlab/reports.hpp"

namespace gridlab {

// ---------------------------------------------------------------------------
// search specifications for the level-144 plus-type spaces
// ---------------------------------------------------------------------------

inline std::vector<long> fo_scales() { return {24, 48, 72, 144}; }

// Weight-3/2 candidates: leading exponent = 1 mod 24, holomorphic away from
// infinity, scale-balance congruence (sum (N/delta) r_delta = 0 mod 24) and
// the two parity rules that keep the multiplier system in the family.
EtaSearchSpec fo_form_search_spec(long box = 12);

// Weight-0 scaling functions: leading exponent a negative multiple of 24.
// Holomorphy away from infinity is NOT required (the grid forms themselves
// have poles at other cusps); it only promotes a candidate in the ordering.
EtaSearchSpec fo_scaling_search_spec(long box = 24);

inline std::vector<long> fo_pin_ms() {
  return {5, 7, 11, 13, 17, 19, 23, 25, 29, 31, 35};
}
inline std::vector<long> fo_holdout_ms() {
  return {37, 41, 43, 47, 49, 53, 55, 59};
}

// ---------------------------------------------------------------------------
// pin columns: F_{m^2} from F_1 via Hecke steps (exact domain)
// ---------------------------------------------------------------------------

// F_{m^2} for m coprime to 6, derived from the given F_1 by applying T(p^2)
// prime by prime (largest first) and peeling off the lower-index terms of the
// expansion.  The result's precision is f1.prec() / m^2 (ceiling), so size f1
// as (wanted_prec - 1) * m^2 + 1 or larger.
QSeries fo_square_column(const QSeries& f1, std::int64_t m);

// Convenience overload that builds its own F_1.
QSeries fo_square_column(std::int64_t m, std::int64_t prec);

// Pin/holdout targets for the depth-D solve: exponent m^2 -> -[q^D] F_{m^2},
// plus (when calibrate is set) exponent 1 -> -[q^D] F_1.
struct FOPinData {
  std::vector<std::pair<std::int64_t, mpq_class>> pins;
  std::vector<std::pair<std::int64_t, mpq_class>> holdouts;
};

FOPinData fo_pin_data(std::int64_t D, const std::vector<long>& pin_ms,
                      const std::vector<long>& holdout_ms, bool calibrate);

// ---------------------------------------------------------------------------
// the base solve
// ---------------------------------------------------------------------------

struct FOSolveOptions {
  long form_box = 12;      // candidate search box
  long scaling_box = 24;   // scaling-function search box
  bool calibrate = true;   // include the exponent-1 pin
  std::vector<long> pin_ms = fo_pin_ms();
  std::vector<long> holdout_ms = fo_holdout_ms();
};

// Search candidates and scaling functions, then solve for G_D (default D=23).
// Throws ConstructionFailure if no scaling function yields the pinned form.
EtaSpanSolution fo_solve_base(std::int64_t D = 23,
                              const FOSolveOptions& opt = FOSolveOptions{});

// ---------------------------------------------------------------------------
// grid construction
// ---------------------------------------------------------------------------

template <class Dom>
struct FOGrids {
  GridBasis<Dom> G;
  GridBasis<Dom> F;
  EtaSpanSolution base;  // provenance of G at the base index
  std::map<std::int64_t, std::string> provenance_G;
  std::map<std::int64_t, std::string> provenance_F;

  explicit FOGrids(const Dom& dom)
      : G(dom, Family::fo_G), F(dom, Family::fo_F) {}
};

// Ladder step: extend the G basis up to max_index.  `unit` is the depth-24
// scaling unit Delta(24t)/Delta(48t); `b1` the unary cusp form B1; `f1` an
// F_1 with precision beyond max_index for the per-step calibration
// [q^1] G_D = -[q^D] F_1.
template <class Dom>
void fo_extend_ladder(const Dom& dom, GridBasis<Dom>& basis,
                      const typename Dom::Series& unit,
                      const typename Dom::Series& b1,
                      const typename Dom::Series& f1,
                      std::int64_t max_index,
                      std::map<std::int64_t, std::string>* provenance) {
  if (basis.forms.empty())
    throw UsageError("fo ladder: the base form must be present");
  std::int64_t start = basis.forms.rbegin()->first;
  for (std::int64_t D = start + 24; D <= max_index; D += 24) {
    auto raw = basis.form(D - 24) * unit;
    auto canon =
        reduce_to_canonical(dom, Family::fo_G, D, std::move(raw), basis.forms);
    // principal reduction leaves a free multiple of B1; calibrate it away
    auto want = neg_coeff(dom, f1.at(D));
    auto delta = canon.at(1);
    add_coeff_inplace(dom, delta, neg_coeff(dom, want));
    if (!dom.is_zero(delta)) canon = canon - b1.scaled(delta);
    if (!(canon.at(1) == want))
      throw ConstructionFailure("fo ladder: calibration failed to take");
    check_support(dom, Family::fo_G, canon);
    basis.forms.emplace(D, std::move(canon));
    if (provenance) (*provenance)[D] = "constructed:ladder";
  }
}

// The scaling unit Delta(24t)/Delta(48t) = q^{-24} (1 + ...), support 24Z.
template <class Dom>
typename Dom::Series fo_ladder_unit(const Dom& dom, std::int64_t prec) {
  return eta_power_product(dom, {{24, 24}, {48, -24}}, prec);
}

// Build the G grid from a solved base up to maxD (precision of the base form
// = prec_base, later rungs lose 24 per step), plus F columns for the listed
// indices d (duality-derived, precision maxD + 1) and the independent F_1.
template <class Dom>
FOGrids<Dom> build_fo(const Dom& dom, const EtaSpanSolution& base,
                      std::int64_t maxD, std::int64_t prec_base,
                      const std::vector<std::int64_t>& f_cols) {
  if (!family_valid_index(Family::fo_G, base.index))
    throw UsageError("build_fo: base solution index is not a G index");
  if (maxD < base.index) throw UsageError("build_fo: maxD below the base");
  FOGrids<Dom> grids(dom);

  auto g_base = eta_combo_series(dom, base, prec_base);
  if (!(g_base.at(-base.index) == dom.of_long(1)))
    throw ConstructionFailure("build_fo: base combination lost its pole");
  check_support(dom, Family::fo_G, g_base);
  grids.G.forms.emplace(base.index, std::move(g_base));
  grids.provenance_G[base.index] = "constructed:eta-combination";
  grids.base = base;

  auto f1 = fo_f1_series(dom, maxD + 2);
  if (maxD > base.index) {
    auto unit = fo_ladder_unit(dom, prec_base + 8);
    auto b1 = cusp_b1_series(dom, prec_base);
    fo_extend_ladder(dom, grids.G, unit, b1, f1, maxD, &grids.provenance_G);
  }

  // F side: the independent mock-theta construction for d = 1 ...
  grids.F.forms.emplace(1, f1);
  grids.provenance_F[1] = "constructed:mock-theta";

  // ... and duality-derived columns for the requested d > 1.
  const std::int64_t col_prec = maxD + 1;
  for (std::int64_t d : f_cols) {
    if (d == 1) continue;
    if (!family_valid_index(Family::fo_F, d))
      throw UsageError("build_fo: invalid F column index");
    std::vector<std::pair<std::int64_t, typename Dom::Coeff>> terms;
    terms.emplace_back(-d, dom.of_long(-1));
    for (const auto& [D, gD] : grids.G.forms) {
      if (!gD.known(d))
        throw ConstructionFailure(
            "build_fo: a G form is too short to derive the requested column");
      terms.emplace_back(D, neg_coeff(dom, gD.at(d)));
    }
    typename Dom::Series col = dom.zero(col_prec);
    if constexpr (Dom::exact) {
      std::vector<std::pair<std::int64_t, mpq_class>> t(terms.begin(),
                                                        terms.end());
      col = Dom::Series::from_terms(std::move(t), col_prec);
    } else {
      std::vector<std::pair<std::int64_t, std::int64_t>> t;
      t.reserve(terms.size());
      for (const auto& [e, c] : terms)
        t.emplace_back(e, static_cast<std::int64_t>(c));
      col = Dom::Series::from_terms(dom.mod, t, col_prec);
    }
    check_support(dom, Family::fo_F, col);
    grids.F.forms.emplace(d, std::move(col));
    grids.provenance_F[d] = "duality-derived";
  }
  return grids;
}

// ---------------------------------------------------------------------------
// verifications
// ---------------------------------------------------------------------------

// Grid duality over the built block: [q^D] F_d = -[q^d] G_D.  Derived columns
// satisfy this by construction; the report's value is catching assembly
// errors and covering the independently built F_1 column.
template <class Dom>
MatchReport verify_fo_duality(const Dom& dom, const FOGrids<Dom>& grids,
                              std::int64_t max_D, std::int64_t max_d) {
  MatchReport rep;
  rep.statement = "duality-fo";
  rep.params = {{"max_D", std::to_string(max_D)},
                {"max_d", std::to_string(max_d)}};
  rep.window_lo = 0;
  rep.window_hi = max_D + 1;
  rep.pass = true;
  for (const auto& [d, Fd] : grids.F.forms) {
    if (d > max_d) continue;
    for (const auto& [D, GD] : grids.G.forms) {
      if (D > max_D) continue;
      if (!Fd.known(D) || !GD.known(d)) continue;
      auto a = Fd.at(D);
      auto b = GD.at(d);
      ++rep.checked;
      if (!dom.is_zero(a) || !dom.is_zero(b)) ++rep.substantive;
      if (!(a == neg_coeff(dom, b))) {
        ++rep.mismatches;
        rep.pass = false;
        if (rep.witnesses.size() < 8)
          rep.witnesses.push_back(
              {D, -1,
               "A(" + std::to_string(D) + "," + std::to_string(d) +
                   ") != -B(" + std::to_string(D) + "," + std::to_string(d) +
                   ")"});
      }
    }
  }
  if (rep.checked == 0) rep.pass = false;
  rep.detail = "A(D,d) = -B(D,d) over the built block (F_1 independent; "
               "other F columns duality-derived)";
  return rep;
}

// Genuinely independent duality cells: F_{m^2} built from F_1 by Hecke steps
// (never touching the G side) against the G grid's column m^2.
template <class Dom>
MatchReport verify_fo_independent_cells(const Dom& dom,
                                        const FOGrids<Dom>& grids,
                                        const std::vector<long>& ms,
                                        const std::vector<std::int64_t>& Ds) {
  static_assert(Dom::exact, "independent pin columns are exact-domain only");
  MatchReport rep;
  rep.statement = "duality-fo-independent";
  rep.pass = true;
  std::int64_t maxD = *std::max_element(Ds.begin(), Ds.end());
  for (long m : ms) {
    auto col = fo_square_column(m, maxD + 1);
    for (std::int64_t D : Ds) {
      if (!grids.G.built(D)) continue;
      auto a = col.at(D);
      auto b = grids.G.coeff(D, static_cast<std::int64_t>(m) * m);
      ++rep.checked;
      if (!dom.is_zero(a) || !dom.is_zero(b)) ++rep.substantive;
      if (!(a == neg_coeff(dom, b))) {
        ++rep.mismatches;
        rep.pass = false;
        if (rep.witnesses.size() < 8)
          rep.witnesses.push_back(
              {D, -1, "independent column m=" + std::to_string(m)});
      }
    }
  }
  if (rep.checked == 0) rep.pass = false;
  rep.detail = "Hecke-derived F_{m^2} columns against the G grid";
  return rep;
}

// Hecke-grid duality at a prime p coprime to 144:
//   [q^D](F_d | T-hat(p^2)) = -[q^d](G_D | T(p^2)).
template <class Dom>
MatchReport verify_fo_hecke_duality(const Dom& dom, const FOGrids<Dom>& grids,
                                    long p, std::int64_t max_D,
                                    std::int64_t max_d) {
  MatchReport rep;
  rep.statement = "fo-hecke-grid-duality";
  rep.params = {{"p", std::to_string(p)},
                {"max_D", std::to_string(max_D)},
                {"max_d", std::to_string(max_d)}};
  rep.window_lo = 0;
  rep.window_hi = max_D + 1;
  rep.pass = true;
  std::vector<std::pair<std::int64_t, typename Dom::Series>> f_img, g_img;
  for (const auto& [d, Fd] : grids.F.forms)
    if (d <= max_d)
      f_img.emplace_back(d, hecke_t_p2(dom, Fd, p, 12, /*normalized=*/true));
  for (const auto& [D, GD] : grids.G.forms)
    if (D <= max_D)
      g_img.emplace_back(D, hecke_t_p2(dom, GD, p, 12, /*normalized=*/false));
  for (const auto& [d, fi] : f_img) {
    for (const auto& [D, gi] : g_img) {
      if (!fi.known(D) || !gi.known(d)) continue;
      auto a = fi.at(D);
      auto b = gi.at(d);
      ++rep.checked;
      if (!dom.is_zero(a) || !dom.is_zero(b)) ++rep.substantive;
      if (!(a == neg_coeff(dom, b))) {
        ++rep.mismatches;
        rep.pass = false;
        if (rep.witnesses.size() < 8)
          rep.witnesses.push_back(
              {D, -1,
               "A_p(" + std::to_string(D) + "," + std::to_string(d) + ")"});
      }
    }
  }
  if (rep.checked == 0) rep.pass = false;
  rep.detail = "grid duality after one T(p^2) on both sides";
  return rep;
}

}  // namespace gridlab

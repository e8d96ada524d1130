#pragma once
// Eta-quotient machinery: cusp data for Gamma_0(N), exact cusp orders of
// eta power products, a configurable candidate search, and an exact linear
// solver that produces a series with a prescribed principal part as a
// rational combination of (candidate x scaling-function^s) products.
//
// The solver works in "slot" coordinates: every series involved is supported
// on the progression {step*k + residue : k in Z}, so a series is a vector
// indexed by k.  Constraints fix coefficients at chosen exponents (the
// principal slots, a calibration exponent, and a set of pinned exponents);
// a solved combination is then validated against held-out targets that the
// elimination never saw.  Failure at every scaling function raises
// ConstructionFailure naming the index — never a silent fallback.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "gridlab/builders.hpp"
#include "gridlab/common.hpp"
#include "gridlab/qseries.hpp"

namespace gridlab {

// ---------------------------------------------------------------------------
// cusp classes of Gamma_0(N)
// ---------------------------------------------------------------------------

struct CuspClass {
  long c = 1;      // cusp denominator, c | N
  long width = 1;  // N / (c * gcd(c, N/c))
  long count = 1;  // number of classes with this denominator: phi(gcd(c, N/c))
};

long euler_phi(long n);

// Index of Gamma_0(N) in the full modular group.
long gamma0_index(long N);

// One entry per divisor c of N, ascending.  Sum of counts is the cusp number.
std::vector<CuspClass> cusp_classes(long N);

// Order of vanishing of prod_i eta(scales[i] * tau)^{exps[i]} at the cusp
// class with denominator c, in the local variable of that cusp:
//   (N / (24 * c * gcd(c, N/c))) * sum_i gcd(c, scales[i])^2 * exps[i] / scales[i]
// Normalized so that the total over classes (weighted by count) equals
// (sum exps) * [index of Gamma_0(N)] / 24.
mpq_class eta_cusp_order(long N, const std::vector<long>& scales,
                         const std::vector<long>& exps, long c);

// Leading q-exponent sum(scale * exp) / 24; throws ConstructionFailure when
// the sum is not divisible by 24 (no integral q-expansion).
std::int64_t eta_lead_exponent(const std::vector<long>& scales,
                               const std::vector<long>& exps);

// True when the order is >= 0 at every cusp class except c = N (infinity).
bool eta_holomorphic_away(long N, const std::vector<long>& scales,
                          const std::vector<long>& exps);

// Self-check of the order normalization: the count-weighted total of the
// local orders must equal (sum exps) * index / 24 exactly.
void eta_valence_check(long N, const std::vector<long>& scales,
                       const std::vector<long>& exps);

// ---------------------------------------------------------------------------
// candidate search
// ---------------------------------------------------------------------------

// Linear congruence on the exponent vector: sum_i mult[i]*r[i] = residue (mod m).
struct CongruenceRule {
  std::vector<long> mult;
  long mod = 1;
  long residue = 0;
};

struct EtaSearchSpec {
  long level = 1;
  std::vector<long> scales;
  long weight_twice = 0;  // required sum of exponents (twice the weight)
  long lead_mod = 1;      // leading exponent residue class ...
  long lead_res = 0;      // ... lead = lead_res (mod lead_mod)
  int lead_sign = 0;      // -1: lead < 0 required; +1: lead > 0; 0: any
  bool require_holomorphic_away = false;
  long box = 12;          // |r_i| <= box
  std::vector<CongruenceRule> rules;
};

struct EtaCandidate {
  std::vector<long> exps;
  std::int64_t lead = 0;   // leading q-exponent
  bool hol_away = false;   // holomorphic at every cusp class except infinity
  long abs_sum = 0;        // sum |exps|
};

// All exponent vectors in the box satisfying the spec, ordered by
// (holomorphic-away first, then sum |r|, then lexicographic).  The last
// exponent is determined by the weight constraint, so the scan is over
// box^(n-1) tuples.
std::vector<EtaCandidate> search_eta_candidates(const EtaSearchSpec& spec);

// ---------------------------------------------------------------------------
// principal-part solver
// ---------------------------------------------------------------------------

struct EtaComboTerm {
  std::vector<long> exps;  // candidate exponent vector
  long power = 0;          // scaling-function power s
  mpq_class coef;          // rational multiplier
};

struct EtaSpanSolution {
  long level = 0;
  std::vector<long> scales;
  std::vector<long> phi;       // scaling-function exponent vector
  std::int64_t phi_lead = 0;   // its leading q-exponent (negative)
  std::int64_t index = 0;      // pole depth D of the solved form
  std::int64_t step = 24;      // support progression step ...
  std::int64_t residue = 1;    // ... and residue: exponents in residue + step*Z
  std::vector<EtaComboTerm> terms;  // nonzero support of the solution
  std::size_t phis_tried = 0;  // how many scaling functions were attempted
  std::string note;            // human-readable diagnostics
};

// Solve for a series q^{-D} + (zero at all other constrained exponents /
// prescribed values at pinned exponents) inside span{candidate * phi^s}.
//
//  * step/residue: the support progression of all candidates (their leading
//    exponents must be = residue mod step; phi leads must be = 0 mod step).
//  * pinned: (exponent, required value) pairs entering the linear system.
//  * holdouts: (exponent, expected value) pairs checked only AFTER solving;
//    a mismatch rejects the scaling function.
//
// Principal exponents down to step*(M+3) below zero (M = pole depth in
// slots) are constrained to the delta at -D, and only columns with no
// support below that floor are admitted, so the solved series has exactly
// the requested principal part.  Scaling functions are tried in the given
// order; if all fail, ConstructionFailure (naming D) is thrown.
EtaSpanSolution solve_principal_part(
    long level, const std::vector<long>& scales, std::int64_t step,
    std::int64_t residue, const std::vector<EtaCandidate>& candidates,
    const std::vector<EtaCandidate>& phis, std::int64_t D,
    const std::vector<std::pair<std::int64_t, mpq_class>>& pinned,
    const std::vector<std::pair<std::int64_t, mpq_class>>& holdouts);

// ---------------------------------------------------------------------------
// evaluation (domain-generic)
// ---------------------------------------------------------------------------

template <class Dom>
typename Dom::Series eta_quotient_series(const Dom& dom,
                                         const std::vector<long>& scales,
                                         const std::vector<long>& exps,
                                         std::int64_t prec) {
  std::map<std::int64_t, int> expo;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (exps[i] != 0) expo[scales[i]] += static_cast<int>(exps[i]);
  }
  return eta_power_product(dom, expo, prec);
}

// Evaluate a solved combination at the requested precision.  Each term is a
// single eta power product (candidate and phi^s exponents merged), scaled by
// its exact rational coefficient.  In a mod-p^k domain a coefficient with p
// in its denominator raises ConstructionFailure (scale_by -> scaled_rational).
template <class Dom>
typename Dom::Series eta_combo_series(const Dom& dom,
                                      const EtaSpanSolution& sol,
                                      std::int64_t prec) {
  auto acc = dom.zero(prec);
  for (const auto& term : sol.terms) {
    std::map<std::int64_t, int> expo;
    for (std::size_t i = 0; i < sol.scales.size(); ++i) {
      long e = term.exps[i] + term.power * sol.phi[i];
      if (e != 0) expo[sol.scales[i]] += static_cast<int>(e);
    }
    auto part = eta_power_product(dom, expo, prec);
    acc = acc + scale_by(dom, part, term.coef);
  }
  return acc;
}

}  // namespace gridlab

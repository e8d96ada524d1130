#include "gridlab/etaquot.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "gridlab/numbers.hpp"

namespace gridlab {

long euler_phi(long n) {
  if (n <= 0) throw UsageError("euler_phi: argument must be positive");
  long result = n;
  for (const auto& [p, e] : factorize(n)) {
    (void)e;
    result -= result / p;
  }
  return result;
}

long gamma0_index(long N) {
  if (N <= 0) throw UsageError("gamma0_index: level must be positive");
  long idx = N;
  mpq_class check(idx);
  for (const auto& [p, e] : factorize(N)) {
    (void)e;
    idx += idx / p;  // N * prod (1 + 1/p) stays integral processed this way
    check *= mpq_class(p + 1, p);
  }
  if (mpq_class(idx) != check)
    throw ConstructionFailure("gamma0_index: internal arithmetic mismatch");
  return idx;
}

std::vector<CuspClass> cusp_classes(long N) {
  if (N <= 0) throw UsageError("cusp_classes: level must be positive");
  std::vector<CuspClass> out;
  for (long c = 1; c <= N; ++c) {
    if (N % c != 0) continue;
    long g = std::gcd(c, N / c);
    CuspClass cc;
    cc.c = c;
    cc.width = N / (c * g);
    cc.count = euler_phi(g);
    out.push_back(cc);
  }
  return out;
}

mpq_class eta_cusp_order(long N, const std::vector<long>& scales,
                         const std::vector<long>& exps, long c) {
  if (scales.size() != exps.size())
    throw UsageError("eta_cusp_order: scales/exps length mismatch");
  if (c <= 0 || N % c != 0)
    throw UsageError("eta_cusp_order: c must divide the level");
  mpq_class sum = 0;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    long delta = scales[i];
    if (delta <= 0 || N % delta != 0)
      throw UsageError("eta_cusp_order: every scale must divide the level");
    long g = std::gcd(c, delta);
    sum += mpq_class(static_cast<long>(g) * g * exps[i], delta);
  }
  long gc = std::gcd(c, N / c);
  mpq_class pre(N, 24L * c * gc);
  mpq_class ord = pre * sum;
  ord.canonicalize();
  return ord;
}

std::int64_t eta_lead_exponent(const std::vector<long>& scales,
                               const std::vector<long>& exps) {
  if (scales.size() != exps.size())
    throw UsageError("eta_lead_exponent: scales/exps length mismatch");
  std::int64_t total = 0;
  for (std::size_t i = 0; i < scales.size(); ++i)
    total += static_cast<std::int64_t>(scales[i]) * exps[i];
  if (mod_nonneg(total, 24) != 0)
    throw ConstructionFailure(
        "eta quotient has no integral q-expansion (scale-weighted exponent "
        "sum not divisible by 24)");
  return total / 24;
}

bool eta_holomorphic_away(long N, const std::vector<long>& scales,
                          const std::vector<long>& exps) {
  for (const auto& cc : cusp_classes(N)) {
    if (cc.c == N) continue;  // the class of infinity
    if (eta_cusp_order(N, scales, exps, cc.c) < 0) return false;
  }
  return true;
}

void eta_valence_check(long N, const std::vector<long>& scales,
                       const std::vector<long>& exps) {
  mpq_class total = 0;
  for (const auto& cc : cusp_classes(N))
    total += mpq_class(cc.count) * eta_cusp_order(N, scales, exps, cc.c);
  long wt = std::accumulate(exps.begin(), exps.end(), 0L);
  mpq_class expected(static_cast<long>(wt) * gamma0_index(N), 24);
  expected.canonicalize();
  if (total != expected) {
    std::ostringstream os;
    os << "eta_valence_check failed: cusp orders total " << total
       << " but weight balance requires " << expected;
    throw ConstructionFailure(os.str());
  }
}

namespace {

bool rules_pass(const EtaSearchSpec& spec, const std::vector<long>& r) {
  for (const auto& rule : spec.rules) {
    if (rule.mult.size() != r.size())
      throw UsageError("search_eta_candidates: rule length mismatch");
    long acc = 0;
    for (std::size_t i = 0; i < r.size(); ++i) acc += rule.mult[i] * r[i];
    if (mod_nonneg(acc - rule.residue, rule.mod) != 0) return false;
  }
  return true;
}

void consider(const EtaSearchSpec& spec, const std::vector<long>& r,
              std::vector<EtaCandidate>& out) {
  if (!rules_pass(spec, r)) return;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    total += static_cast<std::int64_t>(spec.scales[i]) * r[i];
  if (mod_nonneg(total, 24) != 0) return;  // no integral q-expansion
  std::int64_t lead = total / 24;
  if (mod_nonneg(lead - spec.lead_res, spec.lead_mod) != 0) return;
  if (spec.lead_sign < 0 && lead >= 0) return;
  if (spec.lead_sign > 0 && lead <= 0) return;
  EtaCandidate cand;
  cand.exps = r;
  cand.lead = lead;
  cand.hol_away = eta_holomorphic_away(spec.level, spec.scales, r);
  if (spec.require_holomorphic_away && !cand.hol_away) return;
  cand.abs_sum = 0;
  for (long x : r) cand.abs_sum += std::abs(x);
  eta_valence_check(spec.level, spec.scales, r);  // self-check per keeper
  out.push_back(std::move(cand));
}

void scan(const EtaSearchSpec& spec, std::vector<long>& r, std::size_t pos,
          long partial_sum, std::vector<EtaCandidate>& out) {
  if (pos + 1 == r.size()) {
    // Last exponent is forced by the weight constraint.
    long last = spec.weight_twice - partial_sum;
    if (std::abs(last) > spec.box) return;
    r[pos] = last;
    consider(spec, r, out);
    return;
  }
  for (long v = -spec.box; v <= spec.box; ++v) {
    r[pos] = v;
    scan(spec, r, pos + 1, partial_sum + v, out);
  }
}

}  // namespace

std::vector<EtaCandidate> search_eta_candidates(const EtaSearchSpec& spec) {
  if (spec.scales.empty())
    throw UsageError("search_eta_candidates: no scales given");
  if (spec.box < 0) throw UsageError("search_eta_candidates: negative box");
  std::vector<EtaCandidate> out;
  std::vector<long> r(spec.scales.size(), 0);
  scan(spec, r, 0, 0, out);
  std::stable_sort(out.begin(), out.end(),
                   [](const EtaCandidate& a, const EtaCandidate& b) {
                     if (a.hol_away != b.hol_away) return a.hol_away;
                     if (a.abs_sum != b.abs_sum) return a.abs_sum < b.abs_sum;
                     return a.exps < b.exps;
                   });
  return out;
}

namespace {

struct Column {
  std::size_t cand = 0;  // index into the candidate list
  long power = 0;        // phi power s
  QSeries series;        // exact expansion to the working precision
};

// Try one scaling function; returns true and fills `sol` on success, returns
// false (appending a reason to `diag`) otherwise.
bool try_phi(long level, const std::vector<long>& scales, std::int64_t step,
             std::int64_t residue, const std::vector<EtaCandidate>& candidates,
             const EtaCandidate& phi, std::int64_t D,
             const std::vector<std::pair<std::int64_t, mpq_class>>& pinned,
             const std::vector<std::pair<std::int64_t, mpq_class>>& holdouts,
             EtaSpanSolution& sol, std::string& diag) {
  QDomain dom;
  if (phi.lead >= 0 || mod_nonneg(phi.lead, step) != 0) {
    diag += " [phi lead not a negative multiple of the step]";
    return false;
  }
  const std::int64_t drop = -phi.lead / step;  // slots lost per phi power
  // D must sit on the progression: -D = step*(-M) + residue.
  const std::int64_t M = (D + residue) / step;
  if (step * (-M) + residue != -D) {
    diag += " [index off the support progression]";
    return false;
  }
  const std::int64_t floor_slot = -(M + 3);

  // Constrained exponents: the principal slots, then the pins (given order).
  std::vector<std::pair<std::int64_t, mpq_class>> rows;
  for (std::int64_t slot = floor_slot; slot <= -1; ++slot)
    rows.emplace_back(step * slot + residue,
                      slot == -M ? mpq_class(1) : mpq_class(0));
  for (const auto& pr : pinned) rows.emplace_back(pr.first, pr.second);

  std::int64_t qprec = 2;
  for (const auto& r : rows) qprec = std::max(qprec, r.first + 1);
  for (const auto& h : holdouts) qprec = std::max(qprec, h.first + 1);

  // Admit columns candidate * phi^s whose leading slot stays at or above the
  // constrained floor; outer order follows the candidate list, inner order
  // is s ascending.
  std::vector<Column> cols;
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const auto& cand = candidates[ci];
    if (mod_nonneg(cand.lead - residue, step) != 0) {
      diag += " [candidate lead off the progression]";
      return false;
    }
    std::int64_t lead_slot = (cand.lead - residue) / step;
    for (long s = 0; lead_slot - s * drop >= floor_slot; ++s) {
      Column col;
      col.cand = ci;
      col.power = s;
      std::map<std::int64_t, int> expo;
      for (std::size_t i = 0; i < scales.size(); ++i) {
        long e = cand.exps[i] + s * static_cast<long>(phi.exps[i]);
        if (e != 0) expo[scales[i]] += static_cast<int>(e);
      }
      col.series = eta_power_product(dom, expo, qprec);
      cols.push_back(std::move(col));
    }
  }
  if (cols.empty()) {
    diag += " [no admissible columns]";
    return false;
  }

  // Exact Gauss-Jordan elimination on rows x cols, augmented with targets.
  const std::size_t nr = rows.size(), nc = cols.size();
  std::vector<std::vector<mpq_class>> A(nr, std::vector<mpq_class>(nc + 1));
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      const auto e = rows[i].first;
      A[i][j] = cols[j].series.known(e) ? cols[j].series.at(e) : mpq_class(0);
    }
    A[i][nc] = rows[i].second;
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < nc && row < nr; ++col) {
    std::size_t sel = row;
    while (sel < nr && A[sel][col] == 0) ++sel;
    if (sel == nr) continue;
    std::swap(A[sel], A[row]);
    mpq_class inv = 1 / A[row][col];
    for (std::size_t j = col; j <= nc; ++j) A[row][j] *= inv;
    for (std::size_t i = 0; i < nr; ++i) {
      if (i == row || A[i][col] == 0) continue;
      mpq_class f = A[i][col];
      for (std::size_t j = col; j <= nc; ++j) A[i][j] -= f * A[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < nr; ++i) {
    if (A[i][nc] != 0) {
      diag += " [inconsistent system]";
      return false;
    }
  }

  // Particular solution: free variables zero.
  std::vector<mpq_class> x(nc, mpq_class(0));
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = A[r][nc];

  // Re-expand and validate: exact principal part q^{-D}, every constrained
  // row, and every holdout the elimination never saw.
  QSeries assembled = QSeries::zero(qprec);
  for (std::size_t j = 0; j < nc; ++j) {
    if (x[j] == 0) continue;
    assembled += cols[j].series.scaled(x[j]);
  }
  auto pp = assembled.principal_part();
  if (pp.size() != 1 || pp[0].first != -D || pp[0].second != 1) {
    diag += " [principal part not exactly q^{-index}]";
    return false;
  }
  for (const auto& r : rows) {
    if (assembled.at(r.first) != r.second) {
      diag += " [constrained value drifted]";
      return false;
    }
  }
  for (const auto& h : holdouts) {
    if (assembled.at(h.first) != h.second) {
      std::ostringstream os;
      os << " [holdout mismatch at exponent " << h.first << "]";
      diag += os.str();
      return false;
    }
  }

  sol.level = level;
  sol.scales = scales;
  sol.phi = phi.exps;
  sol.phi_lead = phi.lead;
  sol.index = D;
  sol.step = step;
  sol.residue = residue;
  sol.terms.clear();
  for (std::size_t j = 0; j < nc; ++j) {
    if (x[j] == 0) continue;
    EtaComboTerm term;
    term.exps = candidates[cols[j].cand].exps;
    term.power = cols[j].power;
    term.coef = x[j];
    sol.terms.push_back(std::move(term));
  }
  return true;
}

}  // namespace

EtaSpanSolution solve_principal_part(
    long level, const std::vector<long>& scales, std::int64_t step,
    std::int64_t residue, const std::vector<EtaCandidate>& candidates,
    const std::vector<EtaCandidate>& phis, std::int64_t D,
    const std::vector<std::pair<std::int64_t, mpq_class>>& pinned,
    const std::vector<std::pair<std::int64_t, mpq_class>>& holdouts) {
  if (candidates.empty())
    throw ConstructionFailure("principal-part solve: empty candidate list");
  if (phis.empty())
    throw ConstructionFailure("principal-part solve: no scaling functions");
  std::string diag;
  EtaSpanSolution sol;
  std::size_t tried = 0;
  for (const auto& phi : phis) {
    ++tried;
    std::ostringstream tag;
    tag << " phi#" << tried << "(";
    for (std::size_t i = 0; i < phi.exps.size(); ++i)
      tag << (i ? "," : "") << phi.exps[i];
    tag << ")";
    diag += tag.str();
    if (try_phi(level, scales, step, residue, candidates, phi, D, pinned,
                holdouts, sol, diag)) {
      sol.phis_tried = tried;
      std::ostringstream note;
      note << "solved with scaling function #" << tried << " of "
           << phis.size() << "; " << sol.terms.size() << " nonzero terms";
      sol.note = note.str();
      return sol;
    }
  }
  std::ostringstream os;
  os << "principal-part solve failed for index " << D << " after trying "
     << phis.size() << " scaling functions:" << diag;
  throw ConstructionFailure(os.str());
}

}  // namespace gridlab

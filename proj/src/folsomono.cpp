#include "gridlab/folsomono.hpp"

#include <numeric>

#include "gridlab/numbers.hpp"

namespace gridlab {

namespace {

std::vector<CongruenceRule> fo_shared_rules() {
  // scale-balance congruence: sum (144/delta) r_delta = 0 (mod 24),
  // plus two parity rules tying the 48/72 exponents to the 144 one, which
  // keep the multiplier system inside the family's character.
  std::vector<long> scales = fo_scales();
  CongruenceRule balance;
  for (long delta : scales) balance.mult.push_back(144 / delta);
  balance.mod = 24;
  balance.residue = 0;
  CongruenceRule parity48{{0, 1, 0, 1}, 2, 0};
  CongruenceRule parity72{{0, 0, 1, 1}, 2, 0};
  return {balance, parity48, parity72};
}

}  // namespace

EtaSearchSpec fo_form_search_spec(long box) {
  EtaSearchSpec spec;
  spec.level = 144;
  spec.scales = fo_scales();
  spec.weight_twice = 3;
  spec.lead_mod = 24;
  spec.lead_res = 1;
  spec.lead_sign = 0;
  spec.require_holomorphic_away = true;
  spec.box = box;
  spec.rules = fo_shared_rules();
  return spec;
}

EtaSearchSpec fo_scaling_search_spec(long box) {
  EtaSearchSpec spec;
  spec.level = 144;
  spec.scales = fo_scales();
  spec.weight_twice = 0;
  spec.lead_mod = 24;
  spec.lead_res = 0;
  spec.lead_sign = -1;
  spec.require_holomorphic_away = false;
  spec.box = box;
  spec.rules = fo_shared_rules();
  return spec;
}

QSeries fo_square_column(const QSeries& f1, std::int64_t m) {
  if (m <= 0 || std::gcd(m, static_cast<std::int64_t>(6)) != 1)
    throw UsageError("square column: m must be positive and coprime to 6");
  QDomain dom;
  std::vector<long> primes;
  for (const auto& [p, e] : factorize(static_cast<long>(m)))
    for (int t = 0; t < e; ++t) primes.push_back(p);
  std::sort(primes.begin(), primes.end(), std::greater<long>());

  std::map<std::int64_t, QSeries> built;  // c -> F_{c^2}
  built.emplace(1, f1);
  std::int64_t cur = 1;
  for (long p : primes) {
    const QSeries& fc = built.at(cur);
    auto img = hecke_t_p2(dom, fc, p, 12, /*normalized=*/true);
    QSeries next = std::move(img);
    if (cur % p == 0) {
      if (cur % (static_cast<std::int64_t>(p) * p) == 0)
        throw UsageError("square column: index shape not supported");
      // T(p^2) on F_{cur^2} (with p^2 | cur^2 exactly once):
      //   image = p F_{(cur/p)^2} + F_{(p cur)^2}
      next = next - built.at(cur / p).scaled_long(p);
    } else {
      // image = ((-12 cur^2)/p) F_{cur^2} + F_{(p cur)^2}
      int k = kronecker(-12 * cur * cur, p);
      if (k == 1)
        next = next - fc;
      else if (k == -1)
        next = next + fc;
    }
    cur *= p;
    built.emplace(cur, std::move(next));
  }
  return built.at(cur);
}

QSeries fo_square_column(std::int64_t m, std::int64_t prec) {
  QDomain dom;
  std::int64_t f1_prec = sat_add(sat_mul(prec - 1, m * m), 64);
  auto f1 = fo_f1_series(dom, f1_prec);
  return fo_square_column(f1, m);
}

FOPinData fo_pin_data(std::int64_t D, const std::vector<long>& pin_ms,
                      const std::vector<long>& holdout_ms, bool calibrate) {
  QDomain dom;
  long max_m = 1;
  for (long m : pin_ms) max_m = std::max(max_m, m);
  for (long m : holdout_ms) max_m = std::max(max_m, m);
  std::int64_t f1_prec =
      sat_add(sat_mul(D, static_cast<std::int64_t>(max_m) * max_m), 128);
  auto f1 = fo_f1_series(dom, f1_prec);

  FOPinData data;
  if (calibrate) data.pins.emplace_back(1, mpq_class(-f1.at(D)));
  auto add = [&](std::vector<std::pair<std::int64_t, mpq_class>>& dst,
                 long m) {
    auto col = fo_square_column(f1, m);
    dst.emplace_back(static_cast<std::int64_t>(m) * m,
                     mpq_class(-col.at(D)));
  };
  for (long m : pin_ms) add(data.pins, m);
  for (long m : holdout_ms) add(data.holdouts, m);
  return data;
}

EtaSpanSolution fo_solve_base(std::int64_t D, const FOSolveOptions& opt) {
  if (!family_valid_index(Family::fo_G, D))
    throw UsageError("fo_solve_base: D must be a valid G index");
  auto candidates = search_eta_candidates(fo_form_search_spec(opt.form_box));
  if (candidates.empty())
    throw ConstructionFailure(
        "fo_solve_base: the candidate search came back empty");
  auto phis = search_eta_candidates(fo_scaling_search_spec(opt.scaling_box));
  if (phis.empty())
    throw ConstructionFailure(
        "fo_solve_base: no scaling functions found in the box");
  auto pins = fo_pin_data(D, opt.pin_ms, opt.holdout_ms, opt.calibrate);
  return solve_principal_part(144, fo_scales(), 24, 1, candidates, phis, D,
                              pins.pins, pins.holdouts);
}

}  // namespace gridlab

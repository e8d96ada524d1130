#include "gridlab/padic.hpp"

#include <utility>
#include <vector>

#include "gridlab/zagier.hpp"
#include "gridlab/zpseries.hpp"

namespace gridlab {

namespace {

// Reference residues mod 3^9 for the two printed images of the pole-4
// weight-3/2 form, complete through q^19 (absent exponents are zero).
const std::vector<std::pair<std::int64_t, std::int64_t>>& image2_reference() {
  static const std::vector<std::pair<std::int64_t, std::int64_t>> v = {
      {-36, 3},    {-4, 1},    {0, 19675}, {3, 19193}, {4, 6555},
      {7, 13110},  {8, 9665},  {11, 4197}, {12, 7517}, {15, 8724},
      {16, 19665}, {19, 13110}};
  return v;
}

const std::vector<std::pair<std::int64_t, std::int64_t>>& image6_reference() {
  static const std::vector<std::pair<std::int64_t, std::int64_t>> v = {
      {-2916, 27}, {-324, 9},  {-36, 3},   {-4, 1},    {0, 19603},
      {3, 19679},  {4, 19677}, {7, 19671}, {8, 9665},  {11, 4197},
      {12, 19667}, {15, 19659}, {16, 19665}, {19, 19671}};
  return v;
}

// Bit-exact comparison of a mod-p^k image against a reference expansion over
// [image window lo, hi): every reference entry must match and every other
// exponent in the window must carry a zero residue.
MatchReport compare_against_reference(
    const ZpDomain& dom, const ZpSeries& image,
    const std::vector<std::pair<std::int64_t, std::int64_t>>& ref,
    std::int64_t hi, std::string statement) {
  MatchReport rep;
  rep.statement = std::move(statement);
  auto window = image.truncated(hi);
  rep.window_lo = window.min_exp_bound();
  rep.window_hi = hi;

  std::map<std::int64_t, std::uint64_t> want;
  for (const auto& [e, c] : ref) {
    if (e >= hi) continue;
    want[e] = dom.of_long(c);
  }
  std::map<std::int64_t, std::uint64_t> got;
  window.for_each([&](std::int64_t e, std::uint64_t c) {
    if (c != 0) got[e] = c;
  });

  rep.pass = true;
  auto note_mismatch = [&](std::int64_t e, const std::string& why) {
    ++rep.mismatches;
    rep.pass = false;
    if (rep.witnesses.size() < 8) rep.witnesses.push_back({e, -1, why});
  };
  for (const auto& [e, c] : want) {
    ++rep.checked;
    ++rep.substantive;
    auto it = got.find(e);
    if (it == got.end()) {
      note_mismatch(e, "reference coefficient missing from the image");
    } else if (it->second != c) {
      note_mismatch(e, "image residue differs from the reference");
    }
  }
  for (const auto& [e, c] : got) {
    (void)c;
    if (want.count(e)) continue;
    ++rep.checked;
    note_mismatch(e, "image has a nonzero residue the reference lacks");
  }
  rep.detail = "bit-exact residue comparison mod 3^9 through q^" +
               std::to_string(hi - 1);
  return rep;
}

}  // namespace

WorkedExampleResult run_worked_example() {
  // Working precision: enough that the T(3^6) image keeps 275 coefficients
  // (3^6 * 275 exponents upstream), which covers every exponent <= 274.
  const std::int64_t kPrec = 200475;  // = 275 * 729
  ZpDomain dom(3, 9);
  auto g4 = zagier_g4_series(dom, kPrec);
  auto chain = hecke_chain(dom, g4, 3, 3, 1, /*normalized=*/false);

  WorkedExampleResult result;
  result.image2 = compare_against_reference(dom, chain[1], image2_reference(),
                                            20, "worked-example-t9");
  result.image6 = compare_against_reference(dom, chain[3], image6_reference(),
                                            20, "worked-example-t729");

  auto diff = chain[3] - chain[1];
  result.drop = scan_congruence(dom, diff, 3, 2, "worked-example-drop",
                                {{"p", "3"}, {"claim", "exactly 2"}});
  result.min_val_exact = !result.drop.observed_at_cap &&
                         result.drop.observed == 2;
  result.pass =
      result.image2.pass && result.image6.pass && result.min_val_exact;
  return result;
}

}  // namespace gridlab

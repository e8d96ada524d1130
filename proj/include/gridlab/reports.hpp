#pragma once
// Result records produced by the verification routines.  Two shapes cover
// everything: exact equality checks over a coefficient window (MatchReport)
// and p-adic valuation lower bounds over a window (CongruenceReport).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gridlab {

// An interesting coefficient: where it sits and what was seen there.
struct Witness {
  std::int64_t exp = 0;
  long val = -1;          // p-adic valuation at that exponent (-1 if n/a)
  std::string note;
};

// Valuation bound check: every coefficient of some difference over the
// window must be divisible by p^required.
struct CongruenceReport {
  std::string statement;
  std::map<std::string, std::string> params;
  long p = 0;
  long required = 0;        // claimed lower bound on the valuation
  long observed = -1;       // minimum observed valuation over the window
  bool observed_at_cap = false;  // true if every coefficient vanished mod p^cap
  long cap = -1;            // valuation cap (K in the mod-p^K domain; -1 exact)
  std::int64_t window_lo = 0;
  std::int64_t window_hi = 0;    // exponents checked: [window_lo, window_hi)
  std::size_t checked = 0;       // nonzero coefficients inspected
  std::size_t substantive = 0;   // instances with a provably nonzero value
  std::size_t vacuous = 0;       // instances where the value itself vanished
  bool pass = false;
  std::vector<Witness> witnesses;
  std::string detail;
};

// Coefficient-for-coefficient equality check over a window.
struct MatchReport {
  std::string statement;
  std::map<std::string, std::string> params;
  std::int64_t window_lo = 0;
  std::int64_t window_hi = 0;
  std::size_t checked = 0;       // coefficient comparisons performed
  std::size_t substantive = 0;   // comparisons with a nonzero side
  std::size_t mismatches = 0;
  bool pass = false;
  std::vector<Witness> witnesses;  // mismatch locations (bounded)
  std::string detail;
};

}  // namespace gridlab

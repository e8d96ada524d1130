// gridlab: construct the level-4 and level-144 grids of weakly holomorphic
// forms, print q-expansions, apply half-integral-weight Hecke operators, and
// run verification sweeps.
//
// Exit codes: 0 pass, 1 property violation, 2 usage error, 3 construction
// failure.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "gridlab/builders.hpp"
#include "gridlab/common.hpp"
#include "gridlab/etaquot.hpp"
#include "gridlab/expansion.hpp"
#include "gridlab/folsomono.hpp"
#include "gridlab/grids.hpp"
#include "gridlab/hecke.hpp"
#include "gridlab/jsonio.hpp"
#include "gridlab/numbers.hpp"
#include "gridlab/padic.hpp"
#include "gridlab/qseries.hpp"
#include "gridlab/reports.hpp"
#include "gridlab/zagier.hpp"
#include "gridlab/zpseries.hpp"

namespace {

using namespace gridlab;

// ---------------------------------------------------------------------------
// option parsing helpers
// ---------------------------------------------------------------------------

Family parse_family(const std::string& text) {
  if (text == "zagier-f") return Family::zagier_f;
  if (text == "zagier-g") return Family::zagier_g;
  if (text == "fo-f" || text == "fo-F") return Family::fo_F;
  if (text == "fo-g" || text == "fo-G") return Family::fo_G;
  if (text.size() == 1) return family_from_letter(text[0]);
  throw UsageError("unknown family '" + text +
                   "' (expected f, g, F, G, zagier-f, zagier-g, fo-f, fo-g)");
}

// "g:4" -> (zagier_g, 4)
std::pair<Family, std::int64_t> parse_form(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size())
    throw UsageError("bad form address '" + text + "' (expected family:index)");
  Family fam = parse_family(text.substr(0, colon));
  std::int64_t index = 0;
  try {
    std::size_t used = 0;
    index = std::stoll(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trail");
  } catch (const std::exception&) {
    throw UsageError("bad form index in '" + text + "'");
  }
  if (!family_valid_index(fam, index))
    throw UsageError("index " + std::to_string(index) +
                     " is not valid for family " +
                     std::string(1, family_letter(fam)));
  return {fam, index};
}

struct ModSpec {
  long p = 0;
  int k = 0;
};

// "3^9" or "19683" -> (p, k); the value must be an odd prime power < 2^31.
ModSpec parse_mod(const std::string& text) {
  ModSpec spec;
  try {
    auto caret = text.find('^');
    if (caret != std::string::npos) {
      spec.p = std::stol(text.substr(0, caret));
      spec.k = std::stoi(text.substr(caret + 1));
    } else {
      long value = std::stol(text);
      auto factors = factorize(value);
      if (factors.size() != 1)
        throw UsageError("--mod must be a prime power, got " + text);
      spec.p = factors[0].first;
      spec.k = factors[0].second;
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("cannot parse --mod value '" + text + "'");
  }
  if (spec.p < 3 || spec.k < 1)
    throw UsageError("--mod requires an odd prime power");
  auto primality = factorize(spec.p);
  if (primality.size() != 1 || primality[0].second != 1)
    throw UsageError("--mod base " + std::to_string(spec.p) + " is not prime");
  (void)ZpMod::make(spec.p, spec.k);  // validates p^k < 2^31
  return spec;
}

// "2" -> {2};  "1..4" -> {1,2,3,4}
std::vector<int> parse_int_range(const std::string& text) {
  try {
    auto dots = text.find("..");
    if (dots == std::string::npos) return {std::stoi(text)};
    int lo = std::stoi(text.substr(0, dots));
    int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw UsageError("empty range '" + text + "'");
    if (hi - lo > 64) throw UsageError("range too long: '" + text + "'");
    std::vector<int> out;
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("cannot parse range '" + text + "' (expected n or a..b)");
  }
}

// "3,5,9,15" -> {3,5,9,15}
std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw UsageError("cannot parse list entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("empty list '" + text + "'");
  return out;
}

// Smallest precision at which a printed form of the family shows anything
// beyond its structurally-known coefficients.
std::int64_t family_min_prec(Family f) {
  switch (f) {
    case Family::zagier_f: return 2;   // first support exponent 1
    case Family::zagier_g: return 1;   // constant term
    case Family::fo_F: return 24;      // first support exponent 23
    case Family::fo_G: return 2;       // first support exponent 1
  }
  return 1;
}

void require_min_prec(Family fam, std::int64_t prec) {
  const std::int64_t need = family_min_prec(fam);
  if (prec < need)
    throw UsageError("family " + std::string(1, family_letter(fam)) +
                     " requires prec >= " + std::to_string(need) + ", got " +
                     std::to_string(prec));
}

void require_odd_prime_for(Family fam, long p) {
  auto factors = factorize(p);
  if (p < 3 || factors.size() != 1 || factors[0].second != 1)
    throw UsageError("p must be an odd prime, got " + std::to_string(p));
  if (family_level(fam) % p == 0)
    throw UsageError("p = " + std::to_string(p) +
                     " divides the level of family " +
                     std::string(1, family_letter(fam)));
}

// round up to the next valid fo_G index (>= 23, = 23 mod 24)
std::int64_t round_up_g_index(std::int64_t v) {
  if (v < 23) return 23;
  std::int64_t r = mod_nonneg(v, 24);
  return (r == 23) ? v : v + (23 - r + (r > 23 ? 24 : 0));
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

std::string q_power(std::int64_t e) {
  if (e == 0) return "";
  if (e == 1) return "q";
  return "q^" + std::to_string(e);
}

template <class Dom>
std::string series_text(const Dom& dom, const typename Dom::Series& s,
                        std::size_t max_terms = 0) {
  std::ostringstream os;
  std::size_t count = 0;
  bool truncated_render = false;
  bool first = true;
  s.for_each([&](std::int64_t e, const auto& c) {
    if (dom.is_zero(c)) return;
    if (max_terms != 0 && count >= max_terms) {
      truncated_render = true;
      return;
    }
    ++count;
    std::string cs = coeff_str(dom, c);
    bool neg = !cs.empty() && cs[0] == '-';
    std::string mag = neg ? cs.substr(1) : cs;
    std::string piece =
        (e == 0) ? mag : ((mag == "1" ? "" : mag) + q_power(e));
    if (first) {
      os << (neg ? "-" : "") << piece;
      first = false;
    } else {
      os << (neg ? " - " : " + ") << piece;
    }
  });
  if (first) os << "0";
  if (truncated_render) os << " + ...";
  if (!prec_is_inf(s.prec())) os << " + O(q^" << s.prec() << ")";
  return os.str();
}

template <class Dom>
std::string series_csv(const Dom& dom, const typename Dom::Series& s) {
  std::ostringstream os;
  os << "exp,coeff\n";
  s.for_each([&](std::int64_t e, const auto& c) {
    if (dom.is_zero(c)) return;
    os << e << "," << coeff_str(dom, c) << "\n";
  });
  return os.str();
}

template <class Dom>
void print_series(const Dom& dom, const typename Dom::Series& s,
                  const std::string& format) {
  if (format == "json")
    std::cout << json_dump(series_to_json(dom, s));
  else if (format == "csv")
    std::cout << series_csv(dom, s);
  else
    std::cout << series_text(dom, s) << "\n";
}

std::string report_text(const CongruenceReport& rep) {
  std::ostringstream os;
  os << rep.statement;
  for (const auto& [k, v] : rep.params) os << " " << k << "=" << v;
  os << "  " << (rep.pass ? "PASS" : "FAIL");
  os << "  required>=" << rep.required << " observed=";
  if (rep.observed == std::numeric_limits<long>::max())
    os << "inf";
  else
    os << rep.observed;
  if (rep.observed_at_cap && rep.cap >= 0) os << " (at cap " << rep.cap << ")";
  os << " window=[" << rep.window_lo << "," << rep.window_hi << ")";
  os << " checked=" << rep.checked;
  if (rep.substantive || rep.vacuous)
    os << " substantive=" << rep.substantive << " vacuous=" << rep.vacuous;
  if (!rep.detail.empty()) os << "  -- " << rep.detail;
  for (const auto& w : rep.witnesses)
    os << "\n    witness q^" << w.exp << " val=" << w.val << " " << w.note;
  return os.str();
}

std::string report_text(const MatchReport& rep) {
  std::ostringstream os;
  os << rep.statement;
  for (const auto& [k, v] : rep.params) os << " " << k << "=" << v;
  os << "  " << (rep.pass ? "PASS" : "FAIL");
  os << "  checked=" << rep.checked << " substantive=" << rep.substantive
     << " mismatches=" << rep.mismatches;
  os << " window=[" << rep.window_lo << "," << rep.window_hi << ")";
  if (!rep.detail.empty()) os << "  -- " << rep.detail;
  for (const auto& w : rep.witnesses)
    os << "\n    witness q^" << w.exp << " " << w.note;
  return os.str();
}

// Collects reports of both shapes, prints them in the chosen format, and
// resolves the process exit code.
struct ReportSink {
  std::string format;
  Json all = Json::array();
  bool ok = true;
  std::size_t count = 0;

  explicit ReportSink(std::string fmt) : format(std::move(fmt)) {}

  template <class Rep>
  void add(const Rep& rep) {
    ++count;
    ok = ok && rep.pass;
    if (format == "json") {
      all.push_back(report_to_json(rep));
    } else if (format == "csv") {
      if (count == 1)
        std::cout << "statement,pass,required,observed,checked,substantive,"
                     "mismatches\n";
      std::cout << csv_row(rep);
    } else {
      std::cout << report_text(rep) << "\n";
    }
  }

  static std::string csv_row(const CongruenceReport& rep) {
    std::ostringstream os;
    os << rep.statement << "," << (rep.pass ? 1 : 0) << "," << rep.required
       << "," << rep.observed << "," << rep.checked << "," << rep.substantive
       << ",\n";
    return os.str();
  }
  static std::string csv_row(const MatchReport& rep) {
    std::ostringstream os;
    os << rep.statement << "," << (rep.pass ? 1 : 0) << ",0,"
       << rep.mismatches << "," << rep.checked << "," << rep.substantive << ","
       << rep.mismatches << "\n";
    return os.str();
  }

  int finish() {
    if (format == "json") std::cout << json_dump(all);
    if (format != "json" && format != "csv" && count > 1)
      std::cout << (ok ? "all statements PASS" : "FAILURES present") << "\n";
    return ok ? 0 : 1;
  }
};

// ---------------------------------------------------------------------------
// construction dispatch
// ---------------------------------------------------------------------------

// Build one family's basis so that every form with index <= max_index exists
// with precision >= prec (fo_F: the listed duality columns up to max_index).
template <class Dom>
GridBasis<Dom> construct_family_basis(const Dom& dom, Family fam,
                                      std::int64_t max_index,
                                      std::int64_t prec) {
  require_min_prec(fam, prec);
  switch (fam) {
    case Family::zagier_f: {
      auto grids = build_zagier(dom, max_index, 1, prec);
      return std::move(grids.f);
    }
    case Family::zagier_g: {
      auto grids = build_zagier(dom, 1, max_index, prec);
      return std::move(grids.g);
    }
    case Family::fo_G: {
      if (!family_valid_index(fam, max_index))
        max_index = round_up_g_index(max_index);
      auto base = fo_solve_base();
      auto grids = build_fo(dom, base, max_index,
                            prec + (max_index - base.index), {});
      return std::move(grids.G);
    }
    case Family::fo_F: {
      if (max_index == 1) {
        GridBasis<Dom> basis(dom, fam);
        basis.forms.emplace(1, fo_f1_series(dom, prec));
        return basis;
      }
      std::vector<std::int64_t> cols;
      for (std::int64_t d = 25; d <= max_index; d += 24) cols.push_back(d);
      auto base = fo_solve_base();
      const std::int64_t maxD = round_up_g_index(prec - 1);
      const std::int64_t prec_base = max_index + 2 + (maxD - base.index) + 8;
      auto grids = build_fo(dom, base, maxD, prec_base, cols);
      return std::move(grids.F);
    }
  }
  throw UsageError("unreachable family");
}

// Cache-aware exact-domain basis: exact-key lookup, write-through on build.
struct CacheContext {
  std::string dir;  // empty: caching disabled

  bool enabled() const { return !dir.empty(); }
  std::string path_for(Family fam, std::int64_t max_index,
                       std::int64_t prec) const {
    return (std::filesystem::path(dir) / basis_cache_name(fam, max_index, prec))
        .string();
  }
};

GridBasis<QDomain> obtain_basis_exact(const QDomain& dom, Family fam,
                                      std::int64_t max_index,
                                      std::int64_t prec,
                                      const CacheContext& cache,
                                      bool* from_cache = nullptr) {
  if (from_cache) *from_cache = false;
  if (cache.enabled()) {
    auto path = cache.path_for(fam, max_index, prec);
    if (auto text = read_text_file(path)) {
      try {
        auto j = Json::parse(*text);
        if (j.value("family", "") == std::string(1, family_letter(fam)) &&
            j.value("max_index", std::int64_t{-1}) == max_index &&
            j.value("prec", std::int64_t{-1}) == prec) {
          auto basis = basis_from_json(dom, j);
          bool covers = !basis.forms.empty();
          for (const auto& [idx, s] : basis.forms)
            covers = covers && (s.prec() >= prec);
          // every requested index of the family must be present
          if (fam != Family::fo_F) {
            for (std::int64_t idx = 0; idx <= max_index && covers; ++idx)
              if (family_valid_index(fam, idx)) covers = covers && basis.built(idx);
          } else {
            covers = covers && basis.built(1);
            for (std::int64_t d = 25; d <= max_index && covers; d += 24)
              covers = covers && basis.built(d);
          }
          if (covers) {
            if (from_cache) *from_cache = true;
            return basis;
          }
        }
      } catch (const std::exception&) {
        // unreadable cache entry: fall through to a fresh build
      }
    }
  }
  auto basis = construct_family_basis(dom, fam, max_index, prec);
  if (cache.enabled()) {
    std::filesystem::create_directories(cache.dir);
    write_text_file(cache.path_for(fam, max_index, prec),
                    json_dump(basis_to_json(basis, max_index, prec)));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// shared CLI options
// ---------------------------------------------------------------------------

struct JobConfig {
  std::string command;
  std::string family_text;
  std::string form_text;
  std::string side;
  std::string statement;
  std::string mod_text;
  std::string n_text;
  std::string m_text;
  std::int64_t index = -1;
  std::int64_t max_index = -1;
  std::int64_t prec = -1;
  std::int64_t jmax = 25;
  std::int64_t imax = 30;
  long p = 0;
  std::string format = "text";
  std::string cache_dir;

  CacheContext cache() const {
    if (!cache_dir.empty()) return {cache_dir};
    if (const char* env = std::getenv("GRIDLAB_CACHE");
        env != nullptr && *env != '\0')
      return {std::string(env)};
    return {};
  }
};

// sanity bounds so a typo'd precision fails fast instead of thrashing
void check_workload(std::int64_t prec, bool exact) {
  const std::int64_t cap = exact ? 3'000'000 : 300'000'000;
  if (prec > cap)
    throw UsageError("requested working precision " + std::to_string(prec) +
                     " exceeds the " + (exact ? "exact" : "mod-p^k") +
                     " limit " + std::to_string(cap) +
                     (exact ? " (consider --mod p^k)" : ""));
  if (prec < 1) throw UsageError("precision must be positive");
}

// ---------------------------------------------------------------------------
// command: build
// ---------------------------------------------------------------------------

int cmd_build(const JobConfig& cfg) {
  Family fam = parse_family(cfg.family_text);
  std::int64_t max_index = cfg.max_index;
  if (max_index < 0) max_index = (family_level(fam) == 4) ? 25 : 95;
  std::int64_t prec = cfg.prec;
  if (prec < 0) prec = std::max<std::int64_t>(100, family_min_prec(fam));
  require_min_prec(fam, prec);
  check_workload(prec + max_index, true);

  QDomain dom;
  bool from_cache = false;
  auto basis =
      obtain_basis_exact(dom, fam, max_index, prec, cfg.cache(), &from_cache);

  if (cfg.format == "json") {
    std::cout << json_dump(basis_to_json(basis, max_index, prec));
  } else {
    std::cout << "family " << family_letter(basis.family) << ": "
              << basis.forms.size() << " forms"
              << (from_cache ? " (from cache)" : "") << "\n";
    for (const auto& [idx, s] : basis.forms)
      std::cout << "  " << family_letter(basis.family) << ":" << idx
                << "  prec=" << s.prec() << "  "
                << series_text(dom, s, 6) << "\n";
  }
  if (cfg.cache().enabled() && cfg.format != "json")
    std::cout << "cache: " << cfg.cache().path_for(fam, max_index, prec)
              << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// command: series
// ---------------------------------------------------------------------------

std::pair<Family, std::int64_t> resolve_form(const JobConfig& cfg) {
  if (!cfg.form_text.empty()) return parse_form(cfg.form_text);
  if (!cfg.family_text.empty() && cfg.index >= 0) {
    Family fam = parse_family(cfg.family_text);
    if (!family_valid_index(fam, cfg.index))
      throw UsageError("index " + std::to_string(cfg.index) +
                       " is not valid for family " +
                       std::string(1, family_letter(fam)));
    return {fam, cfg.index};
  }
  throw UsageError("specify a form as --form family:index");
}

int cmd_series(const JobConfig& cfg) {
  auto [fam, index] = resolve_form(cfg);
  std::int64_t prec = cfg.prec;
  if (prec < 0) prec = std::max<std::int64_t>(family_min_prec(fam), 32);
  require_min_prec(fam, prec);

  if (!cfg.mod_text.empty()) {
    ModSpec mod = parse_mod(cfg.mod_text);
    ZpDomain dom(mod.p, mod.k);
    check_workload(prec + index, false);
    auto basis = construct_family_basis(dom, fam, index, prec);
    print_series(dom, basis.form(index).truncated(prec), cfg.format);
    return 0;
  }
  QDomain dom;
  check_workload(prec + index, true);
  auto basis = obtain_basis_exact(dom, fam, index, prec, cfg.cache());
  print_series(dom, basis.form(index).truncated(prec), cfg.format);
  return 0;
}

// ---------------------------------------------------------------------------
// command: hecke
// ---------------------------------------------------------------------------

int cmd_hecke(const JobConfig& cfg) {
  auto [fam, index] = resolve_form(cfg);
  long p = cfg.p > 0 ? cfg.p : 3;
  require_odd_prime_for(fam, p);
  auto ns = cfg.n_text.empty() ? std::vector<int>{1}
                               : parse_int_range(cfg.n_text);
  if (ns.size() != 1 || ns[0] < 0)
    throw UsageError("hecke takes a single power --n >= 0");
  const int n = ns[0];
  std::int64_t prec = cfg.prec;
  if (prec < 0) prec = 20;
  require_min_prec(fam, prec);

  // the printed object has precision `prec`; the input needs prec * p^{2n}
  std::int64_t input_prec = prec;
  for (int t = 0; t < 2 * n; ++t) input_prec = sat_mul(input_prec, p);
  const long s = family_twist(fam);
  const bool normalized = family_normalized(fam);

  if (!cfg.mod_text.empty()) {
    ModSpec mod = parse_mod(cfg.mod_text);
    ZpDomain dom(mod.p, mod.k);
    check_workload(input_prec, false);
    auto basis = construct_family_basis(dom, fam, index, input_prec);
    auto image = hecke_t_p2n(dom, basis.form(index), p, n, s, normalized);
    print_series(dom, image.truncated(prec), cfg.format);
    return 0;
  }
  QDomain dom;
  check_workload(input_prec, true);
  auto basis =
      obtain_basis_exact(dom, fam, index, input_prec, cfg.cache());
  auto image = hecke_t_p2n(dom, basis.form(index), p, n, s, normalized);
  print_series(dom, image.truncated(prec), cfg.format);
  return 0;
}

// ---------------------------------------------------------------------------
// command: verify
// ---------------------------------------------------------------------------

Family side_g_family(const std::string& side) {
  if (side == "zagier") return Family::zagier_g;
  if (side == "fo") return Family::fo_G;
  throw UsageError("--side must be zagier or fo");
}

int verify_duality_zagier(const JobConfig& cfg, ReportSink& sink) {
  std::int64_t maxidx = cfg.max_index >= 0 ? cfg.max_index : 100;
  std::int64_t prec = cfg.prec >= 0 ? cfg.prec : maxidx + 8;
  if (prec < maxidx + 1)
    throw UsageError("duality-zagier with --max-index " +
                     std::to_string(maxidx) + " requires prec >= " +
                     std::to_string(maxidx + 1));
  check_workload(prec + maxidx, true);
  QDomain dom;
  auto grids = build_zagier(dom, maxidx, maxidx, prec);
  sink.add(verify_zagier_duality(dom, grids, maxidx, maxidx));
  return 0;
}

int verify_duality_fo(const JobConfig& cfg, ReportSink& sink) {
  std::int64_t maxidx = cfg.max_index >= 0 ? cfg.max_index : 95;
  std::int64_t maxD = std::max<std::int64_t>(
      23, maxidx - mod_nonneg(maxidx - 23, 24));
  std::int64_t maxd = maxD + 2;
  QDomain dom;
  auto base = fo_solve_base();
  std::int64_t prec_base = cfg.prec >= 0
                               ? cfg.prec
                               : (maxd + 1) + (maxD - base.index) + 8;
  if (prec_base < (maxd + 1) + (maxD - base.index))
    throw UsageError(
        "duality-fo with --max-index " + std::to_string(maxidx) +
        " requires prec >= " +
        std::to_string((maxd + 1) + (maxD - base.index)));
  check_workload(prec_base, true);
  std::vector<std::int64_t> cols;
  for (std::int64_t d = 25; d <= maxd; d += 24) cols.push_back(d);
  auto grids = build_fo(dom, base, maxD, prec_base, cols);
  sink.add(verify_fo_duality(dom, grids, maxD, maxd));
  return 0;
}

int verify_thm_hecke(const JobConfig& cfg, ReportSink& sink) {
  std::string side = cfg.side;
  std::string form_text = cfg.form_text;
  if (side.empty() && !form_text.empty()) {
    Family f = parse_form(form_text).first;
    side = (f == Family::zagier_g) ? "zagier" : "fo";
  }
  if (side.empty()) side = "zagier";
  if (form_text.empty())
    form_text = (side == "zagier") ? "g:4" : "G:23";
  auto [fam, index] = parse_form(form_text);
  if (family_normalized(fam))
    throw UsageError("thm-hecke applies to the weight-3/2 families (g, G)");
  long p = cfg.p > 0 ? cfg.p : ((side == "zagier") ? 3 : 5);
  require_odd_prime_for(fam, p);
  auto ns = cfg.n_text.empty() ? std::vector<int>{0, 1, 2, 3}
                               : parse_int_range(cfg.n_text);
  std::int64_t prec = cfg.prec >= 0 ? cfg.prec : 9000;
  const long s = family_twist(fam);

  auto run = [&](const auto& dom) {
    auto basis = construct_family_basis(dom, fam, index, prec);
    const auto& g = basis.form(index);
    const long w = w_of<std::decay_t<decltype(dom)>>(g, p);
    for (int n : ns) {
      if (n < w)
        throw UsageError("thm-hecke: n = " + std::to_string(n) +
                         " is below w(g) = " + std::to_string(w));
      sink.add(verify_hecke_stability(dom, g, p, n, s));
    }
  };
  if (!cfg.mod_text.empty()) {
    ModSpec mod = parse_mod(cfg.mod_text);
    check_workload(prec, false);
    run(ZpDomain(mod.p, mod.k));
  } else {
    check_workload(prec, true);
    run(QDomain{});
  }
  return 0;
}

int verify_example(const JobConfig&, ReportSink& sink) {
  auto result = run_worked_example();
  sink.add(result.image2);
  sink.add(result.image6);
  sink.add(result.drop);
  // the drop scan must attain its bound exactly, not merely meet it
  CongruenceReport exact;
  exact.statement = "worked-example-min-valuation";
  exact.p = 3;
  exact.required = 2;
  exact.observed = result.drop.observed;
  exact.observed_at_cap = result.drop.observed_at_cap;
  exact.cap = result.drop.cap;
  exact.window_lo = result.drop.window_lo;
  exact.window_hi = result.drop.window_hi;
  exact.checked = result.drop.checked;
  exact.pass = result.min_val_exact;
  exact.detail = "minimum valuation must equal 2 exactly";
  sink.add(exact);
  return 0;
}

int verify_thm_today(const JobConfig& cfg, ReportSink& sink) {
  std::string side = cfg.side.empty() ? "zagier" : cfg.side;
  Family fam = side_g_family(side);
  long p = cfg.p > 0 ? cfg.p : ((side == "zagier") ? 3 : 5);
  require_odd_prime_for(fam, p);
  std::vector<long> v_list{0, 1};
  std::vector<long> s_list{1, 2};
  const std::int64_t jmax = cfg.jmax;
  const std::int64_t imax = cfg.imax;
  const std::int64_t p2 = static_cast<std::int64_t>(p) * p;
  const std::int64_t maxD = p2 * jmax;
  std::int64_t need_prec = sat_mul(sat_mul(p2, p2), sat_mul(p2, imax)) + 8;
  std::int64_t prec = cfg.prec >= 0 ? cfg.prec : need_prec;

  // default domain: mod p^9 (the exact route is impractical at these windows)
  ModSpec mod = cfg.mod_text.empty() ? ModSpec{p, 9} : parse_mod(cfg.mod_text);
  if (mod.p != p)
    throw UsageError("--mod base must equal --p for thm-today");
  ZpDomain dom(mod.p, mod.k);
  check_workload(prec, false);
  auto basis = construct_family_basis(dom, fam, maxD, prec);
  sink.add(verify_duality_congruence(dom, basis, p, v_list, s_list, jmax,
                                     imax));
  return 0;
}

int verify_successive(const JobConfig& cfg, ReportSink& sink) {
  std::string form_text = cfg.form_text.empty() ? "g:4" : cfg.form_text;
  auto [fam, index] = parse_form(form_text);
  if (family_normalized(fam))
    throw UsageError("successive applies to the weight-3/2 families (g, G)");
  long p = cfg.p > 0 ? cfg.p : ((fam == Family::zagier_g) ? 3 : 5);
  require_odd_prime_for(fam, p);
  auto ns = cfg.n_text.empty() ? std::vector<int>{1}
                               : parse_int_range(cfg.n_text);
  std::int64_t prec = cfg.prec >= 0 ? cfg.prec : 9000;

  auto run = [&](const auto& dom) {
    auto basis = construct_family_basis(dom, fam, index, prec);
    for (int n : ns)
      sink.add(verify_successive_congruence(dom, basis, index, p, n));
  };
  if (!cfg.mod_text.empty()) {
    ModSpec mod = parse_mod(cfg.mod_text);
    check_workload(prec, false);
    run(ZpDomain(mod.p, mod.k));
  } else {
    check_workload(prec, true);
    run(QDomain{});
  }
  return 0;
}

int verify_expansion(const JobConfig& cfg, ReportSink& sink) {
  std::string form_text = cfg.form_text.empty() ? "g:4" : cfg.form_text;
  auto [fam, index] = parse_form(form_text);
  long p = cfg.p > 0 ? cfg.p : 3;
  require_odd_prime_for(fam, p);
  auto ns = cfg.n_text.empty() ? std::vector<int>{1, 2, 3}
                               : parse_int_range(cfg.n_text);
  // build far enough that at least the first expansion level is fully built;
  // deeper levels fall back to the structural coefficient window, which the
  // comparison handles by clipping.
  std::int64_t maxidx = cfg.max_index >= 0
                            ? cfg.max_index
                            : std::min<std::int64_t>(
                                  sat_mul(index, static_cast<std::int64_t>(p) * p),
                                  250);
  maxidx = std::max(maxidx, index);
  std::int64_t prec = cfg.prec >= 0
                          ? cfg.prec
                          : sat_mul(maxidx, static_cast<std::int64_t>(p) * p) + 16;
  check_workload(prec, true);
  QDomain dom;
  auto basis = construct_family_basis(dom, fam, maxidx, prec);
  for (int n : ns) sink.add(verify_hecke_expansion(dom, basis, index, p, n));
  return 0;
}

int verify_divisor_recursion(const JobConfig& cfg, ReportSink& sink) {
  auto ms = cfg.m_text.empty() ? std::vector<std::int64_t>{3, 5, 9, 15}
                               : parse_int_list(cfg.m_text);
  std::int64_t max_d = cfg.max_index >= 0 ? cfg.max_index : 20;
  std::int64_t top_m = *std::max_element(ms.begin(), ms.end());
  for (auto m : ms)
    if (m < 1 || m % 2 == 0)
      throw UsageError("divisor-recursion: m must be odd and positive");
  // need a(n^2, d) for n | m and [q^1] of composite images
  std::int64_t need = sat_mul(top_m, top_m) * 2 + 16;
  std::int64_t prec = cfg.prec >= 0 ? cfg.prec : need;
  if (prec < need)
    throw UsageError("divisor-recursion with m up to " +
                     std::to_string(top_m) + " requires prec >= " +
                     std::to_string(need));
  check_workload(prec, true);
  QDomain dom;
  auto grids = build_zagier(dom, max_d, 1, prec);
  for (auto m : ms)
    sink.add(verify_divisor_recursion(dom, grids, m, max_d));
  return 0;
}

int verify_eq3(const JobConfig& cfg, ReportSink& sink) {
  std::vector<std::string> forms;
  if (!cfg.form_text.empty())
    forms.push_back(cfg.form_text);
  else
    forms = {"g:1", "g:4"};
  long p = cfg.p > 0 ? cfg.p : 3;
  auto ns = cfg.n_text.empty() ? std::vector<int>{2}
                               : parse_int_range(cfg.n_text);
  int nmax = *std::max_element(ns.begin(), ns.end());
  std::int64_t prec = cfg.prec >= 0 ? cfg.prec : 8748;
  check_workload(prec, true);
  QDomain dom;
  for (const auto& form_text : forms) {
    auto [fam, index] = parse_form(form_text);
    require_odd_prime_for(fam, p);
    auto basis = construct_family_basis(dom, fam, index, prec);
    const auto& form = basis.form(index);
    const long s = family_twist(fam);
    const bool normalized = family_normalized(fam);
    for (int n = 0; n <= nmax; ++n) {
      for (int m = 0; m <= n; ++m) {
        auto rep = verify_hecke_composition(dom, form, p, m, n, s, normalized);
        rep.params["form"] = form_text;
        sink.add(rep);
      }
    }
  }
  return 0;
}

int verify_hecke_duality_cmd(const JobConfig& cfg, ReportSink& sink) {
  std::string side = cfg.side.empty() ? "zagier" : cfg.side;
  QDomain dom;
  if (side == "zagier") {
    auto ms = cfg.m_text.empty() ? std::vector<std::int64_t>{3, 5}
                                 : parse_int_list(cfg.m_text);
    std::size_t count = cfg.max_index >= 0
                            ? static_cast<std::size_t>(cfg.max_index)
                            : 10;
    auto ds = first_valid_indices(Family::zagier_f, count);
    auto Ds = first_valid_indices(Family::zagier_g, count);
    std::int64_t top_m = *std::max_element(ms.begin(), ms.end());
    std::int64_t need =
        sat_mul(sat_mul(top_m, top_m), std::max(ds.back(), Ds.back()) + 1) + 8;
    std::int64_t prec = cfg.prec >= 0 ? cfg.prec : need;
    if (prec < need)
      throw UsageError("hecke-duality needs prec >= " + std::to_string(need));
    check_workload(prec, true);
    auto grids = build_zagier(dom, ds.back(), Ds.back(), prec);
    for (auto m : ms)
      sink.add(verify_zagier_hecke_duality(dom, grids, m, count));
    return 0;
  }
  if (side != "fo") throw UsageError("--side must be zagier or fo");
  auto ps = cfg.m_text.empty() ? std::vector<std::int64_t>{5}
                               : parse_int_list(cfg.m_text);
  std::int64_t maxidx = cfg.max_index >= 0 ? cfg.max_index : 47;
  std::int64_t maxD = std::max<std::int64_t>(
      23, maxidx - mod_nonneg(maxidx - 23, 24));
  std::int64_t maxd = maxD + 2;
  std::int64_t top_p = *std::max_element(ps.begin(), ps.end());
  for (auto p : ps) require_odd_prime_for(Family::fo_G, p);
  // F columns must absorb T(p^2): col precision maxD' + 1 > maxD * p^2
  std::int64_t needD = round_up_g_index(sat_mul(maxD, top_p * top_p));
  auto base = fo_solve_base();
  std::int64_t prec_base = cfg.prec >= 0
                               ? cfg.prec
                               : sat_mul(maxd + 1, top_p * top_p) +
                                     (needD - base.index) + 16;
  check_workload(prec_base, true);
  std::vector<std::int64_t> cols;
  for (std::int64_t d = 25; d <= maxd; d += 24) cols.push_back(d);
  auto grids = build_fo(dom, base, needD, prec_base, cols);
  for (auto p : ps)
    sink.add(verify_fo_hecke_duality(dom, grids, p, maxD, maxd));
  return 0;
}

int cmd_verify(const JobConfig& cfg) {
  std::string statement = cfg.statement;
  if (statement.empty())
    throw UsageError("verify requires a statement (e.g. duality-zagier)");
  ReportSink sink(cfg.format);
  if (statement == "duality") {
    if (cfg.side == "zagier")
      verify_duality_zagier(cfg, sink);
    else if (cfg.side == "fo")
      verify_duality_fo(cfg, sink);
    else
      throw UsageError("duality requires --side zagier or --side fo");
  } else if (statement == "duality-zagier") {
    verify_duality_zagier(cfg, sink);
  } else if (statement == "duality-fo") {
    verify_duality_fo(cfg, sink);
  } else if (statement == "thm-hecke") {
    verify_thm_hecke(cfg, sink);
  } else if (statement == "example-1-3") {
    verify_example(cfg, sink);
  } else if (statement == "thm-today") {
    verify_thm_today(cfg, sink);
  } else if (statement == "successive") {
    verify_successive(cfg, sink);
  } else if (statement == "hecke-expansion") {
    verify_expansion(cfg, sink);
  } else if (statement == "divisor-recursion") {
    verify_divisor_recursion(cfg, sink);
  } else if (statement == "eq3") {
    verify_eq3(cfg, sink);
  } else if (statement == "hecke-duality") {
    verify_hecke_duality_cmd(cfg, sink);
  } else {
    throw UsageError("unknown statement '" + statement + "'");
  }
  return sink.finish();
}

// ---------------------------------------------------------------------------
// command: cache
// ---------------------------------------------------------------------------

int cmd_cache(const JobConfig& cfg, const std::string& action) {
  auto cache = cfg.cache();
  if (!cache.enabled())
    throw UsageError("no cache directory (set --cache-dir or GRIDLAB_CACHE)");
  namespace fs = std::filesystem;
  if (action == "list" || action.empty()) {
    std::cout << "cache directory: " << cache.dir << "\n";
    if (!fs::exists(cache.dir)) return 0;
    for (const auto& entry : fs::directory_iterator(cache.dir)) {
      auto name = entry.path().filename().string();
      if (name.rfind("basis-", 0) == 0 || name.rfind("eta-", 0) == 0)
        std::cout << "  " << name << "  " << fs::file_size(entry.path())
                  << " bytes\n";
    }
    return 0;
  }
  if (action == "clear") {
    std::size_t removed = 0;
    if (fs::exists(cache.dir)) {
      for (const auto& entry : fs::directory_iterator(cache.dir)) {
        auto name = entry.path().filename().string();
        if (name.rfind("basis-", 0) == 0 || name.rfind("eta-", 0) == 0) {
          fs::remove(entry.path());
          ++removed;
        }
      }
    }
    std::cout << "removed " << removed << " cache files\n";
    return 0;
  }
  throw UsageError("cache action must be list or clear");
}

}  // namespace

// ---------------------------------------------------------------------------
// main
// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"exact q-series grids, Hecke operators, and verifications"};
  app.require_subcommand(1);

  JobConfig cfg;
  std::string cache_action;
  std::string positional_statement;
  std::string positional_form;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--cache-dir", cfg.cache_dir,
                    "cache directory (or env GRIDLAB_CACHE)");
  };

  auto* build = app.add_subcommand("build", "construct a family basis");
  build->add_option("family", cfg.family_text, "family (f, g, F, G, ...)");
  build->add_option("--family", cfg.family_text, "family");
  build->add_option("--max-index,--index", cfg.max_index, "largest pole index");
  build->add_option("--prec", cfg.prec, "guaranteed precision per form");
  add_common(build);

  auto* series = app.add_subcommand("series", "print one form's q-expansion");
  series->add_option("form", positional_form, "form address family:index");
  series->add_option("--form", cfg.form_text, "form address family:index");
  series->add_option("--family", cfg.family_text, "family");
  series->add_option("--index", cfg.index, "pole index");
  series->add_option("--prec", cfg.prec, "printed precision");
  series->add_option("--mod", cfg.mod_text, "reduce mod p^k (19683 or 3^9)");
  add_common(series);

  auto* hecke = app.add_subcommand("hecke", "apply T(p^{2n}) to a form");
  hecke->add_option("form", positional_form, "form address family:index");
  hecke->add_option("--form", cfg.form_text, "form address family:index");
  hecke->add_option("--family", cfg.family_text, "family");
  hecke->add_option("--index", cfg.index, "pole index");
  hecke->add_option("--p", cfg.p, "odd prime");
  hecke->add_option("--n", cfg.n_text, "operator power n in T(p^{2n})");
  hecke->add_option("--prec", cfg.prec,
                    "printed precision (input is built at prec * p^{2n})");
  hecke->add_option("--mod", cfg.mod_text, "reduce mod p^k (19683 or 3^9)");
  add_common(hecke);

  auto* verify = app.add_subcommand("verify", "run a verification statement");
  verify->add_option("statement", positional_statement,
                     "duality-zagier | duality-fo | duality | thm-hecke | "
                     "example-1-3 | thm-today | successive | hecke-expansion "
                     "| divisor-recursion | eq3 | hecke-duality");
  verify->add_option("--statement", cfg.statement, "statement id");
  verify->add_option("--side", cfg.side, "zagier or fo");
  verify->add_option("--form", cfg.form_text, "form address family:index");
  verify->add_option("--p", cfg.p, "odd prime");
  verify->add_option("--n", cfg.n_text, "power or range (e.g. 1..4)");
  verify->add_option("--m", cfg.m_text, "comma-separated m list");
  verify->add_option("--max-index,--max", cfg.max_index, "index window bound");
  verify->add_option("--jmax", cfg.jmax, "j bound (thm-today)");
  verify->add_option("--imax", cfg.imax, "i bound (thm-today)");
  verify->add_option("--prec", cfg.prec, "working precision");
  verify->add_option("--mod", cfg.mod_text, "compute mod p^k");
  add_common(verify);

  auto* cache = app.add_subcommand("cache", "inspect or clear the cache");
  cache->add_option("action", cache_action, "list (default) or clear");
  add_common(cache);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (build->parsed()) {
      cfg.command = "build";
      if (cfg.family_text.empty())
        throw UsageError("build requires a family");
      return cmd_build(cfg);
    }
    if (series->parsed()) {
      cfg.command = "series";
      if (cfg.form_text.empty()) cfg.form_text = positional_form;
      return cmd_series(cfg);
    }
    if (hecke->parsed()) {
      cfg.command = "hecke";
      if (cfg.form_text.empty()) cfg.form_text = positional_form;
      return cmd_hecke(cfg);
    }
    if (verify->parsed()) {
      cfg.command = "verify";
      if (cfg.statement.empty()) cfg.statement = positional_statement;
      if (!positional_statement.empty() && !cfg.statement.empty() &&
          cfg.statement != positional_statement)
        throw UsageError("conflicting statement arguments");
      return cmd_verify(cfg);
    }
    if (cache->parsed()) {
      cfg.command = "cache";
      return cmd_cache(cfg, cache_action);
    }
    throw UsageError("no command given");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const PrecisionError& e) {
    std::cerr << "precision shortfall: " << e.what() << "\n";
    return 2;
  } catch (const ConstructionFailure& e) {
    std::cerr << "construction failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

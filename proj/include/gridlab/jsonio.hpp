#pragma once
// JSON serialization for series, bases, eta-combination provenance, and
// verification reports, plus the on-disk basis cache.
//
// Schemas (all self-identifying via a "schema" key):
//   gridlab.series.v1  {"schema","prec","coeffs":[[exp, "num[/den]"], ...]}
//                      coefficients as exact decimal strings, exponents
//                      ascending; mod-p^k series add "modulus":{p,k,m}
//   gridlab.basis.v1   {"schema","family","max_index","prec","forms":{...}}
//   gridlab.eta.v1     candidate lists and solved combinations (provenance)
//   gridlab.report.v1  verification outcomes (congruence or match shape)
//
// Serialization is deterministic: ordered_json preserves insertion order and
// every container is emitted in a canonical order, so identical inputs give
// byte-identical files (the cache contract relies on this).

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "gridlab/etaquot.hpp"
#include "gridlab/grids.hpp"
#include "gridlab/qseries.hpp"
#include "gridlab/reports.hpp"
#include "gridlab/zpseries.hpp"

namespace gridlab {

using Json = nlohmann::ordered_json;

// canonical text form (2-space indent, trailing newline)
std::string json_dump(const Json& j);

// --- series ----------------------------------------------------------------

Json series_to_json(const QDomain& dom, const QSeries& s);
Json series_to_json(const ZpDomain& dom, const ZpSeries& s);
QSeries series_from_json(const QDomain& dom, const Json& j);
ZpSeries series_from_json(const ZpDomain& dom, const Json& j);

// --- basis -----------------------------------------------------------------

template <class Dom>
Json basis_to_json(const GridBasis<Dom>& basis, std::int64_t max_index,
                   std::int64_t prec) {
  Json j;
  j["schema"] = "gridlab.basis.v1";
  j["family"] = std::string(1, family_letter(basis.family));
  j["max_index"] = max_index;
  j["prec"] = prec;
  Json forms = Json::object();
  for (const auto& [idx, s] : basis.forms)
    forms[std::to_string(idx)] = series_to_json(basis.dom, s);
  j["forms"] = std::move(forms);
  return j;
}

template <class Dom>
GridBasis<Dom> basis_from_json(const Dom& dom, const Json& j) {
  if (!j.is_object() || j.value("schema", "") != "gridlab.basis.v1")
    throw UsageError("basis_from_json: not a gridlab.basis.v1 object");
  const std::string fam = j.at("family").get<std::string>();
  if (fam.size() != 1) throw UsageError("basis_from_json: bad family");
  GridBasis<Dom> basis(dom, family_from_letter(fam[0]));
  for (const auto& [key, val] : j.at("forms").items())
    basis.forms.emplace(static_cast<std::int64_t>(std::stoll(key)),
                        series_from_json(dom, val));
  return basis;
}

// --- eta provenance ----------------------------------------------------------

// Candidate list fixture: exponent vectors with leading powers and per-cusp
// orders (as exact rational strings keyed by the cusp denominator).
Json eta_candidates_to_json(long level, const std::vector<long>& scales,
                            const std::vector<EtaCandidate>& candidates);

// Solved combination: everything needed to re-evaluate it.
Json eta_solution_to_json(const EtaSpanSolution& sol);
EtaSpanSolution eta_solution_from_json(const Json& j);

// --- reports -----------------------------------------------------------------

// For congruence reports, required/observed are the p-adic valuation bound and
// the minimum observed valuation.  For match reports the analogous pair is
// mismatches allowed (always 0) and mismatches seen.
Json report_to_json(const CongruenceReport& rep);
Json report_to_json(const MatchReport& rep);

// --- cache --------------------------------------------------------------------

// Cache file name for a basis build request.
std::string basis_cache_name(Family family, std::int64_t max_index,
                             std::int64_t prec);

// Write text to path (parent directory must exist); read it back.
void write_text_file(const std::string& path, const std::string& content);
std::optional<std::string> read_text_file(const std::string& path);

}  // namespace gridlab

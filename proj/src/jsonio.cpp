#include "gridlab/jsonio.hpp"

#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "gridlab/common.hpp"

namespace gridlab {

std::string json_dump(const Json& j) { return j.dump(2) + "\n"; }

// --- series ----------------------------------------------------------------

namespace {

std::int64_t require_finite_prec(std::int64_t prec) {
  if (prec_is_inf(prec))
    throw UsageError("serialization requires finite precision; truncate first");
  return prec;
}

mpq_class parse_rational(const std::string& text) {
  mpq_class v;
  if (v.set_str(text, 10) != 0 || v.get_den() == 0)
    throw UsageError("series_from_json: bad coefficient '" + text + "'");
  v.canonicalize();
  return v;
}

}  // namespace

Json series_to_json(const QDomain&, const QSeries& s) {
  Json j;
  j["schema"] = "gridlab.series.v1";
  j["prec"] = require_finite_prec(s.prec());
  Json coeffs = Json::array();
  s.for_each([&](std::int64_t e, const mpq_class& c) {
    coeffs.push_back(Json::array({e, c.get_str()}));
  });
  j["coeffs"] = std::move(coeffs);
  return j;
}

Json series_to_json(const ZpDomain&, const ZpSeries& s) {
  Json j;
  j["schema"] = "gridlab.series.v1";
  j["prec"] = require_finite_prec(s.prec());
  j["modulus"] = Json{{"p", s.mod().p}, {"k", s.mod().k}, {"m", s.mod().m}};
  Json coeffs = Json::array();
  s.for_each([&](std::int64_t e, std::uint64_t c) {
    coeffs.push_back(Json::array({e, std::to_string(c)}));
  });
  j["coeffs"] = std::move(coeffs);
  return j;
}

namespace {

void check_series_schema(const Json& j) {
  if (!j.is_object() || j.value("schema", "") != "gridlab.series.v1")
    throw UsageError("series_from_json: not a gridlab.series.v1 object");
}

}  // namespace

QSeries series_from_json(const QDomain&, const Json& j) {
  check_series_schema(j);
  const std::int64_t prec = j.at("prec").get<std::int64_t>();
  std::vector<std::pair<std::int64_t, mpq_class>> terms;
  for (const auto& entry : j.at("coeffs")) {
    terms.emplace_back(entry.at(0).get<std::int64_t>(),
                       parse_rational(entry.at(1).get<std::string>()));
  }
  return QSeries::from_terms(std::move(terms), prec);
}

ZpSeries series_from_json(const ZpDomain& dom, const Json& j) {
  check_series_schema(j);
  if (!j.contains("modulus"))
    throw UsageError("series_from_json: missing modulus for mod-p^k series");
  const auto& m = j.at("modulus");
  if (m.at("p").get<long>() != dom.mod.p || m.at("k").get<int>() != dom.mod.k)
    throw UsageError("series_from_json: modulus does not match the domain");
  const std::int64_t prec = j.at("prec").get<std::int64_t>();
  std::vector<std::pair<std::int64_t, std::int64_t>> terms;
  for (const auto& entry : j.at("coeffs")) {
    terms.emplace_back(
        entry.at(0).get<std::int64_t>(),
        static_cast<std::int64_t>(
            std::stoull(entry.at(1).get<std::string>())));
  }
  return ZpSeries::from_terms(dom.mod, terms, prec);
}

// --- eta provenance ----------------------------------------------------------

Json eta_candidates_to_json(long level, const std::vector<long>& scales,
                            const std::vector<EtaCandidate>& candidates) {
  Json j;
  j["schema"] = "gridlab.eta.v1";
  j["kind"] = "candidates";
  j["level"] = level;
  j["scales"] = scales;
  Json list = Json::array();
  for (const auto& cand : candidates) {
    Json c;
    c["exponents"] = cand.exps;
    c["lead"] = cand.lead;
    c["holomorphic_away"] = cand.hol_away;
    Json orders = Json::object();
    for (const auto& cls : cusp_classes(level))
      orders[std::to_string(cls.c)] =
          eta_cusp_order(level, scales, cand.exps, cls.c).get_str();
    c["orders"] = std::move(orders);
    list.push_back(std::move(c));
  }
  j["candidates"] = std::move(list);
  return j;
}

Json eta_solution_to_json(const EtaSpanSolution& sol) {
  Json j;
  j["schema"] = "gridlab.eta.v1";
  j["kind"] = "solution";
  j["level"] = sol.level;
  j["scales"] = sol.scales;
  j["phi"] = sol.phi;
  j["phi_lead"] = sol.phi_lead;
  j["index"] = sol.index;
  j["step"] = sol.step;
  j["residue"] = sol.residue;
  Json terms = Json::array();
  for (const auto& term : sol.terms) {
    Json t;
    t["exponents"] = term.exps;
    t["power"] = term.power;
    t["coef"] = term.coef.get_str();
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  j["phis_tried"] = sol.phis_tried;
  j["note"] = sol.note;
  return j;
}

EtaSpanSolution eta_solution_from_json(const Json& j) {
  if (!j.is_object() || j.value("schema", "") != "gridlab.eta.v1" ||
      j.value("kind", "") != "solution")
    throw UsageError("eta_solution_from_json: not a gridlab.eta.v1 solution");
  EtaSpanSolution sol;
  sol.level = j.at("level").get<long>();
  sol.scales = j.at("scales").get<std::vector<long>>();
  sol.phi = j.at("phi").get<std::vector<long>>();
  sol.phi_lead = j.at("phi_lead").get<std::int64_t>();
  sol.index = j.at("index").get<std::int64_t>();
  sol.step = j.at("step").get<std::int64_t>();
  sol.residue = j.at("residue").get<std::int64_t>();
  for (const auto& t : j.at("terms")) {
    EtaComboTerm term;
    term.exps = t.at("exponents").get<std::vector<long>>();
    term.power = t.at("power").get<long>();
    term.coef = parse_rational(t.at("coef").get<std::string>());
    sol.terms.push_back(std::move(term));
  }
  sol.phis_tried = j.at("phis_tried").get<std::size_t>();
  sol.note = j.value("note", "");
  return sol;
}

// --- reports -----------------------------------------------------------------

namespace {

Json params_to_json(const std::map<std::string, std::string>& params) {
  Json j = Json::object();
  for (const auto& [k, v] : params) j[k] = v;
  return j;
}

Json witnesses_to_json(const std::vector<Witness>& ws) {
  Json j = Json::array();
  for (const auto& w : ws) {
    Json e;
    e["exp"] = w.exp;
    e["val"] = w.val;
    e["note"] = w.note;
    j.push_back(std::move(e));
  }
  return j;
}

}  // namespace

Json report_to_json(const CongruenceReport& rep) {
  Json j;
  j["schema"] = "gridlab.report.v1";
  j["kind"] = "congruence";
  j["statement"] = rep.statement;
  j["params"] = params_to_json(rep.params);
  j["p"] = rep.p;
  j["required"] = rep.required;
  j["observed"] = rep.observed;
  j["observed_at_cap"] = rep.observed_at_cap;
  j["cap"] = rep.cap;
  j["window"] = Json::array({rep.window_lo, rep.window_hi});
  j["checked"] = rep.checked;
  j["substantive"] = rep.substantive;
  j["vacuous"] = rep.vacuous;
  j["pass"] = rep.pass;
  j["witnesses"] = witnesses_to_json(rep.witnesses);
  j["detail"] = rep.detail;
  return j;
}

Json report_to_json(const MatchReport& rep) {
  Json j;
  j["schema"] = "gridlab.report.v1";
  j["kind"] = "match";
  j["statement"] = rep.statement;
  j["params"] = params_to_json(rep.params);
  j["required"] = 0;
  j["observed"] = rep.mismatches;
  j["window"] = Json::array({rep.window_lo, rep.window_hi});
  j["checked"] = rep.checked;
  j["substantive"] = rep.substantive;
  j["mismatches"] = rep.mismatches;
  j["pass"] = rep.pass;
  j["witnesses"] = witnesses_to_json(rep.witnesses);
  j["detail"] = rep.detail;
  return j;
}

// --- cache --------------------------------------------------------------------

std::string basis_cache_name(Family family, std::int64_t max_index,
                             std::int64_t prec) {
  std::ostringstream os;
  os << "basis-" << family_letter(family) << "-" << max_index << "-" << prec
     << "-v1.json";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw UsageError("write failed: " + path);
}

std::optional<std::string> read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace gridlab

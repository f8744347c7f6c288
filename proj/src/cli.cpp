#include "zid/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "zid/admg.hpp"
#include "zid/dcalc.hpp"
#include "zid/errors.hpp"
#include "zid/estimand.hpp"
#include "zid/graph_text.hpp"
#include "zid/identify.hpp"
#include "zid/scm.hpp"

namespace zid {
namespace {

constexpr double kVerifyTolerance = 1e-9;

int parse_int(const std::string& text, const std::string& what) {
  int value = 0;
  const auto res =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    fail(errc::flag_error, what + ": '" + text + "' is not an integer");
  }
  return value;
}

// NAME or NAME=value.
std::pair<VariableId, std::optional<int>> parse_valued(
    const std::string& token) {
  const auto eq = token.find('=');
  if (eq == std::string::npos) return {VariableId(token), std::nullopt};
  const std::string name = token.substr(0, eq);
  const std::string value = token.substr(eq + 1);
  return {VariableId(name), parse_int(value, "value for '" + name + "'")};
}

Assignment to_assignment(const std::vector<std::string>& tokens,
                         const char* role, std::ostream& err) {
  Assignment out;
  for (const auto& token : tokens) {
    const auto [v, value] = parse_valued(token);
    if (!value) {
      err << "note: no value given for " << role << " '" << v.str()
          << "'; defaulting to 0\n";
    }
    if (!out.emplace(v, value.value_or(0)).second) {
      fail(errc::flag_error,
           std::string(role) + " '" + v.str() + "' given twice");
    }
  }
  return out;
}

VariableSet to_set(const std::vector<std::string>& tokens, const char* role) {
  VariableSet out;
  for (const auto& token : tokens) {
    if (token.find('=') != std::string::npos) {
      fail(errc::flag_error,
           std::string(role) + " '" + token + "' takes no value");
    }
    if (!out.insert(VariableId(token)).second) {
      fail(errc::flag_error,
           std::string(role) + " '" + token + "' given twice");
    }
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::flag_error, "cannot open graph file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string directed_list(const std::vector<DirectedEdge>& edges) {
  std::string out;
  for (const auto& [a, b] : edges) {
    if (!out.empty()) out += ", ";
    out += a.str() + " -> " + b.str();
  }
  return out;
}

std::string bidirected_list(const std::vector<BidirectedEdge>& edges) {
  std::string out;
  for (const auto& [a, b] : edges) {
    if (!out.empty()) out += ", ";
    out += a.str() + " <-> " + b.str();
  }
  return out;
}

std::string hedge_text(const Hedge& h) {
  std::ostringstream os;
  os << "hedge F : vertices {" << join(h.f_vertices) << "}; directed {"
     << directed_list(h.f_directed) << "}; bidirected {"
     << bidirected_list(h.f_bidirected) << "}\n";
  os << "hedge F': vertices {" << join(h.fprime_vertices) << "}; directed {"
     << directed_list(h.fprime_directed) << "}; bidirected {"
     << bidirected_list(h.fprime_bidirected) << "}\n";
  os << "root set R: {" << join(h.r) << "}\n";
  return os.str();
}

nlohmann::json name_array(const VariableSet& s) {
  auto arr = nlohmann::json::array();
  for (const auto& v : s) arr.push_back(v.str());
  return arr;
}

// Cardinality map for verification models, with all flag validation up
// front: overrides must name vertices, be at least 2, and leave every query
// value inside its domain.
std::map<VariableId, int> verification_cards(const RunConfig& config,
                                             const Admg& g, const Query& q) {
  std::map<VariableId, int> cards;
  for (const auto& v : g.vertices()) cards.emplace(v, 2);
  for (const auto& token : config.cardinality) {
    const auto [v, value] = parse_valued(token);
    if (!value) {
      fail(errc::flag_error,
           "cardinality override '" + v.str() + "' needs NAME=K");
    }
    if (!g.has_vertex(v)) {
      fail(errc::flag_error,
           "cardinality override '" + v.str() + "' is not a vertex");
    }
    if (*value < 2) {
      fail(errc::flag_error,
           "cardinality for '" + v.str() + "' must be at least 2");
    }
    cards[v] = *value;
  }
  Assignment free = q.y;
  for (const auto& [v, value] : q.x) free.emplace(v, value);
  for (const auto& [v, value] : free) {
    if (value >= cards.at(v)) {
      fail(errc::flag_error, "value " + std::to_string(value) + " for '" +
                                 v.str() + "' exceeds its cardinality");
    }
  }
  return cards;
}

// Oracle verification of an identified estimand: seeded random models on the
// query's graph, exact truth vs symbolic evaluation against the model's data
// family. Returns the largest absolute error seen.
double verify_estimand(const RunConfig& config, const Admg& g, const Query& q,
                       const Estimand& e,
                       const std::map<VariableId, int>& cards) {
  Assignment free = q.y;
  for (const auto& [v, value] : q.x) free.emplace(v, value);
  double max_err = 0.0;
  for (int k = 0; k < config.verify_n; ++k) {
    const DiscreteScm m = random_scm(g, cards, config.seed + std::uint64_t(k));
    const DistributionFamily data = family(m, q.z);
    const double got = evaluate(e, free, data);
    const double want = truth(m, q.x, q.y);
    max_err = std::max(max_err, std::abs(got - want));
  }
  return max_err;
}

int run_identification(const RunConfig& config, const Admg& g, const Query& q,
                       std::ostream& out, std::ostream& err) {
  // Validate verification flags before deciding anything, so unusable input
  // is diagnosed even when the verdict would be negative.
  std::map<VariableId, int> cards;
  if (config.verify_n > 0) cards = verification_cards(config, g, q);

  const IdResult result = config.mode == "id" ? id(q, g) : idz(q, g);

  if (result.identified()) {
    std::optional<double> max_err;
    if (config.verify_n > 0) {
      max_err = verify_estimand(config, g, q, *result.estimand, cards);
    }
    if (config.format == "json") {
      auto body = nlohmann::json::parse(
          verdict_json(result, std::nullopt, std::nullopt));
      if (max_err) body["max_oracle_error"] = *max_err;
      out << body.dump(2) << "\n";
    } else {
      const RenderFormat fmt = config.format == "latex" ? RenderFormat::latex
                                                        : RenderFormat::text;
      out << render(*result.estimand, fmt) << "\n";
      if (max_err) out << "max oracle error: " << *max_err << "\n";
    }
    if (max_err && *max_err > kVerifyTolerance) {
      err << "verification failed: max oracle error " << *max_err << " > "
          << kVerifyTolerance << "\n";
      return 1;
    }
    return 0;
  }

  const Hedge h = extract_hedge(*result.failure, q);
  if (config.format == "json") {
    out << nlohmann::json::parse(verdict_json(result, h, std::nullopt)).dump(2)
        << "\n";
  } else {
    out << (config.mode == "id" ? "not identifiable\n"
                                : "not z-identifiable\n");
    out << hedge_text(h);
  }
  return 1;
}

int run_theorem3(const RunConfig& config, const Admg& g, const Query& q,
                 std::ostream& out) {
  const Thm3Verdict verdict = theorem3_zid(q, g);
  if (config.format == "json") {
    nlohmann::json body;
    body["verdict"] = verdict.zid ? "zid" : "not-zid";
    body["witness_subset"] =
        verdict.witness ? name_array(*verdict.witness) : nlohmann::json();
    body["subsets_checked"] = verdict.subsets_checked;
    out << body.dump(2) << "\n";
  } else if (verdict.zid) {
    out << "z-identifiable; witness surrogate subset {"
        << join(*verdict.witness) << "}\n";
  } else {
    out << "not z-identifiable; exhausted " << verdict.subsets_checked
        << " surrogate subsets\n";
  }
  return verdict.zid ? 0 : 1;
}

int run_pearl(const RunConfig& config, const Admg& g, const Query& q,
              std::ostream& out) {
  VariableSet yv, xv;
  for (const auto& [v, value] : q.y) yv.insert(v);
  for (const auto& [v, value] : q.x) xv.insert(v);
  const bool holds = pearl_criterion(g, xv, q.z, yv);
  if (config.format == "json") {
    nlohmann::json body;
    body["criterion"] = "pearl";
    body["holds"] = holds;
    out << body.dump(2) << "\n";
  } else {
    out << (holds ? "criterion holds: the full surrogate set certifies "
                    "z-identifiability\n"
                  : "criterion does not hold\n");
  }
  return holds ? 0 : 1;
}

int run_corollary2(const RunConfig& config, const Admg& g, const Query& q,
                   std::ostream& out) {
  VariableSet yv, xv;
  for (const auto& [v, value] : q.y) yv.insert(v);
  for (const auto& [v, value] : q.x) xv.insert(v);
  const bool rejected = corollary2_precheck(g, xv, yv, q.z);
  if (config.format == "json") {
    nlohmann::json body;
    body["criterion"] = "corollary2";
    body["provably_not_zid"] = rejected;
    out << body.dump(2) << "\n";
  } else {
    out << (rejected ? "provably not z-identifiable: the surrogates sit "
                       "below the treatment inside the outcome's ancestral "
                       "closure and the plain query is unidentifiable\n"
                     : "inconclusive: the quick rejection does not apply\n");
  }
  return rejected ? 1 : 0;
}

int run_check_rule(const RunConfig& config, const Admg& g, const Query& q,
                   std::ostream& out) {
  if (config.rule < 1 || config.rule > 3) {
    fail(errc::flag_error, "--rule must be 1, 2 or 3");
  }
  VariableSet yv, xv;
  for (const auto& [v, value] : q.y) yv.insert(v);
  for (const auto& [v, value] : q.x) xv.insert(v);
  const VariableSet zset = to_set(config.rule_z, "rule variable");
  const VariableSet wset = to_set(config.rule_w, "rule conditioning variable");
  bool ok = false;
  switch (config.rule) {
    case 1:
      ok = rule1_applicable(g, yv, xv, zset, wset);
      break;
    case 2:
      ok = rule2_applicable(g, yv, xv, zset, wset);
      break;
    default:
      ok = rule3_applicable(g, yv, xv, zset, wset);
      break;
  }
  if (config.format == "json") {
    nlohmann::json body;
    body["rule"] = config.rule;
    body["applicable"] = ok;
    out << body.dump(2) << "\n";
  } else {
    out << "rule " << config.rule << " applicable: " << (ok ? "yes" : "no")
        << "\n";
  }
  return ok ? 0 : 1;
}

int run_impl(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const bool known_mode =
      config.mode == "idz" || config.mode == "id" || config.mode == "thm3" ||
      config.mode == "pearl" || config.mode == "cor2" ||
      config.mode == "check-rule";
  if (!known_mode) {
    fail(errc::flag_error, "unknown mode '" + config.mode + "'");
  }
  if (config.format != "text" && config.format != "latex" &&
      config.format != "json") {
    fail(errc::flag_error, "unknown format '" + config.format + "'");
  }
  if (config.verify_n < 0) {
    fail(errc::flag_error, "--verify-n must be non-negative");
  }
  if (config.verify_n > 0 && config.mode != "idz" && config.mode != "id") {
    fail(errc::flag_error, "--verify-n applies to the idz and id modes only");
  }

  const Admg g = parse_graph(slurp(config.graph_path));

  Query q;
  q.y = to_assignment(config.outcome, "outcome", err);
  q.x = to_assignment(config.treatment, "treatment", err);
  q.z = to_set(config.surrogate, "surrogate");

  if (config.mode == "idz" || config.mode == "id") {
    return run_identification(config, g, q, out, err);
  }
  if (config.mode == "thm3") return run_theorem3(config, g, q, out);
  if (config.mode == "pearl") return run_pearl(config, g, q, out);
  if (config.mode == "cor2") return run_corollary2(config, g, q, out);
  return run_check_rule(config, g, q, out);
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(config, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace zid

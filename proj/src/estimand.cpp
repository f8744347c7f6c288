#include "zid/estimand.hpp"

#include <algorithm>
#include <cctype>
#include <nlohmann/json.hpp>
#include <set>
#include <utility>

namespace zid {

using nlohmann::json;

ValueBinding ValueBinding::constant(int value) {
  ValueBinding b;
  b.value_ = value;
  return b;
}

ValueBinding ValueBinding::reference(VariableId name) {
  ValueBinding b;
  b.ref_ = std::move(name);
  return b;
}

int ValueBinding::value() const {
  if (!is_constant()) {
    fail(errc::malformed_expression, "binding is a reference, not a constant");
  }
  return value_;
}

const VariableId& ValueBinding::ref() const {
  if (is_constant()) {
    fail(errc::malformed_expression, "binding is a constant, not a reference");
  }
  return *ref_;
}

VarBinding own_ref(const VariableId& v) {
  return VarBinding{v, ValueBinding::reference(v)};
}

struct Estimand::Node {
  Kind kind;
  // term
  Term term;
  // sum
  std::vector<VariableId> bound;
  std::optional<Estimand> body;
  // product
  std::vector<Estimand> factors;
  // ratio
  std::optional<Estimand> numerator;
  std::optional<Estimand> denominator;
};

namespace {

void check_disjoint_vars(const Term& t) {
  std::set<VariableId> seen;
  const auto visit = [&seen](const std::vector<VarBinding>& part,
                             const char* what) {
    for (const auto& vb : part) {
      if (!seen.insert(vb.var).second) {
        fail(errc::malformed_expression,
             std::string("term: variable ") + vb.var.str() + " repeats in " +
                 what + " position");
      }
    }
  };
  visit(t.outcome, "outcome");
  visit(t.conditioning, "conditioning");
  visit(t.regime.intervened, "regime");
}

}  // namespace

Estimand Estimand::term(Term t) {
  if (t.outcome.empty()) {
    fail(errc::malformed_expression, "term: outcome must be nonempty");
  }
  check_disjoint_vars(t);
  auto node = std::make_shared<Node>();
  node->kind = Kind::term;
  node->term = std::move(t);
  return Estimand(std::move(node));
}

Estimand Estimand::sum(std::vector<VariableId> bound, Estimand body) {
  std::set<VariableId> seen(bound.begin(), bound.end());
  if (seen.size() != bound.size()) {
    fail(errc::malformed_expression, "sum: duplicate bound variable");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::sum;
  node->bound = std::move(bound);
  node->body = std::move(body);
  return Estimand(std::move(node));
}

Estimand Estimand::product(std::vector<Estimand> factors) {
  if (factors.empty()) {
    fail(errc::malformed_expression, "product: no factors");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::product;
  node->factors = std::move(factors);
  return Estimand(std::move(node));
}

Estimand Estimand::ratio(Estimand numerator, Estimand denominator) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::ratio;
  node->numerator = std::move(numerator);
  node->denominator = std::move(denominator);
  return Estimand(std::move(node));
}

Estimand::Kind Estimand::kind() const noexcept { return node_->kind; }

const Term& Estimand::as_term() const {
  if (kind() != Kind::term) fail(errc::internal, "estimand: not a term");
  return node_->term;
}
const std::vector<VariableId>& Estimand::sum_bound() const {
  if (kind() != Kind::sum) fail(errc::internal, "estimand: not a sum");
  return node_->bound;
}
const Estimand& Estimand::sum_body() const {
  if (kind() != Kind::sum) fail(errc::internal, "estimand: not a sum");
  return *node_->body;
}
const std::vector<Estimand>& Estimand::factors() const {
  if (kind() != Kind::product) fail(errc::internal, "estimand: not a product");
  return node_->factors;
}
const Estimand& Estimand::numerator() const {
  if (kind() != Kind::ratio) fail(errc::internal, "estimand: not a ratio");
  return *node_->numerator;
}
const Estimand& Estimand::denominator() const {
  if (kind() != Kind::ratio) fail(errc::internal, "estimand: not a ratio");
  return *node_->denominator;
}

bool Estimand::operator==(const Estimand& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::term:
      return as_term() == other.as_term();
    case Kind::sum:
      return sum_bound() == other.sum_bound() && sum_body() == other.sum_body();
    case Kind::product:
      return factors() == other.factors();
    case Kind::ratio:
      return numerator() == other.numerator() &&
             denominator() == other.denominator();
  }
  return false;
}

int domain_cardinality(const DistributionFamily& data, const VariableId& v) {
  if (data.observational().has_variable(v)) return data.cardinality(v);
  const std::string& s = v.str();
  const auto pos = s.rfind('_');
  if (pos != std::string::npos && pos > 0 && pos + 1 < s.size()) {
    bool digits = true;
    for (std::size_t i = pos + 1; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
        digits = false;
        break;
      }
    }
    if (digits) {
      const VariableId base(s.substr(0, pos));
      if (data.observational().has_variable(base)) {
        return data.cardinality(base);
      }
    }
  }
  fail(errc::domain_mismatch,
       "no domain known for expression variable " + v.str());
}

namespace {

int resolve(const ValueBinding& b, const Assignment& env) {
  if (b.is_constant()) return b.value();
  const auto it = env.find(b.ref());
  if (it == env.end()) {
    fail(errc::unbound_variable,
         "no value bound for reference " + b.ref().str());
  }
  return it->second;
}

double evaluate_node(const Estimand& e, Assignment& env,
                     const DistributionFamily& data) {
  switch (e.kind()) {
    case Estimand::Kind::term: {
      const Term& t = e.as_term();
      Assignment regime;
      for (const auto& vb : t.regime.intervened) {
        regime[vb.var] = resolve(vb.binding, env);
      }
      const DistributionTable& table = data.table_for(regime);
      Assignment joint_event;
      Assignment cond_event;
      for (const auto& vb : t.conditioning) {
        const int v = resolve(vb.binding, env);
        joint_event[vb.var] = v;
        cond_event[vb.var] = v;
      }
      for (const auto& vb : t.outcome) {
        joint_event[vb.var] = resolve(vb.binding, env);
      }
      const double num = table.marginal(joint_event);
      if (cond_event.empty()) return num;
      const double den = table.marginal(cond_event);
      return den == 0.0 ? 0.0 : num / den;
    }
    case Estimand::Kind::sum: {
      const auto& bound = e.sum_bound();
      std::vector<int> cards;
      cards.reserve(bound.size());
      for (const auto& v : bound) {
        cards.push_back(domain_cardinality(data, v));
      }
      std::vector<std::pair<VariableId, std::optional<int>>> saved;
      for (const auto& v : bound) {
        const auto it = env.find(v);
        saved.emplace_back(v, it == env.end()
                                  ? std::nullopt
                                  : std::optional<int>(it->second));
      }
      std::vector<int> digit(bound.size(), 0);
      double acc = 0.0;
      while (true) {
        for (std::size_t i = 0; i < bound.size(); ++i) env[bound[i]] = digit[i];
        acc += evaluate_node(e.sum_body(), env, data);
        std::size_t k = bound.size();
        bool done = bound.empty();
        while (k > 0) {
          --k;
          if (++digit[k] < cards[k]) break;
          digit[k] = 0;
          if (k == 0) done = true;
        }
        if (done) break;
      }
      for (const auto& [v, old] : saved) {
        if (old.has_value()) {
          env[v] = *old;
        } else {
          env.erase(v);
        }
      }
      return acc;
    }
    case Estimand::Kind::product: {
      // Multiply in value order so the result cannot depend on how the
      // factors happen to be arranged in the tree.
      std::vector<double> values;
      values.reserve(e.factors().size());
      for (const auto& f : e.factors()) {
        values.push_back(evaluate_node(f, env, data));
      }
      std::sort(values.begin(), values.end());
      double acc = 1.0;
      for (double v : values) acc *= v;
      return acc;
    }
    case Estimand::Kind::ratio: {
      const double den = evaluate_node(e.denominator(), env, data);
      if (den == 0.0) return 0.0;
      return evaluate_node(e.numerator(), env, data) / den;
    }
  }
  fail(errc::internal, "estimand: unknown node kind");
}

}  // namespace

double evaluate(const Estimand& e, const Assignment& free,
                const DistributionFamily& data) {
  Assignment env = free;
  return evaluate_node(e, env, data);
}

namespace {

void collect_free(const Estimand& e, std::set<VariableId>& bound,
                  VariableSet& out) {
  switch (e.kind()) {
    case Estimand::Kind::term: {
      const Term& t = e.as_term();
      const auto visit = [&](const std::vector<VarBinding>& part) {
        for (const auto& vb : part) {
          if (!vb.binding.is_constant() && !bound.count(vb.binding.ref())) {
            out.insert(vb.binding.ref());
          }
        }
      };
      visit(t.outcome);
      visit(t.conditioning);
      visit(t.regime.intervened);
      return;
    }
    case Estimand::Kind::sum: {
      std::vector<VariableId> added;
      for (const auto& v : e.sum_bound()) {
        if (bound.insert(v).second) added.push_back(v);
      }
      collect_free(e.sum_body(), bound, out);
      for (const auto& v : added) bound.erase(v);
      return;
    }
    case Estimand::Kind::product:
      for (const auto& f : e.factors()) collect_free(f, bound, out);
      return;
    case Estimand::Kind::ratio:
      collect_free(e.numerator(), bound, out);
      collect_free(e.denominator(), bound, out);
      return;
  }
}

}  // namespace

VariableSet free_variables(const Estimand& e) {
  std::set<VariableId> bound;
  VariableSet out;
  collect_free(e, bound, out);
  return out;
}

namespace {

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string latex_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '_') out += '\\';
    out += c;
  }
  return out;
}

std::string binding_text(const VarBinding& vb, RenderFormat format) {
  const std::string name =
      vb.binding.is_constant() ? vb.var.str() : vb.binding.ref().str();
  const std::string low = lower(name);
  return format == RenderFormat::latex ? latex_escape(low) : low;
}

std::string join_bindings(const std::vector<VarBinding>& part,
                          RenderFormat format, const char* sep) {
  std::string out;
  for (const auto& vb : part) {
    if (!out.empty()) out += sep;
    out += binding_text(vb, format);
  }
  return out;
}

std::string render_node(const Estimand& e, RenderFormat format);

std::string render_child(const Estimand& e, RenderFormat format) {
  const std::string s = render_node(e, format);
  if (e.kind() == Estimand::Kind::term) return s;
  if (format == RenderFormat::latex) {
    if (e.kind() == Estimand::Kind::ratio) return s;  // \frac brackets itself
    return "\\left(" + s + "\\right)";
  }
  return "(" + s + ")";
}

std::string render_node(const Estimand& e, RenderFormat format) {
  const bool latex = format == RenderFormat::latex;
  switch (e.kind()) {
    case Estimand::Kind::term: {
      const Term& t = e.as_term();
      if (latex) {
        std::string inner = join_bindings(t.outcome, format, ", ");
        std::string tail;
        if (!t.conditioning.empty()) {
          tail = join_bindings(t.conditioning, format, ", ");
        }
        if (!t.regime.intervened.empty()) {
          if (!tail.empty()) tail += ", ";
          tail += "do(" + join_bindings(t.regime.intervened, format, ", ") +
                  ")";
        }
        if (!tail.empty()) inner += " \\mid " + tail;
        return "P(" + inner + ")";
      }
      std::string out = "P";
      if (!t.regime.intervened.empty()) {
        out += "[" + join_bindings(t.regime.intervened, format, ",") + "]";
      }
      out += "(" + join_bindings(t.outcome, format, ",");
      if (!t.conditioning.empty()) {
        out += "|" + join_bindings(t.conditioning, format, ",");
      }
      out += ")";
      return out;
    }
    case Estimand::Kind::sum: {
      std::string names;
      for (const auto& v : e.sum_bound()) {
        if (!names.empty()) names += ",";
        names += latex ? latex_escape(lower(v.str())) : lower(v.str());
      }
      const std::string head =
          latex ? "\\sum_{" + names + "} " : "sum_{" + names + "} ";
      return head + render_child(e.sum_body(), format);
    }
    case Estimand::Kind::product: {
      std::string out;
      for (const auto& f : e.factors()) {
        if (!out.empty()) out += latex ? " \\cdot " : " * ";
        out += render_child(f, format);
      }
      return out;
    }
    case Estimand::Kind::ratio: {
      if (latex) {
        return "\\frac{" + render_node(e.numerator(), format) + "}{" +
               render_node(e.denominator(), format) + "}";
      }
      return render_child(e.numerator(), format) + " / " +
             render_child(e.denominator(), format);
    }
  }
  fail(errc::internal, "estimand: unknown node kind");
}

}  // namespace

std::string render(const Estimand& e, RenderFormat format) {
  return render_node(e, format);
}

Estimand normalize(const Estimand& e) {
  switch (e.kind()) {
    case Estimand::Kind::term:
      return e;
    case Estimand::Kind::sum: {
      Estimand body = normalize(e.sum_body());
      if (e.sum_bound().empty()) return body;
      return Estimand::sum(e.sum_bound(), std::move(body));
    }
    case Estimand::Kind::product: {
      std::vector<Estimand> flat;
      for (const auto& f : e.factors()) {
        Estimand nf = normalize(f);
        if (nf.kind() == Estimand::Kind::product) {
          for (const auto& g : nf.factors()) flat.push_back(g);
        } else {
          flat.push_back(std::move(nf));
        }
      }
      if (flat.size() == 1) return flat.front();
      return Estimand::product(std::move(flat));
    }
    case Estimand::Kind::ratio:
      return Estimand::ratio(normalize(e.numerator()),
                             normalize(e.denominator()));
  }
  fail(errc::internal, "estimand: unknown node kind");
}

Estimand with_regime_value(const Estimand& e, const VariableId& var,
                           int value) {
  switch (e.kind()) {
    case Estimand::Kind::term: {
      Term t = e.as_term();
      for (auto& vb : t.regime.intervened) {
        if (vb.var == var) vb.binding = ValueBinding::constant(value);
      }
      return Estimand::term(std::move(t));
    }
    case Estimand::Kind::sum:
      return Estimand::sum(e.sum_bound(),
                           with_regime_value(e.sum_body(), var, value));
    case Estimand::Kind::product: {
      std::vector<Estimand> factors;
      for (const auto& f : e.factors()) {
        factors.push_back(with_regime_value(f, var, value));
      }
      return Estimand::product(std::move(factors));
    }
    case Estimand::Kind::ratio:
      return Estimand::ratio(with_regime_value(e.numerator(), var, value),
                             with_regime_value(e.denominator(), var, value));
  }
  fail(errc::internal, "estimand: unknown node kind");
}

namespace {

Estimand rename_node(const Estimand& e,
                     const std::map<VariableId, ValueBinding>& renames,
                     std::set<VariableId>& shadowed) {
  switch (e.kind()) {
    case Estimand::Kind::term: {
      Term t = e.as_term();
      const auto visit = [&](std::vector<VarBinding>& part) {
        for (auto& vb : part) {
          if (vb.binding.is_constant()) continue;
          const VariableId& r = vb.binding.ref();
          if (shadowed.count(r)) continue;
          const auto it = renames.find(r);
          if (it != renames.end()) {
            vb.binding = it->second;
          }
        }
      };
      visit(t.outcome);
      visit(t.conditioning);
      visit(t.regime.intervened);
      return Estimand::term(std::move(t));
    }
    case Estimand::Kind::sum: {
      std::vector<VariableId> added;
      for (const auto& v : e.sum_bound()) {
        if (shadowed.insert(v).second) added.push_back(v);
      }
      Estimand body = rename_node(e.sum_body(), renames, shadowed);
      for (const auto& v : added) shadowed.erase(v);
      return Estimand::sum(e.sum_bound(), std::move(body));
    }
    case Estimand::Kind::product: {
      std::vector<Estimand> factors;
      for (const auto& f : e.factors()) {
        factors.push_back(rename_node(f, renames, shadowed));
      }
      return Estimand::product(std::move(factors));
    }
    case Estimand::Kind::ratio: {
      Estimand num = rename_node(e.numerator(), renames, shadowed);
      Estimand den = rename_node(e.denominator(), renames, shadowed);
      return Estimand::ratio(std::move(num), std::move(den));
    }
  }
  fail(errc::internal, "estimand: unknown node kind");
}

void collect_binders(const Estimand& e, VariableSet& out) {
  switch (e.kind()) {
    case Estimand::Kind::term:
      return;
    case Estimand::Kind::sum:
      for (const auto& v : e.sum_bound()) out.insert(v);
      collect_binders(e.sum_body(), out);
      return;
    case Estimand::Kind::product:
      for (const auto& f : e.factors()) collect_binders(f, out);
      return;
    case Estimand::Kind::ratio:
      collect_binders(e.numerator(), out);
      collect_binders(e.denominator(), out);
      return;
  }
}

}  // namespace

Estimand rename_free_refs(const Estimand& e,
                          const std::map<VariableId, VariableId>& renames) {
  std::map<VariableId, ValueBinding> bindings;
  for (const auto& [from, to] : renames) {
    bindings.emplace(from, ValueBinding::reference(to));
  }
  std::set<VariableId> shadowed;
  return rename_node(e, bindings, shadowed);
}

Estimand bind_free_refs(const Estimand& e,
                        const std::map<VariableId, ValueBinding>& bindings) {
  std::set<VariableId> shadowed;
  return rename_node(e, bindings, shadowed);
}

VariableSet binder_names(const Estimand& e) {
  VariableSet out;
  collect_binders(e, out);
  return out;
}

namespace {

json binding_to_json(const VarBinding& vb) {
  json j;
  j["var"] = vb.var.str();
  if (vb.binding.is_constant()) {
    j["value"] = vb.binding.value();
  } else {
    j["ref"] = vb.binding.ref().str();
  }
  return j;
}

json node_to_json(const Estimand& e) {
  json j;
  switch (e.kind()) {
    case Estimand::Kind::term: {
      const Term& t = e.as_term();
      j["kind"] = "term";
      j["outcome"] = json::array();
      for (const auto& vb : t.outcome) j["outcome"].push_back(binding_to_json(vb));
      j["conditioning"] = json::array();
      for (const auto& vb : t.conditioning) {
        j["conditioning"].push_back(binding_to_json(vb));
      }
      j["regime"] = json::array();
      for (const auto& vb : t.regime.intervened) {
        j["regime"].push_back(binding_to_json(vb));
      }
      return j;
    }
    case Estimand::Kind::sum: {
      j["kind"] = "sum";
      j["bound"] = json::array();
      for (const auto& v : e.sum_bound()) j["bound"].push_back(v.str());
      j["body"] = node_to_json(e.sum_body());
      return j;
    }
    case Estimand::Kind::product: {
      j["kind"] = "product";
      j["factors"] = json::array();
      for (const auto& f : e.factors()) j["factors"].push_back(node_to_json(f));
      return j;
    }
    case Estimand::Kind::ratio: {
      j["kind"] = "ratio";
      j["numerator"] = node_to_json(e.numerator());
      j["denominator"] = node_to_json(e.denominator());
      return j;
    }
  }
  fail(errc::internal, "estimand: unknown node kind");
}

VarBinding binding_from_json(const json& j) {
  if (!j.is_object() || !j.contains("var") || !j["var"].is_string()) {
    fail(errc::malformed_expression, "binding: missing \"var\"");
  }
  VariableId var(j["var"].get<std::string>());
  if (j.contains("value")) {
    if (!j["value"].is_number_integer()) {
      fail(errc::malformed_expression, "binding: \"value\" must be an integer");
    }
    return VarBinding{std::move(var),
                      ValueBinding::constant(j["value"].get<int>())};
  }
  if (j.contains("ref")) {
    if (!j["ref"].is_string()) {
      fail(errc::malformed_expression, "binding: \"ref\" must be a string");
    }
    return VarBinding{std::move(var), ValueBinding::reference(VariableId(
                                          j["ref"].get<std::string>()))};
  }
  fail(errc::malformed_expression, "binding: needs \"value\" or \"ref\"");
}

std::vector<VarBinding> bindings_from_json(const json& j, const char* what) {
  if (!j.is_array()) {
    fail(errc::malformed_expression,
         std::string("expression: \"") + what + "\" must be an array");
  }
  std::vector<VarBinding> out;
  for (const auto& item : j) out.push_back(binding_from_json(item));
  return out;
}

Estimand node_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    fail(errc::malformed_expression, "expression: node needs a \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "term") {
    Term t;
    t.outcome = bindings_from_json(j.value("outcome", json::array()), "outcome");
    t.conditioning =
        bindings_from_json(j.value("conditioning", json::array()),
                           "conditioning");
    t.regime.intervened =
        bindings_from_json(j.value("regime", json::array()), "regime");
    return Estimand::term(std::move(t));
  }
  if (kind == "sum") {
    if (!j.contains("bound") || !j["bound"].is_array() || !j.contains("body")) {
      fail(errc::malformed_expression, "sum: needs \"bound\" and \"body\"");
    }
    std::vector<VariableId> bound;
    for (const auto& name : j["bound"]) {
      if (!name.is_string()) {
        fail(errc::malformed_expression, "sum: bound names must be strings");
      }
      bound.emplace_back(name.get<std::string>());
    }
    return Estimand::sum(std::move(bound), node_from_json(j["body"]));
  }
  if (kind == "product") {
    if (!j.contains("factors") || !j["factors"].is_array()) {
      fail(errc::malformed_expression, "product: needs \"factors\"");
    }
    std::vector<Estimand> factors;
    for (const auto& f : j["factors"]) factors.push_back(node_from_json(f));
    return Estimand::product(std::move(factors));
  }
  if (kind == "ratio") {
    if (!j.contains("numerator") || !j.contains("denominator")) {
      fail(errc::malformed_expression,
           "ratio: needs \"numerator\" and \"denominator\"");
    }
    return Estimand::ratio(node_from_json(j["numerator"]),
                           node_from_json(j["denominator"]));
  }
  fail(errc::malformed_expression, "expression: unknown kind \"" + kind + "\"");
}

}  // namespace

std::string to_json(const Estimand& e, int indent) {
  const json j = node_to_json(e);
  return indent < 0 ? j.dump() : j.dump(indent);
}

Estimand estimand_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    fail(errc::malformed_expression,
         std::string("expression: invalid JSON: ") + ex.what());
  }
  return node_from_json(j);
}

}  // namespace zid

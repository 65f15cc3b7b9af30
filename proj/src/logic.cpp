#include "skewlim/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "skewlim/errors.hpp"

namespace skewlim {

finite_structure::finite_structure(std::int64_t size, signature sig)
    : size_(size), sig_(std::move(sig)) {
  if (size < 1) throw malformed_input("universe must be nonempty");
}

void finite_structure::set_relation(const std::string& name,
                                    std::set<std::vector<std::int64_t>> tuples) {
  rel_[name] = std::move(tuples);
}

void finite_structure::set_function(const std::string& name,
                                    std::map<std::vector<std::int64_t>, std::int64_t> table) {
  fun_[name] = std::move(table);
}

void finite_structure::set_constant(const std::string& name, std::int64_t value) {
  con_[name] = value;
}

bool finite_structure::rel_holds(const std::string& name,
                                 const std::vector<std::int64_t>& args) const {
  auto it = rel_.find(name);
  if (it == rel_.end()) throw malformed_input("unknown relation '" + name + "'");
  return it->second.count(args) != 0;
}

std::int64_t finite_structure::fun_value(const std::string& name,
                                         const std::vector<std::int64_t>& args) const {
  auto it = fun_.find(name);
  if (it == fun_.end()) throw malformed_input("unknown function '" + name + "'");
  auto jt = it->second.find(args);
  if (jt == it->second.end())
    throw arity_mismatch("function '" + name + "' applied to a bad tuple");
  return jt->second;
}

std::int64_t finite_structure::constant(const std::string& name) const {
  auto it = con_.find(name);
  if (it == con_.end()) throw malformed_input("unknown constant '" + name + "'");
  return it->second;
}

void finite_structure::validate() const {
  std::set<std::string> names;
  auto fresh = [&](const std::string& n) {
    if (!names.insert(n).second) throw malformed_input("duplicate symbol '" + n + "'");
  };
  auto in_range = [&](std::int64_t v) { return v >= 0 && v < size_; };
  for (const auto& [name, arity] : sig_.relations) {
    fresh(name);
    if (arity < 1) throw malformed_input("relation arity must be >= 1");
    auto it = rel_.find(name);
    if (it == rel_.end()) throw malformed_input("missing table for relation '" + name + "'");
    for (const auto& t : it->second) {
      if (static_cast<int>(t.size()) != arity)
        throw malformed_input("tuple arity mismatch in relation '" + name + "'");
      for (std::int64_t v : t)
        if (!in_range(v)) throw malformed_input("tuple entry outside the universe");
    }
  }
  for (const auto& [name, arity] : sig_.functions) {
    fresh(name);
    if (arity < 1) throw malformed_input("function arity must be >= 1");
    auto it = fun_.find(name);
    if (it == fun_.end()) throw malformed_input("missing table for function '" + name + "'");
    std::int64_t expect = 1;
    for (int i = 0; i < arity; ++i) expect *= size_;
    if (static_cast<std::int64_t>(it->second.size()) != expect)
      throw malformed_input("function '" + name + "' is not total");
    for (const auto& [args, v] : it->second) {
      if (static_cast<int>(args.size()) != arity)
        throw malformed_input("argument arity mismatch in function '" + name + "'");
      for (std::int64_t x : args)
        if (!in_range(x)) throw malformed_input("argument outside the universe");
      if (!in_range(v)) throw malformed_input("function value outside the universe");
    }
  }
  for (const std::string& name : sig_.constants) {
    fresh(name);
    auto it = con_.find(name);
    if (it == con_.end()) throw malformed_input("missing value for constant '" + name + "'");
    if (!in_range(it->second)) throw malformed_input("constant outside the universe");
  }
}

nlohmann::json finite_structure::to_json() const {
  nlohmann::json rels = nlohmann::json::object();
  for (const auto& [name, arity] : sig_.relations) {
    nlohmann::json tuples = nlohmann::json::array();
    for (const auto& t : rel_.at(name)) tuples.push_back(t);
    rels[name] = {{"arity", arity}, {"tuples", tuples}};
  }
  nlohmann::json funs = nlohmann::json::object();
  for (const auto& [name, arity] : sig_.functions) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [args, v] : fun_.at(name)) {
      nlohmann::json row = args;
      row.push_back(v);
      rows.push_back(row);
    }
    funs[name] = {{"arity", arity}, {"table", rows}};
  }
  nlohmann::json cons = nlohmann::json::object();
  for (const std::string& name : sig_.constants) cons[name] = con_.at(name);
  return nlohmann::json{
      {"universe", size_}, {"relations", rels}, {"functions", funs}, {"constants", cons}};
}

finite_structure finite_structure::from_json(const nlohmann::json& j) {
  signature sig;
  for (auto it = j.at("relations").begin(); it != j.at("relations").end(); ++it)
    sig.relations.push_back({it.key(), it.value().at("arity").get<int>()});
  if (j.contains("functions"))
    for (auto it = j.at("functions").begin(); it != j.at("functions").end(); ++it)
      sig.functions.push_back({it.key(), it.value().at("arity").get<int>()});
  if (j.contains("constants"))
    for (auto it = j.at("constants").begin(); it != j.at("constants").end(); ++it)
      sig.constants.push_back(it.key());
  finite_structure m(j.at("universe").get<std::int64_t>(), sig);
  for (const auto& [name, arity] : sig.relations) {
    std::set<std::vector<std::int64_t>> tuples;
    for (const auto& t : j.at("relations").at(name).at("tuples"))
      tuples.insert(t.get<std::vector<std::int64_t>>());
    m.set_relation(name, std::move(tuples));
    (void)arity;
  }
  for (const auto& [name, arity] : sig.functions) {
    std::map<std::vector<std::int64_t>, std::int64_t> table;
    for (const auto& row : j.at("functions").at(name).at("table")) {
      std::vector<std::int64_t> args = row.get<std::vector<std::int64_t>>();
      if (static_cast<int>(args.size()) != arity + 1)
        throw malformed_input("function row must be arguments plus value");
      std::int64_t v = args.back();
      args.pop_back();
      table[std::move(args)] = v;
    }
    m.set_function(name, std::move(table));
  }
  for (const std::string& name : sig.constants)
    m.set_constant(name, j.at("constants").at(name).get<std::int64_t>());
  m.validate();
  return m;
}

formula_ptr make_rel(std::string name, std::vector<fo_term> args) {
  auto f = std::make_shared<formula>();
  f->kind = formula::node::rel;
  f->rel_name = std::move(name);
  f->terms = std::move(args);
  return f;
}

formula_ptr make_eq(fo_term a, fo_term b) {
  auto f = std::make_shared<formula>();
  f->kind = formula::node::eq;
  f->terms = {std::move(a), std::move(b)};
  return f;
}

namespace {

formula_ptr make_binary(formula::node k, formula_ptr a, formula_ptr b) {
  auto f = std::make_shared<formula>();
  f->kind = k;
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}

formula_ptr make_quant(formula::node k, int var, formula_ptr body) {
  auto f = std::make_shared<formula>();
  f->kind = k;
  f->var = var;
  f->lhs = std::move(body);
  return f;
}

}  // namespace

formula_ptr make_neg(formula_ptr a) {
  auto f = std::make_shared<formula>();
  f->kind = formula::node::neg;
  f->lhs = std::move(a);
  return f;
}

formula_ptr make_conj(formula_ptr a, formula_ptr b) {
  return make_binary(formula::node::conj, std::move(a), std::move(b));
}
formula_ptr make_disj(formula_ptr a, formula_ptr b) {
  return make_binary(formula::node::disj, std::move(a), std::move(b));
}
formula_ptr make_impl(formula_ptr a, formula_ptr b) {
  return make_binary(formula::node::impl, std::move(a), std::move(b));
}
formula_ptr make_forall(int var, formula_ptr body) {
  return make_quant(formula::node::forall, var, std::move(body));
}
formula_ptr make_exists(int var, formula_ptr body) {
  return make_quant(formula::node::exists, var, std::move(body));
}

namespace {

struct parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  }

  bool peek(std::string_view tok) {
    skip();
    return text.substr(pos, tok.size()) == tok;
  }

  bool eat(std::string_view tok) {
    if (!peek(tok)) return false;
    pos += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) throw syntax_error(pos, "expected '" + std::string(tok) + "'");
  }

  bool ident_start() {
    skip();
    return pos < text.size() &&
           (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_');
  }

  std::string ident() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (start == pos) throw syntax_error(pos, "expected an identifier");
    return std::string(text.substr(start, pos - start));
  }

  int variable_index(const std::string& name, std::size_t at) {
    if (name.size() < 2 || name[0] != 'x') return -1;
    for (std::size_t i = 1; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
    long v = std::stol(name.substr(1));
    if (v > 1'000'000) throw syntax_error(at, "variable index too large");
    return static_cast<int>(v);
  }

  fo_term term() {
    skip();
    std::size_t at = pos;
    std::string name = ident();
    int v = variable_index(name, at);
    if (v >= 0) {
      fo_term t;
      t.k = fo_term::kind::variable;
      t.var = v;
      return t;
    }
    fo_term t;
    t.name = name;
    if (eat("(")) {
      t.k = fo_term::kind::application;
      t.args.push_back(term());
      while (eat(",")) t.args.push_back(term());
      expect(")");
    } else {
      t.k = fo_term::kind::constant;
    }
    return t;
  }

  // after the first term of an atom, an infix relation token or '=' must
  // follow unless the term was itself a prefix relation application
  formula_ptr atom() {
    skip();
    std::size_t at = pos;
    fo_term first = term();
    skip();
    for (std::string_view op : {"<=", ">=", "<", ">"}) {
      if (text.substr(pos, op.size()) == op) {
        pos += op.size();
        return make_rel(std::string(op), {std::move(first), term()});
      }
    }
    if (pos < text.size() && text[pos] == '=') {
      ++pos;
      return make_eq(std::move(first), term());
    }
    if (first.k == fo_term::kind::application)
      return make_rel(std::move(first.name), std::move(first.args));
    throw syntax_error(at, "expected a relation application or an equality");
  }

  formula_ptr unary() {
    skip();
    if (eat("!")) return make_neg(unary());
    if (eat("(")) {
      formula_ptr f = implication();
      expect(")");
      return f;
    }
    for (auto [kw, kind] : {std::pair{"forall", formula::node::forall},
                            std::pair{"exists", formula::node::exists}}) {
      skip();
      std::size_t save = pos;
      if (!eat(kw)) continue;
      if (pos < text.size() && text[pos] != ' ') {  // identifier that merely starts with kw
        pos = save;
        continue;
      }
      std::size_t at = pos;
      std::string name = ident();
      int v = variable_index(name, at);
      if (v < 0) throw syntax_error(at, "expected a variable after quantifier");
      expect(".");
      return make_quant(kind, v, implication());
    }
    return atom();
  }

  formula_ptr conjunction() {
    formula_ptr f = unary();
    while (true) {
      skip();
      if (pos < text.size() && text[pos] == '&') {
        ++pos;
        f = make_conj(std::move(f), unary());
      } else {
        return f;
      }
    }
  }

  formula_ptr disjunction() {
    formula_ptr f = conjunction();
    while (true) {
      skip();
      if (pos < text.size() && text[pos] == '|') {
        ++pos;
        f = make_disj(std::move(f), conjunction());
      } else {
        return f;
      }
    }
  }

  formula_ptr implication() {
    formula_ptr f = disjunction();
    if (eat("->")) return make_impl(std::move(f), implication());
    return f;
  }
};

std::string term_to_string(const fo_term& t) {
  switch (t.k) {
    case fo_term::kind::variable:
      return "x" + std::to_string(t.var);
    case fo_term::kind::constant:
      return t.name;
    case fo_term::kind::application: {
      std::string out = t.name + "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ",";
        out += term_to_string(t.args[i]);
      }
      return out + ")";
    }
  }
  return "";
}

bool is_infix_name(const std::string& name) {
  return name == "<=" || name == ">=" || name == "<" || name == ">";
}

}  // namespace

formula_ptr parse_formula(std::string_view text) {
  parser p{text};
  formula_ptr f = p.implication();
  p.skip();
  if (p.pos != text.size()) throw syntax_error(p.pos, "trailing characters after formula");
  return f;
}

std::string formula_to_string(const formula_ptr& phi) {
  switch (phi->kind) {
    case formula::node::rel:
      if (is_infix_name(phi->rel_name))
        return "(" + term_to_string(phi->terms[0]) + " " + phi->rel_name + " " +
               term_to_string(phi->terms[1]) + ")";
      else {
        std::string out = phi->rel_name + "(";
        for (std::size_t i = 0; i < phi->terms.size(); ++i) {
          if (i) out += ",";
          out += term_to_string(phi->terms[i]);
        }
        return out + ")";
      }
    case formula::node::eq:
      return "(" + term_to_string(phi->terms[0]) + " = " + term_to_string(phi->terms[1]) + ")";
    case formula::node::neg:
      return "!" + formula_to_string(phi->lhs);
    case formula::node::conj:
      return "(" + formula_to_string(phi->lhs) + " & " + formula_to_string(phi->rhs) + ")";
    case formula::node::disj:
      return "(" + formula_to_string(phi->lhs) + " | " + formula_to_string(phi->rhs) + ")";
    case formula::node::impl:
      return "(" + formula_to_string(phi->lhs) + " -> " + formula_to_string(phi->rhs) + ")";
    // parenthesized because the quantifier body extends maximally on parse
    case formula::node::forall:
      return "(forall x" + std::to_string(phi->var) + ". " + formula_to_string(phi->lhs) + ")";
    case formula::node::exists:
      return "(exists x" + std::to_string(phi->var) + ". " + formula_to_string(phi->lhs) + ")";
  }
  return "";
}

bool formula_equal(const formula_ptr& a, const formula_ptr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case formula::node::rel:
      return a->rel_name == b->rel_name && a->terms == b->terms;
    case formula::node::eq:
      return a->terms == b->terms;
    case formula::node::neg:
      return formula_equal(a->lhs, b->lhs);
    case formula::node::conj:
    case formula::node::disj:
    case formula::node::impl:
      return formula_equal(a->lhs, b->lhs) && formula_equal(a->rhs, b->rhs);
    case formula::node::forall:
    case formula::node::exists:
      return a->var == b->var && formula_equal(a->lhs, b->lhs);
  }
  return false;
}

namespace {

void term_vars(const fo_term& t, std::set<int>& out) {
  if (t.k == fo_term::kind::variable) out.insert(t.var);
  for (const fo_term& s : t.args) term_vars(s, out);
}

void free_vars_into(const formula_ptr& phi, std::set<int> bound, std::set<int>& out) {
  switch (phi->kind) {
    case formula::node::rel:
    case formula::node::eq: {
      std::set<int> vars;
      for (const fo_term& t : phi->terms) term_vars(t, vars);
      for (int v : vars)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case formula::node::neg:
      free_vars_into(phi->lhs, bound, out);
      return;
    case formula::node::conj:
    case formula::node::disj:
    case formula::node::impl:
      free_vars_into(phi->lhs, bound, out);
      free_vars_into(phi->rhs, bound, out);
      return;
    case formula::node::forall:
    case formula::node::exists:
      bound.insert(phi->var);
      free_vars_into(phi->lhs, std::move(bound), out);
      return;
  }
}

std::int64_t eval_term(const finite_structure& m, const fo_term& t, const assignment& env) {
  switch (t.k) {
    case fo_term::kind::variable: {
      auto it = env.find(t.var);
      if (it == env.end())
        throw unbound_variable("variable x" + std::to_string(t.var) + " has no value");
      return it->second;
    }
    case fo_term::kind::constant:
      return m.constant(t.name);
    case fo_term::kind::application: {
      std::vector<std::int64_t> args;
      for (const fo_term& s : t.args) args.push_back(eval_term(m, s, env));
      return m.fun_value(t.name, args);
    }
  }
  return 0;
}

bool eval_rec(const finite_structure& m, const formula_ptr& phi, assignment& env) {
  switch (phi->kind) {
    case formula::node::rel: {
      std::vector<std::int64_t> args;
      for (const fo_term& t : phi->terms) args.push_back(eval_term(m, t, env));
      return m.rel_holds(phi->rel_name, args);
    }
    case formula::node::eq:
      return eval_term(m, phi->terms[0], env) == eval_term(m, phi->terms[1], env);
    case formula::node::neg:
      return !eval_rec(m, phi->lhs, env);
    case formula::node::conj:
      return eval_rec(m, phi->lhs, env) && eval_rec(m, phi->rhs, env);
    case formula::node::disj:
      return eval_rec(m, phi->lhs, env) || eval_rec(m, phi->rhs, env);
    case formula::node::impl:
      return !eval_rec(m, phi->lhs, env) || eval_rec(m, phi->rhs, env);
    case formula::node::forall:
    case formula::node::exists: {
      bool want_all = phi->kind == formula::node::forall;
      auto prev = env.find(phi->var);
      bool had = prev != env.end();
      std::int64_t old = had ? prev->second : 0;
      bool result = want_all;
      for (std::int64_t v = 0; v < m.size(); ++v) {
        env[phi->var] = v;
        bool b = eval_rec(m, phi->lhs, env);
        if (want_all && !b) {
          result = false;
          break;
        }
        if (!want_all && b) {
          result = true;
          break;
        }
      }
      if (had)
        env[phi->var] = old;
      else
        env.erase(phi->var);
      return result;
    }
  }
  return false;
}

}  // namespace

std::set<int> free_variables(const formula_ptr& phi) {
  std::set<int> out;
  free_vars_into(phi, {}, out);
  return out;
}

bool eval_formula(const finite_structure& m, const formula_ptr& phi, const assignment& asg) {
  assignment env = asg;
  return eval_rec(m, phi, env);
}

std::int64_t ultrapower::class_of(const std::vector<std::int64_t>& g) const {
  for (std::size_t c = 0; c < reps.size(); ++c) {
    // agreement set of g and the representative is a member of the principal
    // ultrafilter at `point` exactly when they agree there
    if (reps[c][static_cast<std::size_t>(point)] == g[static_cast<std::size_t>(point)])
      return static_cast<std::int64_t>(c);
  }
  throw no_representative("no class matches the given function");
}

namespace {

std::vector<std::vector<std::int64_t>> all_functions(std::int64_t n, std::int64_t k) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> g(static_cast<std::size_t>(k), 0);
  while (true) {
    out.push_back(g);
    std::int64_t i = k - 1;
    while (i >= 0 && g[static_cast<std::size_t>(i)] == n - 1) {
      g[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) return out;
    ++g[static_cast<std::size_t>(i)];
  }
}

void all_tuples(std::int64_t n, int k, std::vector<std::int64_t>& cur,
                const std::function<void(const std::vector<std::int64_t>&)>& fn) {
  if (k == 0) {
    fn(cur);
    return;
  }
  for (std::int64_t v = 0; v < n; ++v) {
    cur.push_back(v);
    all_tuples(n, k - 1, cur, fn);
    cur.pop_back();
  }
}

}  // namespace

ultrapower finite_ultrapower(const finite_structure& m, std::int64_t index_size,
                             std::int64_t point) {
  m.validate();
  if (index_size < 1) throw malformed_input("index set must be nonempty");
  if (point < 0 || point >= index_size) throw malformed_input("point outside the index set");
  ultrapower up;
  up.index_size = index_size;
  up.point = point;
  // functions enumerate in lexicographic order, so the first member found for
  // each class is its lex-min representative
  for (const auto& g : all_functions(m.size(), index_size)) {
    bool fresh = true;
    for (const auto& r : up.reps)
      if (r[static_cast<std::size_t>(point)] == g[static_cast<std::size_t>(point)]) {
        fresh = false;
        break;
      }
    if (fresh) up.reps.push_back(g);
  }
  std::int64_t classes = static_cast<std::int64_t>(up.reps.size());
  finite_structure q(classes, m.sig());
  auto coordinate_tuple = [&](const std::vector<std::int64_t>& cls, std::int64_t i) {
    std::vector<std::int64_t> t;
    for (std::int64_t c : cls) t.push_back(up.reps[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)]);
    return t;
  };
  for (const auto& [name, arity] : m.sig().relations) {
    std::set<std::vector<std::int64_t>> tuples;
    std::vector<std::int64_t> cur;
    all_tuples(classes, arity, cur, [&](const std::vector<std::int64_t>& cls) {
      // truth set over the index set, then principal membership
      std::vector<std::int64_t> truth;
      for (std::int64_t i = 0; i < index_size; ++i)
        if (m.rel_holds(name, coordinate_tuple(cls, i))) truth.push_back(i);
      if (std::find(truth.begin(), truth.end(), point) != truth.end()) tuples.insert(cls);
    });
    q.set_relation(name, std::move(tuples));
  }
  for (const auto& [name, arity] : m.sig().functions) {
    std::map<std::vector<std::int64_t>, std::int64_t> table;
    std::vector<std::int64_t> cur;
    all_tuples(classes, arity, cur, [&](const std::vector<std::int64_t>& cls) {
      std::vector<std::int64_t> h;
      for (std::int64_t i = 0; i < index_size; ++i)
        h.push_back(m.fun_value(name, coordinate_tuple(cls, i)));
      table[cls] = up.class_of(h);
    });
    q.set_function(name, std::move(table));
  }
  for (const std::string& name : m.sig().constants) {
    std::vector<std::int64_t> h(static_cast<std::size_t>(index_size), m.constant(name));
    q.set_constant(name, up.class_of(h));
  }
  up.quotient = std::move(q);
  for (const auto& r : up.reps) up.collapse.push_back(r[static_cast<std::size_t>(point)]);
  return up;
}

bool los_check(const finite_structure& m, std::int64_t index_size, std::int64_t point,
               const formula_ptr& phi, const std::vector<std::vector<std::int64_t>>& gs) {
  std::set<int> free = free_variables(phi);
  for (int v : free)
    if (v < 0 || v >= static_cast<int>(gs.size()))
      throw arity_mismatch("free variable x" + std::to_string(v) + " has no function");
  for (const auto& g : gs)
    if (static_cast<std::int64_t>(g.size()) != index_size)
      throw arity_mismatch("function length must match the index set");
  ultrapower up = finite_ultrapower(m, index_size, point);
  assignment quotient_asg;
  for (std::size_t j = 0; j < gs.size(); ++j)
    quotient_asg[static_cast<int>(j)] = up.class_of(gs[j]);
  bool left = eval_formula(up.quotient, phi, quotient_asg);
  std::vector<std::int64_t> truth;
  for (std::int64_t i = 0; i < index_size; ++i) {
    assignment asg;
    for (std::size_t j = 0; j < gs.size(); ++j)
      asg[static_cast<int>(j)] = gs[j][static_cast<std::size_t>(i)];
    if (eval_formula(m, phi, asg)) truth.push_back(i);
  }
  bool right = std::find(truth.begin(), truth.end(), point) != truth.end();
  return left == right;
}

std::vector<std::int64_t> lift_map(const std::vector<std::int64_t>& e, std::int64_t index_size,
                                   std::int64_t point, const finite_structure& a,
                                   const finite_structure& b) {
  if (static_cast<std::int64_t>(e.size()) != a.size())
    throw malformed_input("map domain must cover the universe");
  for (std::int64_t v : e)
    if (v < 0 || v >= b.size()) throw malformed_input("map value outside the codomain");
  ultrapower ua = finite_ultrapower(a, index_size, point);
  ultrapower ub = finite_ultrapower(b, index_size, point);
  auto push = [&](const std::vector<std::int64_t>& g) {
    std::vector<std::int64_t> h;
    for (std::int64_t v : g) h.push_back(e[static_cast<std::size_t>(v)]);
    return h;
  };
  std::vector<std::int64_t> lifted;
  for (const auto& r : ua.reps) lifted.push_back(ub.class_of(push(r)));
  // representative independence, checked over every function
  for (const auto& g : all_functions(a.size(), index_size))
    if (ub.class_of(push(g)) != lifted[static_cast<std::size_t>(ua.class_of(g))])
      throw invalid_representative("lift disagrees across representatives");
  return lifted;
}

bool is_homomorphism(const std::vector<std::int64_t>& e, const finite_structure& a,
                     const finite_structure& b) {
  if (!(a.sig() == b.sig())) return false;
  auto push = [&](const std::vector<std::int64_t>& t) {
    std::vector<std::int64_t> out;
    for (std::int64_t v : t) out.push_back(e[static_cast<std::size_t>(v)]);
    return out;
  };
  bool ok = true;
  for (const auto& [name, arity] : a.sig().relations) {
    std::vector<std::int64_t> cur;
    all_tuples(a.size(), arity, cur, [&](const std::vector<std::int64_t>& t) {
      if (a.rel_holds(name, t) && !b.rel_holds(name, push(t))) ok = false;
    });
  }
  for (const auto& [name, arity] : a.sig().functions) {
    std::vector<std::int64_t> cur;
    all_tuples(a.size(), arity, cur, [&](const std::vector<std::int64_t>& t) {
      if (e[static_cast<std::size_t>(a.fun_value(name, t))] != b.fun_value(name, push(t)))
        ok = false;
    });
  }
  for (const std::string& name : a.sig().constants)
    if (e[static_cast<std::size_t>(a.constant(name))] != b.constant(name)) ok = false;
  return ok;
}

finite_structure binary_rel_structure(std::int64_t n, std::uint64_t bits) {
  signature sig;
  sig.relations.push_back({"R", 2});
  finite_structure m(n, sig);
  std::set<std::vector<std::int64_t>> tuples;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      if (bits >> (i * n + j) & 1u) tuples.insert({i, j});
  m.set_relation("R", std::move(tuples));
  return m;
}

std::vector<finite_structure> all_binary_structures(std::int64_t max_size) {
  std::vector<finite_structure> out;
  for (std::int64_t n = 1; n <= max_size; ++n)
    for (std::uint64_t bits = 0; bits < (1ull << (n * n)); ++bits)
      out.push_back(binary_rel_structure(n, bits));
  return out;
}

namespace {

fo_term rand_var(rng& gen, const std::vector<int>& avail) {
  fo_term t;
  t.k = fo_term::kind::variable;
  t.var = avail[static_cast<std::size_t>(gen.below(static_cast<std::int64_t>(avail.size())))];
  return t;
}

formula_ptr rand_formula_rec(rng& gen, int qdepth, int conns, std::vector<int>& avail,
                             int& fresh) {
  // an atom needs a variable in scope; quantify first when none is
  if (avail.empty() || (qdepth > 0 && gen.below(4) == 0)) {
    int v = fresh++;
    avail.push_back(v);
    formula_ptr body = rand_formula_rec(gen, qdepth - 1, conns, avail, fresh);
    avail.pop_back();
    return make_quant(gen.coin() ? formula::node::forall : formula::node::exists, v,
                      std::move(body));
  }
  if (conns > 0 && gen.below(3) > 0) {
    switch (gen.below(4)) {
      case 0:
        return make_neg(rand_formula_rec(gen, qdepth, conns - 1, avail, fresh));
      case 1:
        return make_conj(rand_formula_rec(gen, qdepth, conns - 1, avail, fresh),
                         rand_formula_rec(gen, qdepth, 0, avail, fresh));
      case 2:
        return make_disj(rand_formula_rec(gen, qdepth, conns - 1, avail, fresh),
                         rand_formula_rec(gen, qdepth, 0, avail, fresh));
      default:
        return make_impl(rand_formula_rec(gen, qdepth, conns - 1, avail, fresh),
                         rand_formula_rec(gen, qdepth, 0, avail, fresh));
    }
  }
  fo_term a = rand_var(gen, avail), b = rand_var(gen, avail);
  if (gen.coin()) return make_rel("R", {std::move(a), std::move(b)});
  return make_eq(std::move(a), std::move(b));
}

}  // namespace

formula_ptr random_formula(rng& gen, int quantifier_depth, int connectives, int free_vars) {
  std::vector<int> avail;
  for (int v = 0; v < free_vars; ++v) avail.push_back(v);
  int fresh = free_vars;
  return rand_formula_rec(gen, quantifier_depth, connectives, avail, fresh);
}

}  // namespace skewlim

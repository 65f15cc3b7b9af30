#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "skewlim/rng.hpp"

namespace skewlim {

struct signature {
  std::vector<std::pair<std::string, int>> relations;  // name, arity >= 1
  std::vector<std::pair<std::string, int>> functions;
  std::vector<std::string> constants;

  friend bool operator==(const signature&, const signature&) = default;
};

// structure over universe {0, ..., size-1} with total lookup tables
class finite_structure {
 public:
  finite_structure() = default;
  finite_structure(std::int64_t size, signature sig);

  std::int64_t size() const { return size_; }
  const signature& sig() const { return sig_; }

  void set_relation(const std::string& name, std::set<std::vector<std::int64_t>> tuples);
  void set_function(const std::string& name,
                    std::map<std::vector<std::int64_t>, std::int64_t> table);
  void set_constant(const std::string& name, std::int64_t value);

  bool rel_holds(const std::string& name, const std::vector<std::int64_t>& args) const;
  std::int64_t fun_value(const std::string& name, const std::vector<std::int64_t>& args) const;
  std::int64_t constant(const std::string& name) const;

  // totality of every table, values inside the universe
  void validate() const;

  nlohmann::json to_json() const;
  static finite_structure from_json(const nlohmann::json& j);

  friend bool operator==(const finite_structure&, const finite_structure&) = default;

 private:
  std::int64_t size_ = 1;
  signature sig_;
  std::map<std::string, std::set<std::vector<std::int64_t>>> rel_;
  std::map<std::string, std::map<std::vector<std::int64_t>, std::int64_t>> fun_;
  std::map<std::string, std::int64_t> con_;
};

struct fo_term {
  enum class kind { variable, constant, application };
  kind k = kind::variable;
  int var = 0;             // variable index for kind::variable
  std::string name;        // symbol name otherwise
  std::vector<fo_term> args;

  friend bool operator==(const fo_term&, const fo_term&) = default;
};

struct formula;
using formula_ptr = std::shared_ptr<const formula>;

struct formula {
  enum class node { rel, eq, neg, conj, disj, impl, forall, exists };
  node kind = node::eq;
  std::string rel_name;          // node::rel
  std::vector<fo_term> terms;    // rel arguments, or the two sides of eq
  formula_ptr lhs, rhs;          // children; quantifiers use lhs as body
  int var = 0;                   // bound variable index
};

formula_ptr make_rel(std::string name, std::vector<fo_term> args);
formula_ptr make_eq(fo_term a, fo_term b);
formula_ptr make_neg(formula_ptr a);
formula_ptr make_conj(formula_ptr a, formula_ptr b);
formula_ptr make_disj(formula_ptr a, formula_ptr b);
formula_ptr make_impl(formula_ptr a, formula_ptr b);
formula_ptr make_forall(int var, formula_ptr body);
formula_ptr make_exists(int var, formula_ptr body);

// grammar: variables x0,x1,...; "!" "&" "|" "->"; "forall xk." / "exists xk.";
// prefix relation application; infix "=" plus the order tokens <=, <, >=, >
// read as binary relation names
formula_ptr parse_formula(std::string_view text);
std::string formula_to_string(const formula_ptr& phi);
bool formula_equal(const formula_ptr& a, const formula_ptr& b);
std::set<int> free_variables(const formula_ptr& phi);

using assignment = std::map<int, std::int64_t>;

bool eval_formula(const finite_structure& m, const formula_ptr& phi, const assignment& asg);

// quotient of m^index_size by the principal ultrafilter at `point`
struct ultrapower {
  finite_structure quotient;
  std::vector<std::vector<std::int64_t>> reps;  // lex-min representative per class
  std::vector<std::int64_t> collapse;           // class -> rep(point)
  std::int64_t index_size = 1;
  std::int64_t point = 0;

  std::int64_t class_of(const std::vector<std::int64_t>& g) const;
};

ultrapower finite_ultrapower(const finite_structure& m, std::int64_t index_size,
                             std::int64_t point);

// both sides of the Los equivalence, computed independently:
// quotient satisfaction vs membership of the coordinatewise truth set
bool los_check(const finite_structure& m, std::int64_t index_size, std::int64_t point,
               const formula_ptr& phi, const std::vector<std::vector<std::int64_t>>& gs);

// [g] -> [e o g] between the two quotients; verified on every function, not
// just representatives
std::vector<std::int64_t> lift_map(const std::vector<std::int64_t>& e, std::int64_t index_size,
                                   std::int64_t point, const finite_structure& a,
                                   const finite_structure& b);

bool is_homomorphism(const std::vector<std::int64_t>& e, const finite_structure& a,
                     const finite_structure& b);

// sweep helpers: structures over one binary relation "R"
finite_structure binary_rel_structure(std::int64_t n, std::uint64_t bits);
std::vector<finite_structure> all_binary_structures(std::int64_t max_size);
formula_ptr random_formula(rng& gen, int quantifier_depth, int connectives, int free_vars);

}  // namespace skewlim

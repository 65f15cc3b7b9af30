#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "skewlim/epfunc.hpp"
#include "skewlim/term.hpp"
#include "skewlim/ultrafilter.hpp"

namespace skewlim {

inline constexpr std::int64_t default_rk_bound = 720;  // lcm-rich, covers all moduli <= 6

enum class rk_verdict { equivalent, unconfirmed };

std::string to_string(rk_verdict v);

// certificate for one Rudin-Keisler equivalence: f pushes u onto its image
// type and g pushes back, both checked on generators up to the bound
struct rk_witness {
  ep_function f;
  ep_function g;
  std::int64_t bound = 0;
  rk_verdict verdict = rk_verdict::unconfirmed;

  nlohmann::json to_json() const;
};

// the map n -> value of t at v1 = n, exact on every input
ep_function term_to_map(const term_ptr& t);

// does f push v onto u: uf_pushforward(f, v) and u agree on every generator
// scanned up to the bound
bool rk_le_check(const rep_ultrafilter& u, const rep_ultrafilter& v, const ep_function& f,
                 std::int64_t bound = default_rk_bound);

// certifies that pushing u along injective f is reversed by a left inverse
rk_witness rk_equiv_injective(const ep_function& f, const rep_ultrafilter& u,
                              std::int64_t bound = default_rk_bound);

enum class export_format { dot, json };

// the linear order of the terms mod u at rank k, equal terms merged into one
// node; dot emits a chain digraph, json an ordered list of node groups
std::string order_export(const std::vector<term_ptr>& terms, const rep_ultrafilter& u, int k,
                         export_format format);

}  // namespace skewlim

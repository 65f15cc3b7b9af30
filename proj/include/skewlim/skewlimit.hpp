#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "skewlim/logic.hpp"
#include "skewlim/ordinal.hpp"
#include "skewlim/report.hpp"
#include "skewlim/term.hpp"
#include "skewlim/ultrafilter.hpp"

namespace skewlim {

// Transfinite direct systems whose successor embeddings are lifts of the
// previous stage's embedding (skew) or plain diagonals.  Two carriers: the
// symbolic one is (omega, <=) modulo a profinite ultrafilter, the finite one
// a finite structure with a principal point, where everything collapses.

enum class embed_mode { skew, diagonal };

inline small_ordinal default_stage_cap() { return {2, 8}; }  // w*2+8

struct omega_carrier {
  rep_ultrafilter u;  // must be profinite
};

struct finite_carrier {
  finite_structure model;
  std::int64_t index_size = 1;
  std::int64_t point = 0;
};

// Representative of an element.  `stage` is 0 or a successor ordinal; an
// element of a limit stage is carried by a representative strictly below it
// (a thread).  `inner` has one entry per limit ordinal <= stage: payload
// levels 1..inner[0] name coordinates of finite stages, the next inner[1]
// levels name coordinates w+1..w+inner[1], and the topmost finite_part(stage)
// levels name the coordinates of the stage's own block.
struct sym_element {
  small_ordinal stage;
  std::vector<std::int64_t> inner;
  term_ptr payload;
};

class omega_system {
 public:
  omega_system(rep_ultrafilter u, small_ordinal alpha, embed_mode mode,
               small_ordinal cap = default_stage_cap());

  const rep_ultrafilter& u() const { return u_; }
  small_ordinal alpha() const { return alpha_; }
  embed_mode mode() const { return mode_; }

  // wrap a raw term as an element of the stage (a thread representative when
  // the stage is a limit); rank must fit the stage
  sym_element element(small_ordinal stage, const term_ptr& t) const;

  sym_element embed(small_ordinal beta, small_ordinal gamma, const sym_element& x) const;

  // canonical representative: normalized payload, and for a thread at a limit
  // the least successor-or-zero stage that carries it
  sym_element normalize_thread(const sym_element& x, small_ordinal lambda) const;

  // x and y as elements of the common stage (equality and order are decided
  // by aligning representatives and running the term order)
  order_verdict compare(small_ordinal stage, const sym_element& x, const sym_element& y) const;
  bool equal(small_ordinal stage, const sym_element& x, const sym_element& y) const;

  // image of a thread at limit `lambda` in stage lambda+1 computed from one
  // chosen successor-stage representative (the post-limit clause)
  sym_element leave_limit_with(const sym_element& rep, small_ordinal lambda) const;

  std::string describe(const sym_element& x) const;

 private:
  sym_element successor_step(const sym_element& x) const;
  sym_element leave_limit(const sym_element& x, small_ordinal lambda) const;
  term_ptr descend_term(term_ptr t) const;  // strip level 1, exactly mod u

  rep_ultrafilter u_;
  small_ordinal alpha_;
  embed_mode mode_;
  small_ordinal cap_;
};

// Finite carrier: every stage is a principal ultrapower of the previous one,
// so everything is isomorphic to the base model.  Stages are materialized up
// to `finite_depth` below omega and up to the finite part of alpha above it.
class finite_system {
 public:
  finite_system(finite_structure model, std::int64_t index_size, std::int64_t point,
                small_ordinal alpha, embed_mode mode,
                std::int64_t finite_depth = 8, small_ordinal cap = default_stage_cap());

  small_ordinal alpha() const { return alpha_; }
  embed_mode mode() const { return mode_; }
  const finite_structure& base() const { return stages_[0]; }
  std::int64_t index_size() const { return index_size_; }
  std::int64_t point() const { return point_; }
  std::int64_t finite_depth() const { return static_cast<std::int64_t>(stages_.size()) - 1; }
  std::int64_t high_depth() const { return static_cast<std::int64_t>(hi_stages_.size()) - 1; }

  // the structure at a materialized stage (limit stages live on the thread
  // normal forms, which are base elements)
  const finite_structure& stage_model(small_ordinal stage) const;

  std::int64_t embed(small_ordinal beta, small_ordinal gamma, std::int64_t x) const;

  // the isomorphism stage -> base inverting e_{0,stage}
  std::vector<std::int64_t> collapse_iso(small_ordinal stage) const;

  // stagewise agreement of the lifted and the diagonal successor embedding
  // (they coincide over a principal point; the separation witness fails here)
  bool successor_is_diagonal(std::int64_t finite_stage) const;

 private:
  const std::vector<std::int64_t>& succ_map(small_ordinal stage) const;

  std::int64_t index_size_;
  std::int64_t point_;
  small_ordinal alpha_;
  embed_mode mode_;
  std::vector<finite_structure> stages_;     // finite stages 0..finite_depth
  std::vector<std::vector<std::int64_t>> succ_;
  std::vector<finite_structure> hi_stages_;  // stages w..w+high_depth (w = base again)
  std::vector<std::vector<std::int64_t>> hi_succ_;
};

omega_system build_skew_system(const omega_carrier& c, small_ordinal alpha,
                               embed_mode mode = embed_mode::skew,
                               small_ordinal cap = default_stage_cap());
finite_system build_skew_system(const finite_carrier& c, small_ordinal alpha,
                                embed_mode mode = embed_mode::skew,
                                small_ordinal cap = default_stage_cap());

// e_{gamma delta} . e_{beta gamma} = e_{beta delta} on every sampled payload;
// payloads whose rank does not fit the first stage of a triple are skipped
audit_report check_coherence(const omega_system& sys, const std::vector<term_ptr>& payloads,
                             const std::vector<std::array<small_ordinal, 3>>& triples);
audit_report check_coherence(const finite_system& sys,
                             const std::vector<std::array<small_ordinal, 3>>& triples);

// the post-limit clause picks "some" representative; the audit shows the
// image at gamma+1 is independent of the choice
audit_report check_welldef_limit(const omega_system& sys, const sym_element& thread,
                                 small_ordinal gamma, const std::vector<sym_element>& choices);
std::vector<sym_element> default_rep_choices(const omega_system& sys, const sym_element& thread,
                                             small_ordinal gamma, int count);

// colimit view at a limit stage: elements are normalized threads
class limit_view {
 public:
  limit_view(const omega_system& sys, small_ordinal lambda);

  small_ordinal lambda() const { return lambda_; }
  sym_element inject(small_ordinal stage, const term_ptr& payload) const;
  bool equal(const sym_element& x, const sym_element& y) const;
  order_verdict compare(const sym_element& x, const sym_element& y) const;

 private:
  const omega_system* sys_;
  small_ordinal lambda_;
};

limit_view direct_limit(const omega_system& sys, small_ordinal lambda);

// Chain recognition.  A finite chain lists nested models M_0..M_k and the
// stagewise isomorphisms iota_b from the principal ultrapower of M_b onto
// M_{b+1}; the triangle, the squares, and the recursively constructed
// isomorphisms phi_b are verified exhaustively.  Throws diagram_violation.
struct finite_chain {
  std::vector<finite_structure> models;
  std::int64_t index_size = 1;
  std::int64_t point = 0;
  std::vector<std::vector<std::int64_t>> iotas;
};

finite_chain collapse_chain(const finite_structure& m, std::int64_t index_size,
                            std::int64_t point, int length);
nlohmann::json chain_to_json(const finite_chain& chain);
finite_chain chain_from_json(const nlohmann::json& j);

struct chain_result {
  audit_report checks;
  std::vector<std::vector<std::int64_t>> isos;  // phi_b : (M_0)_{a,b} -> M_b
};

chain_result verify_chain(const finite_chain& chain);

// The self-chain carried by the skew system: M_b := stage b, inclusions the
// stage embeddings, iota_b the identity.  Sample-based; the lift is verified
// slicewise against the successor embedding.  perturb_stage >= 0 installs a
// single-point perturbation of that iota (the negative control).
chain_result verify_chain(const omega_system& sys, int depth,
                          const std::vector<term_ptr>& sample, int perturb_stage = -1,
                          const term_ptr& perturb_at = nullptr);

struct remark1_report {
  bool separated = false;
  term_ptr witness_term, skew_image, diagonal_image;
  order_verdict verdict = order_verdict::equal;
  periodic_set equality_set;
  audit_report checks;
};

// the skew successor embedding out of stage 1 against the diagonal: separated
// over a profinite ultrafilter, never over a principal point
remark1_report remark1_witness(const rep_ultrafilter& u);
remark1_report remark1_witness(const finite_carrier& c);

// exhaustive isomorphism audit of every materialized stage against the base
audit_report check_finite_collapse(const finite_system& sys);

}  // namespace skewlim

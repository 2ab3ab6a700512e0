#ifndef BHCALC_PROOFCODES_HPP
#define BHCALC_PROOFCODES_HPP

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "bhcalc/collapse.hpp"

namespace bhcalc {

//---- context

// Everything a proof code is read against: the urelement base, the parameter
// bound for collection axioms, the stage order, and, when the stage order is
// the collapsed base, the collapse oracle.  Caches are per context.
struct Stage1 {
  Sequent l;
  Val o;                    // epsilon term over the stage order
  long long d = 0;          // strict bound on cut ranks
  Val h0;                   // epsilon term: collapse budget
  std::vector<Val> h1;      // finite set of stage points
  bool realizable = true;   // false marks a node the stage order cannot host
  std::string note;
};

struct ProofCtx {
  Base b;
  long long max_params = 2;
  LinearOrder alpha;
  std::optional<CollapseOracle> oracle;
  std::optional<long long> model_height;  // finite mode: exact evaluation height
  long long eval_fuel = 8;
  std::shared_ptr<ValMemo<std::shared_ptr<const Stage1>>> s1_cache =
      std::make_shared<ValMemo<std::shared_ptr<const Stage1>>>();
  std::shared_ptr<ValMemo<Val>> rule_cache = std::make_shared<ValMemo<Val>>();
};

inline ProofCtx make_finite_ctx(const Base& b, long long stages, long long max_params = 2) {
  ProofCtx cx;
  cx.b = b;
  cx.max_params = max_params;
  cx.alpha = make_fin_ord(stages);
  if (stages <= 3) cx.model_height = stages;
  return cx;
}

inline ProofCtx make_collapse_ctx(const Base& b, long long max_params = 2) {
  ProofCtx cx;
  cx.b = b;
  cx.max_params = max_params;
  cx.oracle = make_collapse_oracle(b, max_params);
  cx.alpha = cx.oracle->alpha;
  return cx;
}

//---- ordinal shorthands over the stage order

inline Val eps_nat(long long m) {
  if (m <= 0) return eps_zero();
  return mk(Tag::e_sum, std::vector<Val>((std::size_t)m, eps_zero()));
}

inline Val eps_omega_plus(const ProofCtx& cx, long long m) {
  return eps_add(cx.b, cx.alpha, big_omega(), eps_nat(m));
}

// The stage right above a finite set of stage points: over the collapsed base
// the collapse of the sum of their names, over a finite order the next index.
inline std::optional<Val> next_stage(const ProofCtx& cx, const std::vector<Val>& supp) {
  if (cx.oracle) {
    Val sum = eps_zero();
    for (std::size_t i = supp.size(); i-- > 0;)
      sum = eps_add(cx.b, cx.alpha, sum, eps_e(supp[i]));
    return btheta(sum);
  }
  long long m = -1;
  for (const Val& p : supp) m = std::max(m, p->num);
  Val cand = nat(m + 1);
  if (!cx.alpha.valid(cand)) return std::nullopt;
  return cand;
}

//---- rules

inline Val rule_true(const Val& phi) { return mk(Tag::r_true, {phi}); }
inline Val rule_and(const Val& phi) { return mk(Tag::r_and, {phi}); }
inline Val rule_or(const Val& phi, const Val& b) { return mk(Tag::r_or, {phi, b}); }
inline Val rule_cut(const Val& phi) { return mk(Tag::r_cut, {phi}); }
inline Val rule_ref(const Val& phi) { return mk(Tag::r_ref, {phi}); }
inline Val rule_rep(const Val& b) { return mk(Tag::r_rep, {b}); }

// For a reflection formula "exists w, forall x in b, exists y in w, theta",
// yields the pair (b, forall x in b exists y theta).
inline std::optional<std::pair<Val, Val>> ref_shape(const Val& psi) {
  if (psi->tag != Tag::f_ex) return std::nullopt;
  Val body = psi->kids[0];
  if (body->tag != Tag::f_ball) return std::nullopt;
  Val inner = body->kids[1];
  if (inner->tag != Tag::f_bex || !val_eq(inner->kids[0], fvar(psi->num)))
    return std::nullopt;
  if (!is_bounded(inner->kids[1])) return std::nullopt;
  Val relaxed = mk(Tag::f_ball, body->num,
                   {body->kids[0], mk(Tag::f_ex, inner->num, {inner->kids[1]})});
  return std::make_pair(body->kids[0], relaxed);
}

//---- truth of closed bounded formulas

// Worst-case sweep size of eval_formula: every unbounded quantifier ranges
// over the whole top level, every bounded one over at most the level below.
inline double eval_cost(const StageModel& m, const Val& phi) {
  double top = (double)m.levels.back().size();
  double member = m.height > 0 ? (double)m.levels[(std::size_t)m.height - 1].size() : 1.0;
  double cost = 1.0;
  std::function<void(const Val&)> go = [&](const Val& psi) {
    if (cost > 1e15) return;
    if (psi->tag == Tag::f_ex || psi->tag == Tag::f_all) cost *= top;
    if (psi->tag == Tag::f_bex || psi->tag == Tag::f_ball) cost *= std::max(member, 2.0);
    for (const Val& k : psi->kids)
      if (k->tag != Tag::f_var && k->tag != Tag::urelem && k->tag != Tag::l_stage &&
          k->tag != Tag::l_sep)
        go(k);
  };
  go(phi);
  return cost;
}

// Exact over a finite stage model when one is configured and the sweep is
// affordable; otherwise a fueled symbolic pass through the decomposition,
// inconclusive when an index set cannot be exhausted.
inline std::optional<bool> true_eval(const ProofCtx& cx, const Val& phi, long long fuel) {
  if (!fml_closed(phi)) return std::nullopt;
  if (cx.model_height) {
    const StageModel& m = stage_model(cx.b, *cx.model_height);
    if (eval_cost(m, phi) > 2e6) return std::nullopt;
    return eval_formula(m, phi);
  }
  if (fuel <= 0) return std::nullopt;
  std::optional<Decomposition> d = decompose(cx.b, cx.alpha, phi);
  if (!d) return std::nullopt;
  std::size_t budget = (std::size_t)std::max<long long>(2, cx.eval_fuel);
  std::vector<Val> idx = index_enumerate(cx.b, cx.alpha, d->iota, budget);
  bool exhaustive = idx.size() < budget;
  bool unknown = !exhaustive;
  for (const Val& a : idx) {
    std::optional<bool> v = true_eval(cx, d->instance(a), fuel - 1);
    if (!v) {
      unknown = true;
    } else if (*v != d->conjunctive) {
      return *v;  // a false conjunct or a true disjunct decides
    }
  }
  if (unknown) return std::nullopt;
  return d->conjunctive;
}

// Chooses the rule formula for a leaf: a definitely true member if there is
// one, else the first member not known false.
inline Val pick_true(const ProofCtx& cx, const Sequent& l) {
  for (const Val& phi : l)
    if (true_eval(cx, phi, 4) == std::optional<bool>(true)) return phi;
  for (const Val& phi : l)
    if (true_eval(cx, phi, 4) != std::optional<bool>(false)) return phi;
  return l.front();
}

//---- nodes of the base proof

// An address is a sequence of terms.  It walks the search tree until a "1" at
// an even position grafts the proof of the pending axiom; the remainder then
// follows the fixed node table of that proof.
struct BaseSem {
  bool ok = false;
  Sequent l;
  Val o;
  Val rule;
  bool realizable = true;
  std::string note;
};

namespace detail {

inline Val inst_of(const ProofCtx& cx, const Val& phi, const Val& a) {
  std::optional<Decomposition> d = decompose(cx.b, cx.alpha, phi);
  return d->instance(a);
}

inline bool in_index(const ProofCtx& cx, const Val& phi, const Val& a) {
  std::optional<Decomposition> d = decompose(cx.b, cx.alpha, phi);
  return d && index_contains(cx.b, cx.alpha, d->iota, a);
}

// the successor-axiom proof: root, witness node, truth leaf
inline BaseSem p0_node(const ProofCtx& cx, const std::vector<Val>& tau) {
  BaseSem s;
  Val ax = axiom(0, cx.max_params);
  if (tau.empty()) {
    s.ok = true;
    s.l = {ax};
    s.o = eps_omega_plus(cx, 0);
    s.rule = rule_and(ax);
    return s;
  }
  Val a = tau[0];
  if (!lterm_valid(cx.b, cx.alpha, a)) return s;
  Val phi1 = inst_of(cx, ax, a);
  std::optional<Val> beta = next_stage(cx, supp_L(cx.alpha, a));
  if (!beta) {
    s.ok = tau.size() == 1;
    s.l = {phi1};
    s.o = eps_zero();
    s.rule = rule_rep(mk(Tag::urelem, 0));
    s.realizable = false;
    s.note = "no stage above the support of " + lterm_show(cx.alpha, a);
    return s;
  }
  Val guard = mk(Tag::f_or, {mk(Tag::f_in, {fvar(0), fvar(1)}), mk(Tag::f_eq, {fvar(0), fvar(1)})});
  Val ba = lt_sep(cx.b, cx.alpha, *beta, guard, {a});
  if (tau.size() == 1) {
    s.ok = true;
    s.l = {phi1};
    s.o = eps_add(cx.b, cx.alpha, eps_e(*beta), eps_nat(1));
    s.rule = rule_or(phi1, ba);
    return s;
  }
  if (tau.size() == 2 && val_eq(tau[1], mk(Tag::urelem, 0))) {
    s.ok = true;
    s.l = {inst_of(cx, phi1, ba)};
    s.o = eps_zero();
    s.rule = rule_true(s.l[0]);
    return s;
  }
  return s;
}

// the collection proofs, one fixed spine per axiom
inline BaseSem pn_node(const ProofCtx& cx, std::uint64_t m, const std::vector<Val>& tau) {
  BaseSem s;
  Val u0 = mk(Tag::urelem, 0), u1 = mk(Tag::urelem, 1);
  if (m == 0) return p0_node(cx, tau);
  auto [k, th] = collection_entry(m - 1, cx.max_params);
  (void)th;
  Val F = axiom(m, cx.max_params);
  std::size_t i = 0;
  // the k+1 outer universals
  for (long long j = 0; j <= k; ++j, ++i) {
    if (i == tau.size()) {
      s.ok = true;
      s.l = {F};
      s.o = eps_omega_plus(cx, 8 + (k + 1 - j));
      s.rule = rule_and(F);
      return s;
    }
    if (!in_index(cx, F, tau[i])) return s;
    F = inst_of(cx, F, tau[i]);
  }
  Val b = tau[k];  // the instance of the collected set
  Val M = F, N = F->kids[0], P = F->kids[1];
  auto expect0 = [&](std::size_t at) { return at < tau.size() && val_eq(tau[at], u0); };
  if (i == tau.size()) {
    s.ok = true;
    s.l = {M};
    s.o = eps_omega_plus(cx, 8);
    s.rule = rule_or(M, u0);
    return s;
  }
  if (!expect0(i++)) return s;
  if (i == tau.size()) {
    s.ok = true;
    s.l = {N, M};
    s.o = eps_omega_plus(cx, 7);
    s.rule = rule_or(M, u1);
    return s;
  }
  if (!expect0(i++)) return s;
  if (i == tau.size()) {
    s.ok = true;
    s.l = {N, P};
    s.o = eps_omega_plus(cx, 6);
    s.rule = rule_ref(P);
    return s;
  }
  if (!expect0(i++)) return s;
  std::optional<std::pair<Val, Val>> rs = ref_shape(P);
  Val Q = rs->second;
  if (i == tau.size()) {
    s.ok = true;
    s.l = {N, Q};
    s.o = eps_omega_plus(cx, 5);
    s.rule = rule_and(Q);
    return s;
  }
  Val c = tau[i++];
  if (!in_index(cx, Q, c)) return s;
  Val Qc = inst_of(cx, Q, c), Nc = inst_of(cx, N, c);
  if (i == tau.size()) {
    s.ok = true;
    s.l = {N, Qc};
    s.o = eps_omega_plus(cx, 4);
    s.rule = rule_or(N, c);
    return s;
  }
  if (b->tag == Tag::l_sep) {
    // Qc is "not carved or some image", Nc is "carved and no image"
    if (!expect0(i++)) return s;
    if (i == tau.size()) {
      s.ok = true;
      s.l = {Nc, Qc};
      s.o = eps_omega_plus(cx, 3);
      s.rule = rule_or(Qc, u0);
      return s;
    }
    if (!expect0(i++)) return s;
    Val not_phi_c = inst_of(cx, Qc, u0), ex_th_c = inst_of(cx, Qc, u1);
    if (i == tau.size()) {
      s.ok = true;
      s.l = {Nc, not_phi_c, Qc};
      s.o = eps_omega_plus(cx, 2);
      s.rule = rule_or(Qc, u1);
      return s;
    }
    if (!expect0(i++)) return s;
    if (i == tau.size()) {
      s.ok = true;
      s.l = {Nc, not_phi_c, ex_th_c};
      s.o = eps_omega_plus(cx, 1);
      s.rule = rule_and(Nc);
      return s;
    }
    Val phi_c = inst_of(cx, Nc, u0), all_not_th_c = inst_of(cx, Nc, u1);
    if (val_eq(tau[i], u0)) {
      if (++i != tau.size()) return s;
      s.ok = true;
      s.l = {phi_c, not_phi_c};
      s.o = eps_zero();
      s.rule = rule_true(pick_true(cx, s.l));
      return s;
    }
    if (!val_eq(tau[i], u1)) return s;
    ++i;
    // fall through to the image search below the inner universal
    Val ex_th = ex_th_c;
    Val all_not = all_not_th_c;
    if (i == tau.size()) {
      s.ok = true;
      s.l = {all_not, ex_th};
      s.o = eps_omega_plus(cx, 0);
      s.rule = rule_and(all_not);
      return s;
    }
    Val d = tau[i++];
    if (!in_index(cx, all_not, d)) return s;
    Val not_th_cd = inst_of(cx, all_not, d);
    std::optional<Val> beta = next_stage(cx, supp_L(cx.alpha, d));
    if (i == tau.size()) {
      s.ok = true;
      s.l = {not_th_cd, ex_th};
      if (beta) {
        s.o = eps_add(cx.b, cx.alpha, eps_e(*beta), eps_nat(1));
      } else {
        s.o = eps_zero();
        s.realizable = false;
        s.note = "no stage above the support of " + lterm_show(cx.alpha, d);
      }
      s.rule = rule_or(ex_th, d);
      return s;
    }
    if (!expect0(i++) || i != tau.size()) return s;
    s.ok = true;
    s.l = {not_th_cd, inst_of(cx, ex_th, d)};
    s.o = eps_zero();
    s.rule = rule_true(pick_true(cx, s.l));
    return s;
  }
  // plain bound: Qc is the image existence, Nc the image-free universal
  if (!expect0(i++)) return s;
  if (i == tau.size()) {
    s.ok = true;
    s.l = {Nc, Qc};
    s.o = eps_omega_plus(cx, 0);
    s.rule = rule_and(Nc);
    return s;
  }
  Val d = tau[i++];
  if (!in_index(cx, Nc, d)) return s;
  Val not_th_cd = inst_of(cx, Nc, d);
  std::optional<Val> beta = next_stage(cx, supp_L(cx.alpha, d));
  if (i == tau.size()) {
    s.ok = true;
    s.l = {not_th_cd, Qc};
    if (beta) {
      s.o = eps_add(cx.b, cx.alpha, eps_e(*beta), eps_nat(1));
    } else {
      s.o = eps_zero();
      s.realizable = false;
      s.note = "no stage above the support of " + lterm_show(cx.alpha, d);
    }
    s.rule = rule_or(Qc, d);
    return s;
  }
  if (!expect0(i++) || i != tau.size()) return s;
  s.ok = true;
  s.l = {not_th_cd, inst_of(cx, Qc, d)};
  s.o = eps_zero();
  s.rule = rule_true(pick_true(cx, s.l));
  return s;
}

}  // namespace detail

inline BaseSem base_sem(const ProofCtx& cx, const Val& addr) {
  BaseSem bad;
  if (!addr || addr->tag != Tag::seq) return bad;
  Val u0 = mk(Tag::urelem, 0), u1 = mk(Tag::urelem, 1);
  // a "1" at an even position grafts the proof of the axiom cut there
  std::size_t g = addr->kids.size();
  for (std::size_t i = 0; i < addr->kids.size(); i += 2)
    if (val_eq(addr->kids[i], u1)) {
      g = i;
      break;
    }
  if (g < addr->kids.size()) {
    if (!st_valid(cx.b, cx.alpha, seq_prefix(addr, g), cx.max_params)) return bad;
    std::vector<Val> tau(addr->kids.begin() + g + 1, addr->kids.end());
    for (const Val& e : tau)
      if (!lterm_valid(cx.b, cx.alpha, e)) return bad;
    return detail::pn_node(cx, g / 2, tau);
  }
  std::optional<Sequent> walked = st_label(cx.b, cx.alpha, addr, cx.max_params);
  if (!walked) return bad;
  Sequent label = std::move(*walked);
  // a plain search-tree node
  BaseSem s;
  s.ok = true;
  s.l = label;
  s.o = eps_big_e(addr);
  std::size_t n = addr->kids.size();
  if (n % 2 == 0) {
    s.rule = rule_cut(axiom(n / 2, cx.max_params));
    return s;
  }
  auto [p0, p1, p2] = triple_unpair((n - 1) / 2);
  if (p0 >= label.size()) {
    s.rule = rule_rep(u0);
    return s;
  }
  std::optional<Decomposition> d = decompose(cx.b, cx.alpha, label[p0]);
  if (d && d->conjunctive) {
    s.rule = rule_and(label[p0]);
    return s;
  }
  std::vector<Val> x = supp_S(cx.alpha, seq_prefix(addr, p1));
  Val witness = en_L(cx.b, cx.alpha, x, p2);
  if (d && index_contains(cx.b, cx.alpha, d->iota, witness))
    s.rule = rule_or(label[p0], witness);
  else
    s.rule = rule_rep(u0);
  return s;
}

//---- proof codes

inline Val code_basic(const Val& addr) { return mk(Tag::c_basic, {addr}); }
inline Val code_inv(const Val& phi, const Val& a, const Val& P) {
  return mk(Tag::c_inv, {phi, a, P});
}
inline Val code_red(const Val& phi, const Val& P0, const Val& P1) {
  return mk(Tag::c_red, {phi, P0, P1});
}
inline Val code_elim(const Val& P) { return mk(Tag::c_cut, {P}); }
inline Val code_bnd(const Val& phi, const Val& gamma, const Val& P) {
  return mk(Tag::c_bnd, {phi, gamma, P});
}
inline Val code_clp(const Val& t, const Val& P) { return mk(Tag::c_clp, {t, P}); }

// A literal node for hand-built proofs: sequent, rule, ordinal, cut bound in
// num, collapse budget, point set, and children keyed by index terms.
inline Val code_lit(const Sequent& l, const Val& rule, const Val& o, long long d,
                    const Val& h0, const std::vector<Val>& h1,
                    const std::vector<Val>& indices, const std::vector<Val>& children) {
  return mk(Tag::c_lit, d,
            {seq(l), rule, o, h0, mk(Tag::fin_set, h1), seq(indices), seq(children)});
}

inline bool is_code(const Val& v) {
  switch (v ? v->tag : Tag::nat) {
    case Tag::c_basic:
    case Tag::c_inv:
    case Tag::c_red:
    case Tag::c_cut:
    case Tag::c_bnd:
    case Tag::c_clp:
    case Tag::c_lit:
      return true;
    default:
      return false;
  }
}

//---- membership in the good sets

enum class Cert { member, unknown };

// H_t(x): built from terms supported at or below x by closing under collapses
// of terms at or below t and under term formation over points already
// reached.  The certifier saturates a finite pool of candidate points: the x
// points, plus collapse points named inside s or t whose arguments certify
// recursively; a support point counts once it sits at or below a certified
// pool point.
inline Cert in_H(const ProofCtx& cx, const Val& s, const Val& t, const std::vector<Val>& x) {
  std::vector<Val> pool = x;
  if (cx.oracle) {
    std::vector<Val> stack = {s, t};
    std::unordered_set<Val, ValHash, ValEq> seen;
    while (!stack.empty()) {
      Val v = stack.back();
      stack.pop_back();
      if (!v || !seen.insert(v).second) continue;
      if (v->tag == Tag::b_theta) pool.push_back(v);
      for (const Val& k : v->kids) stack.push_back(k);
    }
  }
  std::vector<char> cert(pool.size(), 0);
  auto point_ok = [&](const Val& p) {
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (cert[i] && cx.alpha.cmp(p, pool[i]) != Ord::gt) return true;
    return false;
  };
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (const Val& xi : x)
      if (val_eq(pool[i], xi)) cert[i] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (cert[i] || pool[i]->tag != Tag::b_theta) continue;
      const Val& w = pool[i]->kids[0];
      if (eps_cmp(cx.b, cx.alpha, w, t) == Ord::gt) continue;
      bool all = true;
      for (const Val& r : supp_eps(cx.alpha, w))
        if (!point_ok(r)) all = false;
      if (all) {
        cert[i] = 1;
        grew = true;
      }
    }
  }
  for (const Val& r : supp_eps(cx.alpha, s))
    if (!point_ok(r)) return Cert::unknown;
  return Cert::member;
}

// Reference computation of the same sets by saturation over an explicit term
// universe, for cross-checking the certifier on small fragments.
inline std::vector<Val> brute_H(const ProofCtx& cx, const Val& t, const std::vector<Val>& x,
                                const std::vector<Val>& universe, int levels) {
  auto supp_at_most = [&](const Val& s, const std::vector<Val>& pts) {
    for (const Val& r : supp_eps(cx.alpha, s)) {
      bool hit = false;
      for (const Val& p : pts)
        if (cx.alpha.cmp(r, p) != Ord::gt) hit = true;
      if (!hit) return false;
    }
    return true;
  };
  auto supp_under_terms = [&](const Val& s, const std::vector<Val>& low) {
    for (const Val& r : supp_eps(cx.alpha, s)) {
      bool hit = false;
      for (const Val& w : low)
        if (eps_cmp(cx.b, cx.alpha, eps_e(r), w) != Ord::gt) hit = true;
      if (!hit) return false;
    }
    return true;
  };
  std::vector<Val> H;
  std::unordered_set<Val, ValHash, ValEq> mem;
  auto add = [&](const Val& s) {
    if (mem.insert(s).second) H.push_back(s);
  };
  for (const Val& s : universe)
    if (supp_at_most(s, x)) add(s);
  for (int lv = 0; lv < levels; ++lv) {
    std::vector<Val> snapshot = H;
    std::vector<Val> low;
    for (const Val& s : snapshot)
      if (eps_cmp(cx.b, cx.alpha, s, big_omega()) == Ord::lt) low.push_back(s);
    for (const Val& s : snapshot)
      if (eps_cmp(cx.b, cx.alpha, s, t) != Ord::gt) add(bar_theta(s));
    for (const Val& s : universe)
      if (supp_under_terms(s, low)) add(s);
  }
  return H;
}

//---- the two evaluation stages

inline std::shared_ptr<const Stage1> stage1_eval(const ProofCtx& cx, const Val& P);
inline Val rule_of(const ProofCtx& cx, const Val& P);
inline std::optional<Val> child_of(const ProofCtx& cx, const Val& P, const Val& a);

namespace detail {

inline Sequent seq_replace(const Sequent& l, const Val& from, const Val& to) {
  return seq_add(seq_remove(l, from), to);
}

inline Val rule_formula(const Val& rule) { return rule->kids[0]; }

// whether C_t may act: the sequent is essentially existential, the budget fits
// under t, and the points are certified; unknown certification defers.
inline Cert t_collapsing(const ProofCtx& cx, const std::shared_ptr<const Stage1>& s1,
                         const Val& t) {
  for (const Val& phi : s1->l)
    if (!is_sigma(phi)) return Cert::unknown;
  if (s1->d > 2) return Cert::unknown;
  if (eps_cmp(cx.b, cx.alpha, s1->h0, t) == Ord::gt) return Cert::unknown;
  for (const Val& r : s1->h1)
    if (in_H(cx, eps_e(r), t, {}) != Cert::member) return Cert::unknown;
  if (in_H(cx, t, t, {}) != Cert::member) return Cert::unknown;
  return Cert::member;
}

inline bool bnd_intended(const ProofCtx& cx, const std::shared_ptr<const Stage1>& s1,
                         const Val& phi, const Val& gamma) {
  return eps_cmp(cx.b, cx.alpha, s1->o, eps_e(gamma)) != Ord::gt || is_pi(phi);
}

}  // namespace detail

inline std::shared_ptr<const Stage1> stage1_eval(const ProofCtx& cx, const Val& P) {
  return cx.s1_cache->get_or_compute(P, [&]() -> std::shared_ptr<const Stage1> {
    auto out = std::make_shared<Stage1>();
    out->o = eps_zero();
    out->h0 = eps_zero();
    switch (P->tag) {
      case Tag::c_basic: {
        BaseSem s = base_sem(cx, P->kids[0]);
        if (!s.ok) {
          out->realizable = false;
          out->note = "not an address of the base proof";
          break;
        }
        out->l = s.l;
        out->o = s.o;
        out->d = cx.max_params + 6;
        out->h1 = supp_S(cx.alpha, P->kids[0]);
        out->realizable = s.realizable;
        out->note = s.note;
        break;
      }
      case Tag::c_inv: {
        auto in = stage1_eval(cx, P->kids[2]);
        const Val& phi = P->kids[0];
        const Val& a = P->kids[1];
        std::optional<Decomposition> d = decompose(cx.b, cx.alpha, phi);
        *out = *in;
        if (!d) {
          out->realizable = false;
          out->note = "inversion against a formula with no instances";
          break;
        }
        out->l = detail::seq_replace(in->l, phi, d->instance(a));
        out->h1 = fin_union(cx.alpha, out->h1, supp_L(cx.alpha, a));
        break;
      }
      case Tag::c_red: {
        auto in0 = stage1_eval(cx, P->kids[1]);
        auto in1 = stage1_eval(cx, P->kids[2]);
        const Val& phi = P->kids[0];
        Sequent merged = seq_remove(in0->l, negate(phi));
        for (const Val& psi : seq_remove(in1->l, phi)) merged = seq_add(merged, psi);
        out->l = merged;
        out->o = eps_add(cx.b, cx.alpha, in1->o, in0->o);
        out->d = std::max(std::max(in0->d, in1->d), rk(phi));
        out->h0 = eps_cmp(cx.b, cx.alpha, in0->h0, in1->h0) == Ord::lt ? in1->h0 : in0->h0;
        out->h1 = fin_union(cx.alpha, in0->h1, in1->h1);
        out->realizable = in0->realizable && in1->realizable;
        break;
      }
      case Tag::c_cut: {
        auto in = stage1_eval(cx, P->kids[0]);
        *out = *in;
        out->o = omega_pow(in->o);
        out->d = std::max<long long>(2, in->d - 1);
        break;
      }
      case Tag::c_bnd: {
        auto in = stage1_eval(cx, P->kids[2]);
        const Val& phi = P->kids[0];
        const Val& gamma = P->kids[1];
        *out = *in;
        if (detail::bnd_intended(cx, in, phi, gamma))
          out->l = detail::seq_replace(in->l, phi, relativize(phi, gamma));
        out->h1 = fin_union(cx.alpha, out->h1, {gamma});
        break;
      }
      case Tag::c_clp: {
        auto in = stage1_eval(cx, P->kids[1]);
        const Val& t = P->kids[0];
        *out = *in;
        if (detail::t_collapsing(cx, in, t) == Cert::member) {
          Val s = eps_add(cx.b, cx.alpha, t, omega_pow(in->o));
          out->o = bar_theta(s);
          out->d = 1;
          out->h0 = s;
          out->h1.clear();
        } else {
          out->note = "collapse not certified; wrapper inert";
        }
        break;
      }
      case Tag::c_lit: {
        out->l = P->kids[0]->kids;
        out->o = P->kids[2];
        out->d = P->num;
        out->h0 = P->kids[3];
        out->h1 = P->kids[4]->kids;
        break;
      }
      default:
        out->realizable = false;
        out->note = "not a proof code";
    }
    return out;
  });
}

inline Val rule_of(const ProofCtx& cx, const Val& P) {
  return cx.rule_cache->get_or_compute(P, [&]() -> Val {
    switch (P->tag) {
      case Tag::c_basic:
        return base_sem(cx, P->kids[0]).rule;
      case Tag::c_inv: {
        Val r = rule_of(cx, P->kids[2]);
        const Val& phi = P->kids[0];
        const Val& a = P->kids[1];
        if (!r) return r;
        if (r->tag == Tag::r_and && val_eq(r->kids[0], phi)) return rule_rep(a);
        if (r->tag == Tag::r_true && val_eq(r->kids[0], phi))
          return rule_true(detail::inst_of(cx, phi, a));
        return r;
      }
      case Tag::c_red: {
        Val r0 = rule_of(cx, P->kids[1]);
        const Val& phi = P->kids[0];
        if (r0 && r0->tag == Tag::r_or && val_eq(r0->kids[0], negate(phi)))
          return rule_cut(detail::inst_of(cx, phi, r0->kids[1]));
        return r0;
      }
      case Tag::c_cut: {
        Val r = rule_of(cx, P->kids[0]);
        if (r && r->tag == Tag::r_cut && rk(r->kids[0]) >= 2)
          return rule_rep(mk(Tag::urelem, 0));
        return r;
      }
      case Tag::c_bnd: {
        Val r = rule_of(cx, P->kids[2]);
        auto in = stage1_eval(cx, P->kids[2]);
        const Val& phi = P->kids[0];
        const Val& gamma = P->kids[1];
        if (!r || !detail::bnd_intended(cx, in, phi, gamma)) return r;
        if (r->tag == Tag::r_and && val_eq(r->kids[0], phi))
          return rule_and(relativize(phi, gamma));
        if (r->tag == Tag::r_or && val_eq(r->kids[0], phi))
          return rule_or(relativize(phi, gamma), r->kids[1]);
        return r;
      }
      case Tag::c_clp: {
        const Val& t = P->kids[0];
        const Val& Q = P->kids[1];
        Val r = rule_of(cx, Q);
        auto in = stage1_eval(cx, Q);
        if (!r || detail::t_collapsing(cx, in, t) != Cert::member) return r;
        if (r->tag == Tag::r_cut) {
          const Val& phi = r->kids[0];
          std::optional<Decomposition> d = decompose(cx.b, cx.alpha, phi);
          bool conj = d && d->conjunctive;
          std::optional<Val> side = child_of(cx, Q, mk(Tag::urelem, conj ? 0 : 1));
          if (!side) return r;
          Val s = eps_add(cx.b, cx.alpha, t, omega_pow(stage1_eval(cx, *side)->o));
          return rule_cut(relativize(phi, btheta(s)));
        }
        if (r->tag == Tag::r_ref) {
          std::optional<Val> under = child_of(cx, Q, mk(Tag::urelem, 0));
          if (!under) return r;
          Val gamma = btheta(eps_add(cx.b, cx.alpha, t, omega_pow(stage1_eval(cx, *under)->o)));
          return rule_or(r->kids[0], lt_stage(cx.alpha, gamma));
        }
        return r;
      }
      case Tag::c_lit:
        return P->kids[1];
      default:
        return Val();
    }
  });
}

inline std::optional<Val> child_of(const ProofCtx& cx, const Val& P, const Val& a) {
  switch (P->tag) {
    case Tag::c_basic:
      return code_basic(seq_append(P->kids[0], a));
    case Tag::c_inv: {
      std::optional<Val> c = child_of(cx, P->kids[2], a);
      if (!c) return std::nullopt;
      return code_inv(P->kids[0], P->kids[1], *c);
    }
    case Tag::c_red: {
      const Val& phi = P->kids[0];
      Val r0 = rule_of(cx, P->kids[1]);
      if (r0 && r0->tag == Tag::r_or && val_eq(r0->kids[0], negate(phi))) {
        if (val_eq(a, mk(Tag::urelem, 1)))
          return code_inv(phi, r0->kids[1], P->kids[2]);
        std::optional<Val> c = child_of(cx, P->kids[1], a);
        if (!c) return std::nullopt;
        return code_red(phi, *c, P->kids[2]);
      }
      std::optional<Val> c = child_of(cx, P->kids[1], a);
      if (!c) return std::nullopt;
      return code_red(phi, *c, P->kids[2]);
    }
    case Tag::c_cut: {
      const Val& Q = P->kids[0];
      Val r = rule_of(cx, Q);
      if (r && r->tag == Tag::r_cut && rk(r->kids[0]) >= 2) {
        const Val& phi = r->kids[0];
        std::optional<Val> c0 = child_of(cx, Q, mk(Tag::urelem, 0));
        std::optional<Val> c1 = child_of(cx, Q, mk(Tag::urelem, 1));
        if (!c0 || !c1) return std::nullopt;
        std::optional<Decomposition> d = decompose(cx.b, cx.alpha, phi);
        if (d && d->conjunctive)
          return code_red(phi, code_elim(*c0), code_elim(*c1));
        return code_red(negate(phi), code_elim(*c1), code_elim(*c0));
      }
      std::optional<Val> c = child_of(cx, Q, a);
      if (!c) return std::nullopt;
      return code_elim(*c);
    }
    case Tag::c_bnd: {
      const Val& phi = P->kids[0];
      const Val& gamma = P->kids[1];
      const Val& Q = P->kids[2];
      auto in = stage1_eval(cx, Q);
      std::optional<Val> c = child_of(cx, Q, a);
      if (!c) return std::nullopt;
      if (!detail::bnd_intended(cx, in, phi, gamma)) return c;  // wrapper dropped
      Val r = rule_of(cx, Q);
      Val wrapped = code_bnd(phi, gamma, *c);
      if (r && ((r->tag == Tag::r_and && val_eq(r->kids[0], phi)) ||
                (r->tag == Tag::r_or && val_eq(r->kids[0], phi)))) {
        Val idx = r->tag == Tag::r_and ? a : r->kids[1];
        return code_bnd(detail::inst_of(cx, phi, idx), gamma, wrapped);
      }
      return wrapped;
    }
    case Tag::c_clp: {
      const Val& t = P->kids[0];
      const Val& Q = P->kids[1];
      auto in = stage1_eval(cx, Q);
      if (detail::t_collapsing(cx, in, t) != Cert::member)
        return child_of(cx, Q, a);  // wrapper dropped
      Val r = rule_of(cx, Q);
      if (r && r->tag == Tag::r_true) return P->kids[1];  // dummy, never asked
      if (r && r->tag == Tag::r_cut) {
        const Val& phi = r->kids[0];
        std::optional<Decomposition> d = decompose(cx.b, cx.alpha, phi);
        bool conj = d && d->conjunctive;
        std::optional<Val> side = child_of(cx, Q, mk(Tag::urelem, conj ? 0 : 1));
        std::optional<Val> c = child_of(cx, Q, a);
        if (!side || !c) return std::nullopt;
        Val s = eps_add(cx.b, cx.alpha, t, omega_pow(stage1_eval(cx, *side)->o));
        Val gm = btheta(s);
        bool sigma_side = val_eq(a, mk(Tag::urelem, conj ? 0 : 1));
        Val inner_phi = val_eq(a, mk(Tag::urelem, 1)) ? phi : negate(phi);
        if (sigma_side) return code_bnd(inner_phi, gm, code_clp(t, *c));
        return code_clp(s, code_bnd(inner_phi, gm, *c));
      }
      if (r && r->tag == Tag::r_ref) {
        std::optional<Val> c = child_of(cx, Q, mk(Tag::urelem, 0));
        if (!c) return std::nullopt;
        Val gamma = btheta(eps_add(cx.b, cx.alpha, t, omega_pow(stage1_eval(cx, *c)->o)));
        std::optional<std::pair<Val, Val>> rs = ref_shape(r->kids[0]);
        if (!rs) return std::nullopt;
        return code_bnd(rs->second, gamma, code_clp(t, *c));
      }
      std::optional<Val> c = child_of(cx, Q, a);
      if (!c) return std::nullopt;
      return code_clp(t, *c);
    }
    case Tag::c_lit: {
      const Val& idx = P->kids[5];
      const Val& kids = P->kids[6];
      for (std::size_t i = 0; i < idx->kids.size(); ++i)
        if (val_eq(idx->kids[i], a)) return kids->kids[i];
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

// The child indices a rule admits, up to `budget` of them.
inline std::vector<Val> child_indices(const ProofCtx& cx, const Val& P, std::size_t budget) {
  Val r = rule_of(cx, P);
  if (!r) return {};
  switch (r->tag) {
    case Tag::r_true:
      return {};
    case Tag::r_and: {
      std::optional<Decomposition> d = decompose(cx.b, cx.alpha, r->kids[0]);
      if (!d) return {};
      return index_enumerate(cx.b, cx.alpha, d->iota, budget);
    }
    case Tag::r_or:
    case Tag::r_ref:
      return {mk(Tag::urelem, 0)};
    case Tag::r_cut:
      return {mk(Tag::urelem, 0), mk(Tag::urelem, 1)};
    case Tag::r_rep:
      return {r->kids[0]};
    default:
      return {};
  }
}

//---- the local conditions

// Hard checks: the rule fits the sequent, ordinals strictly drop to children,
// sequent inclusions per rule, cut ranks under the bound, child bounds under
// the parent's.  Soft checks through the pending channel: truth of True rules
// and membership of budgets and supports in the good sets.
struct LocalReport {
  bool ok = true;
  bool pending = false;
  CheckReport rep;
};

inline LocalReport check_local(const ProofCtx& cx, const Val& P, std::size_t budget = 6) {
  LocalReport lr;
  auto s1 = stage1_eval(cx, P);
  Val r = rule_of(cx, P);
  auto hard = [&](bool cond, const std::string& msg) {
    if (!cond) {
      lr.ok = false;
      lr.rep.fail(msg);
    }
  };
  auto soft = [&](Cert c, const std::string& msg) {
    if (c != Cert::member) {
      lr.pending = true;
      lr.rep.note("pending: " + msg);
    }
  };
  if (!s1->realizable) {
    lr.pending = true;
    lr.rep.note("marked: " + s1->note);
    return lr;
  }
  hard(r != nullptr, "no rule");
  if (!r) return lr;
  std::vector<Val> kids_idx = child_indices(cx, P, budget);
  // rule fit
  switch (r->tag) {
    case Tag::r_true: {
      hard(seq_member(s1->l, r->kids[0]), "true formula not in the sequent");
      hard(is_bounded(r->kids[0]), "true formula not bounded");
      std::optional<bool> v = true_eval(cx, r->kids[0], 6);
      if (v)
        hard(*v, "true formula evaluates false");
      else
        soft(Cert::unknown, "truth of " + fml_show(cx.alpha, r->kids[0]));
      break;
    }
    case Tag::r_and: {
      hard(seq_member(s1->l, r->kids[0]), "conjunctive formula not in the sequent");
      std::optional<Decomposition> d = decompose(cx.b, cx.alpha, r->kids[0]);
      hard(d && d->conjunctive, "rule formula not conjunctive");
      break;
    }
    case Tag::r_or: {
      hard(seq_member(s1->l, r->kids[0]), "disjunctive formula not in the sequent");
      std::optional<Decomposition> d = decompose(cx.b, cx.alpha, r->kids[0]);
      hard(d && !d->conjunctive, "rule formula not disjunctive");
      if (d) hard(index_contains(cx.b, cx.alpha, d->iota, r->kids[1]), "witness outside the index");
      for (const Val& p : supp_L(cx.alpha, r->kids[1]))
        hard(eps_cmp(cx.b, cx.alpha, eps_e(p), s1->o) == Ord::lt,
             "witness support not below the ordinal");
      break;
    }
    case Tag::r_cut:
      hard(rk(r->kids[0]) < s1->d, "cut rank at or above the bound");
      break;
    case Tag::r_ref: {
      hard(seq_member(s1->l, r->kids[0]), "reflection formula not in the sequent");
      hard(ref_shape(r->kids[0]).has_value(), "not a reflection formula");
      hard(eps_cmp(cx.b, cx.alpha, big_omega(), s1->o) != Ord::gt,
           "reflection below the cap");
      break;
    }
    case Tag::r_rep:
      break;
    default:
      hard(false, "unknown rule");
  }
  // children
  for (const Val& a : kids_idx) {
    std::optional<Val> c = child_of(cx, P, a);
    if (!c) {
      hard(false, "missing child at " + lterm_show(cx.alpha, a));
      continue;
    }
    auto cs = stage1_eval(cx, *c);
    if (!cs->realizable) {
      lr.pending = true;
      lr.rep.note("marked child at " + lterm_show(cx.alpha, a) + ": " + cs->note);
      continue;
    }
    hard(eps_cmp(cx.b, cx.alpha, cs->o, s1->o) == Ord::lt, "child ordinal not smaller");
    hard(cs->d <= s1->d, "child cut bound above the parent's");
    Sequent allowed = s1->l;
    switch (r->tag) {
      case Tag::r_and:
        allowed = seq_add(allowed, detail::inst_of(cx, r->kids[0], a));
        break;
      case Tag::r_or:
        allowed = seq_add(allowed, detail::inst_of(cx, r->kids[0], r->kids[1]));
        break;
      case Tag::r_cut:
        allowed = seq_add(allowed, val_eq(a, mk(Tag::urelem, 0)) ? negate(r->kids[0])
                                                                 : r->kids[0]);
        break;
      case Tag::r_ref:
        allowed = seq_add(allowed, ref_shape(r->kids[0])->second);
        break;
      default:
        break;
    }
    hard(seq_subset(cs->l, allowed), "child sequent outside the rule");
    hard(eps_cmp(cx.b, cx.alpha, cs->h0, s1->h0) != Ord::gt,
         "child collapse budget above the parent's");
    std::vector<Val> xa = supp_L(cx.alpha, a);
    std::vector<Val> hx = fin_union(cx.alpha, s1->h1, xa);
    for (const Val& pnt : cs->h1)
      soft(in_H(cx, eps_e(pnt), s1->h0, hx),
           "child point " + cx.alpha.show(pnt) + " in the good set");
  }
  soft(in_H(cx, s1->o, s1->h0, s1->h1), "ordinal in the good set");
  if (r->tag == Tag::r_and || r->tag == Tag::r_or || r->tag == Tag::r_true ||
      r->tag == Tag::r_cut || r->tag == Tag::r_ref) {
    for (const Val& pnt : supp_formula(cx.alpha, r->kids[0]))
      soft(in_H(cx, eps_e(pnt), s1->h0, s1->h1), "rule formula support in the good set");
  }
  if (r->tag == Tag::r_or)
    for (const Val& pnt : supp_L(cx.alpha, r->kids[1]))
      soft(in_H(cx, eps_e(pnt), s1->h0, s1->h1), "witness support in the good set");
  return lr;
}

//---- expansion

struct ExpandNode {
  Val code;
  std::shared_ptr<const Stage1> s1;
  Val rule;
  LocalReport local;
  bool truncated = false;  // more child indices exist than were expanded
  std::vector<std::pair<Val, ExpandNode>> children;
};

inline ExpandNode expand(const ProofCtx& cx, const Val& P, int depth, std::size_t budget) {
  ExpandNode n;
  n.code = P;
  n.s1 = stage1_eval(cx, P);
  n.rule = rule_of(cx, P);
  n.local = check_local(cx, P, budget);
  if (depth <= 0) {
    n.truncated = !child_indices(cx, P, 1).empty();
    return n;
  }
  std::vector<Val> idx = child_indices(cx, P, budget + 1);
  if (idx.size() > budget) {
    n.truncated = true;
    idx.resize(budget);
  }
  for (const Val& a : idx) {
    std::optional<Val> c = child_of(cx, P, a);
    if (!c) continue;
    n.children.emplace_back(a, expand(cx, *c, depth - 1, budget));
  }
  return n;
}

//---- the collapse pipeline

// Eliminates cuts until the bound reaches two, then collapses at t.  The
// result proves the same sequent with an ordinal below the cap.
inline Val collapse_pipeline(const ProofCtx& cx, Val P, const Val& t) {
  auto s1 = stage1_eval(cx, P);
  for (long long d = s1->d; d > 2; --d) P = code_elim(P);
  return code_clp(t, P);
}

//---- semantic reading

// Follows the proof downward looking for a true member of the end sequent.
// True rules answer directly; cuts pick the child whose added formula is
// false; conjunctions try the formula itself first, then a falsifying child.
inline std::optional<Val> seek_true(const ProofCtx& cx, const Val& P, int fuel,
                                    std::size_t budget = 6) {
  if (fuel <= 0) return std::nullopt;
  Val r = rule_of(cx, P);
  if (!r) return std::nullopt;
  auto s1 = stage1_eval(cx, P);
  auto from_child = [&](const Val& a, const Val& absorbed) -> std::optional<Val> {
    std::optional<Val> c = child_of(cx, P, a);
    if (!c) return std::nullopt;
    std::optional<Val> w = seek_true(cx, *c, fuel - 1, budget);
    if (!w) return std::nullopt;
    if (absorbed && val_eq(*w, absorbed)) return std::nullopt;
    return w;
  };
  switch (r->tag) {
    case Tag::r_true:
      return r->kids[0];
    case Tag::r_rep:
      return from_child(r->kids[0], Val());
    case Tag::r_or: {
      std::optional<Val> w = from_child(mk(Tag::urelem, 0), Val());
      if (w && val_eq(*w, detail::inst_of(cx, r->kids[0], r->kids[1]))) return r->kids[0];
      return w;
    }
    case Tag::r_ref: {
      std::optional<Val> w = from_child(mk(Tag::urelem, 0), Val());
      if (w && val_eq(*w, ref_shape(r->kids[0])->second)) return r->kids[0];
      return w;
    }
    case Tag::r_cut: {
      std::optional<bool> v = true_eval(cx, r->kids[0], 6);
      if (v)
        return *v ? from_child(mk(Tag::urelem, 0), negate(r->kids[0]))
                  : from_child(mk(Tag::urelem, 1), r->kids[0]);
      std::optional<Val> w = from_child(mk(Tag::urelem, 0), negate(r->kids[0]));
      if (w) return w;
      return from_child(mk(Tag::urelem, 1), r->kids[0]);
    }
    case Tag::r_and: {
      if (true_eval(cx, r->kids[0], 6) == std::optional<bool>(true)) return r->kids[0];
      for (const Val& a : child_indices(cx, P, budget)) {
        Val inst = detail::inst_of(cx, r->kids[0], a);
        if (true_eval(cx, inst, 6) == std::optional<bool>(false)) {
          std::optional<Val> w = from_child(a, inst);
          if (w) return w;
        }
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

//---- text form

inline std::string rule_show(const ProofCtx& cx, const Val& r) {
  if (!r) return "none";
  switch (r->tag) {
    case Tag::r_true:
      return "True(" + fml_show(cx.alpha, r->kids[0]) + ")";
    case Tag::r_and:
      return "And(" + fml_show(cx.alpha, r->kids[0]) + ")";
    case Tag::r_or:
      return "Or(" + fml_show(cx.alpha, r->kids[0]) + ";" +
             lterm_show(cx.alpha, r->kids[1]) + ")";
    case Tag::r_cut:
      return "Cut(" + fml_show(cx.alpha, r->kids[0]) + ")";
    case Tag::r_ref:
      return "Ref(" + fml_show(cx.alpha, r->kids[0]) + ")";
    case Tag::r_rep:
      return "Rep(" + lterm_show(cx.alpha, r->kids[0]) + ")";
    default:
      return "?";
  }
}

inline std::string code_show(const ProofCtx& cx, const Val& P) {
  switch (P->tag) {
    case Tag::c_basic:
      return "basic" + st_show(cx.alpha, P->kids[0]);
    case Tag::c_inv:
      return "I[" + fml_show(cx.alpha, P->kids[0]) + ";" +
             lterm_show(cx.alpha, P->kids[1]) + "]" + code_show(cx, P->kids[2]);
    case Tag::c_red:
      return "R[" + fml_show(cx.alpha, P->kids[0]) + "](" +
             code_show(cx, P->kids[1]) + ")(" + code_show(cx, P->kids[2]) + ")";
    case Tag::c_cut:
      return "E" + code_show(cx, P->kids[0]);
    case Tag::c_bnd:
      return "B[" + fml_show(cx.alpha, P->kids[0]) + ";" + cx.alpha.show(P->kids[1]) +
             "]" + code_show(cx, P->kids[2]);
    case Tag::c_clp:
      return "C[" + eps_show(cx.alpha, P->kids[0]) + "]" + code_show(cx, P->kids[1]);
    case Tag::c_lit:
      return "lit";
    default:
      return "?";
  }
}

namespace detail {

// splits "a;b;c" at nesting depth zero over (), [], <>
inline std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && (s[i] == '(' || s[i] == '[' || s[i] == '<')) ++depth;
    if (i < s.size() && (s[i] == ')' || s[i] == ']' || s[i] == '>')) --depth;
    if (i == s.size() || (s[i] == sep && depth == 0)) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

// "[...]" balanced from `at`; returns the inside and advances past it
inline std::optional<std::string_view> bracket_body(std::string_view s, std::size_t& at,
                                                    char open, char close) {
  if (at >= s.size() || s[at] != open) return std::nullopt;
  int depth = 0;
  for (std::size_t i = at; i < s.size(); ++i) {
    if (s[i] == open) ++depth;
    if (s[i] == close) --depth;
    if (depth == 0) {
      std::string_view body = s.substr(at + 1, i - at - 1);
      at = i + 1;
      return body;
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline std::optional<Val> code_parse(const ProofCtx& cx, std::string_view text) {
  if (text.substr(0, 5) == "basic") {
    std::string_view rest = text.substr(5);
    if (rest.size() < 2 || rest.front() != '<' || rest.back() != '>') return std::nullopt;
    std::vector<Val> kids;
    if (rest.size() > 2)
      for (std::string_view piece : detail::split_top(rest.substr(1, rest.size() - 2), ';')) {
        std::optional<Val> t = lterm_parse(cx.b, cx.alpha, piece);
        if (!t) return std::nullopt;
        kids.push_back(*t);
      }
    Val addr = seq(std::move(kids));
    if (!base_sem(cx, addr).ok) return std::nullopt;
    return code_basic(addr);
  }
  if (text.substr(0, 1) == "E") {
    std::optional<Val> inner = code_parse(cx, text.substr(1));
    if (!inner) return std::nullopt;
    return code_elim(*inner);
  }
  if (text.substr(0, 2) == "I[") {
    std::size_t at = 1;
    std::optional<std::string_view> body = detail::bracket_body(text, at, '[', ']');
    if (!body) return std::nullopt;
    std::vector<std::string_view> parts = detail::split_top(*body, ';');
    if (parts.size() != 2) return std::nullopt;
    std::optional<Val> phi = fml_parse(cx.b, cx.alpha, parts[0]);
    std::optional<Val> a = lterm_parse(cx.b, cx.alpha, parts[1]);
    std::optional<Val> inner = code_parse(cx, text.substr(at));
    if (!phi || !a || !inner) return std::nullopt;
    return code_inv(*phi, *a, *inner);
  }
  if (text.substr(0, 2) == "R[") {
    std::size_t at = 1;
    std::optional<std::string_view> body = detail::bracket_body(text, at, '[', ']');
    if (!body) return std::nullopt;
    std::optional<Val> phi = fml_parse(cx.b, cx.alpha, *body);
    std::optional<std::string_view> p0 = detail::bracket_body(text, at, '(', ')');
    std::optional<std::string_view> p1 = detail::bracket_body(text, at, '(', ')');
    if (!phi || !p0 || !p1 || at != text.size()) return std::nullopt;
    std::optional<Val> c0 = code_parse(cx, *p0);
    std::optional<Val> c1 = code_parse(cx, *p1);
    if (!c0 || !c1) return std::nullopt;
    return code_red(*phi, *c0, *c1);
  }
  if (text.substr(0, 2) == "B[") {
    std::size_t at = 1;
    std::optional<std::string_view> body = detail::bracket_body(text, at, '[', ']');
    if (!body) return std::nullopt;
    std::vector<std::string_view> parts = detail::split_top(*body, ';');
    if (parts.size() != 2) return std::nullopt;
    std::optional<Val> phi = fml_parse(cx.b, cx.alpha, parts[0]);
    std::optional<Val> gamma = cx.alpha.parse(parts[1]);
    std::optional<Val> inner = code_parse(cx, text.substr(at));
    if (!phi || !gamma || !cx.alpha.valid(*gamma) || !inner) return std::nullopt;
    return code_bnd(*phi, *gamma, *inner);
  }
  if (text.substr(0, 2) == "C[") {
    std::size_t at = 1;
    std::optional<std::string_view> body = detail::bracket_body(text, at, '[', ']');
    if (!body) return std::nullopt;
    std::optional<Val> t = eps_parse(cx.b, cx.alpha, *body, cx.max_params);
    std::optional<Val> inner = code_parse(cx, text.substr(at));
    if (!t || !inner) return std::nullopt;
    return code_clp(*t, *inner);
  }
  return std::nullopt;
}

}  // namespace bhcalc

#endif

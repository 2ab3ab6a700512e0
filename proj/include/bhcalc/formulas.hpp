#ifndef BHCALC_FORMULAS_HPP
#define BHCALC_FORMULAS_HPP

#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bhcalc/lterms.hpp"

namespace bhcalc {

//---- negation normal form formulas

// Atoms relate two arguments, each either a variable or an inline term.
// Junctions are binary.  Quantifier nodes carry the bound variable id in
// num; bounded ones keep the bounding term as kid 0.

inline bool is_formula_tag(Tag t) {
  switch (t) {
    case Tag::f_in:
    case Tag::f_not_in:
    case Tag::f_eq:
    case Tag::f_neq:
    case Tag::f_and:
    case Tag::f_or:
    case Tag::f_bex:
    case Tag::f_ball:
    case Tag::f_ex:
    case Tag::f_all:
      return true;
    default:
      return false;
  }
}

inline bool arg_valid(const Base& b, const LinearOrder& X, const Val& a) {
  if (!a) return false;
  if (a->tag == Tag::f_var) return a->kids.empty() && a->num >= 0;
  return lterm_valid(b, X, a);
}

inline bool fml_valid(const Base& b, const LinearOrder& X, const Val& phi) {
  if (!phi) return false;
  switch (phi->tag) {
    case Tag::f_in:
    case Tag::f_not_in:
    case Tag::f_eq:
    case Tag::f_neq:
      return phi->kids.size() == 2 && arg_valid(b, X, phi->kids[0]) &&
             arg_valid(b, X, phi->kids[1]);
    case Tag::f_and:
    case Tag::f_or:
      return phi->kids.size() == 2 && fml_valid(b, X, phi->kids[0]) &&
             fml_valid(b, X, phi->kids[1]);
    case Tag::f_bex:
    case Tag::f_ball:
      return phi->kids.size() == 2 && phi->num >= 0 && arg_valid(b, X, phi->kids[0]) &&
             fml_valid(b, X, phi->kids[1]);
    case Tag::f_ex:
    case Tag::f_all:
      return phi->kids.size() == 1 && phi->num >= 0 && fml_valid(b, X, phi->kids[0]);
    default:
      return false;
  }
}

// De Morgan involution: swaps each tag with its dual and recurses below
// junctions and quantifiers; arguments are left alone.
inline Val negate(const Val& phi) {
  switch (phi->tag) {
    case Tag::f_in: return mk(Tag::f_not_in, phi->kids);
    case Tag::f_not_in: return mk(Tag::f_in, phi->kids);
    case Tag::f_eq: return mk(Tag::f_neq, phi->kids);
    case Tag::f_neq: return mk(Tag::f_eq, phi->kids);
    case Tag::f_and: return mk(Tag::f_or, {negate(phi->kids[0]), negate(phi->kids[1])});
    case Tag::f_or: return mk(Tag::f_and, {negate(phi->kids[0]), negate(phi->kids[1])});
    case Tag::f_bex:
      return mk(Tag::f_ball, phi->num, {phi->kids[0], negate(phi->kids[1])});
    case Tag::f_ball:
      return mk(Tag::f_bex, phi->num, {phi->kids[0], negate(phi->kids[1])});
    case Tag::f_ex: return mk(Tag::f_all, phi->num, {negate(phi->kids[0])});
    case Tag::f_all: return mk(Tag::f_ex, phi->num, {negate(phi->kids[0])});
    default:
      throw std::invalid_argument("negate: not a formula");
  }
}

//---- variables and substitution

inline void free_vars_into(const Val& phi, std::set<long long>& bound,
                           std::set<long long>& out) {
  auto arg = [&](const Val& a) {
    if (a->tag == Tag::f_var && !bound.count(a->num)) out.insert(a->num);
  };
  switch (phi->tag) {
    case Tag::f_in:
    case Tag::f_not_in:
    case Tag::f_eq:
    case Tag::f_neq:
      arg(phi->kids[0]);
      arg(phi->kids[1]);
      return;
    case Tag::f_and:
    case Tag::f_or:
      free_vars_into(phi->kids[0], bound, out);
      free_vars_into(phi->kids[1], bound, out);
      return;
    case Tag::f_bex:
    case Tag::f_ball: {
      arg(phi->kids[0]);
      bool fresh = bound.insert(phi->num).second;
      free_vars_into(phi->kids[1], bound, out);
      if (fresh) bound.erase(phi->num);
      return;
    }
    case Tag::f_ex:
    case Tag::f_all: {
      bool fresh = bound.insert(phi->num).second;
      free_vars_into(phi->kids[0], bound, out);
      if (fresh) bound.erase(phi->num);
      return;
    }
    default:
      throw std::invalid_argument("free_vars: not a formula");
  }
}

inline std::set<long long> free_vars(const Val& phi) {
  std::set<long long> bound, out;
  free_vars_into(phi, bound, out);
  return out;
}

inline bool fml_closed(const Val& phi) { return free_vars(phi).empty(); }

// Replaces free variables by terms; terms never contain formula variables,
// so no capture is possible, but shadowed ids stop the substitution.
inline Val subst(const Val& phi, const std::map<long long, Val>& sub) {
  if (sub.empty()) return phi;
  auto arg = [&](const Val& a) {
    if (a->tag == Tag::f_var) {
      auto it = sub.find(a->num);
      if (it != sub.end()) return it->second;
    }
    return a;
  };
  switch (phi->tag) {
    case Tag::f_in:
    case Tag::f_not_in:
    case Tag::f_eq:
    case Tag::f_neq:
      return mk(phi->tag, {arg(phi->kids[0]), arg(phi->kids[1])});
    case Tag::f_and:
    case Tag::f_or:
      return mk(phi->tag, {subst(phi->kids[0], sub), subst(phi->kids[1], sub)});
    case Tag::f_bex:
    case Tag::f_ball: {
      std::map<long long, Val> inner = sub;
      inner.erase(phi->num);
      return mk(phi->tag, phi->num, {arg(phi->kids[0]), subst(phi->kids[1], inner)});
    }
    case Tag::f_ex:
    case Tag::f_all: {
      std::map<long long, Val> inner = sub;
      inner.erase(phi->num);
      return mk(phi->tag, phi->num, {subst(phi->kids[0], inner)});
    }
    default:
      throw std::invalid_argument("subst: not a formula");
  }
}

inline Val subst1(const Val& phi, long long id, const Val& term) {
  return subst(phi, {{id, term}});
}

inline long long max_var_id(const Val& phi) {
  long long m = -1;
  if (phi->tag == Tag::f_var) return phi->num;
  if (is_formula_tag(phi->tag) || phi->tag == Tag::f_var) {
    if (phi->tag == Tag::f_bex || phi->tag == Tag::f_ball || phi->tag == Tag::f_ex ||
        phi->tag == Tag::f_all)
      m = phi->num;
    for (const Val& k : phi->kids)
      if (k->tag == Tag::f_var || is_formula_tag(k->tag))
        m = std::max(m, max_var_id(k));
  }
  return m;
}

// Applies an order map to every stage inside inline term arguments.
inline Val map_formula(const std::function<Val(const Val&)>& f, const Val& phi) {
  auto arg = [&](const Val& a) { return a->tag == Tag::f_var ? a : map_L(f, a); };
  switch (phi->tag) {
    case Tag::f_in:
    case Tag::f_not_in:
    case Tag::f_eq:
    case Tag::f_neq:
      return mk(phi->tag, {arg(phi->kids[0]), arg(phi->kids[1])});
    case Tag::f_and:
    case Tag::f_or:
      return mk(phi->tag, {map_formula(f, phi->kids[0]), map_formula(f, phi->kids[1])});
    case Tag::f_bex:
    case Tag::f_ball:
      return mk(phi->tag, phi->num, {arg(phi->kids[0]), map_formula(f, phi->kids[1])});
    case Tag::f_ex:
    case Tag::f_all:
      return mk(phi->tag, phi->num, {map_formula(f, phi->kids[0])});
    default:
      throw std::invalid_argument("map_formula: not a formula");
  }
}

inline std::vector<Val> supp_formula(const LinearOrder& X, const Val& phi) {
  std::vector<Val> out;
  auto arg = [&](const Val& a) {
    if (a->tag != Tag::f_var) out = fin_union(X, out, supp_L(X, a));
  };
  switch (phi->tag) {
    case Tag::f_in:
    case Tag::f_not_in:
    case Tag::f_eq:
    case Tag::f_neq:
      arg(phi->kids[0]);
      arg(phi->kids[1]);
      return out;
    case Tag::f_and:
    case Tag::f_or:
      return fin_union(X, supp_formula(X, phi->kids[0]), supp_formula(X, phi->kids[1]));
    case Tag::f_bex:
    case Tag::f_ball:
      arg(phi->kids[0]);
      return fin_union(X, out, supp_formula(X, phi->kids[1]));
    case Tag::f_ex:
    case Tag::f_all:
      return supp_formula(X, phi->kids[0]);
    default:
      throw std::invalid_argument("supp_formula: not a formula");
  }
}

//---- classification and relativization

inline bool is_bounded(const Val& phi) {
  switch (phi->tag) {
    case Tag::f_ex:
    case Tag::f_all:
      return false;
    case Tag::f_and:
    case Tag::f_or:
      return is_bounded(phi->kids[0]) && is_bounded(phi->kids[1]);
    case Tag::f_bex:
    case Tag::f_ball:
      return is_bounded(phi->kids[1]);
    default:
      return true;
  }
}

// Sigma: no unbounded universal quantifier; Pi: no unbounded existential.
inline bool is_sigma(const Val& phi) {
  switch (phi->tag) {
    case Tag::f_all: return false;
    case Tag::f_ex: return is_sigma(phi->kids[0]);
    case Tag::f_and:
    case Tag::f_or:
      return is_sigma(phi->kids[0]) && is_sigma(phi->kids[1]);
    case Tag::f_bex:
    case Tag::f_ball:
      return is_sigma(phi->kids[1]);
    default:
      return true;
  }
}

inline bool is_pi(const Val& phi) {
  switch (phi->tag) {
    case Tag::f_ex: return false;
    case Tag::f_all: return is_pi(phi->kids[0]);
    case Tag::f_and:
    case Tag::f_or:
      return is_pi(phi->kids[0]) && is_pi(phi->kids[1]);
    case Tag::f_bex:
    case Tag::f_ball:
      return is_pi(phi->kids[1]);
    default:
      return true;
  }
}

// phi^gamma: every unbounded quantifier now ranges over the stage L_gamma.
inline Val relativize(const Val& phi, const Val& gamma) {
  switch (phi->tag) {
    case Tag::f_in:
    case Tag::f_not_in:
    case Tag::f_eq:
    case Tag::f_neq:
      return phi;
    case Tag::f_and:
    case Tag::f_or:
      return mk(phi->tag, {relativize(phi->kids[0], gamma), relativize(phi->kids[1], gamma)});
    case Tag::f_bex:
    case Tag::f_ball:
      return mk(phi->tag, phi->num, {phi->kids[0], relativize(phi->kids[1], gamma)});
    case Tag::f_ex:
      return mk(Tag::f_bex, phi->num,
                {mk(Tag::l_stage, {gamma}), relativize(phi->kids[0], gamma)});
    case Tag::f_all:
      return mk(Tag::f_ball, phi->num,
                {mk(Tag::l_stage, {gamma}), relativize(phi->kids[0], gamma)});
    default:
      throw std::invalid_argument("relativize: not a formula");
  }
}

//---- rank

// Bounded formulas have rank zero; each unbounded quantifier adds one, a
// bounded quantifier over an unbounded body adds two, junctions with an
// unbounded side add one to the larger side.
inline long long rk(const Val& phi) {
  if (is_bounded(phi)) return 0;
  switch (phi->tag) {
    case Tag::f_and:
    case Tag::f_or:
      return std::max(rk(phi->kids[0]), rk(phi->kids[1])) + 1;
    case Tag::f_bex:
    case Tag::f_ball:
      return rk(phi->kids[1]) + 2;
    case Tag::f_ex:
    case Tag::f_all:
      return rk(phi->kids[0]) + 1;
    default:
      throw std::invalid_argument("rk: unbounded atom");
  }
}

//---- height

// Heights live in omega*(1+alpha) + omega: either a finite value, or
// omega*(1+s)+n for a stage s, or omega*(1+alpha)+n above every stage.
struct Ht {
  int kind = 0;  // 0 finite, 1 stage-based, 2 above all stages
  Val stage;     // kind 1 only
  long long off = 0;
};

inline Ht ht_fin(long long n) { return Ht{0, Val{}, n}; }
inline Ht ht_stage(const Val& s) { return Ht{1, s, 0}; }
inline Ht ht_whole() { return Ht{2, Val{}, 0}; }
inline Ht ht_add(Ht h, long long n) {
  h.off += n;
  return h;
}

inline Ord ht_cmp(const LinearOrder& X, const Ht& a, const Ht& b) {
  if (a.kind != b.kind) return ord_of_int(a.kind, b.kind);
  if (a.kind == 1) {
    Ord c = X.cmp(a.stage, b.stage);
    if (c != Ord::eq) return c;
  }
  return ord_of_int(a.off, b.off);
}

inline Ht ht_max(const LinearOrder& X, const Ht& a, const Ht& b) {
  return ht_cmp(X, a, b) == Ord::lt ? b : a;
}

inline std::string ht_show(const LinearOrder& X, const Ht& h) {
  std::string core = h.kind == 0 ? "" : h.kind == 1 ? "w*(1+" + X.show(h.stage) + ")" : "w*(1+alpha)";
  if (core.empty()) return std::to_string(h.off);
  if (h.off == 0) return core;
  return core + "+" + std::to_string(h.off);
}

inline Ht ht_term(const LinearOrder& X, const Val& t) {
  switch (t->tag) {
    case Tag::urelem:
    case Tag::f_var:
      return ht_fin(0);
    case Tag::l_stage:
    case Tag::l_sep:
      return ht_stage(t->kids[0]);
    default:
      throw std::invalid_argument("ht_term: not a term");
  }
}

inline Ht ht_formula(const LinearOrder& X, const Val& phi) {
  switch (phi->tag) {
    case Tag::f_in:
    case Tag::f_not_in:
      return ht_max(X, ht_add(ht_term(X, phi->kids[0]), 6),
                    ht_add(ht_term(X, phi->kids[1]), 1));
    case Tag::f_eq:
    case Tag::f_neq:
      return ht_add(ht_max(X, ht_max(X, ht_term(X, phi->kids[0]), ht_term(X, phi->kids[1])),
                           ht_fin(5)),
                    4);
    case Tag::f_and:
    case Tag::f_or:
      return ht_add(
          ht_max(X, ht_formula(X, phi->kids[0]), ht_formula(X, phi->kids[1])), 1);
    case Tag::f_bex:
    case Tag::f_ball: {
      Val body0 = subst1(phi->kids[1], phi->num, mk(Tag::urelem, 0));
      return ht_max(X, ht_term(X, phi->kids[0]), ht_add(ht_formula(X, body0), 2));
    }
    case Tag::f_ex:
    case Tag::f_all: {
      Val body0 = subst1(phi->kids[0], phi->num, mk(Tag::urelem, 0));
      return ht_max(X, ht_whole(), ht_add(ht_formula(X, body0), 1));
    }
    default:
      throw std::invalid_argument("ht_formula: not a formula");
  }
}

//---- decomposition into conjunctive and disjunctive families

// Every closed formula splits as a conjunction or disjunction of instances
// phi_a indexed by terms a; the index family is one of five shapes.
struct IndexDescriptor {
  enum class Kind { empty, pair, elements_of_urelem, supp_below, all_terms };
  Kind kind = Kind::empty;
  long long urelem = -1;  // elements_of_urelem
  Val stage;              // supp_below
};

struct Decomposition {
  bool conjunctive = false;
  IndexDescriptor iota;
  std::function<Val(const Val&)> instance;
};

inline bool index_contains(const Base& b, const LinearOrder& X, const IndexDescriptor& d,
                           const Val& a) {
  switch (d.kind) {
    case IndexDescriptor::Kind::empty:
      return false;
    case IndexDescriptor::Kind::pair:
      return a->tag == Tag::urelem && (a->num == 0 || a->num == 1);
    case IndexDescriptor::Kind::elements_of_urelem:
      return a->tag == Tag::urelem && a->num >= 0 &&
             a->num < (long long)b.urelems.size() &&
             hf_mem(b.urelems[(std::size_t)a->num], b.urelems[(std::size_t)d.urelem]);
    case IndexDescriptor::Kind::supp_below:
      return lterm_valid(b, X, a) && fin_below_elem(X, supp_L(X, a), d.stage);
    case IndexDescriptor::Kind::all_terms:
      return lterm_valid(b, X, a);
  }
  return false;
}

inline LinearOrder order_below(const LinearOrder& X, const Val& s) {
  LinearOrder O;
  O.name = X.name + "<" + X.show(s);
  O.valid = [X, s](const Val& v) { return X.valid(v) && X.cmp(v, s) == Ord::lt; };
  O.cmp = X.cmp;
  O.enumerate = [X, s](std::size_t budget) {
    std::vector<Val> out;
    for (const Val& v : X.enumerate(std::max<std::size_t>(4 * budget, 64))) {
      if (X.cmp(v, s) == Ord::lt) out.push_back(v);
      if (out.size() >= budget) break;
    }
    return out;
  };
  O.show = X.show;
  O.parse = [](std::string_view) -> std::optional<Val> { return std::nullopt; };
  return O;
}

inline std::vector<Val> index_enumerate(const Base& b, const LinearOrder& X,
                                        const IndexDescriptor& d, std::size_t budget) {
  switch (d.kind) {
    case IndexDescriptor::Kind::empty:
      return {};
    case IndexDescriptor::Kind::pair: {
      std::vector<Val> out{mk(Tag::urelem, 0)};
      if (budget > 1) out.push_back(mk(Tag::urelem, 1));
      return budget == 0 ? std::vector<Val>{} : out;
    }
    case IndexDescriptor::Kind::elements_of_urelem: {
      std::vector<Val> out;
      for (std::size_t i = 0; i < b.urelems.size() && out.size() < budget; ++i)
        if (hf_mem(b.urelems[i], b.urelems[(std::size_t)d.urelem]))
          out.push_back(mk(Tag::urelem, (long long)i));
      return out;
    }
    case IndexDescriptor::Kind::supp_below:
      return make_lterm_dilator(b).on_order(order_below(X, d.stage)).enumerate(budget);
    case IndexDescriptor::Kind::all_terms:
      return make_lterm_dilator(b).on_order(X).enumerate(budget);
  }
  return {};
}

// Instantiates a separation skeleton at the member a and the parameters.
inline Val skeleton_instance(const Val& sep_term, const Val& a) {
  std::map<long long, Val> m;
  m[0] = a;
  for (std::size_t i = 2; i < sep_term->kids.size(); ++i)
    m[(long long)(i - 1)] = sep_term->kids[i];
  return subst(sep_term->kids[1], m);
}

inline std::optional<Decomposition> decompose(const Base& b, const LinearOrder& X,
                                              const Val& phi) {
  Decomposition d;
  switch (phi->tag) {
    case Tag::f_or:
    case Tag::f_and: {
      d.conjunctive = phi->tag == Tag::f_and;
      d.iota.kind = IndexDescriptor::Kind::pair;
      d.instance = [l = phi->kids[0], r = phi->kids[1]](const Val& a) {
        return a->num == 0 ? l : r;
      };
      return d;
    }
    case Tag::f_eq:
    case Tag::f_neq: {
      // extensionality: sides indexed by 0 and 1, each comparing elementwise
      d.conjunctive = phi->tag == Tag::f_eq;
      d.iota.kind = IndexDescriptor::Kind::pair;
      Val b0 = phi->kids[0], b1 = phi->kids[1];
      if (b0->tag == Tag::f_var || b1->tag == Tag::f_var) return std::nullopt;
      long long v = std::max(max_var_id(phi), (long long)-1) + 1;
      bool conj = d.conjunctive;
      d.instance = [b0, b1, v, conj](const Val& a) {
        const Val& mine = a->num == 0 ? b0 : b1;
        const Val& other = a->num == 0 ? b1 : b0;
        if (conj)
          return mk(Tag::f_ball, v, {mine, mk(Tag::f_in, {fvar(v), other})});
        return mk(Tag::f_bex, v, {mine, mk(Tag::f_not_in, {fvar(v), other})});
      };
      return d;
    }
    case Tag::f_in:
    case Tag::f_not_in: {
      Val lhs = phi->kids[0], rhs = phi->kids[1];
      if (lhs->tag == Tag::f_var || rhs->tag == Tag::f_var) return std::nullopt;
      bool pos = phi->tag == Tag::f_in;
      if (rhs->tag == Tag::urelem) {
        if (lhs->tag == Tag::urelem) {
          bool member = hf_mem(b.urelems[(std::size_t)lhs->num],
                               b.urelems[(std::size_t)rhs->num]);
          // decided atoms: an empty disjunction when false, an empty
          // conjunction when true
          d.conjunctive = member == pos;
          d.iota.kind = IndexDescriptor::Kind::empty;
          d.instance = [](const Val&) -> Val {
            throw std::invalid_argument("instance: empty index");
          };
          return d;
        }
        d.conjunctive = !pos;
        d.iota.kind = IndexDescriptor::Kind::elements_of_urelem;
        d.iota.urelem = rhs->num;
        d.instance = [lhs, pos](const Val& a) {
          return mk(pos ? Tag::f_eq : Tag::f_neq, {a, lhs});
        };
        return d;
      }
      if (rhs->tag == Tag::l_stage) {
        d.conjunctive = !pos;
        d.iota.kind = IndexDescriptor::Kind::supp_below;
        d.iota.stage = rhs->kids[0];
        d.instance = [lhs, pos](const Val& a) {
          return mk(pos ? Tag::f_eq : Tag::f_neq, {a, lhs});
        };
        return d;
      }
      if (rhs->tag == Tag::l_sep) {
        d.conjunctive = !pos;
        d.iota.kind = IndexDescriptor::Kind::supp_below;
        d.iota.stage = rhs->kids[0];
        d.instance = [lhs, rhs, pos](const Val& a) {
          Val chi = skeleton_instance(rhs, a);
          if (pos) return mk(Tag::f_and, {chi, mk(Tag::f_eq, {a, lhs})});
          return mk(Tag::f_or, {negate(chi), mk(Tag::f_neq, {a, lhs})});
        };
        return d;
      }
      return std::nullopt;
    }
    case Tag::f_bex:
    case Tag::f_ball: {
      Val bound = phi->kids[0], body = phi->kids[1];
      if (bound->tag == Tag::f_var) return std::nullopt;
      bool ex = phi->tag == Tag::f_bex;
      d.conjunctive = !ex;
      long long v = phi->num;
      if (bound->tag == Tag::urelem) {
        d.iota.kind = IndexDescriptor::Kind::elements_of_urelem;
        d.iota.urelem = bound->num;
        d.instance = [body, v](const Val& a) { return subst1(body, v, a); };
        return d;
      }
      if (bound->tag == Tag::l_stage) {
        d.iota.kind = IndexDescriptor::Kind::supp_below;
        d.iota.stage = bound->kids[0];
        d.instance = [body, v](const Val& a) { return subst1(body, v, a); };
        return d;
      }
      if (bound->tag == Tag::l_sep) {
        d.iota.kind = IndexDescriptor::Kind::supp_below;
        d.iota.stage = bound->kids[0];
        d.instance = [bound, body, v, ex](const Val& a) {
          Val chi = skeleton_instance(bound, a);
          Val inst = subst1(body, v, a);
          if (ex) return mk(Tag::f_and, {chi, inst});
          return mk(Tag::f_or, {negate(chi), inst});
        };
        return d;
      }
      return std::nullopt;
    }
    case Tag::f_ex:
    case Tag::f_all: {
      d.conjunctive = phi->tag == Tag::f_all;
      d.iota.kind = IndexDescriptor::Kind::all_terms;
      d.instance = [body = phi->kids[0], v = phi->num](const Val& a) {
        return subst1(body, v, a);
      };
      return d;
    }
    default:
      return std::nullopt;
  }
}

//---- evaluation over a finite stage model

inline std::optional<bool> eval_formula_env(const StageModel& m, const Val& phi,
                                            std::vector<std::pair<long long, Val>>& env);

inline std::optional<Val> arg_value(const StageModel& m, const Val& a,
                                    std::vector<std::pair<long long, Val>>& env) {
  if (a->tag == Tag::f_var) {
    for (std::size_t i = env.size(); i-- > 0;)
      if (env[i].first == a->num) return env[i].second;
    return std::nullopt;
  }
  return interpret(m, a);
}

inline std::optional<bool> eval_formula_env(const StageModel& m, const Val& phi,
                                            std::vector<std::pair<long long, Val>>& env) {
  switch (phi->tag) {
    case Tag::f_in:
    case Tag::f_not_in:
    case Tag::f_eq:
    case Tag::f_neq: {
      std::optional<Val> a = arg_value(m, phi->kids[0], env);
      std::optional<Val> b = arg_value(m, phi->kids[1], env);
      if (!a || !b) return std::nullopt;
      bool base = phi->tag == Tag::f_in || phi->tag == Tag::f_not_in ? hf_mem(*a, *b)
                                                                     : val_eq(*a, *b);
      bool positive = phi->tag == Tag::f_in || phi->tag == Tag::f_eq;
      return positive == base;
    }
    case Tag::f_and:
    case Tag::f_or: {
      std::optional<bool> l = eval_formula_env(m, phi->kids[0], env);
      std::optional<bool> r = eval_formula_env(m, phi->kids[1], env);
      if (!l || !r) return std::nullopt;
      return phi->tag == Tag::f_and ? *l && *r : *l || *r;
    }
    case Tag::f_bex:
    case Tag::f_ball: {
      std::optional<Val> range = arg_value(m, phi->kids[0], env);
      if (!range) return std::nullopt;
      bool want = phi->tag == Tag::f_bex;
      for (const Val& w : (*range)->kids) {
        env.emplace_back(phi->num, w);
        std::optional<bool> got = eval_formula_env(m, phi->kids[1], env);
        env.pop_back();
        if (!got) return std::nullopt;
        if (*got == want) return want;
      }
      return !want;
    }
    case Tag::f_ex:
    case Tag::f_all: {
      bool want = phi->tag == Tag::f_ex;
      for (const Val& w : m.levels[(std::size_t)m.height]) {
        env.emplace_back(phi->num, w);
        std::optional<bool> got = eval_formula_env(m, phi->kids[0], env);
        env.pop_back();
        if (!got) return std::nullopt;
        if (*got == want) return want;
      }
      return !want;
    }
    default:
      return std::nullopt;
  }
}

inline std::optional<bool> eval_formula(const StageModel& m, const Val& phi) {
  std::vector<std::pair<long long, Val>> env;
  return eval_formula_env(m, phi, env);
}

//---- sequents

// Finite lists of formulas, keeping duplicates and order.
using Sequent = std::vector<Val>;

inline bool seq_member(const Sequent& s, const Val& phi) {
  for (const Val& f : s)
    if (val_eq(f, phi)) return true;
  return false;
}

inline Sequent seq_add(Sequent s, const Val& phi) {
  if (!seq_member(s, phi)) s.push_back(phi);
  return s;
}

inline Sequent seq_remove(Sequent s, const Val& phi) {
  Sequent out;
  for (const Val& f : s)
    if (!val_eq(f, phi)) out.push_back(f);
  return out;
}

inline bool seq_subset(const Sequent& a, const Sequent& b) {
  for (const Val& f : a)
    if (!seq_member(b, f)) return false;
  return true;
}

//---- surface syntax

inline std::string fml_show(const LinearOrder& X, const Val& phi) {
  auto arg = [&](const Val& a) {
    return a->tag == Tag::f_var ? "v" + std::to_string(a->num) : lterm_show(X, a);
  };
  switch (phi->tag) {
    case Tag::f_in: return arg(phi->kids[0]) + " in " + arg(phi->kids[1]);
    case Tag::f_not_in: return arg(phi->kids[0]) + " notin " + arg(phi->kids[1]);
    case Tag::f_eq: return arg(phi->kids[0]) + " = " + arg(phi->kids[1]);
    case Tag::f_neq: return arg(phi->kids[0]) + " != " + arg(phi->kids[1]);
    case Tag::f_and:
      return "(" + fml_show(X, phi->kids[0]) + " and " + fml_show(X, phi->kids[1]) + ")";
    case Tag::f_or:
      return "(" + fml_show(X, phi->kids[0]) + " or " + fml_show(X, phi->kids[1]) + ")";
    case Tag::f_bex:
      return "ex v" + std::to_string(phi->num) + " in " + arg(phi->kids[0]) + ". " +
             fml_show(X, phi->kids[1]);
    case Tag::f_ball:
      return "all v" + std::to_string(phi->num) + " in " + arg(phi->kids[0]) + ". " +
             fml_show(X, phi->kids[1]);
    case Tag::f_ex:
      return "ex v" + std::to_string(phi->num) + ". " + fml_show(X, phi->kids[0]);
    case Tag::f_all:
      return "all v" + std::to_string(phi->num) + ". " + fml_show(X, phi->kids[0]);
    default:
      return "?";
  }
}

inline std::string seq_show(const LinearOrder& X, const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += fml_show(X, s[i]);
  }
  return out.empty() ? "<empty>" : out;
}

namespace detail {

struct FmlParser {
  const Base& base;
  const LinearOrder& X;
  std::string_view text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool eat(std::string_view token) {
    skip();
    if (text.substr(pos, token.size()) != token) return false;
    // keywords must not swallow the head of a longer word; digits may
    // follow directly (u0, v3)
    if (!token.empty() && std::isalpha((unsigned char)token.back())) {
      std::size_t after = pos + token.size();
      if (after < text.size() && std::isalpha((unsigned char)text[after])) return false;
    }
    pos += token.size();
    return true;
  }
  std::optional<long long> number() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
    if (pos == start) return std::nullopt;
    return std::stoll(std::string(text.substr(start, pos - start)));
  }

  // raw span up to an unnested ';' or the ')' closing the current group
  std::optional<std::string> raw_until_break() {
    skip();
    std::size_t start = pos;
    int depth = 0;
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '(' || c == '[') ++depth;
      if (c == ']') --depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ';' && depth == 0) break;
      ++pos;
    }
    if (pos == start) return std::nullopt;
    std::string out(text.substr(start, pos - start));
    while (!out.empty() && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
    return out;
  }

  std::optional<Val> stage() {
    std::optional<std::string> raw = raw_until_break();
    if (!raw || !X.parse) return std::nullopt;
    return X.parse(*raw);
  }

  std::optional<Val> term() {
    skip();
    if (eat("u")) {
      std::optional<long long> n = number();
      if (!n || *n < 0 || *n >= (long long)base.urelems.size()) return std::nullopt;
      return mk(Tag::urelem, *n);
    }
    if (eat("L")) {
      if (!eat("(")) return std::nullopt;
      std::optional<Val> s = stage();
      if (!s || !eat(")")) return std::nullopt;
      return mk(Tag::l_stage, {*s});
    }
    if (eat("Sep")) {
      if (!eat("(")) return std::nullopt;
      std::optional<Val> s = stage();
      if (!s || !eat(";")) return std::nullopt;
      std::optional<Val> skel = formula();
      if (!skel || !eat(";")) return std::nullopt;
      std::vector<Val> params;
      skip();
      if (text.substr(pos, 1) != ")") {
        while (true) {
          std::optional<Val> p = argument();
          if (!p) return std::nullopt;
          params.push_back(*p);
          if (!eat(",")) break;
        }
      }
      if (!eat(")")) return std::nullopt;
      std::vector<Val> kids{*s, *skel};
      for (Val& p : params) kids.push_back(std::move(p));
      Val t = mk(Tag::l_sep, std::move(kids));
      if (!lterm_valid(base, X, t)) return std::nullopt;
      return t;
    }
    return std::nullopt;
  }

  std::optional<Val> argument() {
    skip();
    if (pos < text.size() && text[pos] == 'v' && pos + 1 < text.size() &&
        std::isdigit((unsigned char)text[pos + 1])) {
      ++pos;
      std::optional<long long> n = number();
      if (!n) return std::nullopt;
      return fvar(*n);
    }
    return term();
  }

  std::optional<Val> atom() {
    skip();
    if (eat("(")) {
      std::optional<Val> inner = formula();
      if (!inner || !eat(")")) return std::nullopt;
      return inner;
    }
    std::optional<Val> lhs = argument();
    if (!lhs) return std::nullopt;
    Tag tag;
    if (eat("notin")) tag = Tag::f_not_in;
    else if (eat("in")) tag = Tag::f_in;
    else if (eat("!=")) tag = Tag::f_neq;
    else if (eat("=")) tag = Tag::f_eq;
    else return std::nullopt;
    std::optional<Val> rhs = argument();
    if (!rhs) return std::nullopt;
    return mk(tag, {*lhs, *rhs});
  }

  std::optional<Val> unary() {
    skip();
    if (eat("not")) {
      std::optional<Val> inner = unary();
      if (!inner) return std::nullopt;
      return negate(*inner);
    }
    if (eat("ex")) return quant(true);
    if (eat("all")) return quant(false);
    return atom();
  }

  std::optional<Val> quant(bool existential) {
    skip();
    if (!eat("v")) return std::nullopt;
    std::optional<long long> v = number();
    if (!v) return std::nullopt;
    if (eat("in")) {
      std::optional<Val> bound = argument();
      if (!bound || !eat(".")) return std::nullopt;
      std::optional<Val> body = formula();
      if (!body) return std::nullopt;
      return mk(existential ? Tag::f_bex : Tag::f_ball, *v, {*bound, *body});
    }
    if (!eat(".")) return std::nullopt;
    std::optional<Val> body = formula();
    if (!body) return std::nullopt;
    return mk(existential ? Tag::f_ex : Tag::f_all, *v, {*body});
  }

  std::optional<Val> conjunction() {
    std::optional<Val> l = unary();
    if (!l) return std::nullopt;
    if (eat("and")) {
      std::optional<Val> r = conjunction();
      if (!r) return std::nullopt;
      return mk(Tag::f_and, {*l, *r});
    }
    return l;
  }

  std::optional<Val> disjunction() {
    std::optional<Val> l = conjunction();
    if (!l) return std::nullopt;
    if (eat("or")) {
      std::optional<Val> r = disjunction();
      if (!r) return std::nullopt;
      return mk(Tag::f_or, {*l, *r});
    }
    return l;
  }

  std::optional<Val> formula() {
    std::optional<Val> l = disjunction();
    if (!l) return std::nullopt;
    if (eat("->")) {
      std::optional<Val> r = formula();
      if (!r) return std::nullopt;
      return mk(Tag::f_or, {negate(*l), *r});
    }
    return l;
  }
};

}  // namespace detail

inline std::optional<Val> fml_parse(const Base& b, const LinearOrder& X,
                                    std::string_view text) {
  detail::FmlParser p{b, X, text};
  std::optional<Val> out = p.formula();
  if (!out) return std::nullopt;
  p.skip();
  if (p.pos != text.size()) return std::nullopt;
  if (!fml_valid(b, X, *out)) return std::nullopt;
  return out;
}

inline std::optional<Val> lterm_parse(const Base& b, const LinearOrder& X,
                                      std::string_view text) {
  detail::FmlParser p{b, X, text};
  std::optional<Val> out = p.term();
  if (!out) return std::nullopt;
  p.skip();
  if (p.pos != text.size()) return std::nullopt;
  if (!lterm_valid(b, X, *out)) return std::nullopt;
  return out;
}

}  // namespace bhcalc

#endif

#ifndef BHCALC_LTERMS_HPP
#define BHCALC_LTERMS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bhcalc/bignat.hpp"
#include "bhcalc/dilators.hpp"
#include "bhcalc/orders.hpp"

namespace bhcalc {

//---- hereditarily finite sets

// Canonical form: fin_set with kids strictly ascending in hf_cmp.  The order
// compares element lists from the largest element down, so x < y whenever
// the largest element of the symmetric difference belongs to y.

inline Ord hf_cmp(const Val& a, const Val& b) {
  if (val_eq(a, b)) return Ord::eq;
  std::size_t na = a->kids.size(), nb = b->kids.size();
  for (std::size_t i = 0; i < na && i < nb; ++i) {
    Ord c = hf_cmp(a->kids[na - 1 - i], b->kids[nb - 1 - i]);
    if (c != Ord::eq) return c;
  }
  return na < nb ? Ord::lt : na > nb ? Ord::gt : Ord::eq;
}

inline Val hf_empty() { return mk(Tag::fin_set, std::vector<Val>{}); }

inline Val hf_set(std::vector<Val> items) {
  std::sort(items.begin(), items.end(),
            [](const Val& x, const Val& y) { return hf_cmp(x, y) == Ord::lt; });
  items.erase(std::unique(items.begin(), items.end(),
                          [](const Val& x, const Val& y) { return val_eq(x, y); }),
              items.end());
  return mk(Tag::fin_set, std::move(items));
}

inline bool hf_is_canonical(const Val& v) {
  if (!v || v->tag != Tag::fin_set) return false;
  for (std::size_t i = 0; i < v->kids.size(); ++i) {
    if (!hf_is_canonical(v->kids[i])) return false;
    if (i > 0 && hf_cmp(v->kids[i - 1], v->kids[i]) != Ord::lt) return false;
  }
  return true;
}

inline bool hf_mem(const Val& x, const Val& s) {
  for (const Val& k : s->kids)
    if (val_eq(x, k)) return true;
  return false;
}

inline std::string hf_show(const Val& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v->kids.size(); ++i) {
    if (i) out += ",";
    out += hf_show(v->kids[i]);
  }
  return out + "}";
}

//---- urelement bases

// The base is a finite transitive family of hereditarily finite sets listed
// in ascending hf order; the first two entries are always {} and {{}}.
struct Base {
  std::vector<Val> urelems;
};

inline Base make_base(long long n) {
  if (n < 2) throw std::invalid_argument("make_base: need at least two urelements");
  Base b;
  for (long long i = 0; i < n; ++i)
    b.urelems.push_back(hf_set(b.urelems));  // next von Neumann ordinal
  return b;
}

inline long long urelem_index(const Base& b, const Val& v) {
  for (std::size_t i = 0; i < b.urelems.size(); ++i)
    if (val_eq(b.urelems[i], v)) return (long long)i;
  return -1;
}

inline CheckReport check_base(const Base& b) {
  CheckReport r;
  if (b.urelems.size() < 2) r.fail("base: fewer than two urelements");
  for (std::size_t i = 0; i < b.urelems.size(); ++i) {
    const Val& u = b.urelems[i];
    if (!hf_is_canonical(u)) r.fail("base: entry " + std::to_string(i) + " not canonical");
    if (i > 0 && hf_cmp(b.urelems[i - 1], u) != Ord::lt)
      r.fail("base: entries not strictly ascending at " + std::to_string(i));
    for (const Val& member : u->kids)
      if (urelem_index(b, member) < 0)
        r.fail("base: not transitive, missing " + hf_show(member));
  }
  if (!b.urelems.empty() && !val_eq(b.urelems[0], hf_empty()))
    r.fail("base: first entry is not the empty set");
  if (b.urelems.size() > 1 && !val_eq(b.urelems[1], hf_set({hf_empty()})))
    r.fail("base: second entry is not the singleton of the empty set");
  return r;
}

//---- separation skeletons

// A skeleton is a bounded formula whose argument positions are all
// variables: variable 0 is the separation variable, 1..n address the
// parameters, and the binder introduced at nesting depth d is named
// n + 1 + d.

inline Val fvar(long long id) { return mk(Tag::f_var, id); }

inline bool skeleton_valid(const Val& phi, long long scope, long long depth = 0) {
  if (!phi) return false;
  auto var_ok = [&](const Val& v) {
    return v && v->tag == Tag::f_var && v->kids.empty() && v->num >= 0 &&
           v->num <= scope + depth;
  };
  switch (phi->tag) {
    case Tag::f_in:
    case Tag::f_not_in:
    case Tag::f_eq:
    case Tag::f_neq:
      return phi->kids.size() == 2 && var_ok(phi->kids[0]) && var_ok(phi->kids[1]);
    case Tag::f_and:
    case Tag::f_or:
      return phi->kids.size() == 2 && skeleton_valid(phi->kids[0], scope, depth) &&
             skeleton_valid(phi->kids[1], scope, depth);
    case Tag::f_bex:
    case Tag::f_ball:
      return phi->kids.size() == 2 && phi->num == scope + 1 + depth &&
             var_ok(phi->kids[0]) && skeleton_valid(phi->kids[1], scope, depth + 1);
    default:
      return false;
  }
}

inline std::string skeleton_show(const Val& phi) {
  auto v = [](const Val& x) { return "v" + std::to_string(x->num); };
  switch (phi->tag) {
    case Tag::f_in: return v(phi->kids[0]) + " in " + v(phi->kids[1]);
    case Tag::f_not_in: return v(phi->kids[0]) + " notin " + v(phi->kids[1]);
    case Tag::f_eq: return v(phi->kids[0]) + " = " + v(phi->kids[1]);
    case Tag::f_neq: return v(phi->kids[0]) + " != " + v(phi->kids[1]);
    case Tag::f_and:
      return "(" + skeleton_show(phi->kids[0]) + " and " + skeleton_show(phi->kids[1]) + ")";
    case Tag::f_or:
      return "(" + skeleton_show(phi->kids[0]) + " or " + skeleton_show(phi->kids[1]) + ")";
    case Tag::f_bex:
      return "ex v" + std::to_string(phi->num) + " in " + v(phi->kids[0]) + ". " +
             skeleton_show(phi->kids[1]);
    case Tag::f_ball:
      return "all v" + std::to_string(phi->num) + " in " + v(phi->kids[0]) + ". " +
             skeleton_show(phi->kids[1]);
    default:
      return "?";
  }
}

//---- terms over a base and a stage order

// Terms: urelements by index, full stages L_s, and separations
// Sep(s; phi; a_1..a_n) carving a subset out of L_s.  Every parameter must
// be supported strictly below the separation stage.

inline std::vector<Val> supp_L(const LinearOrder& X, const Val& t) {
  switch (t->tag) {
    case Tag::urelem:
      return {};
    case Tag::l_stage:
      return {t->kids[0]};
    case Tag::l_sep: {
      std::vector<Val> out{t->kids[0]};
      for (std::size_t i = 2; i < t->kids.size(); ++i)
        out = fin_union(X, out, supp_L(X, t->kids[i]));
      return out;
    }
    default:
      throw std::invalid_argument("supp_L: not a term");
  }
}

inline bool lterm_valid(const Base& b, const LinearOrder& X, const Val& t) {
  if (!t) return false;
  switch (t->tag) {
    case Tag::urelem:
      return t->kids.empty() && t->num >= 0 && t->num < (long long)b.urelems.size();
    case Tag::l_stage:
      return t->kids.size() == 1 && X.valid(t->kids[0]);
    case Tag::l_sep: {
      if (t->kids.size() < 2 || !X.valid(t->kids[0])) return false;
      if (!skeleton_valid(t->kids[1], (long long)t->kids.size() - 2)) return false;
      for (std::size_t i = 2; i < t->kids.size(); ++i) {
        if (!lterm_valid(b, X, t->kids[i])) return false;
        if (!fin_below_elem(X, supp_L(X, t->kids[i]), t->kids[0])) return false;
      }
      return true;
    }
    default:
      return false;
  }
}

inline Val lt_urelem(const Base& b, long long i) {
  if (i < 0 || i >= (long long)b.urelems.size())
    throw std::invalid_argument("lt_urelem: index out of range");
  return mk(Tag::urelem, i);
}

inline Val lt_stage(const LinearOrder& X, const Val& s) {
  if (!X.valid(s)) throw std::invalid_argument("lt_stage: stage not in the order");
  return mk(Tag::l_stage, {s});
}

inline Val lt_sep(const Base& b, const LinearOrder& X, const Val& s, const Val& phi,
                  const std::vector<Val>& params) {
  if (!X.valid(s)) throw std::invalid_argument("lt_sep: stage not in the order");
  if (!skeleton_valid(phi, (long long)params.size()))
    throw std::invalid_argument("lt_sep: bad skeleton");
  std::vector<Val> kids{s, phi};
  for (const Val& p : params) {
    if (!lterm_valid(b, X, p)) throw std::invalid_argument("lt_sep: invalid parameter");
    if (!fin_below_elem(X, supp_L(X, p), s))
      throw std::invalid_argument("lt_sep: parameter not supported below the stage");
    kids.push_back(p);
  }
  return mk(Tag::l_sep, std::move(kids));
}

inline Val map_L(const std::function<Val(const Val&)>& f, const Val& t) {
  switch (t->tag) {
    case Tag::urelem:
      return t;
    case Tag::l_stage:
      return mk(Tag::l_stage, {f(t->kids[0])});
    case Tag::l_sep: {
      std::vector<Val> kids{f(t->kids[0]), t->kids[1]};
      for (std::size_t i = 2; i < t->kids.size(); ++i) kids.push_back(map_L(f, t->kids[i]));
      return mk(Tag::l_sep, std::move(kids));
    }
    default:
      throw std::invalid_argument("map_L: not a term");
  }
}

inline std::string lterm_show(const LinearOrder& X, const Val& t) {
  switch (t->tag) {
    case Tag::urelem:
      return "u" + std::to_string(t->num);
    case Tag::l_stage:
      return "L(" + X.show(t->kids[0]) + ")";
    case Tag::l_sep: {
      std::string out = "Sep(" + X.show(t->kids[0]) + "; " + skeleton_show(t->kids[1]);
      out += "; ";
      for (std::size_t i = 2; i < t->kids.size(); ++i) {
        if (i > 2) out += ",";
        out += lterm_show(X, t->kids[i]);
      }
      return out + ")";
    }
    default:
      return "?";
  }
}

//---- total pairing-based coding over indexed stages

// Codes run over terms whose stages are the numbers 0..ns-1.  Decoding is
// total: tags are read modulo the tag count, indices modulo their bounds,
// and separation stages are stored as offsets above the largest parameter
// stage so that every number decodes to a valid term.

inline std::pair<std::uint64_t, std::uint64_t> unpair_u64(std::uint64_t n) {
  long double d = std::sqrt(8.0L * (long double)n + 1.0L);
  std::uint64_t s = (std::uint64_t)((d - 1.0L) / 2.0L);
  while ((s + 1) * (s + 2) / 2 <= n) ++s;
  while (s * (s + 1) / 2 > n) --s;
  std::uint64_t b = n - s * (s + 1) / 2;
  return {s - b, b};
}

inline std::uint64_t pair_u64(std::uint64_t a, std::uint64_t b) {
  return (a + b) * (a + b + 1) / 2 + b;
}

namespace detail {

inline long long max_stage_index(const Val& t) {
  switch (t->tag) {
    case Tag::urelem: return -1;
    case Tag::l_stage: return t->kids[0]->num;
    case Tag::l_sep: return t->kids[0]->num;  // dominates all parameter stages
    default: return -1;
  }
}

inline Val en0_skel(std::uint64_t c, long long scope, long long depth) {
  auto [t, p] = unpair_u64(c);
  long long vbound = scope + depth + 1;
  static const Tag tags[8] = {Tag::f_in, Tag::f_not_in, Tag::f_eq,  Tag::f_neq,
                              Tag::f_and, Tag::f_or,     Tag::f_bex, Tag::f_ball};
  Tag tag = tags[t % 8];
  auto [a, b] = unpair_u64(p);
  switch (tag) {
    case Tag::f_in:
    case Tag::f_not_in:
    case Tag::f_eq:
    case Tag::f_neq:
      return mk(tag, {fvar((long long)(a % vbound)), fvar((long long)(b % vbound))});
    case Tag::f_and:
    case Tag::f_or:
      return mk(tag, {en0_skel(a, scope, depth), en0_skel(b, scope, depth)});
    default:
      return mk(tag, scope + 1 + depth,
                {fvar((long long)(a % vbound)), en0_skel(b, scope, depth + 1)});
  }
}

inline Val en0_term(long long nu, long long ns, std::uint64_t n);

inline std::vector<Val> en0_list(long long nu, long long ns, std::uint64_t c) {
  std::vector<Val> out;
  while (c != 0) {
    auto [h, r] = unpair_u64(c - 1);
    out.push_back(en0_term(nu, ns, h));
    c = r;
  }
  return out;
}

inline Val en0_term(long long nu, long long ns, std::uint64_t n) {
  auto [t, p] = unpair_u64(n);
  switch (t % 3) {
    case 0:
      return mk(Tag::urelem, (long long)(p % (std::uint64_t)nu));
    case 1:
      if (ns == 0) return mk(Tag::urelem, 0);
      return mk(Tag::l_stage, {nat((long long)(p % (std::uint64_t)ns))});
    default: {
      if (ns == 0) return mk(Tag::urelem, 0);
      auto [joff, rest] = unpair_u64(p);
      auto [phic, plc] = unpair_u64(rest);
      std::vector<Val> params = en0_list(nu, ns, plc);
      long long m = -1;
      for (const Val& q : params) m = std::max(m, max_stage_index(q));
      long long window = ns - m - 1;
      if (window <= 0) return mk(Tag::urelem, 0);
      long long j = m + 1 + (long long)(joff % (std::uint64_t)window);
      Val phi = en0_skel(phic, (long long)params.size(), 0);
      std::vector<Val> kids{nat(j), phi};
      for (Val& q : params) kids.push_back(std::move(q));
      return mk(Tag::l_sep, std::move(kids));
    }
  }
}

inline int skel_tag_index(Tag t) {
  switch (t) {
    case Tag::f_in: return 0;
    case Tag::f_not_in: return 1;
    case Tag::f_eq: return 2;
    case Tag::f_neq: return 3;
    case Tag::f_and: return 4;
    case Tag::f_or: return 5;
    case Tag::f_bex: return 6;
    default: return 7;
  }
}

inline BigNat code0_skel(const Val& phi) {
  int tag = skel_tag_index(phi->tag);
  BigNat payload;
  switch (phi->tag) {
    case Tag::f_in:
    case Tag::f_not_in:
    case Tag::f_eq:
    case Tag::f_neq:
      payload = big_pair(BigNat::of((std::uint64_t)phi->kids[0]->num),
                         BigNat::of((std::uint64_t)phi->kids[1]->num));
      break;
    case Tag::f_and:
    case Tag::f_or:
      payload = big_pair(code0_skel(phi->kids[0]), code0_skel(phi->kids[1]));
      break;
    default:
      payload = big_pair(BigNat::of((std::uint64_t)phi->kids[0]->num),
                         code0_skel(phi->kids[1]));
      break;
  }
  return big_pair(BigNat::of((std::uint64_t)tag), payload);
}

inline BigNat code0_term(const Val& t);

inline BigNat code0_list(const std::vector<Val>& items, std::size_t from) {
  if (from >= items.size()) return BigNat{};
  return big_add(big_pair(code0_term(items[from]), code0_list(items, from + 1)),
                 BigNat::of(1));
}

inline BigNat code0_term(const Val& t) {
  switch (t->tag) {
    case Tag::urelem:
      return big_pair(BigNat::of(0), BigNat::of((std::uint64_t)t->num));
    case Tag::l_stage:
      return big_pair(BigNat::of(1), BigNat::of((std::uint64_t)t->kids[0]->num));
    default: {
      long long m = -1;
      for (std::size_t i = 2; i < t->kids.size(); ++i)
        m = std::max(m, max_stage_index(t->kids[i]));
      long long joff = t->kids[0]->num - m - 1;
      std::vector<Val> params(t->kids.begin() + 2, t->kids.end());
      BigNat payload = big_pair(BigNat::of((std::uint64_t)joff),
                                big_pair(code0_skel(t->kids[1]), code0_list(params, 0)));
      return big_pair(BigNat::of(2), payload);
    }
  }
}

inline Val pull_to_indices(const LinearOrder& X, const std::vector<Val>& x, const Val& t) {
  return map_L(
      [&](const Val& s) {
        for (std::size_t i = 0; i < x.size(); ++i)
          if (X.cmp(x[i], s) == Ord::eq) return nat((long long)i);
        throw std::invalid_argument("pull_to_indices: stage outside the subset");
      },
      t);
}

}  // namespace detail

// en_L(x, n): decode n over |x| indexed stages, then push the indices
// forward along the increasing enumeration of x.
inline Val en_L(const Base& b, const LinearOrder& X, const std::vector<Val>& x,
                std::uint64_t n) {
  Val t0 = detail::en0_term((long long)b.urelems.size(), (long long)x.size(), n);
  return map_L([&](const Val& idx) { return x[(std::size_t)idx->num]; }, t0);
}

// code_L(x, t): zero when t is not supported inside x, otherwise the code of
// the pullback of t along the increasing enumeration of x.
inline BigNat code_L(const Base& b, const LinearOrder& X, const std::vector<Val>& x,
                     const Val& t) {
  (void)b;
  if (!fin_subset_of(X, supp_L(X, t), x)) return BigNat{};
  return detail::code0_term(detail::pull_to_indices(X, x, t));
}

//---- the term order

// Supports are compared colexicographically first; ties are broken by the
// codes relative to the common support.  Distinct terms never compare equal.
inline Ord lterm_cmp(const Base& b, const LinearOrder& X, const Val& s, const Val& t) {
  if (val_eq(s, t)) return Ord::eq;
  Ord c = colex_cmp(X, supp_L(X, s), supp_L(X, t));
  if (c != Ord::eq) return c;
  std::vector<Val> x = supp_L(X, s);
  int k = big_cmp(code_L(b, X, x, s), code_L(b, X, x, t));
  if (k != 0) return k < 0 ? Ord::lt : Ord::gt;
  int raw = val_cmp_struct(s, t);  // unreachable for valid terms
  return raw < 0 ? Ord::lt : Ord::gt;
}

//---- finite stage models

// Stage 0 is the base itself; every later stage is the full powerset of the
// previous one.  Levels are cumulative and listed in ascending hf order.
struct StageModel {
  Base base;
  long long height = 0;
  std::vector<std::vector<Val>> levels;  // levels[k], 0 <= k <= height
};

inline const StageModel& stage_model(const Base& b, long long height) {
  static std::mutex lock;
  static std::map<std::pair<std::string, long long>, std::unique_ptr<StageModel>> cache;
  std::string key;
  for (const Val& u : b.urelems) key += hf_show(u) + ";";
  std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find({key, height});
  if (it != cache.end()) return *it->second;
  auto model = std::make_unique<StageModel>();
  model->base = b;
  model->height = height;
  model->levels.push_back(b.urelems);
  for (long long k = 0; k < height; ++k) {
    const std::vector<Val>& prev = model->levels.back();
    if (prev.size() > 20)
      throw std::invalid_argument("stage_model: powerset level too large");
    std::vector<Val> next;
    next.reserve(std::size_t{1} << prev.size());
    for (std::size_t mask = 0; mask < (std::size_t{1} << prev.size()); ++mask) {
      std::vector<Val> members;
      for (std::size_t i = 0; i < prev.size(); ++i)
        if (mask & (std::size_t{1} << i)) members.push_back(prev[i]);
      next.push_back(hf_set(std::move(members)));
    }
    std::sort(next.begin(), next.end(),
              [](const Val& x, const Val& y) { return hf_cmp(x, y) == Ord::lt; });
    model->levels.push_back(std::move(next));
  }
  const StageModel& ref = *model;
  cache.emplace(std::make_pair(key, height), std::move(model));
  return ref;
}

// Evaluates a skeleton over hf values; env pairs variable ids with values.
inline bool eval_skeleton(const Val& phi, std::vector<std::pair<long long, Val>>& env) {
  auto lookup = [&](const Val& v) -> const Val& {
    for (std::size_t i = env.size(); i-- > 0;)
      if (env[i].first == v->num) return env[i].second;
    throw std::invalid_argument("eval_skeleton: unbound variable");
  };
  switch (phi->tag) {
    case Tag::f_in: return hf_mem(lookup(phi->kids[0]), lookup(phi->kids[1]));
    case Tag::f_not_in: return !hf_mem(lookup(phi->kids[0]), lookup(phi->kids[1]));
    case Tag::f_eq: return val_eq(lookup(phi->kids[0]), lookup(phi->kids[1]));
    case Tag::f_neq: return !val_eq(lookup(phi->kids[0]), lookup(phi->kids[1]));
    case Tag::f_and:
      return eval_skeleton(phi->kids[0], env) && eval_skeleton(phi->kids[1], env);
    case Tag::f_or:
      return eval_skeleton(phi->kids[0], env) || eval_skeleton(phi->kids[1], env);
    case Tag::f_bex:
    case Tag::f_ball: {
      Val range = lookup(phi->kids[0]);
      bool want = phi->tag == Tag::f_bex;
      for (const Val& w : range->kids) {
        env.emplace_back(phi->num, w);
        bool got = eval_skeleton(phi->kids[1], env);
        env.pop_back();
        if (got == want) return want;
      }
      return !want;
    }
    default:
      throw std::invalid_argument("eval_skeleton: not a skeleton");
  }
}

// Value of a term whose stages are numbers 0..height in the model.
inline std::optional<Val> interpret(const StageModel& m, const Val& t) {
  switch (t->tag) {
    case Tag::urelem:
      if (t->num < 0 || t->num >= (long long)m.base.urelems.size()) return std::nullopt;
      return m.base.urelems[(std::size_t)t->num];
    case Tag::l_stage: {
      if (!is_nat(t->kids[0])) return std::nullopt;
      long long k = t->kids[0]->num;
      if (k < 0 || k > m.height) return std::nullopt;
      return hf_set(m.levels[(std::size_t)k]);
    }
    case Tag::l_sep: {
      if (!is_nat(t->kids[0])) return std::nullopt;
      long long k = t->kids[0]->num;
      if (k < 0 || k > m.height) return std::nullopt;
      if (!skeleton_valid(t->kids[1], (long long)t->kids.size() - 2)) return std::nullopt;
      std::vector<std::pair<long long, Val>> env;
      for (std::size_t i = 2; i < t->kids.size(); ++i) {
        std::optional<Val> v = interpret(m, t->kids[i]);
        if (!v) return std::nullopt;
        env.emplace_back((long long)(i - 1), *v);
      }
      std::vector<Val> members;
      for (const Val& w : m.levels[(std::size_t)k]) {
        env.emplace_back(0, w);
        bool in = eval_skeleton(t->kids[1], env);
        env.pop_back();
        if (in) members.push_back(w);
      }
      return hf_set(std::move(members));
    }
    default:
      return std::nullopt;
  }
}

// Canonical term denoting an hf value at a given stage: urelements are named
// directly, other sets are carved out of the previous stage by listing their
// members as parameters.
inline std::optional<Val> term_of_value(const Base& b, const Val& v, long long stage) {
  long long i = urelem_index(b, v);
  if (i >= 0) return mk(Tag::urelem, i);
  if (stage <= 0 || v->tag != Tag::fin_set) return std::nullopt;
  std::vector<Val> kids{nat(stage - 1), Val{}};
  for (const Val& w : v->kids) {
    std::optional<Val> sub = term_of_value(b, w, stage - 1);
    if (!sub) return std::nullopt;
    kids.push_back(*sub);
  }
  Val phi;
  if (v->kids.empty()) {
    phi = mk(Tag::f_neq, {fvar(0), fvar(0)});
  } else {
    for (std::size_t i2 = v->kids.size(); i2-- > 0;) {
      Val eq = mk(Tag::f_eq, {fvar(0), fvar((long long)i2 + 1)});
      phi = phi ? mk(Tag::f_or, {eq, phi}) : eq;
    }
  }
  kids[1] = phi;
  return mk(Tag::l_sep, std::move(kids));
}

//---- structural enumeration

namespace detail {

using SkelMemo = std::map<std::tuple<long long, long long, std::size_t>, std::vector<Val>>;

// All pure skeletons with exactly `size` atoms-and-connectives at the given
// binder depth.  Order within a size: atom tags in, notin, =, !=, operand pairs
// lexicographic; then conjunctions by left size, disjunctions, bounded exists,
// bounded foralls.  A skeleton's position is stable once the size cutoff passes
// its size, so prefixes of the stream are reproducible.
inline const std::vector<Val>& skeletons_exact(SkelMemo& memo, long long scope,
                                               long long depth, std::size_t size) {
  auto key = std::make_tuple(scope, depth, size);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  std::vector<Val> out;
  if (size == 1) {
    const Tag atoms[4] = {Tag::f_in, Tag::f_not_in, Tag::f_eq, Tag::f_neq};
    for (Tag tg : atoms)
      for (long long i = 0; i <= scope + depth; ++i)
        for (long long j = 0; j <= scope + depth; ++j)
          out.push_back(mk(tg, {fvar(i), fvar(j)}));
  } else {
    for (Tag tg : {Tag::f_and, Tag::f_or})
      for (std::size_t ls = 1; ls + 1 < size; ++ls) {
        const std::vector<Val>& lhs = skeletons_exact(memo, scope, depth, ls);
        const std::vector<Val>& rhs = skeletons_exact(memo, scope, depth, size - 1 - ls);
        for (const Val& l : lhs)
          for (const Val& r : rhs) out.push_back(mk(tg, {l, r}));
      }
    for (Tag tg : {Tag::f_bex, Tag::f_ball})
      for (long long bv = 0; bv <= scope + depth; ++bv)
        for (const Val& body : skeletons_exact(memo, scope, depth + 1, size - 1))
          out.push_back(mk(tg, scope + 1 + depth, {fvar(bv), body}));
  }
  return memo[key] = std::move(out);
}

}  // namespace detail

// First `cap` skeletons of sizes up to `size_max` at the given scope.
inline std::vector<Val> skeleton_stream(long long scope, std::size_t size_max,
                                        std::size_t cap) {
  detail::SkelMemo memo;
  std::vector<Val> out;
  for (std::size_t sz = 1; sz <= size_max && out.size() < cap; ++sz)
    for (const Val& ph : detail::skeletons_exact(memo, scope, 0, sz)) {
      out.push_back(ph);
      if (out.size() >= cap) break;
    }
  return out;
}

//---- the term functor as a prae-dilator

inline PraeDilator make_lterm_dilator(const Base& b) {
  PraeDilator T;
  T.name = "L^u";
  T.on_order = [b](const LinearOrder& X) {
    LinearOrder O;
    O.name = "L^u(" + X.name + ")";
    O.valid = [b, X](const Val& t) { return lterm_valid(b, X, t); };
    O.cmp = [b, X](const Val& s, const Val& t) { return lterm_cmp(b, X, s, t); };
    // Structural generation: round k works over the length-k stage prefix,
    // skeletons of bounded size, and parameter tuples drawn from terms emitted
    // in earlier rounds.  All cutoffs grow with k, so every term appears
    // eventually, and the emission sequence does not depend on the budget.
    O.enumerate = [b, X](std::size_t budget) {
      std::vector<Val> out;
      if (budget == 0) return out;
      std::unordered_set<Val, ValHash, ValEq> seen;
      auto push = [&](const Val& t) {
        if (seen.insert(t).second) out.push_back(t);
        return out.size() >= budget;
      };
      for (std::size_t i = 0; i < b.urelems.size(); ++i)
        if (push(mk(Tag::urelem, (long long)i))) return out;
      detail::SkelMemo memo;
      std::size_t prev_prefix = (std::size_t)-1;
      for (std::size_t k = 1;; ++k) {
        std::vector<Val> x = fin_normalize(X, X.enumerate(k));
        // an empty stable stage prefix exhausts: urelems are all there is
        if (x.empty() && prev_prefix == 0 && k > 2) break;
        prev_prefix = x.size();
        std::size_t round_start = out.size();
        for (const Val& s : x)
          if (push(mk(Tag::l_stage, {s}))) return out;
        std::size_t size_max = 2 + k / 8, cap = 64 * k * k;
        for (const Val& s : x) {
          std::vector<Val> pool;
          for (std::size_t i = 0; i < round_start; ++i)
            if (fin_below_elem(X, supp_L(X, out[i]), s)) pool.push_back(out[i]);
          for (std::size_t c = 0; c < k; ++c) {
            if (c > 0 && pool.empty()) break;
            std::vector<Val> skels;
            for (std::size_t sz = 1; sz <= size_max && skels.size() < cap; ++sz)
              for (const Val& ph : detail::skeletons_exact(memo, (long long)c, 0, sz)) {
                skels.push_back(ph);
                if (skels.size() >= cap) break;
              }
            // parameter tuples grouped by the largest pool index used, so a
            // tuple's position survives later pool growth
            std::size_t tuples = 0;
            for (std::size_t m = 0; m < (c == 0 ? 1 : pool.size()) && tuples < cap;
                 ++m) {
              std::vector<std::size_t> ix(c, 0);
              while (tuples < cap) {
                bool uses_m = c == 0;
                for (std::size_t v : ix)
                  if (v == m) uses_m = true;
                if (uses_m) {
                  std::vector<Val> params;
                  params.reserve(c);
                  for (std::size_t v : ix) params.push_back(pool[v]);
                  for (const Val& ph : skels)
                    if (push(lt_sep(b, X, s, ph, params))) return out;
                  ++tuples;
                }
                std::size_t pos = 0;
                while (pos < c && ++ix[pos] > (std::size_t)m) ix[pos++] = 0;
                if (pos >= c) break;
              }
              if (c == 0) break;
            }
          }
        }
      }
      return out;
    };
    O.show = [X](const Val& t) { return lterm_show(X, t); };
    O.parse = [](std::string_view) -> std::optional<Val> { return std::nullopt; };
    return O;
  };
  T.on_embedding = [T](const Embedding& f) {
    Embedding g;
    g.name = "L^u(" + f.name + ")";
    g.src = T.on_order(f.src);
    g.dst = T.on_order(f.dst);
    g.map = [fm = f.map](const Val& t) { return map_L(fm, t); };
    return g;
  };
  T.supp = [](const LinearOrder& X, const Val& t) { return supp_L(X, t); };
  return T;
}

}  // namespace bhcalc

#endif

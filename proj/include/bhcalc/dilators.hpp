#ifndef BHCALC_DILATORS_HPP
#define BHCALC_DILATORS_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bhcalc/orders.hpp"

namespace bhcalc {

//---- prae-dilators as capability records

// A prae-dilator maps orders to orders and embeddings to embeddings, and
// carries a support function into finite subsets.  supp returns a normalized
// subset of the given order.
struct PraeDilator {
  std::string name;
  std::function<LinearOrder(const LinearOrder&)> on_order;
  std::function<Embedding(const Embedding&)> on_embedding;
  std::function<std::vector<Val>(const LinearOrder&, const Val&)> supp;
};

inline void attach_default_show(LinearOrder& X) {
  if (!X.show) X.show = [](const Val& v) { return to_sexpr(v); };
  if (!X.parse)
    X.parse = [](std::string_view) -> std::optional<Val> { return std::nullopt; };
}

inline LinearOrder restrict_order(const LinearOrder& X, std::vector<Val> subset) {
  if (!fin_is_normal(X, subset))
    throw std::invalid_argument("restrict_order: subset not normalized");
  LinearOrder S;
  S.name = X.name + "|" + std::to_string(subset.size());
  S.finite_size = (long long)subset.size();
  S.valid = [X, subset](const Val& v) { return X.valid(v) && fin_member(X, subset, v); };
  S.cmp = X.cmp;
  S.enumerate = [subset](std::size_t budget) {
    std::vector<Val> out(subset.begin(),
                         subset.begin() + std::min(budget, subset.size()));
    return out;
  };
  S.show = X.show;
  S.parse = [](std::string_view) -> std::optional<Val> { return std::nullopt; };
  return S;
}

inline Embedding inclusion_embedding(const LinearOrder& X, const std::vector<Val>& subset) {
  Embedding f;
  f.name = "incl";
  f.src = restrict_order(X, subset);
  f.dst = X;
  f.map = [](const Val& v) { return v; };
  return f;
}

//---- builtin functors

inline PraeDilator dil_constant() {
  PraeDilator T;
  T.name = "1";
  T.on_order = [](const LinearOrder& X) {
    LinearOrder O;
    O.name = "1(" + X.name + ")";
    O.finite_size = 1;
    O.valid = [](const Val& v) { return v && v->tag == Tag::d_bot; };
    O.cmp = [](const Val&, const Val&) { return Ord::eq; };
    O.enumerate = [](std::size_t budget) {
      std::vector<Val> out;
      if (budget > 0) out.push_back(mk(Tag::d_bot));
      return out;
    };
    attach_default_show(O);
    return O;
  };
  T.on_embedding = [T](const Embedding& f) {
    Embedding g;
    g.name = "1(" + f.name + ")";
    g.src = T.on_order(f.src);
    g.dst = T.on_order(f.dst);
    g.map = [](const Val& v) { return v; };
    return g;
  };
  T.supp = [](const LinearOrder&, const Val&) { return std::vector<Val>{}; };
  return T;
}

inline PraeDilator dil_identity() {
  PraeDilator T;
  T.name = "Id";
  T.on_order = [](const LinearOrder& X) { return X; };
  T.on_embedding = [](const Embedding& f) { return f; };
  T.supp = [](const LinearOrder&, const Val& v) { return std::vector<Val>{v}; };
  return T;
}

// The three-part functor 1 + X + X: a bottom element, a middle copy of X and
// an upper copy above it.
inline Val dsum_bot() { return mk(Tag::d_bot); }
inline Val dsum_mid(const Val& x) { return mk(Tag::d_mid, {x}); }
inline Val dsum_top(const Val& x) { return mk(Tag::d_top, {x}); }

inline PraeDilator dil_one_x_x() {
  PraeDilator T;
  T.name = "1+X+X";
  T.on_order = [](const LinearOrder& X) {
    LinearOrder O;
    O.name = "1+X+X(" + X.name + ")";
    if (X.finite_size) O.finite_size = 1 + 2 * *X.finite_size;
    O.valid = [X](const Val& v) {
      if (!v) return false;
      if (v->tag == Tag::d_bot) return v->kids.empty();
      if (v->tag == Tag::d_mid || v->tag == Tag::d_top)
        return v->kids.size() == 1 && X.valid(v->kids[0]);
      return false;
    };
    O.cmp = [X](const Val& a, const Val& b) {
      auto rank = [](const Val& v) {
        return v->tag == Tag::d_bot ? 0 : v->tag == Tag::d_mid ? 1 : 2;
      };
      if (rank(a) != rank(b)) return ord_of_int(rank(a), rank(b));
      if (a->tag == Tag::d_bot) return Ord::eq;
      return X.cmp(a->kids[0], b->kids[0]);
    };
    O.enumerate = [X](std::size_t budget) {
      std::vector<Val> out;
      if (budget == 0) return out;
      out.push_back(dsum_bot());
      for (const Val& x : X.enumerate(budget)) {
        if (out.size() >= budget) break;
        out.push_back(dsum_mid(x));
        if (out.size() >= budget) break;
        out.push_back(dsum_top(x));
      }
      return out;
    };
    attach_default_show(O);
    return O;
  };
  T.on_embedding = [T](const Embedding& f) {
    Embedding g;
    g.name = "1+X+X(" + f.name + ")";
    g.src = T.on_order(f.src);
    g.dst = T.on_order(f.dst);
    g.map = [fm = f.map](const Val& v) -> Val {
      if (v->tag == Tag::d_bot) return v;
      return mk(v->tag, {fm(v->kids[0])});
    };
    return g;
  };
  T.supp = [](const LinearOrder&, const Val& v) {
    if (v->tag == Tag::d_bot) return std::vector<Val>{};
    return std::vector<Val>{v->kids[0]};
  };
  return T;
}

// Finite subsets of X compared colexicographically (binary notation when X
// is a finite ordinal).
inline PraeDilator dil_two_pow() {
  PraeDilator T;
  T.name = "2^X";
  T.on_order = [](const LinearOrder& X) {
    LinearOrder O;
    O.name = "2^(" + X.name + ")";
    if (X.finite_size && *X.finite_size < 40)
      O.finite_size = 1ll << *X.finite_size;
    O.valid = [X](const Val& v) {
      if (!v || v->tag != Tag::d_set) return false;
      for (const Val& k : v->kids)
        if (!X.valid(k)) return false;
      return fin_is_normal(X, v->kids);
    };
    O.cmp = [X](const Val& a, const Val& b) { return colex_cmp(X, a->kids, b->kids); };
    O.enumerate = [X](std::size_t budget) {
      // subsets listed by largest element first appearing, masks ascending;
      // every finite subset shows up at the step for its maximum
      std::vector<Val> out;
      if (budget == 0) return out;
      out.push_back(mk(Tag::d_set, std::vector<Val>{}));
      std::vector<Val> ground = X.enumerate(budget);
      for (std::size_t n = 1; n <= ground.size() && out.size() < budget; ++n) {
        std::size_t masks = std::size_t{1} << std::min<std::size_t>(n - 1, 20);
        for (std::size_t mask = 0; mask < masks && out.size() < budget; ++mask) {
          std::vector<Val> kids;
          for (std::size_t i = 0; i + 1 < n; ++i)
            if (mask & (std::size_t{1} << i)) kids.push_back(ground[i]);
          kids.push_back(ground[n - 1]);
          out.push_back(mk(Tag::d_set, fin_normalize(X, std::move(kids))));
        }
      }
      return out;
    };
    attach_default_show(O);
    return O;
  };
  T.on_embedding = [T](const Embedding& f) {
    Embedding g;
    g.name = "2^(" + f.name + ")";
    g.src = T.on_order(f.src);
    g.dst = T.on_order(f.dst);
    g.map = [fm = f.map, dst = f.dst](const Val& v) {
      std::vector<Val> kids;
      kids.reserve(v->kids.size());
      for (const Val& k : v->kids) kids.push_back(fm(k));
      return mk(Tag::d_set, fin_normalize(dst, std::move(kids)));
    };
    return g;
  };
  T.supp = [](const LinearOrder&, const Val& v) { return v->kids; };
  return T;
}

//---- the inclusive variant

// Elements are pairs <a, sigma> with a a finite subset of X and sigma an
// element over the restriction to a whose support is all of a.  Comparison
// goes through the canonical map <a, sigma> -> T_incl(sigma) into T_X.
inline PraeDilator make_inclusive(const PraeDilator& T) {
  PraeDilator D;
  D.name = "incl(" + T.name + ")";

  auto transport = [T](const LinearOrder& X, const std::vector<Val>& a, const Val& sigma) {
    return T.on_embedding(inclusion_embedding(X, a)).map(sigma);
  };

  D.on_order = [T, transport](const LinearOrder& X) {
    LinearOrder O;
    O.name = "incl(" + T.name + ")(" + X.name + ")";
    O.valid = [T, X](const Val& v) {
      if (!v || v->tag != Tag::d_pair || v->kids.size() != 2) return false;
      const Val& a = v->kids[0];
      if (a->tag != Tag::fin_set || !fin_is_normal(X, a->kids)) return false;
      for (const Val& s : a->kids)
        if (!X.valid(s)) return false;
      LinearOrder sub = restrict_order(X, a->kids);
      if (!T.on_order(sub).valid(v->kids[1])) return false;
      std::vector<Val> sp = T.supp(sub, v->kids[1]);
      return sp.size() == a->kids.size() && fin_subset_of(X, sp, a->kids) &&
             fin_subset_of(X, a->kids, sp);
    };
    // the canonical transport into T_X is injective on valid pairs, so
    // comparing transported values is a linear order on the pairs
    O.cmp = [T, X, transport](const Val& v, const Val& w) {
      Val sv = transport(X, v->kids[0]->kids, v->kids[1]);
      Val sw = transport(X, w->kids[0]->kids, w->kids[1]);
      return T.on_order(X).cmp(sv, sw);
    };
    O.enumerate = [T, X](std::size_t budget) {
      std::vector<Val> out;
      LinearOrder TX = T.on_order(X);
      for (const Val& sigma : TX.enumerate(budget)) {
        std::vector<Val> a = T.supp(X, sigma);
        LinearOrder sub = restrict_order(X, a);
        LinearOrder Tsub = T.on_order(sub);
        Embedding incl = T.on_embedding(inclusion_embedding(X, a));
        std::optional<Val> pulled;
        if (Tsub.valid(sigma) && val_eq(incl.map(sigma), sigma)) pulled = sigma;
        for (const Val& cand :
             pulled ? std::vector<Val>{} : Tsub.enumerate(std::max<std::size_t>(4 * budget, 64))) {
          if (val_eq(incl.map(cand), sigma)) {
            pulled = cand;
            break;
          }
        }
        if (!pulled) continue;  // preimage outside the search budget
        out.push_back(mk(Tag::d_pair, {mk(Tag::fin_set, a), *pulled}));
        if (out.size() >= budget) break;
      }
      return out;
    };
    attach_default_show(O);
    return O;
  };

  D.on_embedding = [T, D](const Embedding& f) {
    Embedding g;
    g.name = "incl(" + f.name + ")";
    g.src = D.on_order(f.src);
    g.dst = D.on_order(f.dst);
    g.map = [T, f](const Val& v) {
      const std::vector<Val>& a = v->kids[0]->kids;
      std::vector<Val> fa;
      fa.reserve(a.size());
      for (const Val& s : a) fa.push_back(f.map(s));
      fa = fin_normalize(f.dst, std::move(fa));
      Embedding restricted;
      restricted.name = "restr(" + f.name + ")";
      restricted.src = restrict_order(f.src, a);
      restricted.dst = restrict_order(f.dst, fa);
      restricted.map = f.map;
      return mk(Tag::d_pair,
                {mk(Tag::fin_set, fa), T.on_embedding(restricted).map(v->kids[1])});
    };
    return g;
  };

  D.supp = [](const LinearOrder&, const Val& v) { return v->kids[0]->kids; };
  return D;
}

//---- structural checks for prae-dilators

// Verifies, on the listed orders and embeddings: that each image is a linear
// order, functoriality (identities and available compositions), that
// embeddings map to embeddings, naturality of the support function, and the
// support property (every element is reached from its own support).
inline CheckReport check_prae_dilator(const PraeDilator& T,
                                      const std::vector<LinearOrder>& orders,
                                      const std::vector<Embedding>& maps,
                                      std::size_t budget) {
  CheckReport report;
  for (const LinearOrder& X : orders) {
    LinearOrder TX = T.on_order(X);
    report.merge(check_linear_order(TX, budget));
    Embedding tid = T.on_embedding(identity_embedding(X));
    for (const Val& sigma : TX.enumerate(budget)) {
      if (!val_eq(tid.map(sigma), sigma))
        report.fail(T.name + ": identity law fails on " + X.name + " at " + to_sexpr(sigma));
      std::vector<Val> sp = T.supp(X, sigma);
      if (!fin_is_normal(X, sp))
        report.fail(T.name + ": support not normalized at " + to_sexpr(sigma));
      // support property: sigma lies in the range of the inclusion of its
      // own support
      LinearOrder sub = restrict_order(X, sp);
      LinearOrder Tsub = T.on_order(sub);
      Embedding incl = T.on_embedding(inclusion_embedding(X, sp));
      // entrywise functors transport along inclusions without changing the
      // value, so try sigma as its own preimage before searching
      bool reached = Tsub.valid(sigma) && val_eq(incl.map(sigma), sigma);
      if (!reached)
        for (const Val& cand : Tsub.enumerate(std::max<std::size_t>(4 * budget, 64)))
          if (val_eq(incl.map(cand), sigma)) {
            reached = true;
            break;
          }
      if (!reached)
        report.fail(T.name + ": support property fails on " + X.name + " at " +
                    to_sexpr(sigma));
    }
  }
  for (const Embedding& f : maps) {
    Embedding Tf = T.on_embedding(f);
    report.merge(check_embedding(Tf, budget));
    for (const Val& sigma : Tf.src.enumerate(budget)) {
      std::vector<Val> lhs = T.supp(f.dst, Tf.map(sigma));
      std::vector<Val> rhs = fin_map(f.dst, f, T.supp(f.src, sigma));
      if (lhs.size() != rhs.size() || !fin_subset_of(f.dst, lhs, rhs))
        report.fail(T.name + ": supp not natural along " + f.name + " at " + to_sexpr(sigma));
    }
  }
  for (const Embedding& f : maps)
    for (const Embedding& g : maps)
      if (g.src.name == f.dst.name) {
        Embedding gf = compose(g, f);
        Embedding tg_tf = compose(T.on_embedding(g), T.on_embedding(f));
        Embedding tgf = T.on_embedding(gf);
        for (const Val& sigma : T.on_order(f.src).enumerate(budget))
          if (!val_eq(tgf.map(sigma), tg_tf.map(sigma)))
            report.fail(T.name + ": composition law fails along " + f.name + ";" + g.name);
      }
  return report;
}

//---- collapse candidates

struct CollapseCandidate {
  std::string name;
  PraeDilator T;
  LinearOrder X;
  std::function<std::optional<Val>(const Val&)> theta;
};

// Audits the two collapse laws on the listed elements:
//   (i)  sigma < tau and supp(sigma) pointwise below theta(tau)
//        implies theta(sigma) < theta(tau);
//   (ii) supp(sigma) pointwise below theta(sigma).
inline CheckReport check_bh_collapse(const CollapseCandidate& c,
                                     const std::vector<Val>& elements) {
  CheckReport report;
  LinearOrder TX = c.T.on_order(c.X);
  std::vector<std::pair<Val, Val>> assigned;
  for (const Val& sigma : elements) {
    std::optional<Val> v = c.theta(sigma);
    if (!v || !c.X.valid(*v)) {
      report.fail(c.name + ": theta undefined or invalid at " + to_sexpr(sigma));
      continue;
    }
    if (!fin_below_elem(c.X, c.T.supp(c.X, sigma), *v))
      report.fail(c.name + ": support bound fails at " + to_sexpr(sigma));
    assigned.emplace_back(sigma, *v);
  }
  for (const auto& [sigma, vs] : assigned)
    for (const auto& [tau, vt] : assigned) {
      if (TX.cmp(sigma, tau) != Ord::lt) continue;
      if (!fin_below_elem(c.X, c.T.supp(c.X, sigma), vt)) continue;
      if (c.X.cmp(vs, vt) != Ord::lt)
        report.fail(c.name + ": monotonicity fails at " + to_sexpr(sigma) + " < " +
                    to_sexpr(tau));
    }
  return report;
}

// The example collapse of 1+X+X over omega^omega: bottom goes to zero, the
// middle copy to the successor, the upper copy to omega times the successor.
inline CollapseCandidate intro_collapse_womega() {
  CollapseCandidate c;
  c.name = "intro";
  c.T = dil_one_x_x();
  c.X = make_womega();
  c.theta = [](const Val& sigma) -> std::optional<Val> {
    if (sigma->tag == Tag::d_bot) return womega({});
    if (sigma->tag == Tag::d_mid) return womega_succ(sigma->kids[0]);
    if (sigma->tag == Tag::d_top) return womega_times_omega_succ(sigma->kids[0]);
    return std::nullopt;
  };
  return c;
}

//---- greedy collapse over a finite order

struct GreedyResult {
  bool total = false;
  std::vector<std::pair<Val, Val>> assignments;
  std::optional<Val> failed_at;
  CheckReport notes;
};

// Recomputes the minimal collapse by recursion over T_X: theta(tau) is the
// least alpha in X such that supp(tau) and all previously assigned values
// theta(sigma) with supp(sigma) below alpha lie below alpha.  Fails at the
// first tau without such an alpha.
inline GreedyResult greedy_collapse(const PraeDilator& T, const LinearOrder& X,
                                    std::size_t budget) {
  GreedyResult result;
  LinearOrder TX = T.on_order(X);
  std::vector<Val> elements = TX.enumerate(budget);
  if (TX.enumerate(budget + 1).size() > elements.size()) {
    result.notes.fail("greedy_collapse: enumeration not complete within budget");
    return result;
  }
  std::sort(elements.begin(), elements.end(),
            [&](const Val& a, const Val& b) { return TX.lt(a, b); });
  std::vector<Val> ground = X.enumerate(budget);
  if (X.enumerate(budget + 1).size() > ground.size()) {
    result.notes.fail("greedy_collapse: base order not finite within budget");
    return result;
  }
  std::sort(ground.begin(), ground.end(),
            [&](const Val& a, const Val& b) { return X.lt(a, b); });

  for (const Val& tau : elements) {
    std::optional<Val> chosen;
    for (const Val& alpha : ground) {
      bool fits = fin_below_elem(X, T.supp(X, tau), alpha);
      for (const auto& [sigma, value] : result.assignments) {
        if (!fits) break;
        if (fin_below_elem(X, T.supp(X, sigma), alpha) && !X.lt(value, alpha)) fits = false;
      }
      if (fits) {
        chosen = alpha;
        break;
      }
    }
    if (!chosen) {
      result.failed_at = tau;
      result.notes.note("greedy_collapse: no value available at " + to_sexpr(tau));
      return result;
    }
    result.assignments.emplace_back(tau, *chosen);
  }
  result.total = true;
  return result;
}

//---- converse embedding from a collapse of 1+X+X

struct EmbedResult {
  std::vector<std::pair<Val, Val>> assignments;  // omega^omega value -> X element
  CheckReport notes;
};

// Builds f with f(0) = theta(bot), f(beta+1) = theta(mid(f(beta))) and
// f(omega*alpha) = theta(top(f(alpha))) for limits, on the given inputs.
inline EmbedResult embed_from_collapse(const std::function<Val(const Val&)>& theta,
                                       const LinearOrder& X,
                                       const std::vector<Val>& inputs) {
  EmbedResult result;
  ValMap<Val> memo;
  std::function<Val(const Val&)> f = [&](const Val& beta) -> Val {
    auto it = memo.find(beta);
    if (it != memo.end()) return it->second;
    Val value;
    if (womega_is_zero(beta))
      value = theta(dsum_bot());
    else if (womega_is_limit(beta))
      value = theta(dsum_top(f(womega_limit_quotient(beta))));
    else
      value = theta(dsum_mid(f(womega_pred(beta))));
    memo.emplace(beta, value);
    return value;
  };
  LinearOrder W = make_womega();
  for (const Val& beta : inputs) result.assignments.emplace_back(beta, f(beta));
  for (const auto& [b0, v0] : result.assignments)
    for (const auto& [b1, v1] : result.assignments)
      if (W.cmp(b0, b1) == Ord::lt && X.cmp(v0, v1) != Ord::lt)
        result.notes.fail("embed_from_collapse: not strictly increasing at " + W.show(b0) +
                          " / " + W.show(b1));
  return result;
}

}  // namespace bhcalc

#endif

#ifndef BHCALC_SEARCHTREE_HPP
#define BHCALC_SEARCHTREE_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "bhcalc/formulas.hpp"

namespace bhcalc {

//---- pairing for triples

// Enumerates triples by increasing maximum, lexicographic within a block, so
// every coordinate of the n-th triple is at most n.
inline std::array<std::uint64_t, 3> triple_unpair(std::uint64_t n) {
  std::uint64_t m = 0;
  while ((m + 1) * (m + 1) * (m + 1) <= n) ++m;
  std::uint64_t r = n - m * m * m;
  for (std::uint64_t a = 0; a <= m; ++a)
    for (std::uint64_t b = 0; b <= m; ++b)
      for (std::uint64_t c = 0; c <= m; ++c) {
        if (a != m && b != m && c != m) continue;
        if (r == 0) return {a, b, c};
        --r;
      }
  return {0, 0, 0};
}

inline std::uint64_t triple_pair(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t m = std::max(a, std::max(b, c));
  std::uint64_t n = m * m * m;
  for (std::uint64_t i = 0; i <= m; ++i)
    for (std::uint64_t j = 0; j <= m; ++j)
      for (std::uint64_t k = 0; k <= m; ++k) {
        if (i != m && j != m && k != m) continue;
        if (i == a && j == b && k == c) return n;
        ++n;
      }
  return 0;
}

//---- axioms

// The n-th entry of the collection-formula stream: a parameter count k and a
// pure skeleton with free variables among 0 (the member), 1 (the image), and
// 2..k+1 (the side parameters).  Entries are ordered by skeleton size, then by
// parameter count; for k >= 1 the last parameter must actually occur, so no
// entry is listed twice.
inline std::pair<long long, Val> collection_entry(std::uint64_t n, long long max_params = 2) {
  detail::SkelMemo memo;
  std::uint64_t at = 0;
  for (std::size_t size = 1;; ++size) {
    for (long long k = 0; k <= max_params; ++k)
      for (const Val& th : detail::skeletons_exact(memo, k + 1, 0, size)) {
        if (k > 0 && free_vars(th).count(k + 1) == 0) continue;
        if (at == n) return {k, th};
        ++at;
      }
  }
}

// Axiom 0 asserts that every set has a successor: for all x there is a y whose
// members are exactly the members of x together with x itself, and x in y.
// Axiom n+1 is the collection instance for the n-th skeleton of the stream.
inline Val axiom(std::uint64_t n, long long max_params = 2) {
  if (n == 0) {
    Val x = fvar(0), y = fvar(1), z = fvar(2);
    Val lhs = mk(Tag::f_ball, 2,
                 {y, mk(Tag::f_or, {mk(Tag::f_in, {z, x}), mk(Tag::f_eq, {z, x})})});
    Val rhs = mk(Tag::f_and, {mk(Tag::f_ball, 2, {x, mk(Tag::f_in, {z, y})}),
                              mk(Tag::f_in, {x, y})});
    return mk(Tag::f_all, 0, {mk(Tag::f_ex, 1, {mk(Tag::f_and, {lhs, rhs})})});
  }
  auto [k, th] = collection_entry(n - 1, max_params);
  long long top = std::max(max_var_id(th), k + 1);
  long long v = top + 1, w = top + 2;
  // exists x in v, forall y, not theta
  Val left = mk(Tag::f_bex, 0, {fvar(v), mk(Tag::f_all, 1, {negate(th)})});
  // exists w, forall x in v, exists y in w, theta
  Val right = mk(Tag::f_ex, w,
                 {mk(Tag::f_ball, 0, {fvar(v), mk(Tag::f_bex, 1, {fvar(w), th})})});
  Val body = mk(Tag::f_all, v, {mk(Tag::f_or, {left, right})});
  for (long long i = k; i >= 1; --i) body = mk(Tag::f_all, i + 1, {body});
  return body;
}

//---- search-tree nodes

// A node is a sequence of terms: entry 2n (below an even-length prefix) is the
// fixed child 0 that introduces the negated n-th axiom, entry 2n+1 answers the
// step chosen by the n-th triple.  The label is recomputed by walking from the
// root; an impossible entry makes the walk fail.
inline Val st_root() { return seq({}); }

inline std::vector<Val> supp_S(const LinearOrder& X, const Val& sigma) {
  std::vector<Val> acc;
  for (const Val& e : sigma->kids) {
    std::vector<Val> s = supp_L(X, e);
    acc = fin_union(X, acc, s);
  }
  return acc;
}

inline Val st_map(const std::function<Val(const Val&)>& f, const Val& sigma) {
  std::vector<Val> kids;
  kids.reserve(sigma->kids.size());
  for (const Val& e : sigma->kids) kids.push_back(map_L(f, e));
  return seq(std::move(kids));
}

// One step of the walk: extends the label of the length-i prefix of sigma by
// the effect of entry i, or fails if that entry is impossible there.
inline std::optional<Sequent> st_step(const Base& b, const LinearOrder& X,
                                      const Sequent& label, const Val& sigma,
                                      std::size_t i, long long max_params = 2) {
  const Val& e = sigma->kids[i];
  Val u0 = mk(Tag::urelem, 0);
  Sequent ext = label;
  if (i % 2 == 0) {
    if (!val_eq(e, u0)) return std::nullopt;
    ext.push_back(negate(axiom(i / 2, max_params)));
    return ext;
  }
  auto [p0, p1, p2] = triple_unpair((i - 1) / 2);
  if (p0 >= label.size()) {
    if (!val_eq(e, u0)) return std::nullopt;
    return ext;
  }
  std::optional<Decomposition> d = decompose(b, X, label[p0]);
  if (!d) return std::nullopt;
  if (d->conjunctive) {
    if (!index_contains(b, X, d->iota, e)) return std::nullopt;
    ext.push_back(d->instance(e));
  } else {
    if (!val_eq(e, u0)) return std::nullopt;
    std::vector<Val> x = supp_S(X, seq_prefix(sigma, p1));
    Val witness = en_L(b, X, x, p2);
    if (index_contains(b, X, d->iota, witness)) ext.push_back(d->instance(witness));
  }
  return ext;
}

inline std::optional<Sequent> st_label(const Base& b, const LinearOrder& X,
                                       const Val& sigma, long long max_params = 2) {
  if (!sigma || sigma->tag != Tag::seq) return std::nullopt;
  Sequent label;
  for (std::size_t i = 0; i < sigma->kids.size(); ++i) {
    std::optional<Sequent> ext = st_step(b, X, label, sigma, i, max_params);
    if (!ext) return std::nullopt;
    label = std::move(*ext);
  }
  return label;
}

inline bool st_valid(const Base& b, const LinearOrder& X, const Val& sigma,
                     long long max_params = 2) {
  return st_label(b, X, sigma, max_params).has_value();
}

inline std::string st_show(const LinearOrder& X, const Val& sigma) {
  std::string txt = "<";
  for (std::size_t i = 0; i < sigma->kids.size(); ++i) {
    if (i) txt += ";";
    txt += lterm_show(X, sigma->kids[i]);
  }
  return txt + ">";
}

// Parses "<entry;entry;...>"; entries use the term syntax, so semicolons only
// separate at nesting depth zero.
inline std::optional<Val> st_parse(const Base& b, const LinearOrder& X,
                                   std::string_view text, long long max_params = 2) {
  if (text.size() < 2 || text.front() != '<' || text.back() != '>') return std::nullopt;
  std::string_view body = text.substr(1, text.size() - 2);
  std::vector<Val> kids;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i < body.size() && (body[i] == '(' || body[i] == '<')) ++depth;
    if (i < body.size() && (body[i] == ')' || body[i] == '>')) --depth;
    if (i == body.size() || (body[i] == ';' && depth == 0)) {
      std::string_view piece = body.substr(start, i - start);
      if (piece.empty() && kids.empty() && i == body.size()) break;  // "<>"
      std::optional<Val> t = lterm_parse(b, X, piece);
      if (!t) return std::nullopt;
      kids.push_back(*t);
      start = i + 1;
    }
  }
  Val sigma = seq(std::move(kids));
  if (!st_valid(b, X, sigma, max_params)) return std::nullopt;
  return sigma;
}

// Child entries available below a node, up to `cap` of them for conjunctive
// steps over an infinite index set.
inline std::vector<Val> st_children(const Base& b, const LinearOrder& X, const Val& sigma,
                                    long long max_params, std::size_t cap) {
  std::optional<Sequent> label = st_label(b, X, sigma, max_params);
  if (!label || cap == 0) return {};
  Val u0 = mk(Tag::urelem, 0);
  std::size_t i = sigma->kids.size();
  if (i % 2 == 0) return {u0};
  auto [p0, p1, p2] = triple_unpair((i - 1) / 2);
  (void)p1;
  (void)p2;
  if (p0 >= label->size()) return {u0};
  std::optional<Decomposition> d = decompose(b, X, (*label)[p0]);
  if (!d || !d->conjunctive) return {u0};
  return index_enumerate(b, X, d->iota, cap);
}

//---- branch closure

// Checks the two closure bullets on a finite family of closed formulas: every
// conjunctive member must have some instance present, every disjunctive member
// must have all of them.  Over an index set that the budget exhausts this is
// decided outright; otherwise an unfound conjunctive witness stays pending.
struct BranchReport {
  bool ok = true;        // no bullet definitely violated
  bool pending = false;  // some existential search ran out of budget
  CheckReport rep;
};

inline BranchReport branch_closure_check(const Base& b, const LinearOrder& X,
                                         const std::vector<Val>& F, std::size_t budget) {
  BranchReport r;
  auto present = [&F](const Val& phi) {
    for (const Val& psi : F)
      if (val_eq(phi, psi)) return true;
    return false;
  };
  for (const Val& phi : F) {
    std::optional<Decomposition> d = decompose(b, X, phi);
    if (!d) {
      r.ok = false;
      r.rep.fail("not closed: " + fml_show(X, phi));
      continue;
    }
    std::vector<Val> idx = index_enumerate(b, X, d->iota, budget);
    bool exhaustive = idx.size() < budget;
    if (d->conjunctive) {
      bool found = false;
      for (const Val& a : idx)
        if (present(d->instance(a))) {
          found = true;
          break;
        }
      if (!found) {
        if (exhaustive) {
          r.ok = false;
          r.rep.fail("no instance present: " + fml_show(X, phi));
        } else {
          r.pending = true;
          r.rep.note("instance search pending: " + fml_show(X, phi));
        }
      }
    } else {
      for (const Val& a : idx)
        if (!present(d->instance(a))) {
          r.ok = false;
          r.rep.fail("missing instance " + lterm_show(X, a) + " of " + fml_show(X, phi));
          break;
        }
      if (r.ok && !exhaustive) r.pending = true;
    }
  }
  return r;
}

//---- the search tree as a prae-dilator

// Nodes ordered by the Kleene-Brouwer comparison over the term order; an
// extension sits below its prefix, siblings follow the first differing entry.
inline PraeDilator make_searchtree_dilator(const Base& b, long long max_params = 2) {
  PraeDilator T;
  T.name = "S^u";
  T.on_order = [b, max_params](const LinearOrder& X) {
    LinearOrder O;
    O.name = "S^u(" + X.name + ")";
    O.valid = [b, X, max_params](const Val& s) { return st_valid(b, X, s, max_params); };
    O.cmp = [b, X](const Val& s, const Val& t) {
      return kb_cmp([&b, &X](const Val& p, const Val& q) { return lterm_cmp(b, X, p, q); },
                    s->kids, t->kids);
    };
    // Round r visits the tree to depth r with r children per conjunctive node;
    // the visit order does not depend on the budget.  Labels travel with the
    // frontier, so no node is walked from the root twice.
    O.enumerate = [b, X, max_params](std::size_t budget) {
      std::vector<Val> out;
      std::unordered_set<Val, ValHash, ValEq> seen;
      Val u0 = mk(Tag::urelem, 0);
      for (std::size_t r = 1; out.size() < budget; ++r) {
        std::deque<std::pair<Val, Sequent>> frontier;
        frontier.emplace_back(st_root(), Sequent{});
        for (std::size_t depth = 0; depth <= r && !frontier.empty(); ++depth) {
          std::deque<std::pair<Val, Sequent>> next;
          for (const auto& [node, label] : frontier) {
            if (seen.insert(node).second) {
              out.push_back(node);
              if (out.size() >= budget) return out;
            }
            if (depth == r) continue;
            std::vector<Val> entries{u0};
            std::size_t i = node->kids.size();
            if (i % 2 == 1) {
              auto [p0, p1, p2] = triple_unpair((i - 1) / 2);
              (void)p1;
              (void)p2;
              if (p0 < label.size()) {
                std::optional<Decomposition> d = decompose(b, X, label[p0]);
                if (d && d->conjunctive) entries = index_enumerate(b, X, d->iota, r);
              }
            }
            for (const Val& e : entries) {
              Val cand = seq_append(node, e);
              std::optional<Sequent> ext = st_step(b, X, label, cand, i, max_params);
              if (ext) next.emplace_back(cand, std::move(*ext));
            }
          }
          frontier.swap(next);
        }
      }
      return out;
    };
    O.show = [X](const Val& s) { return st_show(X, s); };
    O.parse = [b, X, max_params](std::string_view t) { return st_parse(b, X, t, max_params); };
    return O;
  };
  T.on_embedding = [T](const Embedding& f) {
    Embedding g;
    g.name = "S^u(" + f.name + ")";
    g.src = T.on_order(f.src);
    g.dst = T.on_order(f.dst);
    g.map = [fm = f.map](const Val& s) { return st_map(fm, s); };
    return g;
  };
  T.supp = [](const LinearOrder& X, const Val& s) { return supp_S(X, s); };
  return T;
}

}  // namespace bhcalc

#endif

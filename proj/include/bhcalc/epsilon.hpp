#ifndef BHCALC_EPSILON_HPP
#define BHCALC_EPSILON_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhcalc/searchtree.hpp"

namespace bhcalc {

//---- constructors

// Terms: 0, the cap Omega, a name e_x for a base point, a name E_sigma for a
// search-tree node, or a sum w^{r_0}+...+w^{r_n} with weakly decreasing
// exponents.  Omega, e_x and E_sigma stand for fixed points of s -> w^s, so a
// one-summand sum over such an exponent is the exponent itself and never a sum
// node.
inline Val eps_zero() { return mk(Tag::e_zero); }
inline Val big_omega() { return mk(Tag::e_omega); }
inline Val eps_e(const Val& x) { return mk(Tag::e_small, {x}); }
inline Val eps_big_e(const Val& sigma) { return mk(Tag::e_big, {sigma}); }

inline bool eps_is_leaf(const Val& t) {
  return t->tag == Tag::e_omega || t->tag == Tag::e_small || t->tag == Tag::e_big;
}

inline bool is_eps_term(const Val& t) {
  switch (t->tag) {
    case Tag::e_zero:
    case Tag::e_omega:
    case Tag::e_small:
    case Tag::e_big:
    case Tag::e_sum:
      return true;
    default:
      return false;
  }
}

// w to the power of a single exponent
inline Val omega_pow(const Val& r) {
  if (eps_is_leaf(r)) return r;
  return mk(Tag::e_sum, {r});
}

//---- comparison

inline Ord eps_cmp(const Base& b, const LinearOrder& X, const Val& s, const Val& t);

namespace detail {

// 0, then names e_x, then the cap, then tree names, then proper sums
inline int eps_form(const Val& t) {
  switch (t->tag) {
    case Tag::e_zero:
      return 0;
    case Tag::e_small:
      return 1;
    case Tag::e_omega:
      return 2;
    case Tag::e_big:
      return 3;
    default:
      return 4;
  }
}

}  // namespace detail

inline Ord eps_cmp(const Base& b, const LinearOrder& X, const Val& s, const Val& t) {
  int fs = detail::eps_form(s), ft = detail::eps_form(t);
  if (fs == 4 && ft == 4) {
    std::size_t n = std::min(s->kids.size(), t->kids.size());
    for (std::size_t i = 0; i < n; ++i) {
      Ord c = eps_cmp(b, X, s->kids[i], t->kids[i]);
      if (c != Ord::eq) return c;
    }
    if (s->kids.size() == t->kids.size()) return Ord::eq;
    return s->kids.size() < t->kids.size() ? Ord::lt : Ord::gt;
  }
  if (fs == 4) {  // sum against a leaf or zero: the first exponent decides
    if (ft == 0) return Ord::gt;
    return eps_cmp(b, X, s->kids[0], t) == Ord::lt ? Ord::lt : Ord::gt;
  }
  if (ft == 4) {
    if (fs == 0) return Ord::lt;
    return eps_cmp(b, X, s, t->kids[0]) != Ord::gt ? Ord::lt : Ord::gt;
  }
  if (fs != ft) return fs < ft ? Ord::lt : Ord::gt;
  switch (fs) {
    case 1:
      return X.cmp(s->kids[0], t->kids[0]);
    case 3:
      return kb_cmp([&b, &X](const Val& p, const Val& q) { return lterm_cmp(b, X, p, q); },
                    s->kids[0]->kids, t->kids[0]->kids);
    default:
      return Ord::eq;  // 0 = 0, Omega = Omega
  }
}

inline bool eps_leq(const Base& b, const LinearOrder& X, const Val& s, const Val& t) {
  return eps_cmp(b, X, s, t) != Ord::gt;
}

//---- validity, support, functor action

inline bool eps_valid(const Base& b, const LinearOrder& X, const Val& t,
                      long long max_params = 2) {
  if (!t) return false;
  switch (t->tag) {
    case Tag::e_zero:
    case Tag::e_omega:
      return t->kids.empty();
    case Tag::e_small:
      return t->kids.size() == 1 && X.valid(t->kids[0]);
    case Tag::e_big:
      return t->kids.size() == 1 && st_valid(b, X, t->kids[0], max_params);
    case Tag::e_sum: {
      if (t->kids.empty()) return false;
      if (t->kids.size() == 1 && eps_is_leaf(t->kids[0])) return false;
      for (const Val& r : t->kids)
        if (!eps_valid(b, X, r, max_params)) return false;
      for (std::size_t i = 0; i + 1 < t->kids.size(); ++i)
        if (eps_cmp(b, X, t->kids[i], t->kids[i + 1]) == Ord::lt) return false;
      return true;
    }
    default:
      return false;
  }
}

inline std::vector<Val> supp_eps(const LinearOrder& X, const Val& t) {
  switch (t->tag) {
    case Tag::e_small:
      return {t->kids[0]};
    case Tag::e_big:
      return supp_S(X, t->kids[0]);
    case Tag::e_sum: {
      std::vector<Val> acc;
      for (const Val& r : t->kids) {
        std::vector<Val> s = supp_eps(X, r);
        acc = fin_union(X, acc, s);
      }
      return acc;
    }
    default:
      return {};
  }
}

inline Val map_eps(const std::function<Val(const Val&)>& f, const Val& t) {
  switch (t->tag) {
    case Tag::e_small:
      return eps_e(f(t->kids[0]));
    case Tag::e_big:
      return eps_big_e(st_map(f, t->kids[0]));
    case Tag::e_sum: {
      std::vector<Val> kids;
      kids.reserve(t->kids.size());
      for (const Val& r : t->kids) kids.push_back(map_eps(f, r));
      return mk(Tag::e_sum, std::move(kids));
    }
    default:
      return t;
  }
}

//---- base-w arithmetic

// The exponent list of a term: empty for 0, the term itself for a fixed-point
// leaf, the kids of a sum.
inline std::vector<Val> eps_decompose(const Val& t) {
  if (t->tag == Tag::e_zero) return {};
  if (eps_is_leaf(t)) return {t};
  return t->kids;
}

// w<exps>: rejects an increasing neighbor pair, collapses the empty list to 0
// and a lone fixed-point exponent to itself.
inline Val omega_list(const Base& b, const LinearOrder& X, const std::vector<Val>& exps) {
  for (std::size_t i = 0; i + 1 < exps.size(); ++i)
    if (eps_cmp(b, X, exps[i], exps[i + 1]) == Ord::lt)
      throw std::invalid_argument("omega_list: exponents increase");
  if (exps.empty()) return eps_zero();
  if (exps.size() == 1 && eps_is_leaf(exps[0])) return exps[0];
  return mk(Tag::e_sum, exps);
}

// Sums drop the summands of s strictly below the leading exponent of t.
inline Val eps_add(const Base& b, const LinearOrder& X, const Val& s, const Val& t) {
  std::vector<Val> ds = eps_decompose(s), dt = eps_decompose(t);
  if (dt.empty()) return s;
  std::size_t i = ds.size();
  while (i > 0 && eps_cmp(b, X, ds[i - 1], dt[0]) == Ord::lt) --i;
  ds.resize(i);
  ds.insert(ds.end(), dt.begin(), dt.end());
  return omega_list(b, X, ds);
}

//---- text form

inline std::string eps_show(const LinearOrder& X, const Val& t) {
  switch (t->tag) {
    case Tag::e_zero:
      return "0";
    case Tag::e_omega:
      return "W";
    case Tag::e_small:
      return "e(" + X.show(t->kids[0]) + ")";
    case Tag::e_big:
      return "E" + st_show(X, t->kids[0]);
    default: {
      std::string txt;
      for (std::size_t i = 0; i < t->kids.size(); ++i) {
        if (i) txt += "+";
        const Val& r = t->kids[i];
        txt += "w^";
        txt += r->tag == Tag::e_sum ? "(" + eps_show(X, r) + ")" : eps_show(X, r);
      }
      return txt;
    }
  }
}

namespace detail {

inline std::optional<Val> eps_parse_at(const Base& b, const LinearOrder& X,
                                       std::string_view text, long long max_params);

inline std::optional<Val> eps_parse_atom(const Base& b, const LinearOrder& X,
                                         std::string_view text, long long max_params) {
  if (text == "0") return eps_zero();
  if (text == "W") return big_omega();
  if (text.size() >= 3 && text.substr(0, 2) == "e(" && text.back() == ')') {
    std::optional<Val> x = X.parse(text.substr(2, text.size() - 3));
    if (!x || !X.valid(*x)) return std::nullopt;
    return eps_e(*x);
  }
  if (text.size() >= 3 && text[0] == 'E' && text[1] == '<' && text.back() == '>') {
    std::optional<Val> s = st_parse(b, X, text.substr(1), max_params);
    if (!s) return std::nullopt;
    return eps_big_e(*s);
  }
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')')
    return eps_parse_at(b, X, text.substr(1, text.size() - 2), max_params);
  return std::nullopt;
}

inline std::optional<Val> eps_parse_at(const Base& b, const LinearOrder& X,
                                       std::string_view text, long long max_params) {
  if (text.empty()) return std::nullopt;
  if (text.substr(0, 2) != "w^") return eps_parse_atom(b, X, text, max_params);
  // split into summands at depth zero
  std::vector<Val> exps;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && (text[i] == '(' || text[i] == '<')) ++depth;
    if (i < text.size() && (text[i] == ')' || text[i] == '>')) --depth;
    if (i == text.size() || (text[i] == '+' && depth == 0)) {
      std::string_view part = text.substr(start, i - start);
      if (part.substr(0, 2) != "w^") return std::nullopt;
      std::optional<Val> r = eps_parse_at(b, X, part.substr(2), max_params);
      if (!r) return std::nullopt;
      exps.push_back(*r);
      start = i + 1;
    }
  }
  for (std::size_t i = 0; i + 1 < exps.size(); ++i)
    if (eps_cmp(b, X, exps[i], exps[i + 1]) == Ord::lt) return std::nullopt;
  return omega_list(b, X, exps);
}

}  // namespace detail

inline std::optional<Val> eps_parse(const Base& b, const LinearOrder& X,
                                    std::string_view text, long long max_params = 2) {
  std::string compact;
  compact.reserve(text.size());
  for (char c : text)
    if (c != ' ' && c != '\t') compact += c;
  std::optional<Val> t = detail::eps_parse_at(b, X, compact, max_params);
  if (!t || !eps_valid(b, X, *t, max_params)) return std::nullopt;
  return t;
}

//---- the epsilon terms as a prae-dilator

inline PraeDilator make_epsilon_dilator(const Base& b, long long max_params = 2) {
  PraeDilator T;
  T.name = "eps(S)^u";
  T.on_order = [b, max_params](const LinearOrder& X) {
    LinearOrder O;
    O.name = "eps(S)^u(" + X.name + ")";
    O.valid = [b, X, max_params](const Val& t) { return eps_valid(b, X, t, max_params); };
    O.cmp = [b, X](const Val& s, const Val& t) { return eps_cmp(b, X, s, t); };
    // Round k adds leaves over the length-k prefixes of the base order and the
    // tree, then sums with up to k exponents drawn from earlier rounds.
    O.enumerate = [b, X, max_params](std::size_t budget) {
      std::vector<Val> out;
      if (budget == 0) return out;
      std::unordered_set<Val, ValHash, ValEq> seen;
      auto push = [&](const Val& t) {
        if (seen.insert(t).second) out.push_back(t);
        return out.size() >= budget;
      };
      if (push(eps_zero()) || push(big_omega())) return out;
      LinearOrder S = make_searchtree_dilator(b, max_params).on_order(X);
      for (std::size_t k = 1;; ++k) {
        std::size_t round_start = out.size();
        for (const Val& x : X.enumerate(k))
          if (push(eps_e(x))) return out;
        for (const Val& sg : S.enumerate(k))
          if (push(eps_big_e(sg))) return out;
        // weakly decreasing exponent tuples over the pool, grouped by the
        // largest pool index used
        std::size_t cap = 16 * k * k, tuples = 0;
        for (std::size_t c = 1; c <= k; ++c) {
          for (std::size_t m = 0; m < round_start && tuples < cap; ++m) {
            std::vector<std::size_t> ix(c, 0);
            while (tuples < cap) {
              bool uses_m = false;
              for (std::size_t v : ix)
                if (v == m) uses_m = true;
              if (uses_m) {
                std::vector<Val> exps;
                exps.reserve(c);
                for (std::size_t v : ix) exps.push_back(out[v]);
                bool sorted = true;
                for (std::size_t i = 0; i + 1 < c && sorted; ++i)
                  sorted = eps_cmp(b, X, exps[i], exps[i + 1]) != Ord::lt;
                if (sorted) {
                  ++tuples;
                  if (push(omega_list(b, X, exps))) return out;
                }
              }
              std::size_t pos = 0;
              while (pos < c && ++ix[pos] > m) ix[pos++] = 0;
              if (pos >= c) break;
            }
          }
        }
        if (round_start == out.size() && X.enumerate(k).empty() && k > 2) {
          // no base points and no growth: only finitely many terms exist
          bool still = S.enumerate(k).size() == S.enumerate(k - 1).size();
          if (still) break;
        }
      }
      return out;
    };
    O.show = [X](const Val& t) { return eps_show(X, t); };
    O.parse = [b, X, max_params](std::string_view t) { return eps_parse(b, X, t, max_params); };
    return O;
  };
  T.on_embedding = [T](const Embedding& f) {
    Embedding g;
    g.name = "eps(" + f.name + ")";
    g.src = T.on_order(f.src);
    g.dst = T.on_order(f.dst);
    g.map = [fm = f.map](const Val& t) { return map_eps(fm, t); };
    return g;
  };
  T.supp = [](const LinearOrder& X, const Val& t) { return supp_eps(X, t); };
  return T;
}

}  // namespace bhcalc

#endif

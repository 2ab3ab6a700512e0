#ifndef BHCALC_ORDERS_HPP
#define BHCALC_ORDERS_HPP

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bhcalc/value.hpp"

namespace bhcalc {

enum class Ord { lt, eq, gt };

inline Ord ord_of_int(long long a, long long b) {
  if (a < b) return Ord::lt;
  if (a > b) return Ord::gt;
  return Ord::eq;
}

//---- check reports

struct CheckReport {
  bool ok = true;
  std::vector<std::string> notes;

  void fail(std::string msg) {
    ok = false;
    notes.push_back(std::move(msg));
  }
  void note(std::string msg) { notes.push_back(std::move(msg)); }
  void merge(const CheckReport& other) {
    ok = ok && other.ok;
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  }
};

//---- linear orders as capability records

// An order is given by a validity predicate, a comparison, and a budgeted
// enumerator.  cmp returns eq exactly on structurally equal values.  The
// enumerator is deterministic and prefix-monotone in the budget; for finite
// orders it is complete once the budget covers the whole order.
struct LinearOrder {
  std::string name;
  std::function<bool(const Val&)> valid;
  std::function<Ord(const Val&, const Val&)> cmp;
  std::function<std::vector<Val>(std::size_t)> enumerate;
  std::function<std::string(const Val&)> show;
  std::function<std::optional<Val>(std::string_view)> parse;
  // Optional capability: an element strictly above all inputs, if one exists.
  std::function<std::optional<Val>(const std::vector<Val>&)> above;
  std::optional<long long> finite_size;

  bool lt(const Val& a, const Val& b) const { return cmp(a, b) == Ord::lt; }
  bool leq(const Val& a, const Val& b) const { return cmp(a, b) != Ord::gt; }
};

struct Embedding {
  std::string name;
  LinearOrder src;
  LinearOrder dst;
  std::function<Val(const Val&)> map;
};

//---- finite subsets

// Finite subsets are kept as vectors sorted strictly increasing in the
// ambient order.
inline std::vector<Val> fin_normalize(const LinearOrder& X, std::vector<Val> items) {
  std::sort(items.begin(), items.end(),
            [&](const Val& a, const Val& b) { return X.lt(a, b); });
  items.erase(std::unique(items.begin(), items.end(),
                          [](const Val& a, const Val& b) { return val_eq(a, b); }),
              items.end());
  return items;
}

inline bool fin_is_normal(const LinearOrder& X, const std::vector<Val>& items) {
  for (std::size_t i = 0; i + 1 < items.size(); ++i)
    if (!X.lt(items[i], items[i + 1])) return false;
  return true;
}

inline std::vector<Val> fin_union(const LinearOrder& X, const std::vector<Val>& a,
                                  const std::vector<Val>& b) {
  std::vector<Val> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return fin_normalize(X, std::move(out));
}

inline bool fin_member(const LinearOrder& X, const std::vector<Val>& a, const Val& s) {
  for (const Val& t : a)
    if (X.cmp(s, t) == Ord::eq) return true;
  return false;
}

inline bool fin_subset_of(const LinearOrder& X, const std::vector<Val>& a,
                          const std::vector<Val>& b) {
  for (const Val& s : a)
    if (!fin_member(X, b, s)) return false;
  return true;
}

// a <^fin b: every element of a lies strictly below some element of b.
// The non-strict variant uses <= instead.
inline bool fin_less_fin(const LinearOrder& X, const std::vector<Val>& a,
                         const std::vector<Val>& b, bool strict = true) {
  for (const Val& s : a) {
    bool found = false;
    for (const Val& t : b) {
      if (strict ? X.lt(s, t) : X.leq(s, t)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// a <^fin {bound} against a single element.
inline bool fin_below_elem(const LinearOrder& X, const std::vector<Val>& a,
                           const Val& bound, bool strict = true) {
  for (const Val& s : a)
    if (!(strict ? X.lt(s, bound) : X.leq(s, bound))) return false;
  return true;
}

inline std::vector<Val> fin_map(const LinearOrder& dst, const Embedding& f,
                                const std::vector<Val>& a) {
  std::vector<Val> out;
  out.reserve(a.size());
  for (const Val& s : a) out.push_back(f.map(s));
  return fin_normalize(dst, std::move(out));
}

// Colexicographic order: the maximum of the symmetric difference decides.
// With both sides sorted increasing this is a comparison from the top.
inline Ord colex_cmp(const LinearOrder& X, const std::vector<Val>& a,
                     const std::vector<Val>& b) {
  std::size_t i = a.size(), j = b.size();
  while (i > 0 && j > 0) {
    Ord c = X.cmp(a[i - 1], b[j - 1]);
    if (c != Ord::eq) return c;
    --i;
    --j;
  }
  if (i > 0) return Ord::gt;
  if (j > 0) return Ord::lt;
  return Ord::eq;
}

// Kleene-Brouwer order on finite sequences: a proper end-extension is
// smaller; otherwise the first difference decides.  The empty sequence is
// the maximum.
inline Ord kb_cmp(const std::function<Ord(const Val&, const Val&)>& elem_cmp,
                  const std::vector<Val>& s, const std::vector<Val>& t) {
  std::size_t n = std::min(s.size(), t.size());
  for (std::size_t i = 0; i < n; ++i) {
    Ord c = elem_cmp(s[i], t[i]);
    if (c != Ord::eq) return c;
  }
  if (s.size() == t.size()) return Ord::eq;
  return s.size() > t.size() ? Ord::lt : Ord::gt;
}

//---- concrete orders

inline LinearOrder make_fin_ord(long long n) {
  LinearOrder X;
  X.name = "fin:" + std::to_string(n);
  X.finite_size = n;
  X.valid = [n](const Val& v) { return is_nat(v) && v->num < n; };
  X.cmp = [](const Val& a, const Val& b) { return ord_of_int(a->num, b->num); };
  X.enumerate = [n](std::size_t budget) {
    std::vector<Val> out;
    for (long long i = 0; i < n && out.size() < budget; ++i) out.push_back(nat(i));
    return out;
  };
  X.show = [](const Val& v) { return std::to_string(v->num); };
  X.parse = [n](std::string_view text) -> std::optional<Val> {
    long long value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    if (value < 0 || value >= n) return std::nullopt;
    return nat(value);
  };
  X.above = [n](const std::vector<Val>& xs) -> std::optional<Val> {
    long long top = -1;
    for (const Val& v : xs) top = std::max(top, v->num);
    if (top + 1 >= n) return std::nullopt;
    return nat(top + 1);
  };
  return X;
}

inline LinearOrder make_omega() {
  LinearOrder X;
  X.name = "omega";
  X.valid = [](const Val& v) { return is_nat(v); };
  X.cmp = [](const Val& a, const Val& b) { return ord_of_int(a->num, b->num); };
  X.enumerate = [](std::size_t budget) {
    std::vector<Val> out;
    for (std::size_t i = 0; i < budget; ++i) out.push_back(nat((long long)i));
    return out;
  };
  X.show = [](const Val& v) { return std::to_string(v->num); };
  X.parse = [](std::string_view text) -> std::optional<Val> {
    long long value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    if (value < 0) return std::nullopt;
    return nat(value);
  };
  X.above = [](const std::vector<Val>& xs) -> std::optional<Val> {
    long long top = -1;
    for (const Val& v : xs) top = std::max(top, v->num);
    return nat(top + 1);
  };
  return X;
}

//---- the order omega^omega

// Elements are weakly decreasing lists of natural exponents, read as Cantor
// normal forms omega^{e_1}+...+omega^{e_k}; the empty list is zero.

inline Val womega(const std::vector<long long>& exps) {
  std::vector<Val> kids;
  kids.reserve(exps.size());
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0) throw std::invalid_argument("womega: negative exponent");
    if (i > 0 && exps[i] > exps[i - 1])
      throw std::invalid_argument("womega: exponents must be weakly decreasing");
    kids.push_back(nat(exps[i]));
  }
  return mk(Tag::w_omega, std::move(kids));
}

inline std::vector<long long> womega_exps(const Val& v) {
  std::vector<long long> out;
  out.reserve(v->kids.size());
  for (const Val& k : v->kids) out.push_back(k->num);
  return out;
}

inline Val womega_succ(const Val& v) {
  auto e = womega_exps(v);
  e.push_back(0);
  return womega(e);
}

inline bool womega_is_zero(const Val& v) { return v->kids.empty(); }

// A nonzero value is a limit exactly when its last exponent is positive.
inline bool womega_is_limit(const Val& v) {
  return !v->kids.empty() && v->kids.back()->num > 0;
}

// For a successor alpha+1, the predecessor drops the final exponent zero.
inline Val womega_pred(const Val& v) {
  auto e = womega_exps(v);
  if (e.empty() || e.back() != 0) throw std::invalid_argument("womega_pred: not a successor");
  e.pop_back();
  return womega(e);
}

// For a limit beta there is a unique alpha > 0 with beta = omega * alpha.
inline Val womega_limit_quotient(const Val& v) {
  auto e = womega_exps(v);
  for (long long& x : e) {
    if (x == 0) throw std::invalid_argument("womega_limit_quotient: not a limit");
    --x;
  }
  return womega(e);
}

// omega * (alpha + 1) for alpha = omega^{e_1}+...+omega^{e_k}.
inline Val womega_times_omega_succ(const Val& v) {
  auto e = womega_exps(v);
  for (long long& x : e) ++x;
  e.push_back(1);
  return womega(e);
}

namespace detail {
inline void womega_gen(long long weight, long long max_exp, std::vector<long long>& prefix,
                       std::vector<Val>& out, std::size_t budget) {
  if (out.size() >= budget) return;
  if (weight == 0) {
    out.push_back(womega(prefix));
    return;
  }
  for (long long e = 0; e <= std::min(max_exp, weight - 1); ++e) {
    prefix.push_back(e);
    womega_gen(weight - (e + 1), e, prefix, out, budget);
    prefix.pop_back();
    if (out.size() >= budget) return;
  }
}
}  // namespace detail

inline LinearOrder make_womega() {
  LinearOrder X;
  X.name = "w^w";
  X.valid = [](const Val& v) {
    if (!v || v->tag != Tag::w_omega) return false;
    for (std::size_t i = 0; i < v->kids.size(); ++i) {
      if (!is_nat(v->kids[i]) || v->kids[i]->num < 0) return false;
      if (i > 0 && v->kids[i]->num > v->kids[i - 1]->num) return false;
    }
    return true;
  };
  X.cmp = [](const Val& a, const Val& b) {
    std::size_t n = std::min(a->kids.size(), b->kids.size());
    for (std::size_t i = 0; i < n; ++i) {
      Ord c = ord_of_int(a->kids[i]->num, b->kids[i]->num);
      if (c != Ord::eq) return c;
    }
    return ord_of_int((long long)a->kids.size(), (long long)b->kids.size());
  };
  X.enumerate = [](std::size_t budget) {
    std::vector<Val> out;
    std::vector<long long> prefix;
    for (long long weight = 0; out.size() < budget; ++weight) {
      // weight of a list is the sum of (exponent + 1); each weight class is
      // finite, so every element appears at some budget.
      detail::womega_gen(weight, weight, prefix, out, budget);
      if (weight > (long long)budget) break;
    }
    return out;
  };
  X.show = [](const Val& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v->kids.size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(v->kids[i]->num);
    }
    out += ']';
    return out;
  };
  X.parse = [](std::string_view text) -> std::optional<Val> {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') return std::nullopt;
    std::string_view body = text.substr(1, text.size() - 2);
    std::vector<long long> exps;
    while (!body.empty()) {
      std::size_t comma = body.find(',');
      std::string_view item = comma == std::string_view::npos ? body : body.substr(0, comma);
      long long value = 0;
      auto res = std::from_chars(item.data(), item.data() + item.size(), value);
      if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) return std::nullopt;
      exps.push_back(value);
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    for (std::size_t i = 1; i < exps.size(); ++i)
      if (exps[i] > exps[i - 1]) return std::nullopt;
    return womega(exps);
  };
  X.above = [cmp = X.cmp](const std::vector<Val>& xs) -> std::optional<Val> {
    Val top = womega({});
    for (const Val& v : xs)
      if (cmp(top, v) == Ord::lt) top = v;
    return womega_succ(top);
  };
  return X;
}

//---- embeddings

inline Embedding increasing_enum(const LinearOrder& X, std::vector<Val> subset) {
  if (!fin_is_normal(X, subset))
    throw std::invalid_argument("increasing_enum: subset not sorted");
  Embedding f;
  f.name = "enum";
  f.src = make_fin_ord((long long)subset.size());
  f.dst = X;
  f.map = [subset = std::move(subset)](const Val& i) {
    auto pos = (std::size_t)nat_of(i);
    if (pos >= subset.size()) throw std::invalid_argument("increasing_enum: out of range");
    return subset[pos];
  };
  return f;
}

inline Embedding identity_embedding(const LinearOrder& X) {
  Embedding f;
  f.name = "id";
  f.src = X;
  f.dst = X;
  f.map = [](const Val& v) { return v; };
  return f;
}

inline Embedding compose(const Embedding& g, const Embedding& f) {
  Embedding h;
  h.name = g.name + "." + f.name;
  h.src = f.src;
  h.dst = g.dst;
  h.map = [gm = g.map, fm = f.map](const Val& v) { return gm(fm(v)); };
  return h;
}

//---- structural checks

inline CheckReport check_linear_order(const LinearOrder& X, std::size_t budget) {
  CheckReport report;
  std::vector<Val> xs = X.enumerate(budget);
  for (const Val& v : xs)
    if (!X.valid(v)) report.fail(X.name + ": enumerated invalid element " + to_sexpr(v));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      Ord c = X.cmp(xs[i], xs[j]);
      Ord r = X.cmp(xs[j], xs[i]);
      bool same = val_eq(xs[i], xs[j]);
      if ((c == Ord::eq) != same)
        report.fail(X.name + ": cmp equality mismatch at " + to_sexpr(xs[i]) + " / " +
                    to_sexpr(xs[j]));
      if ((c == Ord::lt && r != Ord::gt) || (c == Ord::gt && r != Ord::lt) ||
          (c == Ord::eq && r != Ord::eq))
        report.fail(X.name + ": cmp asymmetry at " + to_sexpr(xs[i]) + " / " + to_sexpr(xs[j]));
    }
  }
  std::size_t cap = std::min<std::size_t>(xs.size(), 24);
  for (std::size_t i = 0; i < cap; ++i)
    for (std::size_t j = 0; j < cap; ++j)
      for (std::size_t k = 0; k < cap; ++k)
        if (X.cmp(xs[i], xs[j]) == Ord::lt && X.cmp(xs[j], xs[k]) == Ord::lt &&
            X.cmp(xs[i], xs[k]) != Ord::lt)
          report.fail(X.name + ": transitivity violated");
  return report;
}

inline CheckReport check_embedding(const Embedding& f, std::size_t budget) {
  CheckReport report;
  std::vector<Val> xs = f.src.enumerate(budget);
  for (const Val& v : xs) {
    if (!f.dst.valid(f.map(v)))
      report.fail(f.name + ": image invalid at " + to_sexpr(v));
  }
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) {
      Ord c = f.src.cmp(xs[i], xs[j]);
      Ord d = f.dst.cmp(f.map(xs[i]), f.map(xs[j]));
      if (c != d)
        report.fail(f.name + ": not order preserving at " + to_sexpr(xs[i]) + " / " +
                    to_sexpr(xs[j]));
    }
  return report;
}

}  // namespace bhcalc

#endif

#ifndef BHCALC_VALUE_HPP
#define BHCALC_VALUE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bhcalc {

//---- universal term nodes

// Every object handled by this library (order elements, set terms, formulas,
// search-tree nodes, ordinal terms, proof codes) is an immutable tree over a
// single node type.  Domain headers provide validating constructors; raw mk()
// calls should not appear outside of them.
enum class Tag : std::uint8_t {
  nat,      // natural number, value in num
  fin_set,  // finite subset of an order, kids strictly increasing there
  seq,      // finite sequence, kids in positional order
  w_omega,  // element of omega^omega, kids are nat exponents, weakly decreasing

  d_bot,   // least element of the 1+X+X functor
  d_mid,   // middle copy of 1+X+X, kid is the X element
  d_top,   // upper copy of 1+X+X, kid is the X element
  d_set,   // element of the 2^X functor, kids strictly increasing X elements
  d_pair,  // inclusive-functor element <a, sigma>, kids {fin_set a, sigma}

  urelem,   // urelement, num indexes the base enumeration
  l_stage,  // constructible stage L_s, kid is the stage s
  l_sep,    // {x in L_s | phi(x, params)}, kids {s, phi, params...}

  f_var,           // variable, name in num
  f_in, f_not_in,  // membership literals, kids {lhs, rhs}
  f_eq, f_neq,     // equality literals, kids {lhs, rhs}
  f_and, f_or,     // kids {lhs, rhs}
  f_bex, f_ball,   // bounded quantifier, var in num, kids {bound, body}
  f_ex, f_all,     // unbounded quantifier, var in num, kid {body}

  e_zero, e_omega,  // ordinal terms 0 and Omega
  e_small,          // term e_x, kid is the base element x
  e_big,            // term E_sigma, kid is the search-tree node (seq)
  e_sum,            // omega^{t_0}+...+omega^{t_n}, kids are the exponents

  b_theta,  // collapse-base element for theta(Omega + s), kid is s

  r_true, r_and, r_cut,  // rules carrying a formula
  r_or,                  // rule with formula and witness, kids {phi, b}
  r_ref,                 // reflection rule, kid is the formula
  r_rep,                 // repetition rule, kid is the index term

  c_basic,  // kid is the address (seq of terms)
  c_inv,    // kids {phi, a, P}
  c_red,    // kids {phi, P0, P1}
  c_cut,    // kid {P}
  c_bnd,    // kids {phi, gamma, P}
  c_clp,    // kids {t, P}
  c_lit,    // kids {seq sequent, rule, o, fin_set h1, seq indices, seq children}
};

struct Node;
using Val = std::shared_ptr<const Node>;

struct Node {
  Tag tag;
  long long num;
  std::vector<Val> kids;
  std::size_t hash;  // structural, precomputed
  std::size_t size;  // total node count, bounds recursions
};

inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

inline Val mk(Tag tag, long long num, std::vector<Val> kids) {
  std::size_t h = hash_mix(static_cast<std::size_t>(tag) + 1,
                           std::hash<long long>{}(num));
  std::size_t sz = 1;
  for (const Val& k : kids) {
    h = hash_mix(h, k->hash);
    sz += k->size;
  }
  auto node = std::make_shared<Node>();
  node->tag = tag;
  node->num = num;
  node->kids = std::move(kids);
  node->hash = h;
  node->size = sz;
  return node;
}

inline Val mk(Tag tag, long long num = 0) { return mk(tag, num, {}); }
inline Val mk(Tag tag, std::vector<Val> kids) { return mk(tag, 0, std::move(kids)); }

//---- structural equality and order

inline bool val_eq(const Val& a, const Val& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->size != b->size) return false;
  if (a->tag != b->tag || a->num != b->num) return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!val_eq(a->kids[i], b->kids[i])) return false;
  return true;
}

// Total order on raw structure, used for canonical containers only; the
// domain orders are defined in their own headers.
inline int val_cmp_struct(const Val& a, const Val& b) {
  if (a.get() == b.get()) return 0;
  if (a->tag != b->tag) return a->tag < b->tag ? -1 : 1;
  if (a->num != b->num) return a->num < b->num ? -1 : 1;
  if (a->kids.size() != b->kids.size())
    return a->kids.size() < b->kids.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (int c = val_cmp_struct(a->kids[i], b->kids[i])) return c;
  return 0;
}

struct ValHash {
  std::size_t operator()(const Val& v) const { return v ? v->hash : 0; }
};
struct ValEq {
  bool operator()(const Val& a, const Val& b) const { return val_eq(a, b); }
};
struct ValPairHash {
  std::size_t operator()(const std::pair<Val, Val>& p) const {
    return hash_mix(p.first ? p.first->hash : 0, p.second ? p.second->hash : 0);
  }
};
struct ValPairEq {
  bool operator()(const std::pair<Val, Val>& a, const std::pair<Val, Val>& b) const {
    return val_eq(a.first, b.first) && val_eq(a.second, b.second);
  }
};

template <class V>
using ValMap = std::unordered_map<Val, V, ValHash, ValEq>;
template <class V>
using ValPairMap = std::unordered_map<std::pair<Val, Val>, V, ValPairHash, ValPairEq>;

// Internally synchronized memo table; compute() must be pure in the key.
template <class Key, class V, class Hash, class Eq>
class MemoCache {
 public:
  template <class F>
  V get_or_compute(const Key& key, F&& compute) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    V value = compute();
    std::lock_guard<std::mutex> lock(mutex_);
    return map_.emplace(key, std::move(value)).first->second;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return map_.size();
  }

 private:
  mutable std::mutex mutex_;
  std::unordered_map<Key, V, Hash, Eq> map_;
};

template <class V>
using ValMemo = MemoCache<Val, V, ValHash, ValEq>;
template <class V>
using ValPairMemo = MemoCache<std::pair<Val, Val>, V, ValPairHash, ValPairEq>;

//---- naturals

inline Val nat(long long n) {
  if (n < 0) throw std::invalid_argument("nat: negative");
  return mk(Tag::nat, n);
}

inline bool is_nat(const Val& v) { return v && v->tag == Tag::nat; }

inline long long nat_of(const Val& v) {
  if (!is_nat(v)) throw std::invalid_argument("nat_of: not a natural");
  return v->num;
}

//---- sequences

inline Val seq(std::vector<Val> items) { return mk(Tag::seq, std::move(items)); }

inline bool is_seq(const Val& v) { return v && v->tag == Tag::seq; }

inline Val seq_append(const Val& s, const Val& item) {
  std::vector<Val> kids = s->kids;
  kids.push_back(item);
  return seq(std::move(kids));
}

inline Val seq_prefix(const Val& s, std::size_t len) {
  if (len > s->kids.size()) throw std::invalid_argument("seq_prefix: too long");
  return seq(std::vector<Val>(s->kids.begin(), s->kids.begin() + len));
}

//---- debug printing

inline const char* tag_name(Tag t) {
  switch (t) {
    case Tag::nat: return "nat";
    case Tag::fin_set: return "fin_set";
    case Tag::seq: return "seq";
    case Tag::w_omega: return "w_omega";
    case Tag::d_bot: return "d_bot";
    case Tag::d_mid: return "d_mid";
    case Tag::d_top: return "d_top";
    case Tag::d_set: return "d_set";
    case Tag::d_pair: return "d_pair";
    case Tag::urelem: return "urelem";
    case Tag::l_stage: return "l_stage";
    case Tag::l_sep: return "l_sep";
    case Tag::f_var: return "f_var";
    case Tag::f_in: return "f_in";
    case Tag::f_not_in: return "f_not_in";
    case Tag::f_eq: return "f_eq";
    case Tag::f_neq: return "f_neq";
    case Tag::f_and: return "f_and";
    case Tag::f_or: return "f_or";
    case Tag::f_bex: return "f_bex";
    case Tag::f_ball: return "f_ball";
    case Tag::f_ex: return "f_ex";
    case Tag::f_all: return "f_all";
    case Tag::e_zero: return "e_zero";
    case Tag::e_omega: return "e_omega";
    case Tag::e_small: return "e_small";
    case Tag::e_big: return "e_big";
    case Tag::e_sum: return "e_sum";
    case Tag::b_theta: return "b_theta";
    case Tag::r_true: return "r_true";
    case Tag::r_and: return "r_and";
    case Tag::r_cut: return "r_cut";
    case Tag::r_or: return "r_or";
    case Tag::r_ref: return "r_ref";
    case Tag::r_rep: return "r_rep";
    case Tag::c_basic: return "c_basic";
    case Tag::c_inv: return "c_inv";
    case Tag::c_red: return "c_red";
    case Tag::c_cut: return "c_cut";
    case Tag::c_bnd: return "c_bnd";
    case Tag::c_clp: return "c_clp";
    case Tag::c_lit: return "c_lit";
  }
  return "?";
}

inline void to_sexpr(const Val& v, std::ostringstream& out) {
  if (!v) {
    out << "<null>";
    return;
  }
  if (v->kids.empty()) {
    out << tag_name(v->tag);
    if (v->num != 0 || v->tag == Tag::nat || v->tag == Tag::urelem || v->tag == Tag::f_var)
      out << ':' << v->num;
    return;
  }
  out << '(' << tag_name(v->tag);
  if (v->num != 0 || v->tag == Tag::f_bex || v->tag == Tag::f_ball ||
      v->tag == Tag::f_ex || v->tag == Tag::f_all)
    out << ':' << v->num;
  for (const Val& k : v->kids) {
    out << ' ';
    to_sexpr(k, out);
  }
  out << ')';
}

inline std::string to_sexpr(const Val& v) {
  std::ostringstream out;
  to_sexpr(v, out);
  return out.str();
}

}  // namespace bhcalc

#endif

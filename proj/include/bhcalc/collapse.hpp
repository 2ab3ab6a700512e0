#ifndef BHCALC_COLLAPSE_HPP
#define BHCALC_COLLAPSE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bhcalc/epsilon.hpp"

namespace bhcalc {

//---- the collapsed base order

// Points are formal values th(W+s) for epsilon terms s over the order itself.
// W+ is injective on valid terms, so keying points by s is canonical.  The
// comparison below is total by construction; that it orders the points the way
// the collapse properties demand is certified empirically by check_bar_props.
struct BHState {
  Base b;
  long long max_params = 2;
  ValPairMemo<Ord> cmp_cache;
  ValMemo<bool> valid_cache;
};

inline Val btheta(const Val& s) { return mk(Tag::b_theta, {s}); }

inline LinearOrder bh_view(const std::shared_ptr<BHState>& st);

namespace detail {

// p = th(W+s) against q = th(W+t): on s = t equal; on s < t the points of
// supp(s) decide: all below q puts p below q, any other point pushes p above.
inline Ord bh_cmp(const std::shared_ptr<BHState>& st, const Val& p, const Val& q) {
  if (val_eq(p, q)) return Ord::eq;
  return st->cmp_cache.get_or_compute({p, q}, [&]() {
    LinearOrder BH = bh_view(st);
    const Val& s = p->kids[0];
    const Val& t = q->kids[0];
    Ord c = eps_cmp(st->b, BH, s, t);
    if (c == Ord::eq) return Ord::eq;
    if (c == Ord::lt) {
      for (const Val& r : supp_eps(BH, s))
        if (bh_cmp(st, r, q) != Ord::lt) return Ord::gt;
      return Ord::lt;
    }
    for (const Val& r : supp_eps(BH, t))
      if (bh_cmp(st, r, p) != Ord::lt) return Ord::lt;
    return Ord::gt;
  });
}

inline bool bh_valid(const std::shared_ptr<BHState>& st, const Val& v) {
  if (!v || v->tag != Tag::b_theta || v->kids.size() != 1) return false;
  return st->valid_cache.get_or_compute(v, [&]() {
    return eps_valid(st->b, bh_view(st), v->kids[0], st->max_params);
  });
}

}  // namespace detail

inline LinearOrder bh_view(const std::shared_ptr<BHState>& st) {
  LinearOrder O;
  O.name = "bh";
  O.valid = [st](const Val& v) { return detail::bh_valid(st, v); };
  O.cmp = [st](const Val& p, const Val& q) { return detail::bh_cmp(st, p, q); };
  // Round r collapses the epsilon terms over the points of earlier rounds, so
  // the stream seeds itself from th(W) upward.
  O.enumerate = [st](std::size_t budget) {
    std::vector<Val> out;
    std::unordered_set<Val, ValHash, ValEq> seen;
    for (std::size_t r = 1; out.size() < budget; ++r) {
      std::vector<Val> prefix = out;
      LinearOrder Xr = bh_view(st);
      Xr.enumerate = [prefix](std::size_t n) {
        std::vector<Val> p = prefix;
        if (p.size() > n) p.resize(n);
        return p;
      };
      LinearOrder Er = make_epsilon_dilator(st->b, st->max_params).on_order(Xr);
      for (const Val& t : Er.enumerate(4 * r * r)) {
        Val pt = btheta(t);
        if (seen.insert(pt).second) {
          out.push_back(pt);
          if (out.size() >= budget) return out;
        }
      }
    }
    return out;
  };
  O.show = [st](const Val& v) {
    LinearOrder BH = bh_view(st);
    return "th(" + eps_show(BH, eps_add(st->b, BH, big_omega(), v->kids[0])) + ")";
  };
  O.parse = [st](std::string_view text) -> std::optional<Val> {
    if (text.size() < 4 || text.substr(0, 3) != "th(" || text.back() != ')')
      return std::nullopt;
    LinearOrder BH = bh_view(st);
    std::optional<Val> u =
        eps_parse(st->b, BH, text.substr(3, text.size() - 4), st->max_params);
    if (!u) return std::nullopt;
    std::vector<Val> d = eps_decompose(*u);
    Val s;
    if (d.empty()) return std::nullopt;  // below W+0, not a collapse of anything
    if (val_eq(d[0], big_omega()))
      s = omega_list(st->b, BH, std::vector<Val>(d.begin() + 1, d.end()));
    else if (eps_cmp(st->b, BH, d[0], big_omega()) == Ord::gt)
      s = *u;
    else
      return std::nullopt;
    Val pt = btheta(s);
    if (!detail::bh_valid(st, pt)) return std::nullopt;
    return pt;
  };
  return O;
}

//---- the collapsing map on epsilon terms

// bar(s) = e_{th(W+s)}: the name of the collapsed point, as an epsilon term.
inline Val bar_theta(const Val& s) { return eps_e(btheta(s)); }

struct CollapseOracle {
  std::shared_ptr<BHState> state;
  LinearOrder alpha;  // the collapsed base order

  Val point(const Val& s) const { return btheta(s); }
  Val bar(const Val& s) const { return bar_theta(s); }
  Ord cmp_eps(const Val& s, const Val& t) const {
    return eps_cmp(state->b, alpha, s, t);
  }
  Val add(const Val& s, const Val& t) const { return eps_add(state->b, alpha, s, t); }
};

inline CollapseOracle make_collapse_oracle(const Base& b, long long max_params = 2) {
  auto st = std::make_shared<BHState>();
  st->b = b;
  st->max_params = max_params;
  return CollapseOracle{st, bh_view(st)};
}

//---- property checks

// The collapse clauses, checked pairwise over a sample of epsilon terms:
// (a) s < t with supp(s) pointwise below th(W+t) puts th(W+s) below th(W+t);
// (b) the support of s sits below th(W+s);
// (c) th(W+s) at or below a point of supp(t) puts th(W+s) below th(W+t);
// and the support side:
// (d) the support of s at or below s itself, for s below W;
// (e) the support of bar(t) is exactly the point of t;
// (f) s below W with support below th(W+t) puts s below bar(t).
inline CheckReport check_bar_props(const CollapseOracle& oc, const std::vector<Val>& terms) {
  CheckReport rep;
  const Base& b = oc.state->b;
  const LinearOrder& BH = oc.alpha;
  auto supp_below_point = [&](const Val& s, const Val& q) {
    for (const Val& r : supp_eps(BH, s))
      if (detail::bh_cmp(oc.state, r, q) != Ord::lt) return false;
    return true;
  };
  for (const Val& s : terms) {
    if (!supp_below_point(s, btheta(s)))
      rep.fail("(b) support not below collapse: " + eps_show(BH, s));
    std::vector<Val> sb = supp_eps(BH, bar_theta(s));
    if (sb.size() != 1 || !val_eq(sb[0], btheta(s)))
      rep.fail("(e) support of bar is not its point: " + eps_show(BH, s));
    if (eps_cmp(b, BH, s, big_omega()) == Ord::lt) {
      for (const Val& r : supp_eps(BH, s))
        if (eps_cmp(b, BH, eps_e(r), s) == Ord::gt)
          rep.fail("(d) support above the term: " + eps_show(BH, s));
    }
  }
  for (const Val& s : terms)
    for (const Val& t : terms) {
      Ord st_ord = eps_cmp(b, BH, s, t);
      Ord pp = detail::bh_cmp(oc.state, btheta(s), btheta(t));
      if (st_ord == Ord::lt && supp_below_point(s, btheta(t)) && pp != Ord::lt)
        rep.fail("(a) fails: " + eps_show(BH, s) + " vs " + eps_show(BH, t));
      bool dominated = false;
      for (const Val& r : supp_eps(BH, t))
        if (detail::bh_cmp(oc.state, btheta(s), r) != Ord::gt) dominated = true;
      if (dominated && pp != Ord::lt)
        rep.fail("(c) fails: " + eps_show(BH, s) + " vs " + eps_show(BH, t));
      if (eps_cmp(b, BH, s, big_omega()) == Ord::lt && supp_below_point(s, btheta(t)) &&
          eps_cmp(b, BH, s, bar_theta(t)) != Ord::lt)
        rep.fail("(f) fails: " + eps_show(BH, s) + " vs " + eps_show(BH, t));
    }
  if (rep.ok)
    rep.note("collapse properties hold on " + std::to_string(terms.size()) + " terms");
  return rep;
}

}  // namespace bhcalc

#endif

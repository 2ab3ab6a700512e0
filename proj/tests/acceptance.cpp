// End-to-end acceptance run: ten independent checks of the calculator's
// headline behavior, each printed as a single verdict line with its runtime
// against a pinned budget.  The process exits nonzero when any check fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "bhcalc/proofcodes.hpp"

namespace {

using namespace bhcalc;

Val u(long long i) { return mk(Tag::urelem, i); }

struct Verdict {
  bool ok = true;
  std::string detail;
};

Verdict fail(std::string msg) {
  if (msg.size() > 140) msg = msg.substr(0, 137) + "...";
  return Verdict{false, std::move(msg)};
}

std::string trim_note(std::string s) {
  if (s.size() > 90) s = s.substr(0, 87) + "...";
  return s;
}

//---- 1: the introductory collapse over 1+X+X and omega^omega

Verdict crit_intro_collapse() {
  CollapseCandidate intro = intro_collapse_womega();
  // every element of (1+X+X)(omega^omega) whose payload has at most three
  // exponents, none above three
  std::vector<std::vector<long long>> lists{{}};
  for (long long a = 0; a <= 3; ++a) {
    lists.push_back({a});
    for (long long b = 0; b <= a; ++b) {
      lists.push_back({a, b});
      for (long long c = 0; c <= b; ++c) lists.push_back({a, b, c});
    }
  }
  std::vector<Val> elems{dsum_bot()};
  for (const auto& e : lists) {
    elems.push_back(dsum_mid(womega(e)));
    elems.push_back(dsum_top(womega(e)));
  }
  CheckReport good = check_bh_collapse(intro, elems);
  if (!good.ok) return fail("intended map rejected: " + good.notes[0]);

  CollapseCandidate broken = intro_collapse_womega();
  broken.name = "1+X+X (identity on the middle summand)";
  auto theta = intro.theta;
  broken.theta = [theta](const Val& sigma) -> std::optional<Val> {
    if (sigma->tag == Tag::d_mid) return sigma->kids[0];  // drops the +1
    return theta(sigma);
  };
  CheckReport bad = check_bh_collapse(broken, elems);
  if (bad.ok) return fail("perturbed map slipped through the audit");
  if (bad.notes.empty()) return fail("perturbed map rejected without a witness");
  return {true, std::to_string(elems.size()) + " elements clean; perturbation witness: " +
                    trim_note(bad.notes[0])};
}

//---- 2: enumeration round trips and naturality

Verdict crit_enumeration() {
  Base b = make_base(2);
  LinearOrder X = make_fin_ord(6);
  std::mt19937_64 rng(0x5eed0002);
  for (int i = 0; i < 10000; ++i) {
    std::vector<Val> x;
    for (long long j = 0; j < 6; ++j)
      if (rng() & 1) x.push_back(nat(j));
    std::uint64_t n = rng() % 1000000;
    Val a = en_L(b, X, x, n);
    auto c = big_u64(code_L(b, X, x, a));
    if (!c || *c > n) return fail("code exceeds the enumeration index at n=" + std::to_string(n));
    if (!val_eq(en_L(b, X, x, *c), a))
      return fail("round trip broke at n=" + std::to_string(n));
  }
  for (int i = 0; i < 1000; ++i) {
    long long m = (long long)(rng() % 5);
    long long n2 = m + (long long)(rng() % (std::size_t)(8 - m));
    std::vector<long long> idx(n2);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize((std::size_t)m);
    std::sort(idx.begin(), idx.end());
    std::vector<Val> sub;
    for (long long j : idx) sub.push_back(nat(j));
    Embedding f = increasing_enum(make_fin_ord(n2), sub);
    std::vector<Val> x;
    for (long long j = 0; j < m; ++j)
      if (rng() & 1) x.push_back(nat(j));
    std::uint64_t k = rng() % 100000;
    Val a = en_L(b, f.src, x, k);
    std::vector<Val> fx = fin_map(f.dst, f, x);
    if (!val_eq(en_L(b, f.dst, fx, k), map_L(f.map, a)))
      return fail("enumeration naturality broke at k=" + std::to_string(k));
    if (!big_eq(code_L(b, f.dst, fx, map_L(f.map, a)), code_L(b, f.src, x, a)))
      return fail("coding naturality broke at k=" + std::to_string(k));
  }
  return {true, "10000 round trips, 1000 embeddings, both naturality squares"};
}

//---- 3: the dilator laws on every small order and embedding

Verdict crit_dilators() {
  Base b = make_base(2);
  std::vector<LinearOrder> orders;
  for (long long n = 0; n <= 4; ++n) orders.push_back(make_fin_ord(n));
  std::vector<Embedding> maps;
  for (long long n = 0; n <= 4; ++n)
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<Val> sub;
      for (long long j = 0; j < n; ++j)
        if (mask & (std::size_t{1} << j)) sub.push_back(nat(j));
      maps.push_back(increasing_enum(orders[(std::size_t)n], sub));
    }
  std::vector<PraeDilator> ds{make_lterm_dilator(b), make_searchtree_dilator(b, 2),
                              make_epsilon_dilator(b, 2), make_inclusive(dil_one_x_x())};
  for (const PraeDilator& d : ds) {
    CheckReport r = check_prae_dilator(d, orders, maps, 200);
    if (!r.ok) return fail(d.name + ": " + trim_note(r.notes[0]));
  }
  return {true, "4 dilators x 5 orders x " + std::to_string(maps.size()) +
                    " embeddings, budget 200"};
}

//---- 4: bounded truth equals the fold of its decomposition instances

// Formula size counts every formula constructor, term constructor, and stage
// numeral (the stage k term costs k+1), so the admitted shapes stay at desk
// scale while still reaching stage-3 membership tests, connectives over two
// minimal atoms, and separation bounds.
constexpr long long kSizeBudget = 7;

struct SzTerm {
  Val t;
  long long size;
};

Verdict crit_bounded_truth() {
  Base b = make_base(2);
  LinearOrder X = make_fin_ord(4);
  const StageModel& m = stage_model(b, 3);

  std::vector<std::vector<SzTerm>> pools;
  for (long long scope = 0; scope <= 4; ++scope) {
    std::vector<SzTerm> pool;
    for (long long i = 0; i < scope; ++i) pool.push_back({fvar(i), 1});
    pool.push_back({u(0), 1});
    pool.push_back({u(1), 1});
    for (long long k = 0; k <= 3; ++k) pool.push_back({lt_stage(X, nat(k)), k + 1});
    for (long long k = 0; k <= 2; ++k)
      for (Tag rel : {Tag::f_in, Tag::f_not_in, Tag::f_eq, Tag::f_neq})
        pool.push_back({lt_sep(b, X, nat(k), mk(rel, {fvar(0), fvar(0)}), {}), k + 3});
    pools.push_back(std::move(pool));
  }

  std::map<std::pair<long long, long long>, std::vector<Val>> memo;
  std::function<const std::vector<Val>&(long long, long long)> fmls =
      [&](long long scope, long long size) -> const std::vector<Val>& {
    auto key = std::make_pair(scope, size);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<Val> out;
    const std::vector<SzTerm>& pool = pools[(std::size_t)scope];
    for (const SzTerm& t1 : pool)
      for (const SzTerm& t2 : pool)
        if (1 + t1.size + t2.size == size)
          for (Tag rel : {Tag::f_in, Tag::f_not_in, Tag::f_eq, Tag::f_neq})
            out.push_back(mk(rel, {t1.t, t2.t}));
    for (long long z1 = 1; z1 + 2 <= size; ++z1) {
      long long z2 = size - 1 - z1;
      for (const Val& f1 : fmls(scope, z1))
        for (const Val& f2 : fmls(scope, z2)) {
          out.push_back(mk(Tag::f_and, {f1, f2}));
          out.push_back(mk(Tag::f_or, {f1, f2}));
        }
    }
    for (const SzTerm& bd : pool) {
      long long zb = size - 1 - bd.size;
      if (zb < 1) continue;
      for (const Val& body : fmls(scope + 1, zb)) {
        out.push_back(mk(Tag::f_bex, scope, {bd.t, body}));
        out.push_back(mk(Tag::f_ball, scope, {bd.t, body}));
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };

  long long total = 0;
  std::map<IndexDescriptor::Kind, long long> kinds;
  for (long long size = 1; size <= kSizeBudget; ++size) {
    for (const Val& phi : fmls(0, size)) {
      std::optional<bool> lhs = eval_formula(m, phi);
      if (!lhs) return fail("evaluation refused " + fml_show(X, phi));
      std::optional<Decomposition> d = decompose(b, X, phi);
      if (!d) return fail("no decomposition for " + fml_show(X, phi));
      bool acc = d->conjunctive;
      auto feed = [&](const Val& a) -> std::optional<std::string> {
        std::optional<bool> iv = eval_formula(m, d->instance(a));
        if (!iv) return "instance evaluation refused under " + fml_show(X, phi);
        if (d->conjunctive)
          acc = acc && *iv;
        else
          acc = acc || *iv;
        return std::nullopt;
      };
      switch (d->iota.kind) {
        case IndexDescriptor::Kind::empty:
          break;
        case IndexDescriptor::Kind::pair:
        case IndexDescriptor::Kind::elements_of_urelem: {
          for (const Val& a : index_enumerate(b, X, d->iota, 1000)) {
            if (auto err = feed(a)) return fail(*err);
            if (acc != d->conjunctive) break;
          }
          break;
        }
        case IndexDescriptor::Kind::supp_below: {
          // one canonical term per value folds the whole index: instance
          // truth depends only on the value of the index term, and every
          // value below the stage is named by a term
          long long k = d->iota.stage->num;
          for (const Val& v : m.levels[(std::size_t)k]) {
            std::optional<Val> t = term_of_value(b, v, k);
            if (!t) return fail("unnamed value below stage " + std::to_string(k));
            if (auto err = feed(*t)) return fail(*err);
            if (acc != d->conjunctive) break;
          }
          break;
        }
        case IndexDescriptor::Kind::all_terms:
          return fail("bounded formula produced an unbounded index: " + fml_show(X, phi));
      }
      if (acc != *lhs) return fail("fold disagrees with truth on " + fml_show(X, phi));
      ++kinds[d->iota.kind];
      ++total;
    }
  }
  if (total < 5000) return fail("only " + std::to_string(total) + " formulas enumerated");
  for (auto kind : {IndexDescriptor::Kind::empty, IndexDescriptor::Kind::pair,
                    IndexDescriptor::Kind::elements_of_urelem, IndexDescriptor::Kind::supp_below})
    if (kinds[kind] == 0) return fail("an index kind was never exercised");
  return {true, std::to_string(total) + " closed bounded formulas, all four index kinds"};
}

//---- 5: instances drop in height, and in rank when positive

Verdict crit_height_rank() {
  Base b = make_base(2);
  LinearOrder X = make_fin_ord(4);
  std::mt19937_64 rng(0x5eed0005);
  std::vector<Val> pool{u(0), u(1)};
  for (long long k = 0; k <= 3; ++k) pool.push_back(lt_stage(X, nat(k)));
  for (long long k = 0; k <= 2; ++k)
    pool.push_back(lt_sep(b, X, nat(k), mk(Tag::f_in, {fvar(0), fvar(0)}), {}));

  std::function<Val(int, long long)> gen = [&](int depth, long long scope) -> Val {
    auto term = [&]() -> Val {
      std::size_t extra = (std::size_t)scope;
      std::size_t pick = rng() % (pool.size() + extra);
      if (pick < pool.size()) return pool[pick];
      return fvar((long long)(pick - pool.size()));
    };
    std::uint64_t r = rng() % 100;
    if (depth == 0 || r < 35) {
      Tag rel = std::vector<Tag>{Tag::f_in, Tag::f_not_in, Tag::f_eq, Tag::f_neq}[rng() % 4];
      return mk(rel, {term(), term()});
    }
    if (r < 55)
      return mk(r % 2 ? Tag::f_and : Tag::f_or, {gen(depth - 1, scope), gen(depth - 1, scope)});
    if (r < 75)
      return mk(r % 2 ? Tag::f_bex : Tag::f_ball, scope, {term(), gen(depth - 1, scope + 1)});
    return mk(r % 2 ? Tag::f_ex : Tag::f_all, scope, {gen(depth - 1, scope + 1)});
  };

  int got = 0;
  for (int attempt = 0; attempt < 40000 && got < 1000; ++attempt) {
    Val phi = gen(3, 0);
    std::optional<Decomposition> d = decompose(b, X, phi);
    if (!d) continue;
    std::vector<Val> idx = index_enumerate(b, X, d->iota, 6);
    if (idx.empty()) continue;
    Val a = idx[rng() % idx.size()];
    Val inst = d->instance(a);
    if (ht_cmp(X, ht_formula(X, inst), ht_formula(X, phi)) != Ord::lt)
      return fail("height failed to drop on " + fml_show(X, phi));
    if (rk(phi) > 0 && rk(inst) >= rk(phi))
      return fail("rank failed to drop on " + fml_show(X, phi));
    ++got;
  }
  if (got < 1000) return fail("only " + std::to_string(got) + " decomposable samples");
  if (rk(axiom(0, 2)) != 2) return fail("the closure axiom has the wrong rank");
  for (std::uint64_t n : {1ull, 2ull, 16ull, 17ull, 37ull, 100ull, 500ull}) {
    long long k = collection_entry(n - 1, 2).first;
    if (rk(axiom(n, 2)) != k + 5)
      return fail("collection axiom " + std::to_string(n) + " is not rank k+5");
  }
  return {true, "1000 sampled instances; collection ranks sit at k+5"};
}

//---- 6: ordinal arithmetic laws and the term order

Verdict crit_ordinal_arith() {
  Base b = make_base(2);
  LinearOrder X = make_fin_ord(3);
  std::mt19937_64 rng(0x5eed0006);
  std::vector<Val> sigmas{st_root(), seq({u(0)})};
  std::function<Val(int)> rand_eps = [&](int depth) -> Val {
    std::uint64_t r = rng() % (depth == 0 ? 4 : 6);
    switch (r) {
      case 0: return eps_zero();
      case 1: return big_omega();
      case 2: return eps_e(nat((long long)(rng() % 3)));
      case 3: return eps_big_e(sigmas[rng() % 2]);
      case 4: return eps_add(b, X, rand_eps(depth - 1), rand_eps(depth - 1));
      default: return omega_pow(rand_eps(depth - 1));
    }
  };
  auto add = [&](const Val& s, const Val& t) { return eps_add(b, X, s, t); };
  auto cmp = [&](const Val& s, const Val& t) { return eps_cmp(b, X, s, t); };
  auto subset = [&](const std::vector<Val>& a, const std::vector<Val>& c) {
    return fin_subset_of(X, a, c);
  };
  for (int i = 0; i < 10000; ++i) {
    Val r = rand_eps(3), s = rand_eps(3), t = rand_eps(3);
    if (cmp(s, t) == Ord::lt) {
      if (cmp(add(r, s), add(r, t)) != Ord::lt) return fail("left addition is not monotone");
      if (cmp(omega_pow(s), omega_pow(t)) != Ord::lt) return fail("the power map is not monotone");
    }
    if (cmp(s, add(s, t)) == Ord::gt) return fail("s above s+t");
    if (cmp(t, add(s, t)) == Ord::gt) return fail("t above s+t");
    if (cmp(s, omega_pow(s)) == Ord::gt) return fail("s above its own power");
    if (!val_eq(add(add(r, s), t), add(r, add(s, t)))) return fail("addition not associative");
    if (cmp(s, omega_pow(r)) == Ord::lt && cmp(t, omega_pow(r)) == Ord::lt &&
        cmp(add(s, t), omega_pow(r)) != Ord::lt)
      return fail("powers of omega are not additively closed");
    std::vector<Val> ss = supp_eps(X, s), st = supp_eps(X, t), sa = supp_eps(X, add(s, t));
    if (!subset(st, sa)) return fail("support of t escapes s+t");
    if (!subset(sa, fin_union(X, ss, st))) return fail("support of s+t overflows");
    std::vector<Val> sw = supp_eps(X, omega_pow(s));
    if (!subset(sw, ss) || !subset(ss, sw)) return fail("power changed the support");
  }
  Val omega1 = omega_pow(omega_pow(eps_zero()));
  if (eps_show(X, add(big_omega(), omega1)) != "w^W+w^(w^0)")
    return fail("cap plus omega prints as " + eps_show(X, add(big_omega(), omega1)));
  for (int i = 0; i < 10000; ++i) {
    Val x = rand_eps(3), y = rand_eps(3), z = rand_eps(3);
    if (cmp(x, x) != Ord::eq) return fail("comparison is not reflexive");
    Ord xy = cmp(x, y), yx = cmp(y, x);
    if ((xy == Ord::lt) != (yx == Ord::gt) || (xy == Ord::eq) != (yx == Ord::eq))
      return fail("comparison is not antisymmetric");
    if (xy != Ord::gt && cmp(y, z) != Ord::gt && cmp(x, z) == Ord::gt)
      return fail("comparison is not transitive");
  }

  // exhaustive two-point fragment: leaves, powers, and sums of up to three
  LinearOrder X2 = make_fin_ord(2);
  std::vector<Val> leaves{eps_zero(),          big_omega(),           eps_e(nat(0)),
                          eps_e(nat(1)),       eps_big_e(st_root()),  eps_big_e(seq({u(0)}))};
  std::unordered_set<Val, ValHash, ValEq> seen;
  std::vector<Val> V;
  auto push = [&](const Val& t) {
    if (seen.insert(t).second) V.push_back(t);
  };
  for (const Val& l : leaves) push(l);
  for (const Val& l : leaves) push(omega_pow(l));
  for (const Val& l1 : leaves)
    for (const Val& l2 : leaves) {
      push(eps_add(b, X2, l1, l2));
      for (const Val& l3 : leaves) push(eps_add(b, X2, eps_add(b, X2, l1, l2), l3));
    }
  for (const Val& t : V)
    if (!eps_valid(b, X2, t)) return fail("fragment term not in normal form");
  std::size_t n = V.size();
  std::vector<signed char> mat(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Ord c = eps_cmp(b, X2, V[i], V[j]);
      mat[i * n + j] = c == Ord::lt ? -1 : (c == Ord::eq ? 0 : 1);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if ((mat[i * n + j] == 0) != (i == j)) return fail("distinct normal terms compare equal");
      if (mat[i * n + j] != -mat[j * n + i]) return fail("fragment order not antisymmetric");
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (mat[i * n + j] < 0 && mat[j * n + k] < 0 && mat[i * n + k] >= 0)
          return fail("fragment order not transitive");
  std::vector<std::size_t> by_rank(n);
  std::iota(by_rank.begin(), by_rank.end(), 0);
  std::sort(by_rank.begin(), by_rank.end(),
            [&](std::size_t i, std::size_t j) { return mat[i * n + j] < 0; });
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (mat[by_rank[i] * n + by_rank[i + 1]] >= 0) return fail("fragment sort is not a chain");
  return {true, "10000 triples twice; fragment of " + std::to_string(n) +
                    " terms is a strict chain"};
}

//---- 7: the collapsed base order and its defining properties

Verdict crit_collapsed_base() {
  Base b = make_base(2);
  CollapseOracle oc = make_collapse_oracle(b, 2);
  std::vector<Val> pts = oc.alpha.enumerate(3);
  if (pts.size() < 3) return fail("the collapsed base enumerated fewer than three points");
  std::vector<Val> leaves{eps_zero(), big_omega(), eps_e(pts[0]), eps_e(pts[1]), eps_e(pts[2]),
                          eps_big_e(st_root()), eps_big_e(seq({u(0)}))};
  std::unordered_set<Val, ValHash, ValEq> seen;
  std::vector<Val> V;
  auto push = [&](const Val& t) {
    if (seen.insert(t).second) V.push_back(t);
  };
  for (const Val& l : leaves) push(l);
  for (const Val& l : leaves) push(omega_pow(l));
  for (const Val& l1 : leaves)
    for (const Val& l2 : leaves) push(oc.add(l1, l2));
  CheckReport r = check_bar_props(oc, V);
  if (!r.ok) return fail(trim_note(r.notes[0]));
  std::vector<Val> many = oc.alpha.enumerate(50);
  std::mt19937_64 rng(0x5eed0007);
  for (int i = 0; i < 10000; ++i) {
    const Val& x = many[rng() % many.size()];
    const Val& y = many[rng() % many.size()];
    const Val& z = many[rng() % many.size()];
    if (oc.alpha.cmp(x, x) != Ord::eq) return fail("base comparison is not reflexive");
    Ord xy = oc.alpha.cmp(x, y), yx = oc.alpha.cmp(y, x);
    if ((xy == Ord::lt) != (yx == Ord::gt) || (xy == Ord::eq) != (yx == Ord::eq))
      return fail("base comparison is not antisymmetric");
    if (xy != Ord::gt && oc.alpha.cmp(y, z) != Ord::gt && oc.alpha.cmp(x, z) == Ord::gt)
      return fail("base comparison is not transitive");
  }
  return {true, std::to_string(V.size()) + " terms audited; order axioms on 50 points"};
}

//---- 8: certified membership in the good sets

Verdict crit_good_sets() {
  Base b = make_base(2);
  ProofCtx cx = make_collapse_ctx(b, 2);
  std::vector<Val> pts = cx.alpha.enumerate(6);
  std::mt19937_64 rng(0x5eed0008);
  auto add = [&](const Val& s, const Val& t) { return eps_add(cx.b, cx.alpha, s, t); };
  auto cmp = [&](const Val& s, const Val& t) { return eps_cmp(cx.b, cx.alpha, s, t); };
  std::function<Val(int, const std::vector<Val>&)> rand_over =
      [&](int depth, const std::vector<Val>& over) -> Val {
    std::uint64_t r = rng() % (depth == 0 ? 2 : 4);
    switch (r) {
      case 0: return eps_zero();
      case 1: return eps_e(over[rng() % over.size()]);
      case 2: return add(rand_over(depth - 1, over), rand_over(depth - 1, over));
      default: return omega_pow(rand_over(depth - 1, over));
    }
  };
  auto rand_general = [&](int depth) -> Val {
    Val t = rand_over(depth, pts);
    if (rng() % 3 == 0) t = add(t, big_omega());
    if (rng() % 4 == 0) t = add(omega_pow(add(big_omega(), t)), t);
    return t;
  };

  // constants and the big names
  for (int i = 0; i < 200; ++i) {
    Val t = rand_general(2);
    if (in_H(cx, eps_zero(), t, {}) != Cert::member) return fail("zero left uncertified");
    if (in_H(cx, big_omega(), t, {}) != Cert::member) return fail("the cap left uncertified");
  }
  for (const Val& sigma : {st_root(), seq({u(0)}), seq({u(0), u(0)})}) {
    std::vector<Val> xs = supp_S(cx.alpha, sigma);
    for (int i = 0; i < 30; ++i)
      if (in_H(cx, eps_big_e(sigma), rand_general(2), xs) != Cert::member)
        return fail("a tree name left uncertified over its own support");
  }

  // closure under addition and powers, seeded by collapses below the cap
  int closure_checks = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<Val> x;
    for (const Val& p : pts)
      if (rng() % 3 == 0) x.push_back(p);
    if (x.empty()) x.push_back(pts[rng() % pts.size()]);
    std::sort(x.begin(), x.end(),
              [&](const Val& p, const Val& q) { return cx.alpha.cmp(p, q) == Ord::lt; });
    Val t = rand_general(2);
    std::vector<Val> members{eps_zero(), eps_e(x[0]), rand_over(2, x)};
    Val w = rand_over(2, x);
    if (cmp(w, t) != Ord::gt) members.push_back(bar_theta(w));
    for (const Val& s : members)
      if (in_H(cx, s, t, x) != Cert::member) return fail("a generator left uncertified");
    const Val& s1 = members[rng() % members.size()];
    const Val& s2 = members[rng() % members.size()];
    if (in_H(cx, add(s1, s2), t, x) != Cert::member)
      return fail("a sum of members left uncertified");
    if (in_H(cx, omega_pow(s1), t, x) != Cert::member)
      return fail("a power of a member left uncertified");
    ++closure_checks;
  }

  // downward closure below a member under the cap
  int dominated = 0;
  for (int i = 0; i < 3000 && dominated < 200; ++i) {
    std::vector<Val> x;
    for (const Val& p : pts)
      if (rng() % 3 == 0) x.push_back(p);
    if (x.empty()) x.push_back(pts[rng() % pts.size()]);
    Val sp = rand_over(2, x);
    if (val_eq(sp, eps_zero()) || cmp(sp, big_omega()) != Ord::lt) continue;
    Val t = rand_general(2);
    Val s = rng() % 2 ? rand_over(1, pts)
                      : eps_e(btheta(rand_over(1, pts)));
    if (cmp(s, sp) != Ord::lt) continue;
    if (in_H(cx, s, t, x) != Cert::member)
      return fail("a term below a member was left uncertified");
    ++dominated;
  }
  if (dominated < 200) return fail("only " + std::to_string(dominated) + " dominated samples");

  // certificates against the saturation reference on closed universes
  struct Config {
    Val t;
    std::vector<Val> x;
  };
  std::vector<Config> cfgs{
      {eps_zero(), {}},
      {omega_pow(add(big_omega(), eps_e(pts[0]))), {pts[0]}},
      {big_omega(), {pts[0], pts[2]}},
  };
  long long members = 0, unknowns = 0;
  for (const Config& cfg : cfgs) {
    std::vector<Val> seeds{eps_zero(),
                           big_omega(),
                           eps_e(pts[0]),
                           eps_e(pts[1]),
                           eps_e(pts[3]),
                           bar_theta(eps_zero()),
                           bar_theta(eps_e(pts[0])),
                           bar_theta(big_omega()),
                           bar_theta(omega_pow(big_omega())),
                           add(eps_e(pts[0]), eps_e(pts[0])),
                           omega_pow(add(big_omega(), eps_e(pts[1]))),
                           eps_big_e(st_root())};
    std::unordered_set<Val, ValHash, ValEq> uniq;
    std::vector<Val> universe;
    std::function<void(const Val&)> close = [&](const Val& v) {
      if (!uniq.insert(v).second) return;
      universe.push_back(v);
      if (v->tag == Tag::e_sum)
        for (const Val& k : v->kids) close(k);
      if (v->tag == Tag::e_small && v->kids[0]->tag == Tag::b_theta)
        close(v->kids[0]->kids[0]);
    };
    for (const Val& s : seeds) {
      if (universe.size() >= 50) break;
      close(s);
    }
    std::vector<Val> H = brute_H(cx, cfg.t, cfg.x, universe, 6);
    std::unordered_set<Val, ValHash, ValEq> hset(H.begin(), H.end());
    for (const Val& s : universe) {
      if (in_H(cx, s, cfg.t, cfg.x) == Cert::member) {
        if (!hset.count(s))
          return fail("certificate outside the saturated set: " + eps_show(cx.alpha, s));
        ++members;
      } else {
        ++unknowns;
      }
    }
  }
  return {true, std::to_string(closure_checks) + " closure and " + std::to_string(dominated) +
                    " domination samples; " + std::to_string(members) +
                    " certificates matched saturation (" + std::to_string(unknowns) +
                    " unknown)"};
}

//---- 9: a corpus of proof codes expanded four levels deep

struct CorpusStats {
  long long nodes = 0;
  long long edges = 0;
  long long pendings = 0;
  std::string first_fail;
};

void walk_tree(const ProofCtx& cx, const ExpandNode& nd, CorpusStats& st) {
  ++st.nodes;
  if (!nd.local.ok && st.first_fail.empty())
    st.first_fail =
        nd.local.rep.notes.empty() ? "unnamed hard failure" : nd.local.rep.notes[0];
  if (nd.local.pending) ++st.pendings;
  for (const auto& [a, ch] : nd.children) {
    ++st.edges;
    if (eps_cmp(cx.b, cx.alpha, ch.s1->o, nd.s1->o) != Ord::lt && st.first_fail.empty())
      st.first_fail = "ordinal failed to drop along an edge";
    walk_tree(cx, ch, st);
  }
}

Verdict crit_corpus() {
  Base b = make_base(2);
  ProofCtx cx = make_collapse_ctx(b, 2);
  std::mt19937_64 rng(0x5eed0009);
  std::unordered_set<Val, ValHash, ValEq> seen;
  std::vector<Val> corpus;
  auto push = [&](const Val& P) {
    if (seen.insert(P).second) corpus.push_back(P);
  };

  push(code_basic(st_root()));
  for (int i = 0; i < 150; ++i) {
    Val sigma = st_root();
    int steps = 1 + (int)(rng() % 4);
    for (int s = 0; s < steps; ++s) {
      std::vector<Val> ch = st_children(b, cx.alpha, sigma, 2, 5);
      if (ch.empty()) break;
      std::vector<Val> kk = sigma->kids;
      kk.push_back(ch[rng() % ch.size()]);
      sigma = seq(kk);
      push(code_basic(sigma));
    }
  }
  {
    std::vector<Val> roots = corpus;
    for (const Val& P : roots) {
      const Val& sigma = P->kids[0];
      if (sigma->kids.size() % 2 == 0) {
        std::vector<Val> kk = sigma->kids;
        kk.push_back(u(1));
        push(code_basic(seq(kk)));
      }
    }
  }

  // cut pairs over the closure axiom
  Val ax = axiom(0, 2);
  Val nax = negate(ax);
  std::vector<Val> with_ax, with_nax;
  for (const Val& P : corpus) {
    auto s1 = stage1_eval(cx, P);
    if (!s1->realizable) continue;
    if (seq_member(s1->l, ax)) with_ax.push_back(P);
    if (seq_member(s1->l, nax)) with_nax.push_back(P);
  }
  for (int i = 0; i < 6 && !with_ax.empty() && !with_nax.empty(); ++i)
    push(code_red(ax, with_nax[rng() % with_nax.size()], with_ax[rng() % with_ax.size()]));

  // full elimination chains feeding collapses
  {
    std::vector<Val> roots = corpus;
    for (int i = 0; i < 12 && i < (int)roots.size(); ++i) {
      Val P = roots[rng() % roots.size()];
      auto s1 = stage1_eval(cx, P);
      if (!s1->realizable) continue;
      long long guard = 0;
      while (stage1_eval(cx, P)->d > 2 && guard++ < 12) {
        P = code_elim(P);
        push(P);
      }
      push(code_clp(rng() % 2 ? eps_zero() : omega_pow(eps_zero()), P));
    }
  }

  std::vector<Val> gammas = cx.alpha.enumerate(4);
  long long guard = 0;
  while (corpus.size() < 210 && guard++ < 4000) {
    Val P = corpus[rng() % corpus.size()];
    auto s1 = stage1_eval(cx, P);
    if (!s1->realizable) continue;
    switch (rng() % 6) {
      case 0:
      case 1:
      case 2:
        push(code_elim(P));
        break;
      case 3: {
        if (s1->l.empty()) break;
        std::size_t start = rng() % s1->l.size();
        for (std::size_t k = 0; k < s1->l.size(); ++k) {
          const Val& phi = s1->l[(start + k) % s1->l.size()];
          std::optional<Decomposition> d = decompose(cx.b, cx.alpha, phi);
          if (!d || !d->conjunctive) continue;
          std::vector<Val> idx = index_enumerate(cx.b, cx.alpha, d->iota, 4);
          if (idx.empty()) continue;
          push(code_inv(phi, idx[rng() % idx.size()], P));
          break;
        }
        break;
      }
      case 4: {
        if (s1->l.empty()) break;
        push(code_bnd(s1->l[rng() % s1->l.size()], gammas[rng() % gammas.size()], P));
        break;
      }
      default: {
        if (s1->d <= 2) push(code_clp(eps_zero(), P));
        break;
      }
    }
  }
  if (corpus.size() < 200)
    return fail("corpus stalled at " + std::to_string(corpus.size()) + " codes");

  CorpusStats st;
  for (const Val& P : corpus) {
    ExpandNode tree = expand(cx, P, 4, 3);
    walk_tree(cx, tree, st);
    if (!st.first_fail.empty())
      return fail(trim_note(st.first_fail) + " in " + trim_note(code_show(cx, P)));
  }

  // elimination keeps the end sequent and steps the bound down
  int chains = 0;
  for (const Val& P : corpus) {
    if (chains >= 40) break;
    auto s0 = stage1_eval(cx, P);
    if (!s0->realizable) continue;
    Val Q = P;
    for (long long k = 1; k <= 3; ++k) {
      Q = code_elim(Q);
      auto sq = stage1_eval(cx, Q);
      if (sq->l.size() != s0->l.size())
        return fail("elimination changed the end sequent size");
      for (std::size_t j = 0; j < sq->l.size(); ++j)
        if (!val_eq(sq->l[j], s0->l[j])) return fail("elimination changed the end sequent");
      if (sq->d != std::max<long long>(2, s0->d - k))
        return fail("elimination stepped the bound wrong");
    }
    ++chains;
  }

  Val fin = collapse_pipeline(cx, code_basic(st_root()), eps_zero());
  auto sf = stage1_eval(cx, fin);
  if (!sf->l.empty()) return fail("pipeline end sequent is not empty");
  if (eps_cmp(cx.b, cx.alpha, sf->o, big_omega()) != Ord::lt)
    return fail("pipeline ordinal did not land below the cap");
  if (!check_local(cx, fin, 3).ok) return fail("pipeline result fails its local check");

  return {true, std::to_string(corpus.size()) + " codes, " + std::to_string(st.nodes) +
                    " nodes, " + std::to_string(st.edges) + " edges, " +
                    std::to_string(st.pendings) + " pending"};
}

//---- 10: a literal proof with one rank-1 cut, before and after elimination

Verdict crit_literal_cut() {
  Base b = make_base(2);
  ProofCtx cx = make_finite_ctx(b, 2, 2);
  Val target = mk(Tag::f_in, {u(0), u(1)});
  Val psi = mk(Tag::f_ex, 0, {mk(Tag::f_eq, {fvar(0), u(0)})});
  Val inst = mk(Tag::f_eq, {u(0), u(0)});
  if (rk(psi) != 1) return fail("the cut formula is not rank one");
  Val leaf0 = code_lit({target, negate(psi)}, rule_true(target), eps_zero(), 2, eps_zero(), {},
                       {}, {});
  Val leafT =
      code_lit({target, psi, inst}, rule_true(inst), eps_zero(), 2, eps_zero(), {}, {}, {});
  Val mid = code_lit({target, psi}, rule_or(psi, u(0)), eps_nat(1), 2, eps_zero(), {}, {u(0)},
                     {leafT});
  Val root = code_lit({target}, rule_cut(psi), eps_nat(2), 2, eps_zero(), {}, {u(0), u(1)},
                      {leaf0, mid});

  auto audit = [&](const Val& P) -> std::optional<std::string> {
    CorpusStats st;
    ExpandNode tree = expand(cx, P, 4, 6);
    walk_tree(cx, tree, st);
    if (!st.first_fail.empty()) return st.first_fail;
    if (st.pendings > 0) return std::string("a node was left pending");
    return std::nullopt;
  };
  if (auto err = audit(root)) return fail("before elimination: " + *err);
  std::optional<Val> w1 = seek_true(cx, root, 8);
  if (!w1 || !val_eq(*w1, target)) return fail("no true witness before elimination");

  Val el = code_elim(root);
  auto s1 = stage1_eval(cx, el);
  if (s1->d != 2) return fail("elimination moved the bound off two");
  if (rule_of(cx, el)->tag != Tag::r_cut) return fail("the rank-1 cut did not survive");
  if (auto err = audit(el)) return fail("after elimination: " + *err);
  std::optional<Val> w2 = seek_true(cx, el, 8);
  if (!w2 || !val_eq(*w2, *w1)) return fail("the witness changed under elimination");
  return {true, "all nodes clean; the witness survives elimination"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    long long budget_ms;
    std::function<Verdict()> run;
  };
  std::vector<Criterion> cs{
      {1, "collapse introduction audit", 5000, crit_intro_collapse},
      {2, "enumeration round trips", 10000, crit_enumeration},
      {3, "dilator laws", 60000, crit_dilators},
      {4, "bounded truth equals its fold", 60000, crit_bounded_truth},
      {5, "height and rank descent", 30000, crit_height_rank},
      {6, "ordinal arithmetic laws", 30000, crit_ordinal_arith},
      {7, "collapsed base properties", 30000, crit_collapsed_base},
      {8, "good set certification", 60000, crit_good_sets},
      {9, "proof code corpus", 300000, crit_corpus},
      {10, "literal proof cut elimination", 1000, crit_literal_cut},
  };
  bool all = true;
  for (const Criterion& c : cs) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v = c.run();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    bool in_time = ms < c.budget_ms;
    bool pass = v.ok && in_time;
    all = all && pass;
    std::printf("criterion %2d  %-32s  %s  %6lld/%lld ms  %s%s\n", c.id, c.label,
                pass ? "pass" : "FAIL", (long long)ms, c.budget_ms, v.detail.c_str(),
                in_time ? "" : "  [over the time budget]");
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}

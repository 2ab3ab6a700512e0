#include <catch2/catch_amalgamated.hpp>

#include "bhcalc/collapse.hpp"

using namespace bhcalc;

namespace {
const CollapseOracle& OC() {
  static CollapseOracle oc = make_collapse_oracle(make_base(2));
  return oc;
}
Val one() { return mk(Tag::e_sum, {eps_zero()}); }
}  // namespace

TEST_CASE("points compare through the collapse recursion") {
  const CollapseOracle& oc = OC();
  const LinearOrder& BH = oc.alpha;
  Val p0 = btheta(eps_zero());          // th(W)
  Val p1 = btheta(one());               // th(W+w^0)
  Val q = btheta(big_omega());          // th(W+W)
  Val r = btheta(eps_e(p0));            // the argument names a smaller point
  Val big = btheta(eps_e(q));           // the argument names q itself

  CHECK(BH.valid(p0));
  CHECK(BH.valid(r));
  CHECK(!BH.valid(btheta(nat(0))));
  CHECK(!BH.valid(btheta(eps_e(nat(0)))));

  CHECK(BH.cmp(p0, p0) == Ord::eq);
  CHECK(BH.cmp(p0, p1) == Ord::lt);
  CHECK(BH.cmp(p1, q) == Ord::lt);
  CHECK(BH.cmp(p0, r) == Ord::lt);
  CHECK(BH.cmp(r, q) == Ord::lt);
  // the support of e(q) reaches q, so the collapse lands above q
  CHECK(BH.cmp(big, q) == Ord::gt);
  CHECK(BH.cmp(q, big) == Ord::lt);
  // and above the collapse of any epsilon term supported below q
  CHECK(BH.cmp(r, big) == Ord::lt);
}

TEST_CASE("the point stream is valid, distinct, and starts at th(W)") {
  const CollapseOracle& oc = OC();
  std::vector<Val> pts = oc.alpha.enumerate(30);
  REQUIRE(pts.size() == 30);
  CHECK(val_eq(pts[0], btheta(eps_zero())));
  std::set<std::string> shown;
  for (const Val& p : pts) {
    CHECK(oc.alpha.valid(p));
    CHECK(shown.insert(oc.alpha.show(p)).second);
  }
  // order axioms on the sample
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      Ord c = oc.alpha.cmp(pts[i], pts[j]);
      Ord d = oc.alpha.cmp(pts[j], pts[i]);
      CHECK((c == Ord::eq) == (i == j));
      CHECK((c == Ord::lt) == (d == Ord::gt));
    }
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j)
      for (std::size_t k = 0; k < 12; ++k)
        if (oc.alpha.cmp(pts[i], pts[j]) == Ord::lt &&
            oc.alpha.cmp(pts[j], pts[k]) == Ord::lt)
          CHECK(oc.alpha.cmp(pts[i], pts[k]) == Ord::lt);
}

TEST_CASE("points print as th of a W-led sum and parse back") {
  const CollapseOracle& oc = OC();
  const LinearOrder& BH = oc.alpha;
  CHECK(BH.show(btheta(eps_zero())) == "th(W)");
  CHECK(BH.show(btheta(one())) == "th(w^W+w^0)");
  CHECK(BH.show(btheta(big_omega())) == "th(w^W+w^W)");
  CHECK(BH.show(btheta(eps_e(btheta(eps_zero())))) == "th(w^W+w^e(th(W)))");
  for (const Val& p : oc.alpha.enumerate(25)) {
    std::optional<Val> back = BH.parse(BH.show(p));
    REQUIRE(back);
    CHECK(val_eq(*back, p));
  }
  CHECK(!BH.parse("th(0)"));
  CHECK(!BH.parse("th(w^0)"));   // not of the form W + s
  CHECK(!BH.parse("th()"));
  CHECK(!BH.parse("w^W"));
}

TEST_CASE("collapse properties hold on a mixed sample") {
  const CollapseOracle& oc = OC();
  std::vector<Val> sample = oc.alpha.enumerate(18);
  std::vector<Val> terms;
  for (const Val& p : sample) terms.push_back(p->kids[0]);
  terms.push_back(eps_e(btheta(big_omega())));
  terms.push_back(eps_add(oc.state->b, oc.alpha, big_omega(), eps_e(btheta(eps_zero()))));
  CheckReport rep = check_bar_props(oc, terms);
  for (const std::string& note : rep.notes) INFO(note);
  CHECK(rep.ok);
}

TEST_CASE("the oracle exposes collapse arithmetic") {
  const CollapseOracle& oc = OC();
  Val s = eps_e(oc.point(eps_zero()));
  CHECK(val_eq(oc.bar(eps_zero()), s));
  CHECK(oc.cmp_eps(eps_zero(), s) == Ord::lt);
  CHECK(val_eq(oc.add(s, eps_zero()), s));
  // bar is monotone where the support condition is met
  CHECK(oc.cmp_eps(oc.bar(eps_zero()), oc.bar(one())) == Ord::lt);
}

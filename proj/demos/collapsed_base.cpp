// Walks the collapsed base order: its first points, epsilon terms over it,
// and the collapse map that folds terms back into points.

#include <cstdio>

#include "bhcalc/collapse.hpp"

using namespace bhcalc;

int main() {
  Base b = make_base(2);
  CollapseOracle oc = make_collapse_oracle(b, 2);

  //---- the first points of the base, in enumeration order
  std::printf("first points:\n");
  std::vector<Val> pts = oc.alpha.enumerate(6);
  for (const Val& p : pts) std::printf("  %s\n", oc.alpha.show(p).c_str());

  //---- epsilon terms over the base, compared and collapsed
  Val s = oc.add(big_omega(), eps_e(pts[0]));          // W + e(th(W))
  Val t = omega_pow(s);                                // w^(W + e(th(W)))
  std::printf("\ns = %s\nt = %s\n", eps_show(oc.alpha, s).c_str(),
              eps_show(oc.alpha, t).c_str());
  std::printf("s < t: %s\n", oc.cmp_eps(s, t) == Ord::lt ? "yes" : "no");

  Val bs = oc.bar(s), bt = oc.bar(t);
  std::printf("bar(s) = %s\nbar(t) = %s\n", eps_show(oc.alpha, bs).c_str(),
              eps_show(oc.alpha, bt).c_str());
  std::printf("bar(s) < bar(t): %s\n", oc.cmp_eps(bs, bt) == Ord::lt ? "yes" : "no");
  std::printf("bar(s) < W: %s\n", oc.cmp_eps(bs, big_omega()) == Ord::lt ? "yes" : "no");

  //---- the audited collapse properties on a small sample
  std::vector<Val> sample{eps_zero(), big_omega(), eps_e(pts[0]), eps_e(pts[1]), s, t};
  CheckReport rep = check_bar_props(oc, sample);
  std::printf("\ncollapse properties on %zu terms: %s\n", sample.size(),
              rep.ok ? "ok" : rep.notes[0].c_str());
  return 0;
}

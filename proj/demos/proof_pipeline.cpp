// Runs a proof code through cut elimination and collapse: the root search
// tree is eliminated down to bound two, then collapsed below the cap.

#include <cstdio>

#include "bhcalc/proofcodes.hpp"

using namespace bhcalc;

int main() {
  Base b = make_base(2);
  ProofCtx cx = make_collapse_ctx(b, 2);

  //---- the root code and its stage-one reading
  Val P = code_basic(st_root());
  auto show = [&](const char* name, const Val& Q) {
    auto s1 = stage1_eval(cx, Q);
    LocalReport lr = check_local(cx, Q, 3);
    std::printf("%-10s o = %-24s d = %lld  rule = %s  %s\n", name,
                eps_show(cx.alpha, s1->o).c_str(), s1->d,
                rule_show(cx, rule_of(cx, Q)).c_str(),
                lr.ok ? (lr.pending ? "ok (pending)" : "ok") : "FAIL");
  };
  show("basic<>", P);

  //---- one elimination step at a time, then the collapse
  Val Q = P;
  while (stage1_eval(cx, Q)->d > 2) {
    Q = code_elim(Q);
    show("elim", Q);
  }
  Val C = code_clp(eps_zero(), Q);
  show("collapse", C);

  Val fin = collapse_pipeline(cx, P, eps_zero());
  auto s1 = stage1_eval(cx, fin);
  std::printf("\npipeline lands at %s, below the cap: %s\n",
              eps_show(cx.alpha, s1->o).c_str(),
              eps_cmp(cx.b, cx.alpha, s1->o, big_omega()) == Ord::lt ? "yes" : "no");

  //---- two expansion levels of the collapsed code
  ExpandNode tree = expand(cx, fin, 2, 2);
  std::function<void(const ExpandNode&, int)> walk = [&](const ExpandNode& nd, int ind) {
    std::printf("%*s%s  (o = %s)\n", ind, "", rule_show(cx, nd.rule).c_str(),
                eps_show(cx.alpha, nd.s1->o).c_str());
    for (const auto& [a, ch] : nd.children) walk(ch, ind + 2);
  };
  walk(tree, 0);
  return 0;
}

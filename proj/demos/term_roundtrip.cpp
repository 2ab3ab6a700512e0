// Enumerates terms over a finite order, codes them back, and decomposes a
// formula into its verification instances.

#include <cstdio>

#include "bhcalc/formulas.hpp"

using namespace bhcalc;

int main() {
  Base b = make_base(2);
  LinearOrder X = make_fin_ord(3);

  //---- the first few terms supported inside {0, 2}, with their codes
  std::vector<Val> x{nat(0), nat(2)};
  std::printf("terms over {0, 2}:\n");
  for (std::uint64_t n = 0; n < 8; ++n) {
    Val t = en_L(b, X, x, n);
    std::printf("  en(%llu) = %-14s  code = %s\n", (unsigned long long)n,
                lterm_show(X, t).c_str(), big_str(code_L(b, X, x, t)).c_str());
  }

  //---- a bounded formula and the instances its truth folds over
  Val phi = *fml_parse(b, X, "ex v0 in L(1). v0 in u1");
  std::printf("\n%s decomposes %s over:\n", fml_show(X, phi).c_str(),
              decompose(b, X, phi)->conjunctive ? "conjunctively" : "disjunctively");
  Decomposition d = *decompose(b, X, phi);
  for (const Val& a : index_enumerate(b, X, d.iota, 6))
    std::printf("  %-6s -> %s\n", lterm_show(X, a).c_str(),
                fml_show(X, d.instance(a)).c_str());

  //---- truth over the cumulative stage model of height two
  const StageModel& m = stage_model(b, 2);
  std::printf("\nholds in the height-2 model: %s\n",
              *eval_formula(m, phi) ? "yes" : "no");
  return 0;
}

#include <catch2/catch_amalgamated.hpp>

#include "bhcalc/dilators.hpp"

using namespace bhcalc;

namespace {

// all strictly increasing maps fin:m -> fin:n, one per m-subset of {0..n-1}
std::vector<Embedding> all_increasing_maps(long long m, long long n) {
  std::vector<Embedding> out;
  LinearOrder dst = make_fin_ord(n);
  std::vector<long long> pick(m);
  std::function<void(long long, long long)> go = [&](long long idx, long long from) {
    if (idx == m) {
      std::vector<Val> subset;
      for (long long v : pick) subset.push_back(nat(v));
      out.push_back(increasing_enum(dst, subset));
      return;
    }
    for (long long v = from; v + (m - idx - 1) < n; ++v) {
      pick[idx] = v;
      go(idx + 1, v + 1);
    }
  };
  go(0, 0);
  return out;
}

std::vector<LinearOrder> fin_orders_up_to(long long n) {
  std::vector<LinearOrder> out;
  for (long long k = 0; k <= n; ++k) out.push_back(make_fin_ord(k));
  return out;
}

std::vector<Embedding> embeddings_up_to(long long n) {
  std::vector<Embedding> out;
  for (long long m = 0; m <= n; ++m)
    for (long long k = m; k <= n; ++k)
      for (Embedding& f : all_increasing_maps(m, k)) out.push_back(std::move(f));
  return out;
}

}  // namespace

TEST_CASE("builtin functors satisfy the structural laws on small orders") {
  auto orders = fin_orders_up_to(3);
  auto maps = embeddings_up_to(3);
  for (const PraeDilator& T :
       {dil_constant(), dil_identity(), dil_one_x_x(), dil_two_pow()}) {
    CheckReport r = check_prae_dilator(T, orders, maps, 40);
    INFO(T.name);
    for (const std::string& note : r.notes) INFO(note);
    CHECK(r.ok);
  }
}

TEST_CASE("inclusive variant of 1+X+X passes the same laws") {
  auto orders = fin_orders_up_to(3);
  auto maps = embeddings_up_to(3);
  CheckReport r = check_prae_dilator(make_inclusive(dil_one_x_x()), orders, maps, 40);
  for (const std::string& note : r.notes) INFO(note);
  CHECK(r.ok);
}

TEST_CASE("1+X+X orders bottom below the middle copy below the upper copy") {
  LinearOrder X = make_fin_ord(3);
  LinearOrder TX = dil_one_x_x().on_order(X);
  REQUIRE(TX.finite_size);
  CHECK(*TX.finite_size == 7);
  CHECK(TX.lt(dsum_bot(), dsum_mid(nat(0))));
  CHECK(TX.lt(dsum_mid(nat(2)), dsum_top(nat(0))));
  CHECK(TX.lt(dsum_top(nat(0)), dsum_top(nat(1))));
  CHECK(TX.cmp(dsum_mid(nat(1)), dsum_mid(nat(1))) == Ord::eq);
  std::vector<Val> all = TX.enumerate(100);
  CHECK(all.size() == 7);
}

TEST_CASE("subset functor compares colexicographically, matching binary counting") {
  LinearOrder X = make_fin_ord(3);
  LinearOrder TX = dil_two_pow().on_order(X);
  std::vector<Val> all = TX.enumerate(100);
  REQUIRE(all.size() == 8);
  // enumeration is ascending: {} {0} {1} {0,1} {2} {0,2} {1,2} {0,1,2}
  for (std::size_t i = 0; i + 1 < all.size(); ++i) CHECK(TX.lt(all[i], all[i + 1]));
  auto set = [](std::vector<long long> xs) {
    std::vector<Val> kids;
    for (long long x : xs) kids.push_back(nat(x));
    return mk(Tag::d_set, kids);
  };
  CHECK(val_eq(all[3], set({0, 1})));
  CHECK(val_eq(all[4], set({2})));
  CHECK(TX.lt(set({0, 1}), set({2})));
  CHECK(TX.lt(set({2}), set({0, 2})));
}

TEST_CASE("inclusive pairs transport to the plain functor order") {
  PraeDilator D = make_inclusive(dil_one_x_x());
  LinearOrder X = make_fin_ord(3);
  LinearOrder DX = D.on_order(X);
  std::vector<Val> all = DX.enumerate(100);
  CHECK(all.size() == 7);
  for (const Val& v : all) {
    CHECK(DX.valid(v));
    // support is exactly the first component
    std::vector<Val> sp = D.supp(X, v);
    CHECK(val_eq(mk(Tag::fin_set, sp), v->kids[0]));
  }
  std::sort(all.begin(), all.end(), [&](const Val& a, const Val& b) { return DX.lt(a, b); });
  for (std::size_t i = 0; i + 1 < all.size(); ++i) CHECK(DX.lt(all[i], all[i + 1]));
  // a pair whose support misses part of the subset is rejected
  Val bad = mk(Tag::d_pair, {mk(Tag::fin_set, {nat(0), nat(1)}), dsum_mid(nat(0))});
  CHECK(!DX.valid(bad));
}

TEST_CASE("the example collapse over omega^omega satisfies both collapse laws") {
  CollapseCandidate c = intro_collapse_womega();
  std::vector<Val> elements;
  elements.push_back(dsum_bot());
  // payloads: all weakly decreasing exponent lists, length <= 2, entries <= 2
  std::vector<std::vector<long long>> payloads = {{},     {0},    {1},    {2},
                                                  {0, 0}, {1, 0}, {1, 1}, {2, 0},
                                                  {2, 1}, {2, 2}};
  for (const auto& e : payloads) {
    elements.push_back(dsum_mid(womega(e)));
    elements.push_back(dsum_top(womega(e)));
  }
  CheckReport r = check_bh_collapse(c, elements);
  for (const std::string& note : r.notes) INFO(note);
  CHECK(r.ok);

  SECTION("spot values") {
    LinearOrder W = make_womega();
    CHECK(W.show(*c.theta(dsum_bot())) == "[]");
    CHECK(W.show(*c.theta(dsum_mid(womega({1, 0})))) == "[1,0,0]");
    // omega * (omega + 2 + 1): shift every exponent up and append a unit
    CHECK(W.show(*c.theta(dsum_top(womega({1, 0, 0})))) == "[2,1,1,1]");
  }

  SECTION("perturbing the middle clause breaks the support bound") {
    CollapseCandidate broken = c;
    broken.name = "broken-mid";
    broken.theta = [](const Val& sigma) -> std::optional<Val> {
      if (sigma->tag == Tag::d_bot) return womega({});
      if (sigma->tag == Tag::d_mid) return sigma->kids[0];  // drops the successor
      return womega_times_omega_succ(sigma->kids[0]);
    };
    CheckReport rb = check_bh_collapse(broken, elements);
    CHECK(!rb.ok);
    bool support_witness = false;
    for (const std::string& note : rb.notes)
      if (note.find("support bound") != std::string::npos) support_witness = true;
    CHECK(support_witness);
  }

  SECTION("perturbing the upper clause breaks monotonicity") {
    CollapseCandidate broken = c;
    broken.name = "broken-top";
    broken.theta = [](const Val& sigma) -> std::optional<Val> {
      if (sigma->tag == Tag::d_bot) return womega({});
      if (sigma->tag == Tag::d_mid) return womega_succ(sigma->kids[0]);
      return womega_succ(womega_succ(sigma->kids[0]));  // stays below the limit
    };
    CheckReport rb = check_bh_collapse(broken, elements);
    CHECK(!rb.ok);
    bool mono_witness = false;
    for (const std::string& note : rb.notes)
      if (note.find("monotonicity") != std::string::npos) mono_witness = true;
    CHECK(mono_witness);
  }
}

TEST_CASE("greedy collapse over a finite order") {
  SECTION("constant functor is collapsed immediately") {
    GreedyResult r = greedy_collapse(dil_constant(), make_fin_ord(1), 16);
    REQUIRE(r.total);
    REQUIRE(r.assignments.size() == 1);
    CHECK(val_eq(r.assignments[0].second, nat(0)));
  }

  SECTION("1+X+X over a finite ordinal runs out at the top of the middle copy") {
    LinearOrder X = make_fin_ord(21);
    GreedyResult r = greedy_collapse(dil_one_x_x(), X, 64);
    CHECK(!r.total);
    REQUIRE(r.failed_at);
    CHECK(val_eq(*r.failed_at, dsum_mid(nat(20))));
    // up to there the collapse is bottom -> 0 and x -> x+1
    REQUIRE(r.assignments.size() == 21);
    CHECK(val_eq(r.assignments[0].first, dsum_bot()));
    CHECK(val_eq(r.assignments[0].second, nat(0)));
    CHECK(val_eq(r.assignments[1].first, dsum_mid(nat(0))));
    CHECK(val_eq(r.assignments[1].second, nat(1)));
    CHECK(val_eq(r.assignments[20].first, dsum_mid(nat(19))));
    CHECK(val_eq(r.assignments[20].second, nat(20)));
  }

  SECTION("identity functor fails at the top element") {
    GreedyResult r = greedy_collapse(dil_identity(), make_fin_ord(3), 16);
    CHECK(!r.total);
    REQUIRE(r.failed_at);
    CHECK(val_eq(*r.failed_at, nat(2)));
  }

  SECTION("infinite base order is rejected") {
    GreedyResult r = greedy_collapse(dil_constant(), make_omega(), 16);
    CHECK(!r.total);
    CHECK(!r.notes.ok);
  }
}

TEST_CASE("the collapse induces the converse embedding on omega^omega") {
  CollapseCandidate c = intro_collapse_womega();
  auto theta = [&c](const Val& sigma) { return *c.theta(sigma); };
  std::vector<Val> inputs = {womega({}),     womega({0}),       womega({0, 0}),
                             womega({1}),    womega({1, 0}),    womega({1, 1}),
                             womega({2})};
  EmbedResult r = embed_from_collapse(theta, c.X, inputs);
  for (const std::string& note : r.notes.notes) INFO(note);
  CHECK(r.notes.ok);
  LinearOrder W = make_womega();
  auto shown = [&](std::size_t i) { return W.show(r.assignments[i].second); };
  CHECK(shown(0) == "[]");        // f(0) = 0
  CHECK(shown(1) == "[0]");       // f(1) = 1
  CHECK(shown(2) == "[0,0]");     // f(2) = 2
  CHECK(shown(3) == "[1,1]");     // f(omega) = omega*2
  CHECK(shown(4) == "[1,1,0]");   // f(omega+1) = omega*2 + 1
  CHECK(shown(5) == "[1,1,1]");   // f(omega*2) = omega*3
  CHECK(shown(6) == "[2,2,1]");   // f(omega^2) = omega^2*2 + omega
}

TEST_CASE("order restriction keeps comparison and rejects outsiders") {
  LinearOrder X = make_fin_ord(5);
  LinearOrder S = restrict_order(X, {nat(1), nat(3)});
  CHECK(S.valid(nat(3)));
  CHECK(!S.valid(nat(2)));
  CHECK(S.lt(nat(1), nat(3)));
  CHECK(S.enumerate(10).size() == 2);
  CHECK_THROWS_AS(restrict_order(X, {nat(3), nat(1)}), std::invalid_argument);
}

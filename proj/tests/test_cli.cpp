// Drives the built binary end to end: exit codes, output forms, and that a
// rerun with the same arguments produces identical bytes.

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(BHCALC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool has(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("term and formula commands") {
  RunResult r = run_cli("lterm show \"L(1)\"");
  CHECK(r.code == 0);
  CHECK(has(r.out, "L(1)"));
  CHECK(has(r.out, "supp: 1"));
  CHECK(has(r.out, "code: 1"));

  r = run_cli("lterm en 3");
  CHECK(r.code == 0);

  r = run_cli("lterm enum 6");
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 6);
  CHECK(r.out.rfind("u0\nu1\nL(0)\n", 0) == 0);

  r = run_cli("formula show \"u0 in u1\"");
  CHECK(r.code == 0);
  CHECK(has(r.out, "bounded: yes"));

  r = run_cli("formula show \"ex v0. v0 in L(1)\"");
  CHECK(r.code == 0);
  CHECK(has(r.out, "sigma: yes"));
  CHECK(has(r.out, "pi: no"));
  CHECK(has(r.out, "rank: 1"));

  r = run_cli("formula negate \"u0 in u1\"");
  CHECK(r.out == "u0 notin u1\n");

  r = run_cli("formula relativize \"all v0. ex v1. v0 in v1\" 2");
  CHECK(r.out == "all v0 in L(2). ex v1 in L(2). v0 in v1\n");

  r = run_cli("formula decompose \"ex v0. v0 in L(1)\" --budget 3");
  CHECK(r.code == 0);
  CHECK(has(r.out, "disjunctive over all-terms"));
  CHECK(has(r.out, "u0 -> u0 in L(1)"));

  r = run_cli("formula eval \"u0 in L(1)\"");
  CHECK(r.out == "true\n");
  CHECK(r.code == 0);
}

TEST_CASE("tree and ordinal commands") {
  RunResult r = run_cli("stree label \"<u0>\"");
  CHECK(r.code == 0);
  CHECK(has(r.out, "<u0>"));
  CHECK(has(r.out, "ex v0. all v1."));

  r = run_cli("stree children \"<>\"");
  CHECK(r.out == "u0\n");

  r = run_cli("stree cmp \"<u0>\" \"<u0;u0>\"");
  CHECK(r.out == "gt\n");

  r = run_cli("eps add \"w^W\" \"w^(w^0)\"");
  CHECK(r.out == "w^W+w^(w^0)\n");

  r = run_cli("eps cmp \"0\" \"W\"");
  CHECK(r.out == "lt\n");

  r = run_cli("eps enum 4");
  CHECK(r.out == "0\nW\ne(0)\nE<>\n");
}

TEST_CASE("collapsed base commands") {
  RunResult r = run_cli("collapse enum 3");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("th(W)\n", 0) == 0);
  CHECK(lines(r.out) == 3);

  r = run_cli("collapse cmp \"th(W)\" \"th(w^W+w^0)\"");
  CHECK(r.out == "lt\n");
  CHECK(r.code == 0);

  r = run_cli("collapse props --count 6");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("ok\n", 0) == 0);
}

TEST_CASE("dilator law command") {
  RunResult r = run_cli("dilator check one-x-x --size 2 --budget 12");
  CHECK(r.code == 0);
  CHECK(has(r.out, "1+X+X: ok"));

  r = run_cli("dilator check nosuch");
  CHECK(r.code == 2);
}

TEST_CASE("proof code commands") {
  RunResult r = run_cli("code show \"basic<>\"");
  CHECK(r.code == 0);
  CHECK(has(r.out, "o: E<>"));
  CHECK(has(r.out, "d: 8"));
  CHECK(has(r.out, "rule: Cut("));

  r = run_cli("code show \"basic<u1>\"");
  CHECK(r.code == 0);
  CHECK(has(r.out, "o: W"));
  CHECK(has(r.out, "rule: And("));

  r = run_cli("code check \"basic<>\"");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("ok", 0) == 0);

  r = run_cli("code expand \"basic<>\" --depth 1 --budget 2");
  CHECK(r.code == 0);
  CHECK(has(r.out, "o=E<>"));
  CHECK(has(r.out, "\n  o="));

  r = run_cli("--alpha bh code pipeline \"basic<>\" --t 0 --budget 3");
  CHECK(r.code == 0);
  CHECK(has(r.out, "C[0]EEEEEEbasic<>"));
  CHECK(has(r.out, "d: 1"));
  CHECK(has(r.out, "o: e(th(E<>))"));
  CHECK(has(r.out, "check: ok"));

  r = run_cli("code witness \"basic<u0>\"");
  CHECK(r.code == 1);
  CHECK(r.out == "none\n");
}

TEST_CASE("exit codes and json trace") {
  RunResult r = run_cli("--alpha junk eps show 0");
  CHECK(r.code == 2);
  CHECK(r.out.empty());

  r = run_cli("eps cmp \"w^\" \"0\"");
  CHECK(r.code == 2);

  r = run_cli("nosub");
  CHECK(r.code == 2);

  r = run_cli("--json eps add \"w^W\" \"w^0\"");
  CHECK(r.code == 0);
  nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc["version"] == 1);
  CHECK(doc["ok"] == true);
  CHECK(doc["config"]["alpha"] == "fin:3");
  CHECK(doc["result"]["term"] == "w^W+w^0");

  RunResult again = run_cli("--json eps add \"w^W\" \"w^0\"");
  CHECK(again.out == r.out);

  RunResult e1 = run_cli("--json code expand \"basic<>\" --depth 2 --budget 3");
  RunResult e2 = run_cli("--json code expand \"basic<>\" --depth 2 --budget 3");
  CHECK(e1.code == 0);
  CHECK(e1.out == e2.out);
  nlohmann::json trace = nlohmann::json::parse(e1.out);
  CHECK(trace["result"]["nodes"].is_array());
  CHECK(trace["result"]["nodes"].size() > 3);
  for (const auto& node : trace["result"]["nodes"]) {
    CHECK(node.contains("addr"));
    CHECK(node.contains("rule"));
    CHECK(node.contains("o"));
  }
}

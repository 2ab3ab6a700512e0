// Command-line front end: terms, formulas, search trees, epsilon terms, the
// collapsed base, dilator law checks, and proof codes, with an optional JSON
// trace of every result.  All work happens on the calling thread and output
// depends only on the arguments, so a rerun is byte-identical.

#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bhcalc/proofcodes.hpp"

using nlohmann::json;
using namespace bhcalc;

namespace {

struct Options {
  long long base = 2;
  long long params = 2;
  std::string alpha = "fin:3";
  bool emit_json = false;
};

// exit codes: 0 fine, 1 a check failed, 2 malformed input
struct Outcome {
  int code = 0;
  json result;
  std::string text;
};

std::optional<ProofCtx> build_ctx(const Options& opt, bool force_collapse = false) {
  Base b = make_base(opt.base);
  if (force_collapse || opt.alpha == "bh") return make_collapse_ctx(b, opt.params);
  if (opt.alpha.rfind("fin:", 0) == 0) {
    long long n = 0;
    try {
      n = std::stoll(opt.alpha.substr(4));
    } catch (...) {
      return std::nullopt;
    }
    if (n < 0) return std::nullopt;
    return make_finite_ctx(b, n, opt.params);
  }
  return std::nullopt;
}

Outcome bad_input(const std::string& why) {
  Outcome o;
  o.code = 2;
  o.result["error"] = why;
  o.text = "error: " + why + "\n";
  return o;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  if (s.empty()) return out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && (s[i] == '(' || s[i] == '[' || s[i] == '<' || s[i] == '{')) ++depth;
    if (i < s.size() && (s[i] == ')' || s[i] == ']' || s[i] == '>' || s[i] == '}')) --depth;
    if (i == s.size() || (s[i] == ',' && depth == 0)) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::optional<std::vector<Val>> parse_terms(const ProofCtx& cx, std::string_view csv) {
  std::vector<Val> out;
  for (std::string_view piece : split_list(csv)) {
    std::optional<Val> t = lterm_parse(cx.b, cx.alpha, piece);
    if (!t) return std::nullopt;
    out.push_back(*t);
  }
  return out;
}

std::string ord_name(Ord o) { return o == Ord::lt ? "lt" : o == Ord::eq ? "eq" : "gt"; }

json sequent_json(const ProofCtx& cx, const Sequent& l) {
  json arr = json::array();
  for (const Val& phi : l) arr.push_back(fml_show(cx.alpha, phi));
  return arr;
}

json points_json(const ProofCtx& cx, const std::vector<Val>& pts) {
  json arr = json::array();
  for (const Val& p : pts) arr.push_back(cx.alpha.show(p));
  return arr;
}

//---- term operations

Outcome op_lterm_show(const ProofCtx& cx, const std::string& text, const std::string& supp_csv) {
  std::optional<Val> t = lterm_parse(cx.b, cx.alpha, text);
  if (!t) return bad_input("cannot parse term: " + text);
  Outcome o;
  std::vector<Val> supp = supp_L(cx.alpha, *t);
  std::vector<Val> window = supp;
  if (!supp_csv.empty()) {
    std::optional<std::vector<Val>> w = parse_terms(cx, supp_csv);
    if (!w) return bad_input("cannot parse support list");
    window.clear();
    for (const Val& s : *w) window = fin_union(cx.alpha, window, supp_L(cx.alpha, s));
  }
  std::string code = big_str(code_L(cx.b, cx.alpha, window, *t));
  o.result["term"] = lterm_show(cx.alpha, *t);
  o.result["supp"] = points_json(cx, supp);
  o.result["code"] = code;
  std::ostringstream out;
  out << lterm_show(cx.alpha, *t) << "\n";
  out << "supp:";
  for (const Val& p : supp) out << " " << cx.alpha.show(p);
  out << "\ncode: " << code << "\n";
  o.text = out.str();
  return o;
}

Outcome op_lterm_en(const ProofCtx& cx, std::uint64_t n, const std::string& supp_csv) {
  std::vector<Val> window;
  if (!supp_csv.empty()) {
    std::optional<std::vector<Val>> w = parse_terms(cx, supp_csv);
    if (!w) return bad_input("cannot parse support list");
    for (const Val& s : *w) window = fin_union(cx.alpha, window, supp_L(cx.alpha, s));
  }
  Val t = en_L(cx.b, cx.alpha, window, n);
  Outcome o;
  o.result["term"] = lterm_show(cx.alpha, t);
  o.text = lterm_show(cx.alpha, t) + "\n";
  return o;
}

Outcome op_lterm_enum(const ProofCtx& cx, std::size_t count) {
  LinearOrder L = make_lterm_dilator(cx.b).on_order(cx.alpha);
  std::vector<Val> ts = L.enumerate(count);
  Outcome o;
  json arr = json::array();
  std::ostringstream out;
  for (const Val& t : ts) {
    arr.push_back(lterm_show(cx.alpha, t));
    out << lterm_show(cx.alpha, t) << "\n";
  }
  o.result["terms"] = arr;
  o.text = out.str();
  return o;
}

//---- formula operations

Outcome op_fml_show(const ProofCtx& cx, const std::string& text) {
  std::optional<Val> phi = fml_parse(cx.b, cx.alpha, text);
  if (!phi) return bad_input("cannot parse formula: " + text);
  Outcome o;
  o.result["formula"] = fml_show(cx.alpha, *phi);
  o.result["bounded"] = is_bounded(*phi);
  o.result["sigma"] = is_sigma(*phi);
  o.result["pi"] = is_pi(*phi);
  o.result["rank"] = rk(*phi);
  o.result["closed"] = fml_closed(*phi);
  std::ostringstream out;
  out << fml_show(cx.alpha, *phi) << "\n";
  out << "bounded: " << (is_bounded(*phi) ? "yes" : "no")
      << "  sigma: " << (is_sigma(*phi) ? "yes" : "no")
      << "  pi: " << (is_pi(*phi) ? "yes" : "no") << "  rank: " << rk(*phi) << "\n";
  o.text = out.str();
  return o;
}

Outcome op_fml_negate(const ProofCtx& cx, const std::string& text) {
  std::optional<Val> phi = fml_parse(cx.b, cx.alpha, text);
  if (!phi) return bad_input("cannot parse formula: " + text);
  Outcome o;
  o.result["formula"] = fml_show(cx.alpha, negate(*phi));
  o.text = fml_show(cx.alpha, negate(*phi)) + "\n";
  return o;
}

Outcome op_fml_relativize(const ProofCtx& cx, const std::string& text, const std::string& stage) {
  std::optional<Val> phi = fml_parse(cx.b, cx.alpha, text);
  std::optional<Val> g = cx.alpha.parse(stage);
  if (!phi) return bad_input("cannot parse formula: " + text);
  if (!g || !cx.alpha.valid(*g)) return bad_input("cannot parse stage: " + stage);
  Outcome o;
  o.result["formula"] = fml_show(cx.alpha, relativize(*phi, *g));
  o.text = fml_show(cx.alpha, relativize(*phi, *g)) + "\n";
  return o;
}

Outcome op_fml_decompose(const ProofCtx& cx, const std::string& text, std::size_t budget) {
  std::optional<Val> phi = fml_parse(cx.b, cx.alpha, text);
  if (!phi) return bad_input("cannot parse formula: " + text);
  std::optional<Decomposition> d = decompose(cx.b, cx.alpha, *phi);
  if (!d) return bad_input("formula does not decompose (free variables?)");
  Outcome o;
  const char* kind = nullptr;
  switch (d->iota.kind) {
    case IndexDescriptor::Kind::empty: kind = "empty"; break;
    case IndexDescriptor::Kind::pair: kind = "pair"; break;
    case IndexDescriptor::Kind::elements_of_urelem: kind = "elements-of-urelem"; break;
    case IndexDescriptor::Kind::supp_below: kind = "supp-below"; break;
    case IndexDescriptor::Kind::all_terms: kind = "all-terms"; break;
  }
  o.result["polarity"] = d->conjunctive ? "conjunctive" : "disjunctive";
  o.result["index"] = kind;
  std::vector<Val> idx = index_enumerate(cx.b, cx.alpha, d->iota, budget);
  json inst = json::array();
  std::ostringstream out;
  out << (d->conjunctive ? "conjunctive" : "disjunctive") << " over " << kind << "\n";
  for (const Val& a : idx) {
    std::string line = lterm_show(cx.alpha, a) + " -> " + fml_show(cx.alpha, d->instance(a));
    inst.push_back(line);
    out << "  " << line << "\n";
  }
  o.result["instances"] = inst;
  o.text = out.str();
  return o;
}

Outcome op_fml_eval(const ProofCtx& cx, const std::string& text) {
  std::optional<Val> phi = fml_parse(cx.b, cx.alpha, text);
  if (!phi) return bad_input("cannot parse formula: " + text);
  std::optional<bool> v = true_eval(cx, *phi, 8);
  Outcome o;
  o.result["value"] = v ? (*v ? "true" : "false") : "unknown";
  o.text = std::string(v ? (*v ? "true" : "false") : "unknown") + "\n";
  return o;
}

//---- search tree operations

Outcome op_st_label(const ProofCtx& cx, const std::string& text) {
  std::optional<Val> node = st_parse(cx.b, cx.alpha, text, cx.max_params);
  if (!node) return bad_input("not a tree node: " + text);
  std::optional<Sequent> l = st_label(cx.b, cx.alpha, *node, cx.max_params);
  Outcome o;
  o.result["node"] = st_show(cx.alpha, *node);
  o.result["sequent"] = sequent_json(cx, *l);
  std::ostringstream out;
  out << st_show(cx.alpha, *node) << "\n";
  for (const Val& phi : *l) out << "  " << fml_show(cx.alpha, phi) << "\n";
  o.text = out.str();
  return o;
}

Outcome op_st_children(const ProofCtx& cx, const std::string& text, std::size_t budget) {
  std::optional<Val> node = st_parse(cx.b, cx.alpha, text, cx.max_params);
  if (!node) return bad_input("not a tree node: " + text);
  std::vector<Val> kids = st_children(cx.b, cx.alpha, *node, cx.max_params, budget);
  Outcome o;
  json arr = json::array();
  std::ostringstream out;
  for (const Val& k : kids) {
    arr.push_back(lterm_show(cx.alpha, k));
    out << lterm_show(cx.alpha, k) << "\n";
  }
  o.result["entries"] = arr;
  o.text = out.str();
  return o;
}

Outcome op_st_cmp(const ProofCtx& cx, const std::string& a, const std::string& b) {
  std::optional<Val> na = st_parse(cx.b, cx.alpha, a, cx.max_params);
  std::optional<Val> nb = st_parse(cx.b, cx.alpha, b, cx.max_params);
  if (!na || !nb) return bad_input("not a tree node");
  Ord r = kb_cmp([&](const Val& x, const Val& y) { return lterm_cmp(cx.b, cx.alpha, x, y); },
                 (*na)->kids, (*nb)->kids);
  Outcome o;
  o.result["order"] = ord_name(r);
  o.text = ord_name(r) + "\n";
  return o;
}

//---- epsilon operations

Outcome op_eps_show(const ProofCtx& cx, const std::string& text) {
  std::optional<Val> t = eps_parse(cx.b, cx.alpha, text, cx.max_params);
  if (!t) return bad_input("cannot parse ordinal term: " + text);
  Outcome o;
  o.result["term"] = eps_show(cx.alpha, *t);
  o.result["supp"] = points_json(cx, supp_eps(cx.alpha, *t));
  o.text = eps_show(cx.alpha, *t) + "\n";
  return o;
}

Outcome op_eps_cmp(const ProofCtx& cx, const std::string& a, const std::string& b) {
  std::optional<Val> ta = eps_parse(cx.b, cx.alpha, a, cx.max_params);
  std::optional<Val> tb = eps_parse(cx.b, cx.alpha, b, cx.max_params);
  if (!ta || !tb) return bad_input("cannot parse ordinal term");
  Outcome o;
  o.result["order"] = ord_name(eps_cmp(cx.b, cx.alpha, *ta, *tb));
  o.text = o.result["order"].get<std::string>() + "\n";
  return o;
}

Outcome op_eps_add(const ProofCtx& cx, const std::string& a, const std::string& b) {
  std::optional<Val> ta = eps_parse(cx.b, cx.alpha, a, cx.max_params);
  std::optional<Val> tb = eps_parse(cx.b, cx.alpha, b, cx.max_params);
  if (!ta || !tb) return bad_input("cannot parse ordinal term");
  Val sum = eps_add(cx.b, cx.alpha, *ta, *tb);
  Outcome o;
  o.result["term"] = eps_show(cx.alpha, sum);
  o.text = eps_show(cx.alpha, sum) + "\n";
  return o;
}

Outcome op_eps_enum(const ProofCtx& cx, std::size_t count) {
  LinearOrder E = make_epsilon_dilator(cx.b, cx.max_params).on_order(cx.alpha);
  Outcome o;
  json arr = json::array();
  std::ostringstream out;
  for (const Val& t : E.enumerate(count)) {
    arr.push_back(eps_show(cx.alpha, t));
    out << eps_show(cx.alpha, t) << "\n";
  }
  o.result["terms"] = arr;
  o.text = out.str();
  return o;
}

//---- collapsed base operations

Outcome op_bh_enum(const ProofCtx& cx, std::size_t count) {
  Outcome o;
  json arr = json::array();
  std::ostringstream out;
  for (const Val& p : cx.alpha.enumerate(count)) {
    arr.push_back(cx.alpha.show(p));
    out << cx.alpha.show(p) << "\n";
  }
  o.result["points"] = arr;
  o.text = out.str();
  return o;
}

Outcome op_bh_cmp(const ProofCtx& cx, const std::string& a, const std::string& b) {
  std::optional<Val> pa = cx.alpha.parse(a);
  std::optional<Val> pb = cx.alpha.parse(b);
  if (!pa || !cx.alpha.valid(*pa)) return bad_input("not a point: " + a);
  if (!pb || !cx.alpha.valid(*pb)) return bad_input("not a point: " + b);
  Outcome o;
  o.result["order"] = ord_name(cx.alpha.cmp(*pa, *pb));
  o.text = o.result["order"].get<std::string>() + "\n";
  return o;
}

Outcome op_bh_props(const ProofCtx& cx, std::size_t count) {
  LinearOrder E = make_epsilon_dilator(cx.b, cx.max_params).on_order(cx.alpha);
  CheckReport rep = check_bar_props(*cx.oracle, E.enumerate(count));
  Outcome o;
  o.code = rep.ok ? 0 : 1;
  o.result["ok"] = rep.ok;
  o.result["notes"] = rep.notes;
  std::ostringstream out;
  out << (rep.ok ? "ok" : "FAIL") << "\n";
  for (const std::string& n : rep.notes) out << "  " << n << "\n";
  o.text = out.str();
  return o;
}

//---- dilator checks

Outcome op_dilator_check(const Options& opt, const std::string& name, long long size,
                         std::size_t budget) {
  Base b = make_base(opt.base);
  PraeDilator T;
  if (name == "const1") T = dil_constant();
  else if (name == "identity") T = dil_identity();
  else if (name == "one-x-x") T = dil_one_x_x();
  else if (name == "two-pow") T = dil_two_pow();
  else if (name == "inclusive") T = make_inclusive(dil_one_x_x());
  else if (name == "lterm") T = make_lterm_dilator(b);
  else if (name == "stree") T = make_searchtree_dilator(b, opt.params);
  else if (name == "eps") T = make_epsilon_dilator(b, opt.params);
  else return bad_input("unknown dilator: " + name);

  std::vector<LinearOrder> orders;
  for (long long n = 0; n <= size; ++n) orders.push_back(make_fin_ord(n));
  std::vector<Embedding> maps;
  for (long long m = 0; m <= size; ++m)
    for (long long n = m; n <= size; ++n) {
      std::vector<long long> pick(m);
      std::function<void(long long, long long)> go = [&](long long idx, long long from) {
        if (idx == m) {
          std::vector<Val> subset;
          for (long long v : pick) subset.push_back(nat(v));
          maps.push_back(increasing_enum(make_fin_ord(n), subset));
          return;
        }
        for (long long v = from; v + (m - idx - 1) < n; ++v) {
          pick[idx] = v;
          go(idx + 1, v + 1);
        }
      };
      go(0, 0);
    }
  CheckReport rep = check_prae_dilator(T, orders, maps, budget);
  Outcome o;
  o.code = rep.ok ? 0 : 1;
  o.result["dilator"] = T.name;
  o.result["ok"] = rep.ok;
  o.result["notes"] = rep.notes;
  std::ostringstream out;
  out << T.name << ": " << (rep.ok ? "ok" : "FAIL") << "\n";
  for (const std::string& n : rep.notes) out << "  " << n << "\n";
  o.text = out.str();
  return o;
}

//---- proof code operations

json stage1_json(const ProofCtx& cx, const Stage1& s) {
  json j;
  j["sequent"] = sequent_json(cx, s.l);
  j["o"] = eps_show(cx.alpha, s.o);
  j["d"] = s.d;
  j["h0"] = eps_show(cx.alpha, s.h0);
  j["h1"] = points_json(cx, s.h1);
  j["realizable"] = s.realizable;
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

std::string stage1_text(const ProofCtx& cx, const Stage1& s) {
  std::ostringstream out;
  out << "sequent:";
  for (const Val& phi : s.l) out << " | " << fml_show(cx.alpha, phi);
  out << "\no: " << eps_show(cx.alpha, s.o) << "  d: " << s.d
      << "  h0: " << eps_show(cx.alpha, s.h0) << "  h1:";
  for (const Val& p : s.h1) out << " " << cx.alpha.show(p);
  out << "\n";
  if (!s.realizable) out << "marked: " << s.note << "\n";
  return out.str();
}

Outcome op_code_show(const ProofCtx& cx, const std::string& text) {
  std::optional<Val> P = code_parse(cx, text);
  if (!P) return bad_input("cannot parse code: " + text);
  auto s1 = stage1_eval(cx, *P);
  Outcome o;
  o.result["code"] = code_show(cx, *P);
  o.result["stage1"] = stage1_json(cx, *s1);
  o.result["rule"] = rule_show(cx, rule_of(cx, *P));
  o.text = code_show(cx, *P) + "\n" + stage1_text(cx, *s1) + "rule: " +
           rule_show(cx, rule_of(cx, *P)) + "\n";
  return o;
}

Outcome op_code_check(const ProofCtx& cx, const std::string& text, std::size_t budget) {
  std::optional<Val> P = code_parse(cx, text);
  if (!P) return bad_input("cannot parse code: " + text);
  LocalReport lr = check_local(cx, *P, budget);
  Outcome o;
  o.code = lr.ok ? 0 : 1;
  o.result["ok"] = lr.ok;
  o.result["pending"] = lr.pending;
  o.result["notes"] = lr.rep.notes;
  std::ostringstream out;
  out << (lr.ok ? (lr.pending ? "ok (pending)" : "ok") : "FAIL") << "\n";
  for (const std::string& n : lr.rep.notes) out << "  " << n << "\n";
  o.text = out.str();
  return o;
}

void expand_json(const ProofCtx& cx, const ExpandNode& n, const std::string& addr, json& arr) {
  json j;
  j["addr"] = addr;
  j["sequent"] = sequent_json(cx, n.s1->l);
  j["rule"] = rule_show(cx, n.rule);
  j["o"] = eps_show(cx.alpha, n.s1->o);
  j["d"] = n.s1->d;
  j["ok"] = n.local.ok;
  j["pending"] = n.local.pending;
  j["notes"] = n.local.rep.notes;
  j["truncated"] = n.truncated;
  arr.push_back(j);
  for (const auto& [a, child] : n.children)
    expand_json(cx, child, addr + "/" + lterm_show(cx.alpha, a), arr);
}

void expand_text(const ProofCtx& cx, const ExpandNode& n, const std::string& indent,
                 std::ostringstream& out) {
  out << indent << "o=" << eps_show(cx.alpha, n.s1->o) << "  " << rule_show(cx, n.rule)
      << (n.local.ok ? (n.local.pending ? "  [pending]" : "") : "  [FAIL]")
      << (n.truncated ? "  [more]" : "") << "\n";
  for (const auto& [a, child] : n.children)
    expand_text(cx, child, indent + "  ", out);
}

Outcome op_code_expand(const ProofCtx& cx, const std::string& text, int depth,
                       std::size_t budget) {
  std::optional<Val> P = code_parse(cx, text);
  if (!P) return bad_input("cannot parse code: " + text);
  ExpandNode tree = expand(cx, *P, depth, budget);
  Outcome o;
  json arr = json::array();
  expand_json(cx, tree, "", arr);
  o.result["nodes"] = arr;
  bool all_ok = true;
  for (const json& j : arr)
    if (!j["ok"].get<bool>()) all_ok = false;
  o.code = all_ok ? 0 : 1;
  o.result["ok"] = all_ok;
  std::ostringstream out;
  expand_text(cx, tree, "", out);
  o.text = out.str();
  return o;
}

Outcome op_code_pipeline(const ProofCtx& cx, const std::string& text, const std::string& t_text,
                         std::size_t budget) {
  std::optional<Val> P = code_parse(cx, text);
  if (!P) return bad_input("cannot parse code: " + text);
  std::optional<Val> t = eps_parse(cx.b, cx.alpha, t_text, cx.max_params);
  if (!t) return bad_input("cannot parse ordinal term: " + t_text);
  Val out_code = collapse_pipeline(cx, *P, *t);
  auto s1 = stage1_eval(cx, out_code);
  LocalReport lr = check_local(cx, out_code, budget);
  Outcome o;
  o.code = lr.ok ? 0 : 1;
  o.result["code"] = code_show(cx, out_code);
  o.result["stage1"] = stage1_json(cx, *s1);
  o.result["ok"] = lr.ok;
  o.result["below_cap"] = eps_cmp(cx.b, cx.alpha, s1->o, big_omega()) == Ord::lt;
  o.text = code_show(cx, out_code) + "\n" + stage1_text(cx, *s1) +
           (lr.ok ? "check: ok\n" : "check: FAIL\n");
  return o;
}

Outcome op_code_witness(const ProofCtx& cx, const std::string& text) {
  std::optional<Val> P = code_parse(cx, text);
  if (!P) return bad_input("cannot parse code: " + text);
  std::optional<Val> w = seek_true(cx, *P, 12);
  Outcome o;
  o.code = w ? 0 : 1;
  o.result["witness"] = w ? fml_show(cx.alpha, *w) : "none";
  o.text = o.result["witness"].get<std::string>() + "\n";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"calculator for ordinal notations, infinitary proofs, and their collapse"};
  app.require_subcommand(1);
  app.add_option("--base", opt.base, "urelement count")->check(CLI::Range(0, 8));
  app.add_option("--params", opt.params, "parameter bound for collection");
  app.add_option("--alpha", opt.alpha, "stage order: fin:N or bh");
  app.add_flag("--json", opt.emit_json, "emit a JSON trace");

  std::function<Outcome()> run;
  auto bind = [&run](std::function<Outcome()> f) { return [&run, f]() { run = f; }; };

  std::string arg_a, arg_b, arg_supp;
  std::uint64_t arg_n = 0;
  std::size_t arg_count = 10, arg_budget = 6;
  int arg_depth = 3;
  long long arg_size = 2;

  auto* lt = app.add_subcommand("lterm", "constructible terms");
  auto* lt_show = lt->add_subcommand("show", "canonical form, support, code");
  lt_show->add_option("text", arg_a)->required();
  lt_show->add_option("--supp", arg_supp, "support window, comma separated");
  lt_show->callback(bind([&]() { return op_lterm_show(*build_ctx(opt), arg_a, arg_supp); }));
  auto* lt_en = lt->add_subcommand("en", "decode a number over a support window");
  lt_en->add_option("n", arg_n)->required();
  lt_en->add_option("--supp", arg_supp);
  lt_en->callback(bind([&]() { return op_lterm_en(*build_ctx(opt), arg_n, arg_supp); }));
  auto* lt_enum = lt->add_subcommand("enum", "list terms in order-respecting rounds");
  lt_enum->add_option("count", arg_count);
  lt_enum->callback(bind([&]() { return op_lterm_enum(*build_ctx(opt), arg_count); }));

  auto* fm = app.add_subcommand("formula", "negation normal formulas");
  auto* fm_show = fm->add_subcommand("show", "canonical form and classification");
  fm_show->add_option("text", arg_a)->required();
  fm_show->callback(bind([&]() { return op_fml_show(*build_ctx(opt), arg_a); }));
  auto* fm_neg = fm->add_subcommand("negate", "dual form");
  fm_neg->add_option("text", arg_a)->required();
  fm_neg->callback(bind([&]() { return op_fml_negate(*build_ctx(opt), arg_a); }));
  auto* fm_rel = fm->add_subcommand("relativize", "bound unbounded quantifiers at a stage");
  fm_rel->add_option("text", arg_a)->required();
  fm_rel->add_option("stage", arg_b)->required();
  fm_rel->callback(bind([&]() { return op_fml_relativize(*build_ctx(opt), arg_a, arg_b); }));
  auto* fm_dec = fm->add_subcommand("decompose", "polarity, index set, sample instances");
  fm_dec->add_option("text", arg_a)->required();
  fm_dec->add_option("--budget", arg_budget);
  fm_dec->callback(bind([&]() { return op_fml_decompose(*build_ctx(opt), arg_a, arg_budget); }));
  auto* fm_ev = fm->add_subcommand("eval", "truth over the stages, when decidable");
  fm_ev->add_option("text", arg_a)->required();
  fm_ev->callback(bind([&]() { return op_fml_eval(*build_ctx(opt), arg_a); }));

  auto* st = app.add_subcommand("stree", "the search tree");
  auto* st_lab = st->add_subcommand("label", "sequent at a node");
  st_lab->add_option("node", arg_a)->required();
  st_lab->callback(bind([&]() { return op_st_label(*build_ctx(opt), arg_a); }));
  auto* st_ch = st->add_subcommand("children", "extensions of a node");
  st_ch->add_option("node", arg_a)->required();
  st_ch->add_option("--budget", arg_budget);
  st_ch->callback(bind([&]() { return op_st_children(*build_ctx(opt), arg_a, arg_budget); }));
  auto* st_c = st->add_subcommand("cmp", "order two nodes");
  st_c->add_option("a", arg_a)->required();
  st_c->add_option("b", arg_b)->required();
  st_c->callback(bind([&]() { return op_st_cmp(*build_ctx(opt), arg_a, arg_b); }));

  auto* ep = app.add_subcommand("eps", "ordinal terms above the stages");
  auto* ep_show = ep->add_subcommand("show", "canonical form and support");
  ep_show->add_option("text", arg_a)->required();
  ep_show->callback(bind([&]() { return op_eps_show(*build_ctx(opt), arg_a); }));
  auto* ep_cmp = ep->add_subcommand("cmp", "compare two terms");
  ep_cmp->add_option("a", arg_a)->required();
  ep_cmp->add_option("b", arg_b)->required();
  ep_cmp->callback(bind([&]() { return op_eps_cmp(*build_ctx(opt), arg_a, arg_b); }));
  auto* ep_add = ep->add_subcommand("add", "ordinal sum");
  ep_add->add_option("a", arg_a)->required();
  ep_add->add_option("b", arg_b)->required();
  ep_add->callback(bind([&]() { return op_eps_add(*build_ctx(opt), arg_a, arg_b); }));
  auto* ep_enum = ep->add_subcommand("enum", "list terms");
  ep_enum->add_option("count", arg_count);
  ep_enum->callback(bind([&]() { return op_eps_enum(*build_ctx(opt), arg_count); }));

  auto* bh = app.add_subcommand("collapse", "the collapsed base order");
  auto* bh_enum = bh->add_subcommand("enum", "list points");
  bh_enum->add_option("count", arg_count);
  bh_enum->callback(bind([&]() { return op_bh_enum(*build_ctx(opt, true), arg_count); }));
  auto* bh_c = bh->add_subcommand("cmp", "compare two points");
  bh_c->add_option("a", arg_a)->required();
  bh_c->add_option("b", arg_b)->required();
  bh_c->callback(bind([&]() { return op_bh_cmp(*build_ctx(opt, true), arg_a, arg_b); }));
  auto* bh_p = bh->add_subcommand("props", "collapse laws over enumerated terms");
  bh_p->add_option("--count", arg_count);
  bh_p->callback(bind([&]() { return op_bh_props(*build_ctx(opt, true), arg_count); }));

  auto* di = app.add_subcommand("dilator", "functor laws on finite orders");
  auto* di_check = di->add_subcommand("check", "naturality and support laws");
  di_check->add_option("name", arg_a, "const1/identity/one-x-x/two-pow/inclusive/lterm/stree/eps")
      ->required();
  di_check->add_option("--size", arg_size, "largest finite order");
  di_check->add_option("--budget", arg_budget);
  di_check->callback(bind([&]() { return op_dilator_check(opt, arg_a, arg_size, arg_budget); }));

  auto* co = app.add_subcommand("code", "proof codes");
  auto* co_show = co->add_subcommand("show", "sequent, ordinal, bounds, rule");
  co_show->add_option("text", arg_a)->required();
  co_show->callback(bind([&]() { return op_code_show(*build_ctx(opt), arg_a); }));
  auto* co_check = co->add_subcommand("check", "local soundness conditions");
  co_check->add_option("text", arg_a)->required();
  co_check->add_option("--budget", arg_budget);
  co_check->callback(bind([&]() { return op_code_check(*build_ctx(opt), arg_a, arg_budget); }));
  auto* co_exp = co->add_subcommand("expand", "walk children to a depth");
  co_exp->add_option("text", arg_a)->required();
  co_exp->add_option("--depth", arg_depth);
  co_exp->add_option("--budget", arg_budget);
  co_exp->callback(bind([&]() { return op_code_expand(*build_ctx(opt), arg_a, arg_depth, arg_budget); }));
  auto* co_pipe = co->add_subcommand("pipeline", "eliminate cuts, then collapse");
  co_pipe->add_option("text", arg_a)->required();
  co_pipe->add_option("--t", arg_b)->default_val("0");
  co_pipe->add_option("--budget", arg_budget);
  co_pipe->callback(bind([&]() { return op_code_pipeline(*build_ctx(opt), arg_a, arg_b, arg_budget); }));
  auto* co_wit = co->add_subcommand("witness", "read a true end formula off the proof");
  co_wit->add_option("text", arg_a)->required();
  co_wit->callback(bind([&]() { return op_code_witness(*build_ctx(opt), arg_a); }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (!run) return 2;
  if (!build_ctx(opt)) {
    std::cerr << "error: bad --alpha value: " << opt.alpha << "\n";
    return 2;
  }
  Outcome out = run();
  if (opt.emit_json) {
    json doc;
    doc["version"] = 1;
    doc["config"] = {{"base", opt.base}, {"params", opt.params}, {"alpha", opt.alpha}};
    std::vector<std::string> cmd(argv + 1, argv + argc);
    doc["command"] = cmd;
    doc["ok"] = out.code == 0;
    doc["result"] = out.result;
    std::cout << doc.dump(1) << "\n";
  } else if (out.code == 2) {
    std::cerr << out.text;
  } else {
    std::cout << out.text;
  }
  return out.code;
}

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tori/catalog.hpp"
#include "tori/expr.hpp"
#include "tori/golden.hpp"
#include "tori/homology.hpp"
#include "tori/rationality.hpp"

using json = nlohmann::json;
using namespace tori;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kUndecided = 1, kInputError = 2 };

struct InputError : Error {
  using Error::Error;
};

json matrix_json(const IntMat& m) {
  json rows = json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).to_string());
    rows.push_back(r);
  }
  return rows;
}

json invariants_json(const AbelianInvariants& a) {
  json f = json::array();
  for (const auto& x : a.factors) f.push_back(x.to_string());
  return {{"factors", f}, {"free_rank", a.free_rank}, {"text", a.str()}};
}

// Catalog name, or an expression that needs no ambient group.
GroupPtr resolve_group(const std::string& name) {
  if (auto e = find_catalog_entry(name)) return e->group();
  try {
    return image_group(evaluate(name, nullptr));
  } catch (const ParseError& ex) {
    throw InputError("unknown group '" + name + "' (" + ex.what() + ")");
  }
}

std::string subgroup_label(const GroupPtr& g, const Subgroup& h) {
  return "H" + std::to_string(g->subgroup_classes().class_of(h));
}

json subgroup_json(const GroupPtr& g, const Subgroup& h) {
  return {{"class", subgroup_label(g, h)}, {"order", h.order()}};
}

json evidence_json(const Evidence& e) {
  json j = {{"kind", e.kind}, {"detail", e.detail}, {"verified", e.verify()}};
  if (e.map) j["map"] = {{"source_rank", e.map->source.rank}, {"matrix", matrix_json(e.map->matrix)}};
  if (e.basis) j["basis"] = matrix_json(*e.basis);
  if (e.sequence)
    j["sequence"] = {{"ranks", {e.sequence->left.rank, e.sequence->mid.rank, e.sequence->right.rank}},
                     {"inj", matrix_json(e.sequence->inj.matrix)},
                     {"surj", matrix_json(e.sequence->surj.matrix)}};
  if (e.witness) {
    json rows = json::array();
    for (size_t i = 0; i < e.witness->equations.rows(); ++i) {
      json coeffs = json::array();
      for (size_t c = 0; c < e.witness->equations.cols(); ++c) coeffs.push_back(e.witness->equations(i, c).to_string());
      rows.push_back({{"subgroup", "H" + std::to_string(e.witness->row_labels[i].first)},
                      {"q", e.witness->row_labels[i].second.to_string()},
                      {"coefficients", coeffs},
                      {"rhs", e.witness->rhs[i].to_string()}});
    }
    json unknowns = json::array();
    for (size_t u : e.witness->unknowns) unknowns.push_back("H" + std::to_string(u));
    j["witness"] = {{"unknowns", unknowns}, {"equations", rows}, {"denominator", e.witness->denominator.to_string()}};
  }
  if (!e.parts.empty()) {
    j["parts"] = json::array();
    for (const auto& p : e.parts) j["parts"].push_back(evidence_json(p));
  }
  return j;
}

json verdict_json(const RationalityVerdict& v) {
  json cert = json::array();
  for (const auto& e : v.certificate) cert.push_back(evidence_json(e));
  return {{"level", to_string(v.level)},
          {"stable", to_string(v.stable)},
          {"verified", v.verify()},
          {"notes", v.notes},
          {"certificate", cert}};
}

// Indented key: value rendering of a report for terminals.
void print_text(const json& j, std::ostream& os, int indent = 0) {
  const std::string pad(indent, ' ');
  auto scalar = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
  auto flat = [&](const json& a) {
    for (const auto& x : a)
      if (x.is_structured()) return false;
    return true;
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object() || (v.is_array() && !flat(v))) {
        os << pad << k << ":\n";
        print_text(v, os, indent + 2);
      } else if (v.is_array()) {
        os << pad << k << ": [";
        for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar(v[i]);
        os << "]\n";
      } else {
        os << pad << k << ": " << scalar(v) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_array() && flat(v)) {
        os << pad << "- [";
        for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar(v[i]);
        os << "]\n";
      } else if (v.is_structured()) {
        os << pad << "-\n";
        print_text(v, os, indent + 2);
      } else {
        os << pad << "- " << scalar(v) << "\n";
      }
    }
  } else {
    os << pad << scalar(j) << "\n";
  }
}

struct Context {
  bool as_json = false;
  std::string command;
  json inputs = json::object();
  json result = json::object();
  int code = kOk;
};

// ---------------------------------------------------------------- commands

void group_show(Context& ctx, const std::string& name) {
  GroupPtr g = resolve_group(name);
  auto sp = structure_probe(g);
  json gens = json::array();
  for (const auto& m : g->generator_matrices()) gens.push_back(matrix_json(m));
  ctx.result = {{"order", g->order()},
                {"rank", g->rank()},
                {"abelian", sp.is_abelian},
                {"cyclic", sp.is_cyclic},
                {"sylows_cyclic", sp.sylows_all_cyclic},
                {"center_order", sp.center.order()},
                {"subgroup_classes", g->subgroup_classes().classes.size()},
                {"generators", gens}};
  if (auto e = find_catalog_entry(name)) {
    ctx.result["name"] = e->name;
    if (e->gap_id) ctx.result["gap_id"] = e->gap_id_string();
    if (e->expected_lattice) ctx.result["expected_lattice"] = *e->expected_lattice;
    if (e->expected_verdict) ctx.result["expected_verdict"] = *e->expected_verdict;
  }
}

void group_subgroups(Context& ctx, const std::string& name) {
  GroupPtr g = resolve_group(name);
  json list = json::array();
  const auto& cls = g->subgroup_classes().classes;
  for (size_t k = 0; k < cls.size(); ++k) {
    const Subgroup& h = cls[k].representative;
    bool cyclic = false;
    for (Elt e : h.members) cyclic |= g->element_order(e) == h.order();
    list.push_back({{"class", "H" + std::to_string(k)},
                    {"order", h.order()},
                    {"conjugates", cls[k].conjugates.size()},
                    {"normal", cls[k].conjugates.size() == 1},
                    {"cyclic", cyclic}});
  }
  ctx.result = {{"order", g->order()}, {"classes", list}};
}

void cohomology(Context& ctx, const std::string& name, const std::string& expr, const std::string& sub, int degree) {
  if (degree < -1 || degree > 1) throw InputError("--degree must be -1, 0 or 1");
  GroupPtr g = resolve_group(name);
  GLattice m = evaluate(expr, g);
  json rows = json::array();
  std::vector<Subgroup> hs;
  if (!sub.empty()) {
    hs.push_back(resolve_subgroup(g, sub));
  } else {
    for (const auto& c : g->subgroup_classes().classes) hs.push_back(c.representative);
  }
  for (const auto& h : hs) {
    json r = subgroup_json(g, h);
    r["value"] = invariants_json(tate(m, h, degree));
    rows.push_back(r);
  }
  ctx.result = {{"lattice_rank", m.rank}, {"degree", degree}, {"groups", rows}};
}

void flasque(Context& ctx, const std::string& name, const std::string& expr) {
  GroupPtr g = resolve_group(name);
  GLattice m = evaluate(expr, g);
  auto fr = flasque_resolution(m);
  json summands = json::array();
  for (size_t k : fr.perm_classes)
    summands.push_back({{"class", "H" + std::to_string(k)}, {"index", g->order() / g->subgroup_classes().classes[k].representative.order()}});
  ctx.result = {{"ranks", {fr.cert.left.rank, fr.cert.mid.rank, fr.cert.right.rank}},
                {"permutation_summands", summands},
                {"verified", fr.verify()},
                {"flasque", is_flasque(fr.cert.right)},
                {"inj", matrix_json(fr.cert.inj.matrix)},
                {"surj", matrix_json(fr.cert.surj.matrix)}};
}

ClassifyOptions classify_options(size_t budget) {
  ClassifyOptions opt;
  opt.iso_budget = budget;
  return opt;
}

void classify_cmd(Context& ctx, const std::string& name, const std::string& expr, bool hereditary, size_t budget) {
  GroupPtr g = resolve_group(name);
  GLattice m = evaluate(expr.empty() ? "std" : expr, g);
  auto opt = classify_options(budget);
  if (hereditary) {
    auto r = hereditary_closure(m, opt);
    json per = json::array();
    for (const auto& [k, v] : r.per_class) {
      json row = {{"class", "H" + std::to_string(k)},
                  {"order", g->subgroup_classes().classes[k].representative.order()},
                  {"level", to_string(v.level)},
                  {"verified", v.verify()}};
      per.push_back(row);
      if (v.level == Level::Unknown) ctx.code = kUndecided;
    }
    ctx.result = {{"hereditary", r.hereditary}, {"subgroups", per}};
    return;
  }
  auto v = classify(m, opt);
  ctx.result = verdict_json(v);
  if (v.level == Level::Unknown) ctx.code = kUndecided;
}

void norm_one(Context& ctx, const std::string& name, const std::string& stab, size_t budget) {
  GroupPtr g = resolve_group(name);
  Subgroup h = resolve_subgroup(g, stab);
  auto v = norm_one_classify({g, h}, classify_options(budget));
  ctx.result = verdict_json(v);
  ctx.result["degree"] = g->order() / h.order();
  if (v.level == Level::Unknown) ctx.code = kUndecided;
}

void census_cmd(Context& ctx, size_t dim, const std::string& roots_spec, size_t jobs, size_t budget) {
  std::vector<CatalogEntry> roots;
  if (roots_spec.empty() || roots_spec == "dade") {
    roots = dade_roots(dim);
  } else if (roots_spec == "hereditary") {
    roots = hereditary_roots(dim);
  } else {
    std::stringstream ss(roots_spec);
    std::string item;
    while (std::getline(ss, item, ';')) {
      auto e = find_catalog_entry(item);
      if (!e) throw InputError("unknown root '" + item + "'");
      if (e->rank != dim) throw InputError("root '" + item + "' has rank " + std::to_string(e->rank));
      roots.push_back(*e);
    }
  }
  auto rep = census(roots, budget, jobs);
  json classes = json::array();
  for (const auto& c : rep.classes) {
    json origins = json::array();
    for (size_t o : c.origins) origins.push_back(rep.roots[o]);
    classes.push_back({{"label", c.label}, {"order", c.representative->order()}, {"roots", origins}});
  }
  json undecided = json::array();
  for (const auto& [a, b] : rep.undecided_pairs) undecided.push_back({a, b});
  ctx.result = {{"roots", rep.roots}, {"count", rep.count}, {"undecided_pairs", undecided}, {"classes", classes}};
  if (!rep.undecided_pairs.empty()) ctx.code = kUndecided;
}

void verify_paper(Context& ctx, const std::string& which, size_t jobs, size_t budget) {
  GoldenOptions opt;
  opt.jobs = jobs;
  opt.budget = budget;
  std::vector<std::string> ids;
  if (which.empty()) {
    for (const auto& c : golden_cases()) ids.push_back(c.id);
  } else {
    bool known = false;
    for (const auto& c : golden_cases()) known |= c.id == which;
    if (!known) throw InputError("unknown case '" + which + "'");
    ids.push_back(which);
  }
  if (ids.size() > 1 || which == "properties") set_resolution_audit(true);
  json cases = json::array();
  bool all = true;
  for (const auto& id : ids) {
    auto rep = run_golden(id, opt);
    json checks = json::array();
    for (const auto& c : rep.checks) {
      json cj = {{"check", c.what}, {"ok", c.ok}};
      if (!c.detail.empty()) cj["detail"] = c.detail;
      checks.push_back(cj);
    }
    cases.push_back({{"case", rep.id},
                     {"criterion", rep.criterion},
                     {"title", rep.title},
                     {"pass", rep.pass()},
                     {"checks", checks}});
    all &= rep.pass();
  }
  ctx.result = {{"pass", all}, {"cases", cases}};
  if (!all) ctx.code = kUndecided;
}

void catalog_validate(Context& ctx, const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot read '" + file + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto problems = validate_catalog(buf.str());
  ctx.result = {{"file", file}, {"valid", problems.empty()}, {"problems", problems}};
  if (!problems.empty()) ctx.code = kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral lattices of finite groups and rationality of algebraic tori"};
  app.require_subcommand(1);
  Context ctx;
  app.add_flag("--json", ctx.as_json, "Print a JSON report");
  app.set_version_flag("--version", kVersion);

  std::string group_name, expr, sub, stab, roots, case_id, file;
  int degree = 1;
  bool hereditary = false;
  size_t dim = 2, jobs = 1, budget = 20000;

  auto* group = app.add_subcommand("group", "Inspect a catalog group");
  group->require_subcommand(1);
  auto* show = group->add_subcommand("show", "Order, structure and generators");
  show->add_option("name", group_name)->required();
  auto* subs = group->add_subcommand("subgroups", "Subgroup conjugacy classes H0, H1, ...");
  subs->add_option("name", group_name)->required();

  auto* coh = app.add_subcommand("cohomology", "Tate cohomology of a lattice");
  coh->add_option("--group", group_name)->required();
  coh->add_option("--lattice", expr)->required();
  coh->add_option("--subgroup", sub, "Label (G, 1, Hk) or gens:[words]; all classes when omitted");
  coh->add_option("--degree", degree, "-1, 0 or 1")->required();

  auto* fl = app.add_subcommand("flasque", "Flasque resolution 0 -> M -> P -> F -> 0");
  fl->add_option("--group", group_name)->required();
  fl->add_option("--lattice", expr)->required();

  auto* cl = app.add_subcommand("classify", "Rationality level of the torus with character lattice M");
  cl->add_option("--group", group_name)->required();
  cl->add_option("--lattice", expr, "Defaults to std");
  cl->add_flag("--hereditary", hereditary, "Classify the restriction to every subgroup class");
  cl->add_option("--budget", budget, "Isomorphism search budget");

  auto* no = app.add_subcommand("norm-one", "Norm one torus of the extension with group G and stabilizer H");
  no->add_option("--group", group_name)->required();
  no->add_option("--stabilizer", stab)->required();
  no->add_option("--budget", budget, "Isomorphism search budget");

  auto* ce = app.add_subcommand("census", "Z-classes of subgroups of the root groups");
  ce->add_option("--dim", dim)->required()->check(CLI::IsMember({2, 3, 4}));
  ce->add_option("--roots", roots, "dade (default), hereditary, or catalog names separated by ';'");
  ce->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  ce->add_option("--budget", budget);

  auto* vp = app.add_subcommand("verify-paper", "Run the golden cases");
  vp->add_option("--case", case_id, "One case id; all when omitted");
  vp->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  vp->add_option("--budget", budget);

  auto* cat = app.add_subcommand("catalog", "Catalog files");
  cat->require_subcommand(1);
  auto* val = cat->add_subcommand("validate", "Check a catalog JSON file");
  val->add_option("file", file)->required();

  std::function<void(CLI::App*)> fall = [&](CLI::App* a) {
    for (auto* c : a->get_subcommands({})) {
      c->fallthrough();
      fall(c);
    }
  };
  fall(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  for (int i = 1; i < argc; ++i) ctx.command += (i > 1 ? " " : "") + std::string(argv[i]);
  auto put = [&](const char* k, const std::string& v) {
    if (!v.empty()) ctx.inputs[k] = v;
  };
  put("group", group_name);
  put("lattice", expr);
  put("subgroup", sub);
  put("stabilizer", stab);
  put("roots", roots);
  put("case", case_id);
  put("file", file);

  auto t0 = std::chrono::steady_clock::now();
  try {
    if (*show) group_show(ctx, group_name);
    else if (*subs) group_subgroups(ctx, group_name);
    else if (*coh) cohomology(ctx, group_name, expr, sub, degree);
    else if (*fl) flasque(ctx, group_name, expr);
    else if (*cl) classify_cmd(ctx, group_name, expr, hereditary, budget);
    else if (*no) norm_one(ctx, group_name, stab, budget);
    else if (*ce) census_cmd(ctx, dim, roots, jobs, budget);
    else if (*vp) verify_paper(ctx, case_id, jobs, budget);
    else if (*val) catalog_validate(ctx, file);
  } catch (const ParseError& e) {
    ctx.code = kInputError;
    ctx.result = {{"error", e.what()}, {"offset", e.offset}};
  } catch (const InputError& e) {
    ctx.code = kInputError;
    ctx.result = {{"error", e.what()}};
  } catch (const CatalogError& e) {
    ctx.code = kInputError;
    ctx.result = {{"error", e.what()}};
  } catch (const Error& e) {
    ctx.code = kUndecided;
    ctx.result = {{"error", e.what()}};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (ctx.as_json) {
    json report = {{"tool", "tori"},           {"version", kVersion},   {"command", ctx.command},
                   {"inputs", ctx.inputs},     {"result", ctx.result},  {"exit_code", ctx.code},
                   {"timing", {{"seconds", secs}}}};
    std::cout << report.dump(2) << "\n";
  } else if (ctx.result.contains("error")) {
    std::cerr << "error: " << ctx.result["error"].get<std::string>() << "\n";
  } else {
    print_text(ctx.result, std::cout);
  }
  return ctx.code;
}

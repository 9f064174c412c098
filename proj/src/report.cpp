#include "giry/report.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "giry/affine.hpp"

namespace giry {

namespace {

Json frac(const Rational& r) { return to_string(r); }
Json ext(const ExtValue& v) { return to_string(v); }

Json points(const ConvexSpace& space, std::span<const Element> xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(space.format(x));
  return out;
}

Json measure(const ConvexSpace& space, const FinMeasure& p) {
  Json out = Json::array();
  for (const auto& [x, w] : p.atoms()) out.push_back({{"point", space.format(x)}, {"mass", frac(w)}});
  return out;
}

Json meta(const ConvexSpace& space, const MetaMeasure& q) {
  Json out = Json::array();
  for (const auto& [p, w] : q.atoms()) out.push_back({{"mass", frac(w)}, {"measure", measure(space, p)}});
  return out;
}

template <class T>
Json opt(const std::optional<T>& v, auto&& f) {
  return v ? f(*v) : Json(nullptr);
}

std::string compat_verdict(const CompatResult& r) {
  if (!r.pass) return "fail";
  return r.exhaustive ? "pass" : "sampled-pass";
}

Json unit_json(const ConvexSpace& s, const UnitLawResult& r) {
  Json j{{"verdict", to_string(r.verdict)}, {"checked", r.checked}, {"witness", nullptr}};
  if (r.point) j["witness"] = {{"point", s.format(*r.point)}, {"image", s.format(*r.image)}};
  return j;
}

Json mult_json(const ConvexSpace& s, const MultLawResult& r) {
  Json j{{"verdict", to_string(r.verdict)}, {"checked", r.checked}, {"witness", nullptr}};
  if (r.witness)
    j["witness"] = {{"meta", meta(s, *r.witness)},
                    {"flattened", s.format(*r.flattened)},
                    {"pushed", s.format(*r.pushed)}};
  return j;
}

Json cosep_json(const ConvexSpace& s, const CoseparatorResult& r) {
  Json j{{"verdict", to_string(r.verdict)},
         {"checked", r.checked},
         {"infinite_cases", r.infinite_cases},
         {"witness", nullptr}};
  if (r.measure)
    j["witness"] = {{"measure", measure(s, *r.measure)},
                    {"map", r.map_name},
                    {"at_image", ext(*r.at_image)},
                    {"expectation", ext(*r.expectation)}};
  return j;
}

Json support_json(const ConvexSpace& s, const SupportResult& r) {
  Json j{{"verdict", to_string(r.verdict)}, {"checked", r.checked}, {"witness", nullptr}};
  if (r.measure) j["witness"] = {{"measure", measure(s, *r.measure)}, {"image", s.format(*r.image)}};
  return j;
}

Json induced_json(const ConvexSpace& s, const InducedResult& r) {
  Json j{{"verdict", to_string(r.verdict)}, {"checked", r.checked}, {"witness", nullptr}};
  if (r.algebra_value) {
    Json ws = Json::array();
    for (const auto& w : r.weights) ws.push_back(frac(w));
    j["witness"] = {{"points", points(s, r.points)},
                    {"weights", ws},
                    {"algebra_value", s.format(*r.algebra_value)},
                    {"native_value", s.format(*r.native_value)}};
  }
  return j;
}

Json poset_json(const ConvexSpace& s, const PosetWitness& w) {
  return {{"reason", to_string(w.reason)},
          {"x", s.format(w.x)},
          {"y", s.format(w.y)},
          {"z", w.z ? Json(s.format(*w.z)) : Json(nullptr)}};
}

Json regroup_json(const ConvexSpace& s, const RegroupingWitness& w) {
  Json ws = Json::array();
  for (const auto& x : w.weights) ws.push_back(frac(x));
  return {{"points", points(s, w.points)},
          {"weights", ws},
          {"left_fold", s.format(w.left_fold)},
          {"regrouped", s.format(w.regrouped)}};
}

/// Everything a command produced: the document and whether it passed.
struct Outcome {
  Json doc;
  bool ok = true;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

const SpaceEntry& lookup(const Registry& reg, const std::string& id) {
  if (const auto* e = reg.find(id)) return *e;
  throw UsageError("unknown space id '" + id + "'");
}

std::vector<const SpaceEntry*> selected(const Registry& reg, const RunConfig& cfg) {
  std::vector<const SpaceEntry*> out;
  if (!cfg.space.empty())
    out.push_back(&lookup(reg, cfg.space));
  else
    for (const auto& e : reg.entries()) out.push_back(&e);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome check_compat(const Registry& reg, const RunConfig& cfg) {
  Outcome o;
  o.doc = Json::array();
  for (const auto* e : selected(reg, cfg)) {
    auto eq = equiv_check(*e->space, e->metric, cfg.budget, cfg.seed);
    // A compat failure is the point of an expect=reject space; the two
    // verdicts must agree either way.
    const bool ok = eq.agree() && (e->expect_reject ? !eq.two_point.pass : eq.two_point.pass);
    o.ok = o.ok && ok;
    o.doc.push_back({{"space", e->space->id()},
                     {"metric", e->metric.name},
                     {"expect", e->expect_reject ? "reject" : "pass"},
                     {"two_point", to_json(*e->space, eq.two_point, 3)},
                     {"four_point", to_json(*e->space, eq.four_point, 4)},
                     {"agree", eq.agree()},
                     {"ok", ok}});
  }
  return o;
}

Outcome check_laws(const Registry& reg, const RunConfig& cfg) {
  Outcome o;
  o.doc = Json::array();
  const auto budget = check_budget(cfg.budget, cfg.seed);
  for (const auto* e : selected(reg, cfg)) {
    auto r = algebra_report(e->space, e->metric, budget);
    const Verdict v = r.overall();
    const bool ok = e->expect_reject ? !passed(v) : passed(v);
    o.ok = o.ok && ok;
    auto j = to_json(r);
    j["expect"] = e->expect_reject ? "reject" : "pass";
    j["ok"] = ok;
    o.doc.push_back(std::move(j));
  }
  return o;
}

/// Reads the measure files; the space comes from --space or the first file.
std::pair<const SpaceEntry*, std::vector<FinMeasure>> load_measures(const Registry& reg, const RunConfig& cfg,
                                                                    std::size_t min_count) {
  if (cfg.measures.size() < min_count)
    throw UsageError(cfg.command + " needs " + std::to_string(min_count) + " measure file(s)");
  std::vector<std::string> texts;
  for (const auto& path : cfg.measures) texts.push_back(read_file(path));
  const auto& entry = lookup(reg, cfg.space.empty() ? measure_space_id(texts.front()) : cfg.space);
  std::vector<FinMeasure> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    try {
      out.push_back(parse_measure(*entry.space, texts[i]));
    } catch (const std::invalid_argument& ex) {
      throw UsageError(cfg.measures[i] + ": " + ex.what());
    }
  }
  return {&entry, std::move(out)};
}

Outcome wasserstein_cmd(const Registry& reg, const RunConfig& cfg) {
  auto [entry, ms] = load_measures(reg, cfg, 2);
  if (ms.size() != 2) throw UsageError("wasserstein takes exactly two measure files");
  const auto& s = *entry->space;
  auto r = wasserstein(ms[0], ms[1], entry->metric);
  Outcome o;
  o.doc = {{"space", s.id()}, {"metric", entry->metric.name}, {"p", measure(s, ms[0])}, {"q", measure(s, ms[1])}};
  o.doc["result"] = to_json(s, r);
  o.ok = r.plan.marginals_ok();
  if (ms[0].size() <= 4 && ms[1].size() <= 4) {
    auto b = brute_force_wasserstein(ms[0], ms[1], entry->metric);
    o.doc["brute_force_cost"] = ext(b.cost);
    o.doc["brute_force_agrees"] = b.cost == r.cost;
    o.ok = o.ok && b.cost == r.cost;
  }
  o.doc["ok"] = o.ok;
  return o;
}

Outcome expect_cmd(const Registry& reg, const RunConfig& cfg) {
  auto [entry, ms] = load_measures(reg, cfg, 1);
  const auto& s = *entry->space;
  Outcome o;
  o.doc = {{"space", s.id()}, {"metric", entry->metric.name}};
  auto built = build_algebra(entry->space, entry->metric, cfg.budget, cfg.seed);
  if (const auto* rej = std::get_if<Rejection>(&built)) {
    o.doc["rejection"] = to_json(*rej);
    o.ok = false;
  } else {
    const auto& h = std::get<AlgebraMap>(built);
    o.doc["provenance"] = to_string(h.provenance);
    Json values = Json::array();
    for (std::size_t i = 0; i < ms.size(); ++i)
      values.push_back({{"file", cfg.measures[i]}, {"measure", measure(s, ms[i])}, {"expectation", s.format(h(ms[i]))}});
    o.doc["values"] = values;
  }
  o.doc["ok"] = o.ok;
  return o;
}

Outcome counterexample_cmd(const RunConfig& cfg) {
  auto r = counterexample_C(check_budget(cfg.budget, cfg.seed));
  Outcome o;
  o.doc = to_json(r);
  o.ok = o.doc["ok"].get<bool>();
  return o;
}

Json field_json(const SetField& f, const std::vector<std::string>& labels) {
  Json atoms = Json::array();
  for (const auto& a : f.atoms()) atoms.push_back(format_subset(a, labels));
  return {{"atoms", atoms}, {"members", f.member_count().get_str()}};
}

Outcome fields_demo() {
  Outcome o;
  auto check = [&](Json& j, bool ok) {
    j["ok"] = ok;
    o.ok = o.ok && ok;
  };
  const std::vector<std::string> six{"a", "b", "c", "d", "e", "f"};

  // A field on six points and a join that refines it.
  auto f = generate_field(6, {make_subset(6, {0, 1, 2}), make_subset(6, {1, 2, 3})});
  auto g = generate_field(6, {make_subset(6, {4})});
  auto fg = field_join(f, g);
  Json gen = field_json(f, six);
  check(gen, f.members().size() == (std::size_t{1} << f.atoms().size()));
  Json join = {{"left", field_json(f, six)}, {"right", field_json(g, six)}, {"join", field_json(fg, six)}};
  check(join, f.subfield_of(fg) && g.subfield_of(fg));

  // Dyadic tail fields grow with depth.
  Json dyadic = Json::array();
  bool increasing = true;
  for (std::size_t n = 0; n <= 3; ++n) {
    auto d = dyadic_field(n);
    if (n < 3) increasing = increasing && d.subfield_of(dyadic_field(n + 1));
    dyadic.push_back({{"depth", n}, {"atoms", d.atoms().size()}, {"members", d.member_count().get_str()}});
  }
  Json dy = {{"fields", dyadic}};
  check(dy, increasing);

  // Evaluation fields on measures over I: G_2 against G_{0,2} ⋁ G_{1,1}.
  auto I = make_interval("I", 0, 1);
  auto pt = [](long n, long d) { return Element::point({make_rational(n, d)}); };
  std::vector<FinMeasure> ms;
  std::vector<std::string> names;
  for (long k = 0; k <= 4; ++k) {
    std::vector<FinMeasure::Atom> atoms{{pt(0, 1), make_rational(k, 4)}, {pt(1, 2), make_rational(4 - k, 8)},
                                        {pt(1, 1), make_rational(4 - k, 8)}};
    ms.emplace_back(std::move(atoms));
    names.push_back("P" + std::to_string(k));
  }
  std::vector<std::vector<Element>> us{{pt(0, 1)}, {pt(0, 1), pt(1, 2)}};
  auto g2 = ev_field(ms, us, 2);
  auto diag = field_join(ev_block(ms, us[0], 2), ev_block(ms, us[1], 1));
  Json ev = {{"measures", Json::array()}, {"G2", field_json(g2, names)}, {"join", field_json(diag, names)}};
  for (std::size_t i = 0; i < ms.size(); ++i) ev["measures"].push_back({{"name", names[i]}, {"measure", measure(*I, ms[i])}});
  check(ev, g2.same_members(diag));

  // Agreement on a coarse field, separated by a finer one.
  const std::vector<std::string> four{"a", "b", "c", "d"};
  auto C = make_chain("labels4", four, ChainRule::Min);
  std::vector<Element> universe;
  for (std::size_t i = 0; i < 4; ++i) universe.push_back(Element::label(i));
  FinMeasure p({{universe[0], make_rational(1, 2)}, {universe[2], make_rational(1, 2)}});
  FinMeasure q({{universe[1], make_rational(1, 2)}, {universe[3], make_rational(1, 2)}});
  auto coarse = generate_field(4, {make_subset(4, {0, 1})});
  auto fine = generate_field(4, {make_subset(4, {0, 1}), make_subset(4, {0})});
  auto a1 = agreement_check(p, q, coarse, universe);
  auto a2 = agreement_check(p, q, fine, universe);
  Json pf = {{"p", measure(*C, p)},
             {"q", measure(*C, q)},
             {"coarse", field_json(coarse, four)},
             {"agree_on_coarse", a1.agree_on_field},
             {"fine", field_json(fine, four)},
             {"agree_on_fine", a2.agree_on_field},
             {"distinguishing", a2.distinguishing ? Json(format_subset(*a2.distinguishing, four)) : Json(nullptr)},
             {"p_mass", frac(a2.p_mass)},
             {"q_mass", frac(a2.q_mass)}};
  check(pf, a1.agree_on_field && !a2.agree_on_field);

  o.doc = {{"generated", gen}, {"join", join}, {"dyadic", dy}, {"evaluation", ev}, {"agreement", pf}};
  return o;
}

Outcome lipschitz_all(const Registry& reg, const RunConfig& cfg) {
  Outcome o;
  o.doc = Json::array();
  for (const auto& e : reg.entries()) {
    if (e.space->kind() != SpaceKind::Geometric || e.expect_reject) continue;
    auto built = build_algebra(e.space, e.metric, cfg.budget, cfg.seed);
    if (!std::holds_alternative<AlgebraMap>(built)) continue;
    const auto& h = std::get<AlgebraMap>(built);
    auto r = lipschitz_check(e.space, h.rule, e.metric, cfg.budget, cfg.seed);
    Json j{{"space", e.space->id()}, {"metric", e.metric.name}, {"pass", r.pass}, {"checked", r.checked},
           {"witness", nullptr}};
    if (r.witness)
      j["witness"] = {{"p", measure(*e.space, r.witness->p)},
                      {"q", measure(*e.space, r.witness->q)},
                      {"image_distance", ext(r.witness->image_distance)},
                      {"transport_cost", ext(r.witness->transport_cost)}};
    o.ok = o.ok && r.pass;
    o.doc.push_back(std::move(j));
  }
  return o;
}

Outcome dispatch(const Registry& reg, const RunConfig& cfg) {
  const auto& c = cfg.command;
  if (c == "check-compat") return check_compat(reg, cfg);
  if (c == "check-laws") return check_laws(reg, cfg);
  if (c == "wasserstein") return wasserstein_cmd(reg, cfg);
  if (c == "expect") return expect_cmd(reg, cfg);
  if (c == "counterexample") return counterexample_cmd(cfg);
  if (c == "fields-demo") return fields_demo();
  if (c == "report-all") {
    Outcome o;
    o.doc = Json::object();
    auto add = [&](const char* key, Outcome part) {
      o.doc[key] = {{"ok", part.ok}, {"report", std::move(part.doc)}};
      o.ok = o.ok && part.ok;
    };
    add("counterexample", counterexample_cmd(cfg));
    add("check-compat", check_compat(reg, cfg));
    add("check-laws", check_laws(reg, cfg));
    add("lipschitz", lipschitz_all(reg, cfg));
    add("fields-demo", fields_demo());
    return o;
  }
  throw UsageError("unknown command '" + c + "'");
}

void render(const Json& j, const std::string& indent, std::ostringstream& out) {
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !v.empty()) {
        out << indent << k << ":\n";
        render(v, indent + "  ", out);
      } else {
        out << indent << k << ": " << (v.is_structured() ? v.dump() : scalar(v)) << "\n";
      }
    }
  } else if (j.is_array()) {
    // Arrays of scalars stay on one line.
    if (std::none_of(j.begin(), j.end(), [](const Json& v) { return v.is_structured(); })) {
      std::string line;
      for (const auto& v : j) line += (line.empty() ? "" : ", ") + scalar(v);
      out << indent << "[" << line << "]\n";
      return;
    }
    for (const auto& v : j) {
      out << indent << "-\n";
      render(v, indent + "  ", out);
    }
  } else {
    out << indent << scalar(j) << "\n";
  }
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c{"check-compat", "check-laws",  "wasserstein", "expect",
                                          "counterexample", "fields-demo", "report-all"};
  return c;
}

CheckBudget check_budget(std::size_t budget, std::uint64_t seed) {
  return CheckBudget{budget, std::max<std::size_t>(1, budget * 3 / 5), seed};
}

Json to_json(const ConvexSpace& s, const CompatResult& r, std::size_t arity) {
  Json j{{"verdict", compat_verdict(r)}, {"exhaustive", r.exhaustive}, {"checked", r.checked}, {"witness", nullptr}};
  if (r.witness) {
    static const char* two[] = {"x", "y", "z"};
    static const char* four[] = {"x", "x2", "y", "y2"};
    Json w{{"p", frac(r.witness->p)}};
    for (std::size_t i = 0; i < r.witness->points.size(); ++i)
      w[arity == 3 ? two[i] : four[i]] = s.format(r.witness->points[i]);
    w["lhs"] = ext(r.witness->lhs);
    w["rhs"] = ext(r.witness->rhs);
    j["witness"] = w;
  }
  return j;
}

Json to_json(const Rejection& r) {
  const auto& s = *r.space;
  return {{"condition", r.condition},
          {"space", s.id()},
          {"poset", opt(r.poset, [&](const PosetWitness& w) { return poset_json(s, w); })},
          {"compat", opt(r.compat,
                         [&](const CompatWitness& w) {
                           CompatResult c;
                           c.pass = false;
                           c.witness = w;
                           return to_json(s, c, w.points.size())["witness"];
                         })},
          {"regrouping", opt(r.regrouping, [&](const RegroupingWitness& w) { return regroup_json(s, w); })}};
}

Json to_json(const AlgebraReport& r) {
  const auto& s = *r.space;
  Json j{{"space", s.id()},
         {"kind", to_string(s.kind())},
         {"metric", r.metric},
         {"verdict", to_string(r.overall())},
         {"provenance", opt(r.provenance, [](Provenance p) { return Json(to_string(p)); })},
         {"rejection", opt(r.rejection, [](const Rejection& x) { return to_json(x); })}};
  j["unit_law"] = opt(r.unit_law, [&](const UnitLawResult& x) { return unit_json(s, x); });
  j["mult_law"] = opt(r.mult_law, [&](const MultLawResult& x) { return mult_json(s, x); });
  j["coseparator_law"] = opt(r.coseparator_law, [&](const CoseparatorResult& x) { return cosep_json(s, x); });
  if (r.support_condition) j["support_condition"] = support_json(s, *r.support_condition);
  j["induced_structure"] = opt(r.induced_structure, [&](const InducedResult& x) { return induced_json(s, x); });
  j["compat"] = to_json(s, r.compat, 3);
  return j;
}

Json to_json(const CounterexampleReport& r) {
  const auto& s = *r.space;
  Json ideals = Json::array();
  for (const auto& i : r.ideals) ideals.push_back(points(s, i.members));
  Json j;
  j["space"] = s.id();
  j["points"] = points(s, s.elements());
  j["ideals"] = ideals;
  j["char_maps_coseparate"] = r.coseparation.separates;
  // Per ideal: is its char map affine. Not for {u}, whose complement is not closed.
  Json affine = Json::array();
  for (const auto& i : r.ideals) affine.push_back(is_affine(char_map(i)).affine);
  j["char_maps_affine"] = affine;
  j["compat"] = to_json(s, r.compat, 3);
  j["support"] = support_json(s, r.support);
  j["poset"] = {{"total", r.poset.is_total_order},
                {"witness", opt(r.poset.witness, [&](const PosetWitness& w) { return poset_json(s, w); })}};
  const auto* rej = std::get_if<Rejection>(&r.build);
  j["build"] = rej ? to_json(*rej) : Json("built");
  // The findings that together rule out a structure map on C.
  const bool ok = r.ideals.size() == 3 && r.coseparation.separates && !r.compat.pass &&
                  r.support.verdict == Verdict::Fail && !r.poset.is_total_order && rej != nullptr;
  j["ok"] = ok;
  return j;
}

Json to_json(const ConvexSpace& s, const TransportResult& r) {
  Json cells = Json::array();
  const auto& l = r.plan.left.atoms();
  const auto& rt = r.plan.right.atoms();
  for (const auto& c : r.plan.cells)
    cells.push_back({{"from", s.format(l[c.i].first)}, {"to", s.format(rt[c.j].first)}, {"mass", frac(c.mass)}});
  return {{"cost", ext(r.cost)},
          {"method", to_string(r.method)},
          {"pivots", r.pivots},
          {"plan", cells},
          {"marginals_ok", r.plan.marginals_ok()}};
}

std::string render_text(const Json& doc) {
  std::ostringstream out;
  render(doc, "", out);
  return out.str();
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    if (cfg.seed == 0 || cfg.budget == 0) throw UsageError("seed and budget must be positive");
    auto reg = builtin_registry();
    if (!cfg.input_path.empty()) parse_space_file(cfg.input_path, reg);
    o = dispatch(reg, cfg);
  } catch (const ParseError& e) {
    err << cfg.input_path << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  Json doc{{"schema", 1}, {"command", cfg.command}, {"seed", cfg.seed}, {"budget", cfg.budget}};
  if (!cfg.space.empty()) doc["space"] = cfg.space;
  doc["ok"] = o.ok;
  doc["report"] = std::move(o.doc);

  std::string text;
  if (cfg.format == OutputFormat::Json) {
    text = doc.dump(2) + "\n";
  } else {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    text = render_text(doc) + "elapsed_ms: " + std::to_string(ms.count()) + "\n";
  }
  if (cfg.output.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f || !(f << text)) {
      err << "error: cannot write " << cfg.output << "\n";
      return 2;
    }
  }
  return o.ok ? 0 : 1;
}

}  // namespace giry

#include "giry/space_file.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

namespace giry {

void Registry::add(SpaceEntry entry) {
  if (find(entry.space->id())) throw std::invalid_argument("duplicate space id '" + entry.space->id() + "'");
  entries_.push_back(std::move(entry));
}

const SpaceEntry* Registry::find(std::string_view id) const {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const SpaceEntry& e) { return e.space->id() == id; });
  return it == entries_.end() ? nullptr : &*it;
}

const SpaceEntry& Registry::at(std::string_view id) const {
  if (const auto* e = find(id)) return *e;
  throw std::out_of_range("unknown space '" + std::string(id) + "'");
}

Registry builtin_registry() {
  Registry r;
  auto interval = make_interval("I", 0, 1);
  r.add({interval, l1_metric()});
  r.add({make_box("box", {0, 0}, {1, 2}), l1_metric()});
  r.add({make_box("box-linf", {0, 0}, {1, 2}), linf_metric()});
  r.add({make_simplex("simplex3", 3), l1_metric()});
  r.add({make_ext_line("R-inf", Rational(-4), Rational(4)), ext_abs_metric()});
  r.add({make_ext_line("R-plus", Rational(0), Rational(4)), ext_abs_metric()});
  r.add({make_naturals("N-min", 32), discrete_ext_metric()});
  r.add({make_chain("chain-max", {"0", "1", "2", "3", "4"}, ChainRule::Max), discrete_ext_metric()});
  r.add({make_two(), discrete_ext_metric()});
  r.add({make_space_c(), discrete_metric(), true});
  r.add({make_product("IxN", {interval, make_naturals("N4", 4)}), sum_metric({l1_metric(), discrete_ext_metric()})});
  r.add({make_meng_space(), branch_metric({l1_metric(), l1_metric()})});
  r.add({make_meng_space(1, 1, SemidirectRule::Survivor), branch_metric({l1_metric(), l1_metric()}), true});
  r.add({make_point_space(), discrete_metric()});
  return r;
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

struct Field {
  std::string value;
  std::size_t column = 0;
  /// Tokens after the value that are not key=value pairs (carrier arguments).
  std::vector<Token> args;
};

struct Statement {
  std::size_t line = 0;
  std::string id;
  std::optional<Field> kind, carrier, metric, expect, rule;
};

struct PendingSemidirect {
  Statement stmt;
  SpacePtr base;
  std::vector<SpacePtr> components;
  std::vector<SpaceEntry> component_entries;
  SemidirectRule rule = SemidirectRule::Transport;
  std::vector<Glue> glue;
};

class Parser {
 public:
  explicit Parser(Registry& registry) : registry_(registry) {}

  void line(std::size_t number, std::string_view text) {
    auto tokens = tokenize(text);
    if (tokens.empty()) return;
    if (tokens[0].text == "space") {
      finish_pending();
      space(number, tokens);
    } else if (tokens[0].text == "glue") {
      glue(number, tokens);
    } else {
      throw ParseError(number, tokens[0].column, "unknown statement '" + tokens[0].text + "'");
    }
  }

  void finish() { finish_pending(); }

 private:
  Statement statement(std::size_t number, const std::vector<Token>& tokens) {
    if (tokens.size() < 2) throw ParseError(number, tokens[0].column + 5, "missing space id");
    Statement s;
    s.line = number;
    s.id = tokens[1].text;
    if (s.id.find('=') != std::string::npos) throw ParseError(number, tokens[1].column, "missing space id");
    Field* current = nullptr;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      const auto& t = tokens[i];
      auto eq = t.text.find('=');
      if (eq == std::string::npos) {
        if (!s.carrier || current != &*s.carrier)
          throw ParseError(number, t.column, "unexpected token '" + t.text + "'");
        current->args.push_back(t);
        continue;
      }
      std::string key = t.text.substr(0, eq);
      Field f{t.text.substr(eq + 1), t.column, {}};
      std::optional<Field>* slot = key == "kind"      ? &s.kind
                                   : key == "carrier" ? &s.carrier
                                   : key == "metric"  ? &s.metric
                                   : key == "expect"  ? &s.expect
                                   : key == "rule"    ? &s.rule
                                                      : nullptr;
      if (!slot) throw ParseError(number, t.column, "unknown key '" + key + "'");
      if (slot->has_value()) throw ParseError(number, t.column, "repeated key '" + key + "'");
      *slot = std::move(f);
      current = slot == &s.carrier ? &**slot : nullptr;
    }
    if (!s.kind) throw ParseError(number, tokens.back().column, "missing kind=");
    if (!s.carrier) throw ParseError(number, tokens.back().column, "missing carrier=");
    if (s.expect && s.expect->value != "reject" && s.expect->value != "pass")
      throw ParseError(number, s.expect->column, "expect must be 'reject' or 'pass'");
    try {
      parse_space_kind(s.kind->value);
    } catch (const std::invalid_argument&) {
      throw ParseError(number, s.kind->column, "unknown kind '" + s.kind->value + "'");
    }
    if (registry_.find(s.id) || (pending_ && pending_->stmt.id == s.id))
      throw ParseError(number, tokens[1].column, "duplicate space id '" + s.id + "'");
    return s;
  }

  const SpaceEntry& lookup(const Statement& s, const Token& t) {
    if (const auto* e = registry_.find(t.text)) return *e;
    throw ParseError(s.line, t.column, "unknown space '" + t.text + "'");
  }

  Rational number(const Statement& s, const Token& t) {
    try {
      return parse_rational(t.text);
    } catch (const std::invalid_argument&) {
      throw ParseError(s.line, t.column, "expected a rational, got '" + t.text + "'");
    }
  }

  std::size_t count(const Statement& s, const Token& t) {
    Rational r = number(s, t);
    if (r.get_den() != 1 || sgn(r) <= 0) throw ParseError(s.line, t.column, "expected a positive integer");
    return r.get_num().get_ui();
  }

  void arity(const Statement& s, const Field& f, std::size_t n) {
    if (f.args.size() != n)
      throw ParseError(s.line, f.column,
                       "carrier '" + f.value + "' takes " + std::to_string(n) + " argument(s), got " +
                           std::to_string(f.args.size()));
  }

  ChainRule chain_rule(const Statement& s) {
    if (!s.rule || s.rule->value == "min") return ChainRule::Min;
    if (s.rule->value == "max") return ChainRule::Max;
    throw ParseError(s.line, s.rule->column, "rule must be min or max here");
  }

  void space(std::size_t number_, const std::vector<Token>& tokens) {
    Statement s = statement(number_, tokens);
    const Field& c = *s.carrier;
    const std::string& kind = c.value;
    std::vector<SpaceEntry> parts;
    SpacePtr space;
    try {
      if (kind == "interval") {
        arity(s, c, 2);
        space = make_interval(s.id, number(s, c.args[0]), number(s, c.args[1]));
      } else if (kind == "box") {
        if (c.args.empty() || c.args.size() % 2) throw ParseError(s.line, c.column, "box takes lo/hi pairs");
        std::vector<Rational> lo, hi;
        for (std::size_t i = 0; i < c.args.size(); i += 2) {
          lo.push_back(number(s, c.args[i]));
          hi.push_back(number(s, c.args[i + 1]));
        }
        space = make_box(s.id, lo, hi);
      } else if (kind == "simplex") {
        arity(s, c, 1);
        space = make_simplex(s.id, count(s, c.args[0]));
      } else if (kind == "ext-real") {
        arity(s, c, 2);
        space = make_ext_line(s.id, number(s, c.args[0]), number(s, c.args[1]));
      } else if (kind == "ext-nonneg") {
        arity(s, c, 1);
        space = make_ext_line(s.id, Rational(0), number(s, c.args[0]));
      } else if (kind == "naturals") {
        arity(s, c, 1);
        if (s.rule && s.rule->value != "min")
          throw ParseError(s.line, s.rule->column, "truncated naturals always use the min rule");
        space = make_naturals(s.id, count(s, c.args[0]));
      } else if (kind == "chain" || kind == "labels") {
        std::vector<std::string> labels;
        for (const auto& t : c.args) labels.push_back(t.text);
        if (labels.empty()) throw ParseError(s.line, c.column, "no labels given");
        if (kind == "labels" && s.rule && s.rule->value == "example-C") {
          auto u = std::find(labels.begin(), labels.end(), "u");
          if (labels.size() != 3 || u == labels.end())
            throw ParseError(s.line, s.rule->column, "example-C needs three labels, one of them 'u'");
          const std::size_t ui = static_cast<std::size_t>(u - labels.begin());
          std::vector<std::vector<std::size_t>> table(3, std::vector<std::size_t>(3, ui));
          for (std::size_t i = 0; i < 3; ++i) table[i][i] = i;
          space = make_table_space(s.id, labels, table);
        } else {
          space = make_chain(s.id, labels, chain_rule(s));
        }
      } else if (kind == "product") {
        if (c.args.size() < 2) throw ParseError(s.line, c.column, "product needs at least two factors");
        std::vector<SpacePtr> factors;
        for (const auto& t : c.args) {
          parts.push_back(lookup(s, t));
          factors.push_back(parts.back().space);
        }
        space = make_product(s.id, factors);
      } else if (kind == "semidirect") {
        if (c.args.size() < 2) throw ParseError(s.line, c.column, "semidirect needs a base and its components");
        PendingSemidirect p;
        p.base = lookup(s, c.args[0]).space;
        for (std::size_t i = 1; i < c.args.size(); ++i) {
          p.component_entries.push_back(lookup(s, c.args[i]));
          p.components.push_back(p.component_entries.back().space);
        }
        if (s.rule) {
          if (s.rule->value == "survivor")
            p.rule = SemidirectRule::Survivor;
          else if (s.rule->value != "transport")
            throw ParseError(s.line, s.rule->column, "rule must be transport or survivor here");
        }
        p.stmt = std::move(s);
        pending_ = std::move(p);
        return;
      } else {
        throw ParseError(s.line, c.column, "unknown carrier '" + kind + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(s.line, c.column, e.what());
    }
    register_space(s, space, parts);
  }

  void register_space(const Statement& s, const SpacePtr& space, const std::vector<SpaceEntry>& parts) {
    SpaceKind declared = parse_space_kind(s.kind->value);
    if (declared != space->kind())
      throw ParseError(s.line, s.kind->column,
                       "declared kind " + s.kind->value + " but the carrier is " + std::string(to_string(space->kind())));
    ExtMetric metric = default_metric(*space);
    if (s.metric) {
      const auto& name = s.metric->value;
      std::vector<ExtMetric> sub;
      for (const auto& p : parts) sub.push_back(p.metric);
      if (name == "sum" && space->as<ProductCarrier>()) {
        metric = sum_metric(sub);
      } else if (name == "branch" && space->as<SemidirectCarrier>()) {
        metric = branch_metric(sub);
      } else {
        try {
          metric = metric_by_name(name, *space);
        } catch (const std::invalid_argument& e) {
          throw ParseError(s.line, s.metric->column, e.what());
        }
      }
    }
    registry_.add({space, metric, s.expect && s.expect->value == "reject"});
  }

  void glue(std::size_t number_, const std::vector<Token>& tokens) {
    if (!pending_) throw ParseError(number_, tokens[0].column, "glue without a preceding semidirect space");
    if (tokens.size() != 6 || tokens[2].text != "->" || tokens[4].text != "at")
      throw ParseError(number_, tokens[0].column, "expected: glue <from> -> <to> at <point>");
    auto& p = *pending_;
    auto label = [&](const Token& t) {
      try {
        return p.base->parse(t.text).as_label();
      } catch (const std::invalid_argument&) {
        throw ParseError(number_, t.column, "unknown label '" + t.text + "' of base '" + p.base->id() + "'");
      }
    };
    std::size_t from = label(tokens[1]), to = label(tokens[3]);
    if (to >= p.components.size()) throw ParseError(number_, tokens[3].column, "no component for label");
    try {
      p.glue.push_back(Glue{from, to, p.components[to]->parse(tokens[5].text)});
    } catch (const std::invalid_argument& e) {
      throw ParseError(number_, tokens[5].column, e.what());
    }
  }

  void finish_pending() {
    if (!pending_) return;
    auto p = std::move(*pending_);
    pending_.reset();
    SpacePtr space;
    try {
      space = make_semidirect(p.stmt.id, p.base, p.components, p.glue, p.rule);
    } catch (const std::invalid_argument& e) {
      throw ParseError(p.stmt.line, p.stmt.carrier->column, e.what());
    }
    register_space(p.stmt, space, p.component_entries);
  }

  Registry& registry_;
  std::optional<PendingSemidirect> pending_;
};

}  // namespace

void parse_space_text(std::string_view text, Registry& registry) {
  Parser parser(registry);
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    parser.line(number, line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  parser.finish();
}

void parse_space_file(const std::string& path, Registry& registry) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  parse_space_text(buf.str(), registry);
}

}  // namespace giry

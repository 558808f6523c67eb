#include "thimac/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace thimac {

namespace {

// ---------------------------------------------------------------- lexing

enum class Tok {
  Ident, Int, String, LBrace, RBrace, LBracket, RBracket, Semi, Comma, Dot, DotDot,
  Arrow, FatArrow, End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long number = 0;
  int line = 1;
  int column = 1;
};

struct SyntaxError {
  std::string message;
  int line;
  int column;
};

const std::set<std::string, std::less<>> kStructural = {
    "thimac", "flow", "trigger", "event", "behavior", "region", "time", "carries", "anchor", "as"};

bool is_keyword(std::string_view word) {
  return kStructural.contains(word) || parse_kind(word).has_value();
}

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
          t.text.push_back(advance());
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Int;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          t.text.push_back(advance());
          if (t.text.size() > 9) throw SyntaxError{"integer literal too large", t.line, t.column};
        }
        t.number = std::stoll(t.text);
      } else if (c == '"') {
        t.kind = Tok::String;
        advance();
        for (;;) {
          if (pos_ >= text_.size() || text_[pos_] == '\n')
            throw SyntaxError{"unterminated string literal", t.line, t.column};
          char d = advance();
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= text_.size())
              throw SyntaxError{"unterminated string literal", t.line, t.column};
            int el = line_, ec = column_;
            char e = advance();
            switch (e) {
              case '"': t.text.push_back('"'); break;
              case '\\': t.text.push_back('\\'); break;
              case 'n': t.text.push_back('\n'); break;
              case 't': t.text.push_back('\t'); break;
              default: throw SyntaxError{"unknown escape sequence", el, ec - 1};
            }
          } else {
            t.text.push_back(d);
          }
        }
      } else {
        t.kind = punct(t);
      }
      out.push_back(std::move(t));
    }
  }

private:
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  bool next_is(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        return;
      }
    }
  }

  Tok punct(Token& t) {
    auto take = [&](std::string_view s, Tok k) {
      for (std::size_t i = 0; i < s.size(); ++i) advance();
      t.text = std::string(s);
      return k;
    };
    if (next_is("->")) return take("->", Tok::Arrow);
    if (next_is("=>")) return take("=>", Tok::FatArrow);
    if (next_is("..")) return take("..", Tok::DotDot);
    switch (text_[pos_]) {
      case '{': return take("{", Tok::LBrace);
      case '}': return take("}", Tok::RBrace);
      case '[': return take("[", Tok::LBracket);
      case ']': return take("]", Tok::RBracket);
      case ';': return take(";", Tok::Semi);
      case ',': return take(",", Tok::Comma);
      case '.': return take(".", Tok::Dot);
      default: break;
    }
    unsigned char c = static_cast<unsigned char>(text_[pos_]);
    std::ostringstream msg;
    if (std::isprint(c))
      msg << "unexpected character '" << static_cast<char>(c) << "'";
    else
      msg << "unexpected byte 0x" << std::hex << static_cast<int>(c);
    throw SyntaxError{msg.str(), line_, column_};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// ---------------------------------------------------------------- syntax tree

struct StageRef {
  std::vector<std::string> parts;
  SourcePosition pos;

  std::string text() const {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : ".") + p;
    return s;
  }
};

struct StageDecl {
  ActionKind kind;
  std::optional<std::string> alias;
  SourcePosition pos;
};

struct ThimacDecl {
  std::string name;
  SourcePosition pos;
  std::vector<StageDecl> stages;
  std::vector<ThimacDecl> children;
};

struct FlowDecl {
  StageRef from, to;
  std::optional<std::string> carries;
  std::optional<int> anchor;
  SourcePosition pos;
};

struct TriggerDecl {
  StageRef from, to;
  SourcePosition pos;
};

struct EventDecl {
  std::string name;
  std::vector<StageRef> region;
  std::optional<TimeSubthimac> time;
  SourcePosition pos;
};

struct EdgeDecl {
  std::string from, to;
  SourcePosition pos;
};

struct BehaviorDecl {
  std::string name;
  std::vector<EdgeDecl> edges;
  SourcePosition pos;
};

struct Ast {
  std::vector<ThimacDecl> thimacs;
  std::vector<FlowDecl> flows;
  std::vector<TriggerDecl> triggers;
  std::vector<EventDecl> events;
  std::vector<BehaviorDecl> behaviors;
};

constexpr int kMaxNesting = 200;

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Ast run() {
    Ast ast;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (t.kind != Tok::Ident) fail(t, "expected a declaration, found '" + t.text + "'");
      if (t.text == "thimac")
        ast.thimacs.push_back(thimac(0));
      else if (t.text == "flow")
        ast.flows.push_back(flow());
      else if (t.text == "trigger")
        ast.triggers.push_back(trigger());
      else if (t.text == "event")
        ast.events.push_back(event());
      else if (t.text == "behavior")
        ast.behaviors.push_back(behavior());
      else
        fail(t, "expected thimac, flow, trigger, event or behavior, found '" + t.text + "'");
    }
    return ast;
  }

private:
  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw SyntaxError{msg, t.line, t.column};
  }

  static SourcePosition at(const Token& t) { return {t.line, t.column}; }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }

  const Token& expect(Tok kind, std::string_view what) {
    const Token& t = peek();
    if (t.kind != kind)
      fail(t, "expected " + std::string(what) + ", found " +
                  (t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'"));
    return next();
  }

  void expect_word(std::string_view word) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || t.text != word)
      fail(t, "expected '" + std::string(word) + "'");
    next();
  }

  bool accept_word(std::string_view word) {
    if (peek().kind == Tok::Ident && peek().text == word) {
      next();
      return true;
    }
    return false;
  }

  std::string name(std::string_view what) {
    const Token& t = expect(Tok::Ident, what);
    if (is_keyword(t.text)) fail(t, "'" + t.text + "' is a reserved word");
    return t.text;
  }

  ThimacDecl thimac(int depth) {
    const Token& kw = next();
    if (depth >= kMaxNesting) fail(kw, "thimac nesting too deep");
    ThimacDecl d;
    d.pos = at(kw);
    d.name = name("thimac name");
    expect(Tok::LBrace, "'{'");
    for (;;) {
      const Token& t = peek();
      if (t.kind == Tok::RBrace) {
        next();
        return d;
      }
      if (t.kind != Tok::Ident) fail(t, "expected a stage or nested thimac");
      if (t.text == "thimac") {
        d.children.push_back(thimac(depth + 1));
        continue;
      }
      auto kind = parse_kind(t.text);
      if (!kind)
        fail(t, "'" + t.text +
                    "' is not a generic action (expected create, process, release, transfer "
                    "or receive)");
      StageDecl s{*kind, std::nullopt, at(t)};
      next();
      if (accept_word("as")) s.alias = name("stage alias");
      expect(Tok::Semi, "';'");
      d.stages.push_back(std::move(s));
    }
  }

  StageRef stage_ref() {
    StageRef r;
    const Token& first = peek();
    r.pos = at(first);
    r.parts.push_back(name("thimac name"));
    while (peek().kind == Tok::Dot) {
      next();
      const Token& t = expect(Tok::Ident, "a name after '.'");
      r.parts.push_back(t.text);
    }
    if (r.parts.size() < 2) fail(first, "stage reference needs a thimac path and a stage");
    return r;
  }

  FlowDecl flow() {
    FlowDecl d;
    d.pos = at(next());
    d.from = stage_ref();
    expect(Tok::Arrow, "'->'");
    d.to = stage_ref();
    if (accept_word("carries")) d.carries = expect(Tok::String, "a string").text;
    if (accept_word("anchor"))
      d.anchor = static_cast<int>(expect(Tok::Int, "an integer anchor").number);
    expect(Tok::Semi, "';'");
    return d;
  }

  TriggerDecl trigger() {
    TriggerDecl d;
    d.pos = at(next());
    d.from = stage_ref();
    expect(Tok::FatArrow, "'=>'");
    d.to = stage_ref();
    expect(Tok::Semi, "';'");
    return d;
  }

  EventDecl event() {
    EventDecl d;
    d.pos = at(next());
    d.name = name("event name");
    expect(Tok::LBrace, "'{'");
    expect_word("region");
    expect(Tok::LBracket, "'['");
    d.region.push_back(stage_ref());
    while (peek().kind == Tok::Comma) {
      next();
      d.region.push_back(stage_ref());
    }
    expect(Tok::RBracket, "']'");
    if (accept_word("time")) {
      TimeSubthimac t;
      t.start = expect(Tok::Int, "a start tick").number;
      expect(Tok::DotDot, "'..'");
      t.end = expect(Tok::Int, "an end tick").number;
      d.time = t;
    }
    expect(Tok::RBrace, "'}'");
    return d;
  }

  BehaviorDecl behavior() {
    BehaviorDecl d;
    d.pos = at(next());
    d.name = name("behavior name");
    expect(Tok::LBrace, "'{'");
    while (peek().kind != Tok::RBrace) {
      EdgeDecl e;
      e.pos = at(peek());
      e.from = name("event name");
      expect(Tok::Arrow, "'->'");
      e.to = name("event name");
      expect(Tok::Semi, "';'");
      d.edges.push_back(std::move(e));
    }
    next();
    return d;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- building

class Builder {
public:
  Document doc;
  std::vector<ParseDiagnostic> diags;

  void error(SourcePosition p, Errc code, const std::string& msg) {
    diags.push_back({Severity::Error, std::string(errc_name(code)), msg, p.line, p.column});
  }

  void thimac(const ThimacDecl& d, const std::optional<ThimacId>& parent) {
    ThimacId id;
    try {
      id = doc.model.add_thimac(d.name, parent);
    } catch (const Error& e) {
      error(d.pos, e.code(), e.detail());
      return;
    }
    doc.positions["thimac:" + id.str()] = d.pos;

    std::vector<const StageDecl*> ordered;
    for (const auto& s : d.stages) ordered.push_back(&s);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const StageDecl* a, const StageDecl* b) { return a->kind < b->kind; });
    for (const StageDecl* s : ordered) {
      try {
        StageId sid = doc.model.add_stage(id, s->kind, s->alias);
        doc.positions["stage:" + sid.str()] = s->pos;
      } catch (const Error& e) {
        error(s->pos, e.code(), e.detail());
      }
    }
    for (const auto& c : d.children) thimac(c, id);
  }

  std::optional<StageId> resolve(const StageRef& r) {
    std::optional<ThimacId> cur;
    for (std::size_t i = 0; i + 1 < r.parts.size(); ++i) {
      const Thimac* t = doc.model.find_child(cur, r.parts[i]);
      if (!t) {
        error(r.pos, Errc::UnknownStage,
              "no thimac '" + r.text() + "'");
        return std::nullopt;
      }
      cur = t->id;
    }
    const Stage* s = doc.model.resolve_stage(*cur, r.parts.back());
    if (!s) {
      error(r.pos, Errc::UnknownStage,
            "no stage '" + r.text() + "'");
      return std::nullopt;
    }
    return s->id;
  }

  void flow(const FlowDecl& d) {
    auto from = resolve(d.from);
    auto to = resolve(d.to);
    if (!from || !to) return;
    try {
      FlowId id = doc.model.add_flow(*from, *to, d.carries, d.anchor);
      doc.positions["flow:" + id.str()] = d.pos;
    } catch (const Error& e) {
      error(d.pos, e.code(), e.detail());
    }
  }

  void trigger(const TriggerDecl& d) {
    auto from = resolve(d.from);
    auto to = resolve(d.to);
    if (!from || !to) return;
    try {
      TriggerId id = doc.model.add_trigger(*from, *to);
      doc.positions["trigger:" + id.str()] = d.pos;
    } catch (const Error& e) {
      error(d.pos, e.code(), e.detail());
    }
  }

  void event(const EventDecl& d) {
    std::vector<StageId> region;
    for (const auto& r : d.region) {
      auto s = resolve(r);
      if (!s) return;
      region.push_back(*s);
    }
    if (doc.find_event(d.name)) {
      error(d.pos, Errc::DuplicateEvent,
            "event '" + d.name +
                "' declared twice");
      return;
    }
    try {
      doc.events.push_back(define_event(doc.model, d.name, region, d.time));
      doc.positions["event:" + d.name] = d.pos;
    } catch (const Error& e) {
      error(d.pos, e.code(), e.detail());
    }
  }

  void behavior(const BehaviorDecl& d) {
    if (doc.find_behavior(d.name)) {
      error(d.pos, Errc::DuplicateEvent, "behavior '" + d.name + "' declared twice");
      return;
    }
    std::vector<std::string> ids;
    for (const auto& e : doc.events) ids.push_back(e.id);
    std::vector<std::pair<std::string, std::string>> edges;
    bool ok = true;
    for (const auto& e : d.edges) {
      try {
        std::pair<std::string, std::string> one{e.from, e.to};
        build_behavior(d.name, ids, std::span(&one, 1));
        edges.push_back(std::move(one));
      } catch (const Error& err) {
        error(e.pos, err.code(), err.detail());
        ok = false;
      }
    }
    if (ok) {
      doc.behaviors.push_back(build_behavior(d.name, ids, edges));
      doc.positions["behavior:" + d.name] = d.pos;
    }
  }
};

// ---------------------------------------------------------------- output

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  return out + "\"";
}

std::vector<const Flow*> canonical_flows(const StaticModel& model) {
  std::vector<const Flow*> out;
  for (const auto& f : model.flows()) out.push_back(&f);
  // Declaration order breaks ties, which keeps ids aligned on re-parse.
  std::stable_sort(out.begin(), out.end(), [](const Flow* a, const Flow* b) {
    if (a->anchor.has_value() != b->anchor.has_value()) return a->anchor.has_value();
    return a->anchor.value_or(0) < b->anchor.value_or(0);
  });
  return out;
}

void write_thimac(std::ostream& os, const StaticModel& model, const Thimac& t, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  os << pad << "thimac " << t.name << " {\n";
  for (ActionKind k : kAllKinds) {
    const Stage* s = model.stage_of(t.id, k);
    if (!s) continue;
    os << pad << "  " << kind_name(k);
    if (s->alias) os << " as " << *s->alias;
    os << ";\n";
  }
  for (const auto& c : t.child_ids) write_thimac(os, model, model.thimac(c), depth + 1);
  os << pad << "}\n";
}

}  // namespace

const EventDef* Document::find_event(const std::string& id) const {
  for (const auto& e : events)
    if (e.id == id) return &e;
  return nullptr;
}

const BehaviorModel* Document::find_behavior(const std::string& name) const {
  for (const auto& b : behaviors)
    if (b.name == name) return &b;
  return nullptr;
}

bool ParseResult::has_syntax_error() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const ParseDiagnostic& d) { return d.code == "SyntaxError"; });
}

ParseResult parse(const SourceDocument& doc) {
  ParseResult result;
  Ast ast;
  try {
    ast = Parser(Lexer(doc.text).run()).run();
  } catch (const SyntaxError& e) {
    result.diagnostics.push_back({Severity::Error, "SyntaxError", e.message, e.line, e.column});
    return result;
  }

  Builder b;
  for (const auto& t : ast.thimacs) b.thimac(t, std::nullopt);
  for (const auto& f : ast.flows) b.flow(f);
  for (const auto& t : ast.triggers) b.trigger(t);
  for (const auto& e : ast.events) b.event(e);
  for (const auto& bh : ast.behaviors) b.behavior(bh);

  result.diagnostics = std::move(b.diags);
  if (result.diagnostics.empty()) result.document = std::move(b.doc);
  return result;
}

std::string serialize(const StaticModel& model, const std::vector<EventDef>& events,
                      const std::vector<BehaviorModel>& behaviors) {
  std::vector<std::string> sections;

  for (const auto& r : model.roots()) {
    std::ostringstream os;
    write_thimac(os, model, model.thimac(r), 0);
    sections.push_back(os.str());
  }

  if (!model.flows().empty()) {
    std::ostringstream os;
    for (const Flow* f : canonical_flows(model)) {
      os << "flow " << f->from.str() << " -> " << f->to.str();
      if (f->carries) os << " carries " << quote(*f->carries);
      if (f->anchor) os << " anchor " << *f->anchor;
      os << ";\n";
    }
    sections.push_back(os.str());
  }

  if (!model.triggers().empty()) {
    std::ostringstream os;
    for (const auto& t : model.triggers())
      os << "trigger " << t.from.str() << " => " << t.to.str() << ";\n";
    sections.push_back(os.str());
  }

  for (const auto& e : events) {
    std::ostringstream os;
    os << "event " << e.id << " {\n  region [";
    for (std::size_t i = 0; i < e.region.size(); ++i)
      os << (i ? ", " : "") << e.region[i].str();
    os << "]\n";
    if (e.time) os << "  time " << e.time->start << ".." << e.time->end << "\n";
    os << "}\n";
    sections.push_back(os.str());
  }

  for (const auto& b : behaviors) {
    std::ostringstream os;
    os << "behavior " << b.name << " {\n";
    for (const auto& [from, to] : b.edges) os << "  " << from << " -> " << to << ";\n";
    os << "}\n";
    sections.push_back(os.str());
  }

  std::string out;
  for (std::size_t i = 0; i < sections.size(); ++i) out += (i ? "\n" : "") + sections[i];
  return out;
}

std::string serialize(const Document& doc) {
  return serialize(doc.model, doc.events, doc.behaviors);
}

bool structurally_equal(const Document& a, const Document& b) {
  const StaticModel& ma = a.model;
  const StaticModel& mb = b.model;
  if (ma.thimacs().size() != mb.thimacs().size() || ma.stages().size() != mb.stages().size() ||
      ma.flows().size() != mb.flows().size() || ma.triggers().size() != mb.triggers().size())
    return false;
  if (!std::equal(ma.roots().begin(), ma.roots().end(), mb.roots().begin(), mb.roots().end()))
    return false;
  for (const auto& t : ma.thimacs()) {
    const Thimac* u = mb.find_thimac(t.id);
    if (!u || u->name != t.name || u->parent != t.parent || u->child_ids != t.child_ids)
      return false;
  }
  for (const auto& s : ma.stages()) {
    const Stage* u = mb.find_stage(s.id);
    if (!u || u->kind != s.kind || u->owner != s.owner || u->alias != s.alias) return false;
  }
  auto fa = canonical_flows(ma), fb = canonical_flows(mb);
  for (std::size_t i = 0; i < fa.size(); ++i)
    if (fa[i]->from != fb[i]->from || fa[i]->to != fb[i]->to ||
        fa[i]->carries != fb[i]->carries || fa[i]->anchor != fb[i]->anchor)
      return false;
  for (std::size_t i = 0; i < ma.triggers().size(); ++i)
    if (ma.triggers()[i].from != mb.triggers()[i].from ||
        ma.triggers()[i].to != mb.triggers()[i].to)
      return false;
  return a.events == b.events && a.behaviors == b.behaviors;
}

std::string emit_dot(const StaticModel& model, const std::optional<Region>& highlight) {
  std::set<StageId> marked;
  std::set<std::string> marked_edges;
  if (highlight) {
    marked.insert(highlight->stages.begin(), highlight->stages.end());
    for (const auto& f : highlight->flows) marked_edges.insert(f.str());
    for (const auto& t : highlight->triggers) marked_edges.insert(t.str());
  }

  std::ostringstream os;
  os << "digraph tm {\n  compound=true;\n  node [shape=box, style=rounded];\n";
  std::function<void(const Thimac&, int)> cluster = [&](const Thimac& t, int depth) {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    os << pad << "subgraph " << quote("cluster_" + t.id.str()) << " {\n";
    os << pad << "  label=" << quote(t.name) << ";\n";
    for (ActionKind k : kAllKinds) {
      const Stage* s = model.stage_of(t.id, k);
      if (!s) continue;
      std::string label(kind_name(k));
      if (s->alias) label += " (" + *s->alias + ")";
      os << pad << "  " << quote(s->id.str()) << " [label=" << quote(label);
      if (marked.contains(s->id)) os << ", style=\"rounded,filled\", fillcolor=gold";
      os << "];\n";
    }
    for (const auto& c : t.child_ids) cluster(model.thimac(c), depth + 1);
    os << pad << "}\n";
  };
  for (const auto& r : model.roots()) cluster(model.thimac(r), 1);

  for (const Flow* f : canonical_flows(model)) {
    os << "  " << quote(f->from.str()) << " -> " << quote(f->to.str());
    std::string label;
    if (f->anchor) label = std::to_string(*f->anchor);
    if (f->carries) label += (label.empty() ? "" : " ") + *f->carries;
    std::vector<std::string> attrs;
    if (!label.empty()) attrs.push_back("label=" + quote(label));
    if (marked_edges.contains(f->id.str())) attrs.push_back("color=goldenrod, penwidth=2");
    if (!attrs.empty()) {
      os << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
      os << "]";
    }
    os << ";\n";
  }
  for (const auto& t : model.triggers()) {
    os << "  " << quote(t.from.str()) << " -> " << quote(t.to.str()) << " [style=dashed, color=red";
    if (marked_edges.contains(t.id.str())) os << ", penwidth=2";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string format_diagnostic(const ParseDiagnostic& d, const std::optional<std::string>& path) {
  std::ostringstream os;
  if (path) os << *path << ":";
  os << d.line << ":" << d.column << ": " << severity_name(d.severity) << ": " << d.code << ": "
     << d.message;
  return os.str();
}

}  // namespace thimac

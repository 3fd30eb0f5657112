#include "supsat/parser.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "supsat/error.hpp"

namespace supsat {
namespace {

struct Token {
  enum class Kind { Ident, Number, Arrow, Dot, Comma, Colon, LParen, RParen, Section, End };
  Kind kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Token::Kind::End, "", line_, col_});
        return out;
      }
      int line = line_, col = col_;
      char c = src_[pos_];
      if (c == '-' && peek(1) == '>') {
        advance(2);
        out.push_back({Token::Kind::Arrow, "->", line, col});
      } else if (c == '.') {
        advance(1);
        out.push_back({Token::Kind::Dot, ".", line, col});
      } else if (c == ',') {
        advance(1);
        out.push_back({Token::Kind::Comma, ",", line, col});
      } else if (c == ':') {
        advance(1);
        out.push_back({Token::Kind::Colon, ":", line, col});
      } else if (c == '(') {
        advance(1);
        out.push_back({Token::Kind::LParen, "(", line, col});
      } else if (c == ')') {
        advance(1);
        out.push_back({Token::Kind::RParen, ")", line, col});
      } else if (c == '%') {
        std::size_t start = pos_;
        advance(1);
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) advance(1);
        out.push_back({Token::Kind::Section, std::string(src_.substr(start, pos_ - start)), line, col});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance(1);
        out.push_back({Token::Kind::Number, std::string(src_.substr(start, pos_ - start)), line, col});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                                      src_[pos_] == '\''))
          advance(1);
        out.push_back({Token::Kind::Ident, std::string(src_.substr(start, pos_ - start)), line, col});
      } else {
        throw InputError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
  }

 private:
  char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }
  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Unresolved term: a name, or an application whose first item is the head.
struct Raw {
  std::string name;
  std::vector<Raw> items;
  int line = 0;
  int column = 0;
  bool is_name() const { return items.empty(); }
};

struct RawRule {
  std::string nonterminal;
  std::vector<std::string> params;
  std::vector<std::optional<Sort>> annotations;
  Raw body;
  int line;
  int column;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  void run() {
    while (!at(Token::Kind::End)) {
      const Token& t = expect(Token::Kind::Section, "section marker");
      if (t.text == "%BEGING") {
        grammar_section();
      } else if (t.text == "%BEGINT") {
        terminal_section();
      } else if (t.text == "%BEGINI") {
        important_section();
      } else {
        throw InputError("unknown section " + t.text, t.line, t.column);
      }
    }
  }

  std::vector<RawRule> rules;
  std::vector<std::pair<TerminalDecl, Token>> terminals;
  std::vector<std::string> important;
  bool has_important = false;

 private:
  bool at(Token::Kind k) const { return toks_[pos_].kind == k; }
  bool at_section(const char* name) const { return at(Token::Kind::Section) && toks_[pos_].text == name; }
  const Token& cur() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  const Token& expect(Token::Kind k, const char* what) {
    if (!at(k)) {
      const Token& t = cur();
      throw InputError(std::string("expected ") + what + (t.text.empty() ? " before end of input" : ", found '" + t.text + "'"),
                       t.line, t.column);
    }
    return next();
  }

  void grammar_section() {
    while (!at_section("%ENDG")) {
      if (at(Token::Kind::End)) throw InputError("missing %ENDG", cur().line, cur().column);
      rules.push_back(rule());
    }
    next();
  }

  RawRule rule() {
    const Token& name = expect(Token::Kind::Ident, "nonterminal name");
    if (!std::isupper(static_cast<unsigned char>(name.text[0])))
      throw InputError("nonterminal " + name.text + " must start with an uppercase letter", name.line, name.column);
    RawRule r{name.text, {}, {}, {}, name.line, name.column};
    while (!at(Token::Kind::Arrow)) {
      if (at(Token::Kind::Ident)) {
        const Token& p = next();
        check_variable_name(p);
        r.params.push_back(p.text);
        r.annotations.emplace_back();
      } else if (at(Token::Kind::LParen)) {
        next();
        const Token& p = expect(Token::Kind::Ident, "parameter name");
        check_variable_name(p);
        expect(Token::Kind::Colon, "':'");
        Sort s = sort();
        expect(Token::Kind::RParen, "')'");
        r.params.push_back(p.text);
        r.annotations.emplace_back(s);
      } else {
        throw InputError("expected parameter or '->', found '" + cur().text + "'", cur().line, cur().column);
      }
    }
    next();
    r.body = term();
    expect(Token::Kind::Dot, "'.' at end of rule");
    return r;
  }

  void check_variable_name(const Token& p) {
    if (!std::islower(static_cast<unsigned char>(p.text[0])) && p.text[0] != '_')
      throw InputError("parameter " + p.text + " must start with a lowercase letter", p.line, p.column);
  }

  Sort sort() {
    Sort lhs;
    if (at(Token::Kind::LParen)) {
      next();
      lhs = sort();
      expect(Token::Kind::RParen, "')'");
    } else {
      const Token& t = expect(Token::Kind::Ident, "sort");
      if (t.text != "o") throw InputError("unknown sort " + t.text, t.line, t.column);
    }
    if (at(Token::Kind::Arrow)) {
      next();
      return Sort::arrow(lhs, sort());
    }
    return lhs;
  }

  Raw term() {
    Raw app;
    app.line = cur().line;
    app.column = cur().column;
    while (at(Token::Kind::Ident) || at(Token::Kind::LParen)) {
      if (at(Token::Kind::Ident)) {
        const Token& t = next();
        app.items.push_back(Raw{t.text, {}, t.line, t.column});
      } else {
        next();
        Raw inner = term();
        expect(Token::Kind::RParen, "')'");
        // (F x) y flattens into one spine.
        if (app.items.empty() && !inner.is_name())
          app.items = std::move(inner.items);
        else
          app.items.push_back(std::move(inner));
      }
    }
    if (app.items.empty()) throw InputError("expected a term, found '" + cur().text + "'", cur().line, cur().column);
    if (app.items.size() == 1) return std::move(app.items[0]);
    return app;
  }

  void terminal_section() {
    while (!at_section("%ENDT")) {
      if (at(Token::Kind::End)) throw InputError("missing %ENDT", cur().line, cur().column);
      const Token& name = expect(Token::Kind::Ident, "terminal name");
      if (std::isupper(static_cast<unsigned char>(name.text[0])))
        throw InputError("terminal " + name.text + " must start with a lowercase letter", name.line, name.column);
      expect(Token::Kind::Arrow, "'->'");
      const Token& n = expect(Token::Kind::Number, "arity");
      expect(Token::Kind::Dot, "'.'");
      terminals.push_back({TerminalDecl{name.text, static_cast<unsigned>(std::stoul(n.text))}, name});
    }
    next();
  }

  void important_section() {
    has_important = true;
    while (!at_section("%ENDI")) {
      if (at(Token::Kind::End)) throw InputError("missing %ENDI", cur().line, cur().column);
      if (at(Token::Kind::Dot) || at(Token::Kind::Comma)) {
        next();
        continue;
      }
      important.push_back(expect(Token::Kind::Ident, "letter").text);
    }
    next();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Union-find over sort terms with variables.
class SortUnifier {
 public:
  int fresh() {
    nodes_.push_back({Kind::Var, -1, -1, static_cast<int>(nodes_.size())});
    return nodes_.back().parent;
  }
  int base() {
    nodes_.push_back({Kind::Base, -1, -1, static_cast<int>(nodes_.size())});
    return nodes_.back().parent;
  }
  int arrow(int a, int b) {
    nodes_.push_back({Kind::Arrow, a, b, static_cast<int>(nodes_.size())});
    return nodes_.back().parent;
  }
  int from_sort(const Sort& s) { return s.is_base() ? base() : arrow(from_sort(s.argument()), from_sort(s.result())); }

  int find(int x) {
    while (nodes_[x].parent != x) {
      nodes_[x].parent = nodes_[nodes_[x].parent].parent;
      x = nodes_[x].parent;
    }
    return x;
  }

  bool unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    Node& na = nodes_[a];
    Node& nb = nodes_[b];
    if (na.kind == Kind::Var) {
      if (occurs(a, b)) return false;
      na.parent = b;
      return true;
    }
    if (nb.kind == Kind::Var) {
      if (occurs(b, a)) return false;
      nb.parent = a;
      return true;
    }
    if (na.kind != nb.kind) return false;
    if (na.kind == Kind::Base) return true;
    int a1 = na.left, a2 = na.right, b1 = nb.left, b2 = nb.right;
    nodes_[b].parent = a;
    return unify(a1, b1) && unify(a2, b2);
  }

  std::optional<Sort> resolve(int x) {
    x = find(x);
    const Node& n = nodes_[x];
    if (n.kind == Kind::Var) return std::nullopt;
    if (n.kind == Kind::Base) return Sort::base();
    int l = n.left, r = n.right;
    auto a = resolve(l);
    auto b = resolve(r);
    if (!a || !b) return std::nullopt;
    return Sort::arrow(*a, *b);
  }

  std::string show(int x) {
    x = find(x);
    const Node& n = nodes_[x];
    if (n.kind == Kind::Var) return "?";
    if (n.kind == Kind::Base) return "o";
    int l = n.left, r = n.right;
    std::string lhs = show(l);
    if (nodes_[find(l)].kind == Kind::Arrow) lhs = "(" + lhs + ")";
    return lhs + " -> " + show(r);
  }

 private:
  enum class Kind { Var, Base, Arrow };
  struct Node {
    Kind kind;
    int left;
    int right;
    int parent;
  };

  bool occurs(int var, int in) {
    in = find(in);
    if (in == var) return true;
    const Node& n = nodes_[in];
    if (n.kind != Kind::Arrow) return false;
    int l = n.left, r = n.right;
    return occurs(var, l) || occurs(var, r);
  }

  std::vector<Node> nodes_;
};

class Elaborator {
 public:
  Elaborator(Parser& p) : p_(p) {}

  Scheme run() {
    if (p_.rules.empty()) throw InputError("no rules; start symbol missing");
    for (auto& [decl, tok] : p_.terminals) {
      if (terminal_arity_.count(decl.name))
        throw InputError("terminal " + decl.name + " declared twice", tok.line, tok.column);
      if (decl.name == kOmega && decl.arity != 0)
        throw InputError("omega is reserved with arity 0", tok.line, tok.column);
      terminal_arity_[decl.name] = decl.arity;
    }
    terminal_arity_.emplace(kOmega, 0);

    for (const RawRule& r : p_.rules) {
      if (nt_var_.count(r.nonterminal))
        throw InputError("duplicate rule for nonterminal " + r.nonterminal, r.line, r.column);
      if (terminal_arity_.count(r.nonterminal))
        throw InputError(r.nonterminal + " is declared as a terminal", r.line, r.column);
      nt_var_[r.nonterminal] = u_.fresh();
      nt_order_.push_back(r.nonterminal);
    }
    const RawRule& first = p_.rules.front();
    u_.unify(nt_var_[first.nonterminal], u_.base());

    std::vector<std::vector<int>> param_vars;
    for (const RawRule& r : p_.rules) {
      std::unordered_map<std::string, int> scope;
      std::vector<int> vars;
      for (std::size_t i = 0; i < r.params.size(); ++i) {
        if (scope.count(r.params[i]))
          throw InputError("parameter " + r.params[i] + " repeated in rule for " + r.nonterminal, r.line, r.column);
        if (terminal_arity_.count(r.params[i]))
          throw InputError("parameter " + r.params[i] + " shadows a terminal", r.line, r.column);
        int v = r.annotations[i] ? u_.from_sort(*r.annotations[i]) : u_.fresh();
        scope[r.params[i]] = v;
        vars.push_back(v);
      }
      int body = u_.fresh();
      int whole = body;
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) whole = u_.arrow(*it, whole);
      if (!u_.unify(nt_var_[r.nonterminal], whole))
        throw SortError("sort-inference conflict for nonterminal " + r.nonterminal + ": its rule has " +
                            std::to_string(r.params.size()) + " parameter(s) but it is used at sort " +
                            u_.show(nt_var_[r.nonterminal]),
                        r.line, r.column);
      infer(r.body, scope, body, r.nonterminal);
      param_vars.push_back(std::move(vars));
    }

    SchemeDraft d;
    for (auto& [decl, tok] : p_.terminals) d.terminals.push_back(decl);
    for (const std::string& name : nt_order_) {
      auto s = u_.resolve(nt_var_[name]);
      if (!s) {
        const RawRule& r = rule_of(name);
        throw SortError("cannot infer the sort of nonterminal " + name + " (partially " + u_.show(nt_var_[name]) +
                            "); annotate its unused parameters",
                        r.line, r.column);
      }
      nt_sort_[name] = *s;
      d.nonterminals.push_back({name, *s});
    }
    for (std::size_t k = 0; k < p_.rules.size(); ++k) {
      const RawRule& r = p_.rules[k];
      std::unordered_map<std::string, Sort> scope;
      SchemeDraft::RuleDraft rd{r.nonterminal, {}, Term::constant(kOmega, 0)};
      for (std::size_t i = 0; i < r.params.size(); ++i) {
        auto s = u_.resolve(param_vars[k][i]);
        if (!s)
          throw SortError("cannot infer the sort of parameter " + r.params[i] + " in rule for " + r.nonterminal +
                              "; annotate it as (" + r.params[i] + " : <sort>)",
                          r.line, r.column);
        scope.emplace(r.params[i], *s);
        rd.params.push_back(Term::variable(r.params[i], *s));
      }
      rd.body = build(r.body, scope);
      d.rules.push_back(std::move(rd));
    }
    d.start = first.nonterminal;
    d.important = p_.important;
    return Scheme::build(std::move(d));
  }

 private:
  const RawRule& rule_of(const std::string& name) const {
    for (const RawRule& r : p_.rules)
      if (r.nonterminal == name) return r;
    return p_.rules.front();
  }

  int lookup(const Raw& n, const std::unordered_map<std::string, int>& scope) {
    if (auto it = scope.find(n.name); it != scope.end()) return it->second;
    if (std::isupper(static_cast<unsigned char>(n.name[0]))) {
      auto it = nt_var_.find(n.name);
      if (it == nt_var_.end()) throw InputError("undefined nonterminal " + n.name, n.line, n.column);
      return it->second;
    }
    auto it = terminal_arity_.find(n.name);
    if (it == terminal_arity_.end()) throw InputError("undeclared terminal " + n.name, n.line, n.column);
    return u_.from_sort(Sort::first_order(it->second));
  }

  void infer(const Raw& t, const std::unordered_map<std::string, int>& scope, int expected, const std::string& rule) {
    const Raw& head = t.is_name() ? t : t.items.front();
    std::size_t argc = t.is_name() ? 0 : t.items.size() - 1;
    bool terminal_head = !scope.count(head.name) && !std::isupper(static_cast<unsigned char>(head.name[0]));
    if (terminal_head && terminal_arity_.count(head.name) && argc > terminal_arity_.at(head.name))
      throw InputError("arity mismatch: terminal " + head.name + " has arity " +
                           std::to_string(terminal_arity_.at(head.name)) + " but is applied to " +
                           std::to_string(argc) + " argument(s)",
                       head.line, head.column);
    int h = lookup(head, scope);
    for (std::size_t i = 1; i <= argc; ++i) {
      int a = u_.fresh();
      int r = u_.fresh();
      if (!u_.unify(h, u_.arrow(a, r)))
        throw SortError("sort-inference conflict: " + head.name + " of sort " + u_.show(h) + " applied to too many arguments",
                        head.line, head.column);
      infer(t.items[i], scope, a, rule);
      h = r;
    }
    if (!u_.unify(h, expected)) {
      if (terminal_head)
        throw InputError("arity mismatch: terminal " + head.name + " has arity " +
                             std::to_string(terminal_arity_.at(head.name)) + " but is applied to " +
                             std::to_string(argc) + " argument(s) where sort " + u_.show(expected) +
                             " is expected",
                         head.line, head.column);
      throw SortError("sort-inference conflict in rule for " + rule + ": term headed by " + head.name +
                          " has sort " + u_.show(h) + " but sort " + u_.show(expected) + " is expected",
                      head.line, head.column);
    }
  }

  Term build(const Raw& t, const std::unordered_map<std::string, Sort>& scope) {
    if (!t.is_name()) {
      Term f = build(t.items.front(), scope);
      for (std::size_t i = 1; i < t.items.size(); ++i) f = Term::apply(f, build(t.items[i], scope));
      return f;
    }
    if (auto it = scope.find(t.name); it != scope.end()) return Term::variable(t.name, it->second);
    if (std::isupper(static_cast<unsigned char>(t.name[0]))) return Term::nonterminal(t.name, nt_sort_.at(t.name));
    return Term::constant(t.name, terminal_arity_.at(t.name));
  }

  Parser& p_;
  SortUnifier u_;
  std::map<std::string, unsigned> terminal_arity_;
  std::unordered_map<std::string, int> nt_var_;
  std::vector<std::string> nt_order_;
  std::unordered_map<std::string, Sort> nt_sort_;
};

}  // namespace

Scheme parse_scheme(std::string_view text) {
  Parser p(Lexer(text).run());
  p.run();
  return Elaborator(p).run();
}

Scheme load_scheme_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scheme(ss.str());
}

}  // namespace supsat

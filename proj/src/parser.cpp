#include "confluence/cli.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace confluence {

ParseError::ParseError(int line, int column, const std::string &msg)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + msg),
      line_(line), column_(column) {}

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
         c == '*' || c == '\'' || c == '_';
}

enum class Tok { LParen, RParen, Comma, Arrow, WeakArrow, Ident, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    skip_space();
    Token t{Tok::End, {}, line_, col_};
    if (i_ >= s_.size()) return t;
    char c = s_[i_];
    if (c == '(') return single(Tok::LParen);
    if (c == ')') return single(Tok::RParen);
    if (c == ',') return single(Tok::Comma);
    if (arrow_at(i_)) {
      advance(2);
      if (i_ < s_.size() && s_[i_] == '=') {
        advance(1);
        t.kind = Tok::WeakArrow;
        t.text = "->=";
      } else {
        t.kind = Tok::Arrow;
        t.text = "->";
      }
      return t;
    }
    if (!ident_char(c))
      throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
    std::size_t start = i_;
    while (i_ < s_.size() && ident_char(s_[i_]) && !arrow_at(i_)) advance(1);
    t.kind = Tok::Ident;
    t.text = std::string(s_.substr(start, i_ - start));
    return t;
  }

  // Skips a balanced parenthesised block whose opening paren was consumed.
  void skip_block(int line, int col) {
    int level = 1;
    while (i_ < s_.size()) {
      char c = s_[i_];
      advance(1);
      if (c == '(') ++level;
      if (c == ')' && --level == 0) return;
    }
    throw ParseError(line, col, "unterminated section");
  }

private:
  bool arrow_at(std::size_t i) const {
    return i + 1 < s_.size() && s_[i] == '-' && s_[i + 1] == '>';
  }

  Token single(Tok k) {
    Token t{k, std::string(1, s_[i_]), line_, col_};
    advance(1);
    return t;
  }

  void advance(std::size_t n) {
    for (; n > 0 && i_ < s_.size(); --n, ++i_) {
      if (s_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
      advance(1);
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
public:
  explicit Parser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  Trs parse_file() {
    Trs out;
    while (tok_.kind != Tok::End) {
      expect(Tok::LParen, "'('");
      Token head = tok_;
      if (head.kind != Tok::Ident) throw error(head, "expected a section name");
      if (head.text == "VAR") {
        advance();
        while (tok_.kind == Tok::Ident) {
          declare_var(tok_);
          advance();
        }
        expect(Tok::RParen, "')' after VAR");
      } else if (head.text == "RULES") {
        advance();
        while (tok_.kind != Tok::RParen) {
          if (tok_.kind == Tok::End) throw error(tok_, "unterminated RULES section");
          out.add(parse_rule(static_cast<int>(out.size()) + 1));
        }
        advance();
      } else {
        // Unknown sections (COMMENT, ...) are skipped as raw text.
        lex_.skip_block(head.line, head.col);
        tok_ = lex_.next();
      }
    }
    return out;
  }

  Term parse_single(const std::vector<std::string> &vars) {
    for (const auto &v : vars) declare_var(Token{Tok::Ident, v, 1, 1});
    Term t = parse_term();
    if (tok_.kind != Tok::End) throw error(tok_, "trailing input after term");
    return t;
  }

private:
  ParseError error(const Token &t, const std::string &msg) const {
    return ParseError(t.line, t.col, msg);
  }

  void advance() { tok_ = lex_.next(); }

  void expect(Tok k, const std::string &what) {
    if (tok_.kind != k) throw error(tok_, "expected " + what);
    advance();
  }

  void declare_var(const Token &t) {
    if (vars_.count(t.text)) return;
    if (arity_.count(t.text))
      throw error(t, "'" + t.text + "' is already used as a function symbol");
    vars_.emplace(t.text, static_cast<VarId>(vars_.size()) + 1);
  }

  Rule parse_rule(int index) {
    Token start = tok_;
    Term l = parse_term();
    if (tok_.kind == Tok::WeakArrow)
      throw error(tok_, "relative rules (->=) are not supported");
    expect(Tok::Arrow, "'->'");
    Term r = parse_term();
    if (l.is_var()) throw error(start, "left-hand side is a variable");
    auto lv = var_set(l);
    for (const auto &v : variables(r))
      if (!lv.count(v.var_id()))
        throw error(start, "variable " + v.var_name() +
                               " of the right-hand side does not occur on the left");
    return Rule(l, r, "r" + std::to_string(index));
  }

  Term parse_term() {
    Token id = tok_;
    if (id.kind != Tok::Ident) throw error(id, "expected a term");
    advance();
    auto v = vars_.find(id.text);
    if (v != vars_.end()) {
      if (tok_.kind == Tok::LParen) throw error(tok_, "variable applied to arguments");
      return Term::var(v->second, id.text);
    }
    std::vector<Term> args;
    if (tok_.kind == Tok::LParen) {
      advance();
      if (tok_.kind != Tok::RParen) {
        args.push_back(parse_term());
        while (tok_.kind == Tok::Comma) {
          advance();
          args.push_back(parse_term());
        }
      }
      expect(Tok::RParen, "')' or ','");
    }
    int n = static_cast<int>(args.size());
    auto [it, fresh] = arity_.emplace(id.text, n);
    if (!fresh && it->second != n)
      throw error(id, "symbol " + id.text + " used with arity " + std::to_string(n) +
                          " but earlier with arity " + std::to_string(it->second));
    return Term::app(intern_symbol(id.text, n), std::move(args));
  }

  Lexer lex_;
  Token tok_;
  std::map<std::string, VarId> vars_;
  std::map<std::string, int> arity_;
};

void collect_names(const Term &t, std::set<std::string> &out, Printer &pr) {
  for (const auto &v : variables(t)) out.insert(pr.name_of(v.var_id(), v.var_name()));
}

} // namespace

Trs parse_trs(std::string_view text) {
  Parser p(text);
  return p.parse_file();
}

Term parse_term(std::string_view text, const std::vector<std::string> &vars) {
  Parser p(text);
  return p.parse_single(vars);
}

std::string print_relative_trs(const Trs &s, const Trs &weak) {
  std::set<std::string> names;
  std::string body;
  auto emit = [&](const Rule &r, const char *arrow) {
    Printer pr;
    collect_names(r.lhs, names, pr);
    collect_names(r.rhs, names, pr);
    body += "  " + pr.print(r.lhs) + " " + arrow + " " + pr.print(r.rhs) + "\n";
  };
  for (const auto &r : s.rules) emit(r, "->");
  for (const auto &r : weak.rules) emit(r, "->=");
  std::string out = "(VAR";
  for (const auto &n : names) out += " " + n;
  out += ")\n(RULES\n" + body + ")\n";
  return out;
}

std::string print_trs(const Trs &r) { return print_relative_trs(r, Trs{}); }

} // namespace confluence

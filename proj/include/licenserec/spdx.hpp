// SPDX-License-Identifier: Apache-2.0
//
// SPDX-style license expression trees: parsing, canonical printing and
// normalization. Grammar precedence is WITH > AND > OR, parentheses group.
// Operand tokens are kept verbatim; comparisons are case-insensitive.
#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "licenserec/errors.hpp"
#include "licenserec/text.hpp"

namespace licenserec::spdx {

enum class NodeKind { Leaf, Conjunction, Disjunction };

struct Expression {
  NodeKind kind = NodeKind::Leaf;
  // leaf payload
  std::string token;
  bool or_later = false;
  std::string exception;  // empty when absent
  // compound payload
  std::vector<Expression> children;

  static Expression leaf(std::string tok, bool plus = false, std::string exc = {}) {
    Expression e;
    e.kind = NodeKind::Leaf;
    e.token = std::move(tok);
    e.or_later = plus;
    e.exception = std::move(exc);
    return e;
  }
  static Expression conjunction(std::vector<Expression> kids) {
    Expression e;
    e.kind = NodeKind::Conjunction;
    e.children = std::move(kids);
    return e;
  }
  static Expression disjunction(std::vector<Expression> kids) {
    Expression e;
    e.kind = NodeKind::Disjunction;
    e.children = std::move(kids);
    return e;
  }
};

inline bool operator==(const Expression& a, const Expression& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == NodeKind::Leaf)
    return iequals(a.token, b.token) && a.or_later == b.or_later &&
           iequals(a.exception, b.exception);
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!(a.children[i] == b.children[i])) return false;
  return true;
}
inline bool operator!=(const Expression& a, const Expression& b) { return !(a == b); }

// Canonical leaf spelling: token, '+' suffix, WITH clause.
inline std::string render_leaf(const Expression& e) {
  std::string out = e.token;
  if (e.or_later) out += '+';
  if (!e.exception.empty()) {
    out += " WITH ";
    out += e.exception;
  }
  return out;
}

inline std::string render(const Expression& e) {
  switch (e.kind) {
    case NodeKind::Leaf:
      return render_leaf(e);
    case NodeKind::Conjunction: {
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += " AND ";
        const Expression& c = e.children[i];
        if (c.kind == NodeKind::Disjunction)
          out += "(" + render(c) + ")";
        else
          out += render(c);
      }
      return out;
    }
    case NodeKind::Disjunction: {
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += " OR ";
        const Expression& c = e.children[i];
        if (c.kind == NodeKind::Disjunction)
          out += "(" + render(c) + ")";
        else
          out += render(c);
      }
      return out;
    }
  }
  return {};
}

namespace detail {

struct Token {
  enum Type { Ident, Plus, LParen, RParen, And, Or, With, End };
  Type type = End;
  std::string_view text;
  std::size_t pos = 0;
};

inline bool ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '-' || c == '.';
}

inline std::vector<Token> lex(std::string_view text) {
  std::vector<Token> toks;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') {
      toks.push_back({Token::LParen, text.substr(i, 1), i});
      ++i;
    } else if (c == ')') {
      toks.push_back({Token::RParen, text.substr(i, 1), i});
      ++i;
    } else if (c == '+') {
      toks.push_back({Token::Plus, text.substr(i, 1), i});
      ++i;
    } else if (ident_char(c)) {
      std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) ++i;
      std::string_view word = text.substr(start, i - start);
      Token::Type type = Token::Ident;
      if (iequals(word, "AND"))
        type = Token::And;
      else if (iequals(word, "OR"))
        type = Token::Or;
      else if (iequals(word, "WITH"))
        type = Token::With;
      toks.push_back({type, word, start});
    } else {
      throw SyntaxError("unexpected character '" + std::string(1, c) + "'", i);
    }
  }
  toks.push_back({Token::End, {}, text.size()});
  return toks;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Expression parse() {
    Expression e = parse_or();
    if (peek().type != Token::End)
      throw SyntaxError("unexpected trailing token '" + std::string(peek().text) + "'",
                        peek().pos);
    return e;
  }

 private:
  const Token& peek() const { return toks_[idx_]; }
  const Token& advance() { return toks_[idx_++]; }

  Expression parse_or() {
    std::vector<Expression> parts;
    parts.push_back(parse_and());
    while (peek().type == Token::Or) {
      advance();
      parts.push_back(parse_and());
    }
    if (parts.size() == 1) return std::move(parts[0]);
    return Expression::disjunction(std::move(parts));
  }

  Expression parse_and() {
    std::vector<Expression> parts;
    parts.push_back(parse_with());
    while (peek().type == Token::And) {
      advance();
      parts.push_back(parse_with());
    }
    if (parts.size() == 1) return std::move(parts[0]);
    return Expression::conjunction(std::move(parts));
  }

  Expression parse_with() {
    Expression operand = parse_primary();
    if (peek().type == Token::With) {
      const Token& with_tok = advance();
      if (operand.kind != NodeKind::Leaf || !operand.exception.empty())
        throw SyntaxError("WITH must follow a bare license id", with_tok.pos);
      if (peek().type != Token::Ident)
        throw SyntaxError("expected exception id after WITH", peek().pos);
      operand.exception = std::string(advance().text);
    }
    return operand;
  }

  Expression parse_primary() {
    const Token& tok = peek();
    if (tok.type == Token::Ident) {
      advance();
      Expression leaf = Expression::leaf(std::string(tok.text));
      // '+' counts only when glued to the identifier
      if (peek().type == Token::Plus && peek().pos == tok.pos + tok.text.size()) {
        advance();
        leaf.or_later = true;
      }
      return leaf;
    }
    if (tok.type == Token::LParen) {
      advance();
      Expression inner = parse_or();
      if (peek().type != Token::RParen)
        throw SyntaxError("missing closing parenthesis", peek().pos);
      advance();
      return inner;
    }
    throw SyntaxError("expected license identifier", tok.pos);
  }

  std::vector<Token> toks_;
  std::size_t idx_ = 0;
};

}  // namespace detail

inline Expression parse(std::string_view text) {
  if (trim_view(text).empty()) throw SyntaxError("empty expression", 0);
  return detail::Parser(detail::lex(text)).parse();
}

// Flattens nested same-operator nodes, sorts operands by canonical text,
// drops duplicates, and collapses single-child compounds. Idempotent.
inline Expression normalize(const Expression& e) {
  if (e.kind == NodeKind::Leaf) return e;
  std::vector<Expression> kids;
  for (const Expression& child : e.children) {
    Expression norm = normalize(child);
    if (norm.kind == e.kind) {
      for (Expression& grand : norm.children) kids.push_back(std::move(grand));
    } else {
      kids.push_back(std::move(norm));
    }
  }
  std::sort(kids.begin(), kids.end(), [](const Expression& a, const Expression& b) {
    std::string ra = render(a), rb = render(b);
    std::string fa = lower_copy(ra), fb = lower_copy(rb);
    if (fa != fb) return fa < fb;
    return ra < rb;
  });
  kids.erase(std::unique(kids.begin(), kids.end(),
                         [](const Expression& a, const Expression& b) {
                           return iequals(render(a), render(b));
                         }),
             kids.end());
  if (kids.size() == 1) return std::move(kids[0]);
  Expression out;
  out.kind = e.kind;
  out.children = std::move(kids);
  return out;
}

// Distinct leaf tokens ('+' kept as suffix, exceptions dropped), sorted
// case-insensitively with the first-seen spelling preserved.
inline std::vector<std::string> licenses_in(const Expression& e) {
  std::vector<std::string> out;
  auto walk = [&](auto&& self, const Expression& node) -> void {
    if (node.kind == NodeKind::Leaf) {
      std::string tok = node.token;
      if (node.or_later) tok += '+';
      for (const std::string& seen : out)
        if (iequals(seen, tok)) return;
      out.push_back(std::move(tok));
      return;
    }
    for (const Expression& c : node.children) self(self, c);
  };
  walk(walk, e);
  std::sort(out.begin(), out.end(), ILess{});
  return out;
}

// Token to use for catalog lookups: the '+' suffix is folded into the
// "-or-later" spelling so that e.g. GPL-2.0+ resolves like GPL-2.0-or-later.
inline std::string lookup_token(const Expression& leaf) {
  std::string tok = leaf.token;
  if (leaf.or_later) {
    std::string key = lower_copy(tok);
    if (!key.ends_with("-or-later")) tok += "-or-later";
  }
  return tok;
}

}  // namespace licenserec::spdx

#include "explika/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace explika {

namespace {

enum class Tok {
  Ident,
  Int,
  Dot,
  Comma,
  LParen,
  RParen,
  Slash,
  Bang,
  Amp,
  Pipe,
  Arrow,   // ->
  Iff,     // <->
  Causes,  // =>
  End,
};

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Dot: return "'.'";
    case Tok::Comma: return "','";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Slash: return "'/'";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::Causes: return "'=>'";
    case Tok::End: return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind = Tok::End;
  std::string_view text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) return out;
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  Token make(Tok kind, std::size_t start, std::size_t line, std::size_t col) const {
    return Token{kind, src_.substr(start, pos_ - start), SourceSpan{start, pos_, line, col}};
  }

  Token next() {
    const std::size_t start = pos_, line = line_, col = col_;
    if (pos_ >= src_.size()) return make(Tok::End, start, line, col);

    auto is_ident_start = [](char c) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    };
    auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };

    const char c = src_[pos_];
    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident(src_[pos_])) advance();
      return make(Tok::Ident, start, line, col);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      return make(Tok::Int, start, line, col);
    }
    auto rest_starts = [&](std::string_view s) { return src_.substr(pos_).starts_with(s); };
    auto take = [&](std::size_t n, Tok kind) {
      for (std::size_t i = 0; i < n; ++i) advance();
      return make(kind, start, line, col);
    };
    if (rest_starts("<->")) return take(3, Tok::Iff);
    if (rest_starts("->")) return take(2, Tok::Arrow);
    if (rest_starts("=>")) return take(2, Tok::Causes);
    switch (c) {
      case '.': return take(1, Tok::Dot);
      case ',': return take(1, Tok::Comma);
      case '(': return take(1, Tok::LParen);
      case ')': return take(1, Tok::RParen);
      case '/': return take(1, Tok::Slash);
      case '!': return take(1, Tok::Bang);
      case '&': return take(1, Tok::Amp);
      case '|': return take(1, Tok::Pipe);
      default: break;
    }
    advance();
    throw Error(ErrorKind::SyntaxError,
                "unexpected character '" + std::string(src_.substr(start, 1)) + "'",
                SourceSpan{start, pos_, line, col});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

constexpr int kMaxNesting = 256;

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  RawTheory theory() {
    RawTheory out;
    while (peek().kind != Tok::End) statement(out);
    return out;
  }

  RawAtom single_atom() {
    RawAtom a = atom();
    expect(Tok::End);
    return a;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() {
    Token t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    take();
    return true;
  }

  [[noreturn]] void fail(const Token& at, const std::string& what) const {
    throw Error(ErrorKind::SyntaxError, what, at.span);
  }

  Token expect(Tok kind) {
    if (peek().kind != kind && peek().kind == Tok::Ident &&
        (peek().text == "explains" || peek().text == "because_possible"))
      throw Error(ErrorKind::ExplanationInPremise,
                  "explanation atoms cannot occur in premises", peek().span);
    if (peek().kind != kind)
      fail(peek(), "expected " + std::string(describe(kind)) + ", found " +
                       (peek().kind == Tok::End ? std::string("end of input")
                                                : "'" + std::string(peek().text) + "'"));
    return take();
  }

  SourceSpan span_from(const SourceSpan& first) const {
    const SourceSpan& last = toks_[pos_ == 0 ? 0 : pos_ - 1].span;
    return SourceSpan{first.start, std::max(first.end, last.end), first.line, first.column};
  }

  Token identifier() {
    Token t = expect(Tok::Ident);
    if (t.text == "explains" || t.text == "because_possible")
      throw Error(ErrorKind::ExplanationInPremise,
                  "explanation atoms cannot occur in premises", t.span);
    return t;
  }

  void statement(RawTheory& out) {
    Token kw = expect(Tok::Ident);
    if (kw.text == "pred") {
      do out.predicates.push_back(predicate_spec());
      while (accept(Tok::Comma));
    } else if (kw.text == "const") {
      do {
        Token name = identifier();
        out.constants.push_back(RawConstant{std::string(name.text), name.span});
      } while (accept(Tok::Comma));
    } else if (kw.text == "isa") {
      Token sub = identifier();
      expect(Tok::Arrow);
      Token super = identifier();
      out.links.push_back(
          RawLink{std::string(sub.text), std::string(super.text), span_from(sub.span)});
    } else if (kw.text == "cause") {
      RawFormula f;
      f.kind = Formula::Kind::Causal;
      f.atom = atom();
      expect(Tok::Causes);
      f.effect = atom();
      f.span = span_from(*f.atom.span);
      out.formulas.push_back(std::move(f));
    } else if (kw.text == "fact") {
      depth_ = 0;
      out.formulas.push_back(formula());
    } else if (kw.text == "explains") {
      throw Error(ErrorKind::ExplanationInPremise, "explanation atoms cannot occur in premises",
                  kw.span);
    } else {
      fail(kw, "expected a statement keyword (pred, const, isa, cause, fact), found '" +
                   std::string(kw.text) + "'");
    }
    expect(Tok::Dot);
  }

  RawPredicate predicate_spec() {
    Token name = identifier();
    expect(Tok::Slash);
    Token arity_tok = expect(Tok::Int);
    if (arity_tok.text.size() > 4) fail(arity_tok, "arity too large");
    const std::size_t arity = std::stoul(std::string(arity_tok.text));
    RawPredicate p{std::string(name.text), std::vector<ParamMode>(arity, ParamMode::NA),
                   std::nullopt};
    if (peek().kind == Tok::LParen) {
      Token open = take();
      if (arity == 0) fail(open, "an arity-0 predicate takes no parameter modes");
      std::vector<ParamMode> modes;
      do {
        Token m = expect(Tok::Ident);
        if (m.text == "one")
          modes.push_back(ParamMode::One);
        else if (m.text == "all")
          modes.push_back(ParamMode::All);
        else if (m.text == "na")
          modes.push_back(ParamMode::NA);
        else
          fail(m, "unknown parameter mode '" + std::string(m.text) + "' (one, all, na)");
      } while (accept(Tok::Comma));
      expect(Tok::RParen);
      if (modes.size() != arity)
        throw Error(ErrorKind::ArityMismatch,
                    "predicate '" + p.name + "/" + std::to_string(arity) + "' lists " +
                        std::to_string(modes.size()) + " parameter mode(s)",
                    span_from(name.span));
      p.modes = std::move(modes);
    }
    p.span = span_from(name.span);
    return p;
  }

  RawAtom atom() {
    Token name = identifier();
    RawAtom a{std::string(name.text), {}, std::nullopt};
    if (accept(Tok::LParen)) {
      do a.args.emplace_back(identifier().text);
      while (accept(Tok::Comma));
      expect(Tok::RParen);
    }
    a.span = span_from(name.span);
    return a;
  }

  static RawFormula node(Formula::Kind kind, std::vector<RawFormula> kids, SourceSpan span) {
    RawFormula f;
    f.kind = kind;
    f.children = std::move(kids);
    f.span = span;
    return f;
  }

  RawFormula formula() {
    if (++depth_ > kMaxNesting) fail(peek(), "formula nesting too deep");
    RawFormula f = iff();
    --depth_;
    return f;
  }

  RawFormula iff() {
    const SourceSpan first = peek().span;
    RawFormula lhs = implication();
    while (accept(Tok::Iff)) {
      RawFormula rhs = implication();
      lhs = node(Formula::Kind::Iff, {std::move(lhs), std::move(rhs)}, span_from(first));
    }
    return lhs;
  }

  RawFormula implication() {
    const SourceSpan first = peek().span;
    RawFormula lhs = disjunction();
    if (!accept(Tok::Arrow)) return lhs;
    if (++depth_ > kMaxNesting) fail(peek(), "formula nesting too deep");
    RawFormula rhs = implication();
    --depth_;
    return node(Formula::Kind::Implies, {std::move(lhs), std::move(rhs)}, span_from(first));
  }

  RawFormula disjunction() {
    const SourceSpan first = peek().span;
    std::vector<RawFormula> parts;
    parts.push_back(conjunction());
    while (accept(Tok::Pipe)) parts.push_back(conjunction());
    if (parts.size() == 1) return std::move(parts.front());
    return node(Formula::Kind::Or, std::move(parts), span_from(first));
  }

  RawFormula conjunction() {
    const SourceSpan first = peek().span;
    std::vector<RawFormula> parts;
    parts.push_back(unary());
    while (accept(Tok::Amp)) parts.push_back(unary());
    if (parts.size() == 1) return std::move(parts.front());
    return node(Formula::Kind::And, std::move(parts), span_from(first));
  }

  RawFormula unary() {
    const SourceSpan first = peek().span;
    if (accept(Tok::Bang)) {
      if (++depth_ > kMaxNesting) fail(peek(), "formula nesting too deep");
      RawFormula inner = unary();
      --depth_;
      return node(Formula::Kind::Not, {std::move(inner)}, span_from(first));
    }
    return primary();
  }

  RawFormula primary() {
    const SourceSpan first = peek().span;
    if (accept(Tok::LParen)) {
      RawFormula inner = formula();
      if (peek().kind == Tok::Causes) {
        Token arrow = take();
        if (inner.kind != Formula::Kind::Atom || !inner.children.empty())
          fail(arrow, "the cause of a causal atom must be a single ground atom");
        RawFormula c;
        c.kind = Formula::Kind::Causal;
        c.atom = std::move(inner.atom);
        c.effect = atom();
        expect(Tok::RParen);
        c.span = span_from(first);
        return c;
      }
      expect(Tok::RParen);
      return inner;
    }
    RawFormula f;
    f.kind = Formula::Kind::Atom;
    f.atom = atom();
    f.span = f.atom.span;
    return f;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

// Precedence levels used by the renderer; higher binds tighter.
int precedence(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not: return 5;
    case Formula::Kind::Atom:
    case Formula::Kind::Causal: return 6;
  }
  return 0;
}

void render_into(std::string& out, const Formula& f, const Signature& sig, int min_prec) {
  const int prec = precedence(f.kind());
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  auto kids = f.children();
  switch (f.kind()) {
    case Formula::Kind::Atom: out += sig.atom_text(f.atom_id()); break;
    case Formula::Kind::Causal:
      out += '(';
      out += sig.atom_text(f.causal_atom().cause);
      out += " => ";
      out += sig.atom_text(f.causal_atom().effect);
      out += ')';
      break;
    case Formula::Kind::Not:
      out += '!';
      render_into(out, kids[0], sig, 5);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) out += f.kind() == Formula::Kind::And ? " & " : " | ";
        render_into(out, kids[i], sig, prec + 1);
      }
      break;
    case Formula::Kind::Implies:
      render_into(out, kids[0], sig, 3);
      out += " -> ";
      render_into(out, kids[1], sig, 2);
      break;
    case Formula::Kind::Iff:
      render_into(out, kids[0], sig, 1);
      out += " <-> ";
      render_into(out, kids[1], sig, 2);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

RawTheory parse_raw_theory(std::string_view text) { return Parser(text).theory(); }

Theory parse_theory(std::string_view text) { return validate_theory(parse_raw_theory(text)); }

AtomId parse_atom(std::string_view text, const Theory& theory) {
  RawAtom a = Parser(text).single_atom();
  try {
    return theory.signature().intern_atom(a.predicate, a.args);
  } catch (const Error& e) {
    throw Error(e.kind(), e.what(), a.span);
  }
}

std::string render_formula(const Formula& f, const Signature& sig) {
  std::string out;
  render_into(out, f, sig, 0);
  return out;
}

std::string render_theory(const Theory& theory) {
  const Signature& sig = theory.signature();
  std::string out;
  for (std::uint32_t i = 0; i < sig.predicate_count(); ++i) {
    const PredicateDecl& p = sig.predicate(PredicateId{i});
    out += "pred " + p.name + "/" + std::to_string(p.arity());
    if (p.arity() > 0) {
      out += '(';
      for (std::size_t k = 0; k < p.modes.size(); ++k) {
        if (k) out += ", ";
        out += to_string(p.modes[k]);
      }
      out += ')';
    }
    out += ".\n";
  }
  if (sig.constant_count() > 0) {
    out += "const ";
    for (std::uint32_t i = 0; i < sig.constant_count(); ++i) {
      if (i) out += ", ";
      out += sig.constant(ConstantId{i});
    }
    out += ".\n";
  }
  for (const OntoLink& link : theory.links()) {
    std::visit(
        [&](const auto& l) {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, ConstLink>)
            out += "isa " + sig.constant(l.sub) + " -> " + sig.constant(l.super) + ".\n";
          else
            out += "isa " + sig.predicate(l.sub).name + " -> " + sig.predicate(l.super).name +
                   ".\n";
        },
        link);
  }
  for (const Formula& f : theory.causal()) {
    if (f.kind() == Formula::Kind::Causal)
      out += "cause " + sig.atom_text(f.causal_atom().cause) + " => " +
             sig.atom_text(f.causal_atom().effect) + ".\n";
    else
      out += "fact " + render_formula(f, sig) + ".\n";
  }
  for (const Formula& f : theory.background()) out += "fact " + render_formula(f, sig) + ".\n";
  return out;
}

std::string render_proviso(const Proviso& p, const Signature& sig) {
  std::string out = "{";
  bool first = true;
  for (AtomId a : sorted_by_text(p, sig)) {
    if (!first) out += ", ";
    first = false;
    out += sig.atom_text(a);
  }
  out += '}';
  return out;
}

std::string render_explanation(const ExplanationAtom& atom, const Signature& sig) {
  return sig.atom_text(atom.explanans) + " explains " + sig.atom_text(atom.explanandum) +
         " because_possible " + render_proviso(atom.proviso, sig);
}

}  // namespace explika

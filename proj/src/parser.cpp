#include "multippl/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <unordered_set>

namespace multippl {
namespace {

enum class Tok { Ident, Int, Real, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

const std::unordered_set<std::string_view> kKeywords = {
    "let",  "in",      "if",      "then",     "else",  "ret",   "observe", "flip",
    "bern", "unif",    "uniform", "pois",     "poisson", "discrete", "true", "false",
    "fst",  "snd",     "while",   "push",     "head",  "tail",  "exact",   "sample",
    "fn"};

[[noreturn]] void fail(Span span, std::string message) {
  throw ParseError(Diagnostic{span, "SyntaxError", std::move(message)});
}

std::vector<Token> lex(std::string_view src) {
  static const char* const kPuncts[] = {"->", "<-", "==", "!=", "<=", ">=", "&&", "||", "{", "}", "(",
                                        ")",  "[",  "]",  ",",  ";",  ":",  "~",  "=",  "<", ">", "+",
                                        "-",  "*",  "/",  "!"};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const Span span{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), span});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      bool is_real = false;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        is_real = true;
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          is_real = true;
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      out.push_back({is_real ? Tok::Real : Tok::Int, std::string(src.substr(i, j - i)), span});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* p : kPuncts) {
      const std::string_view punct(p);
      if (src.substr(i, punct.size()) == punct) {
        out.push_back({Tok::Punct, std::string(punct), span});
        advance(punct.size());
        matched = true;
        break;
      }
    }
    if (!matched) fail(span, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

std::optional<double> constant_of(const Expr& e) {
  if (e.kind == ExprKind::RealLit) return e.real;
  if (e.kind == ExprKind::IntLit) return static_cast<double>(e.integer);
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Program program() {
    Program p;
    while (true) {
      if ((is("exact") || is("sample")) && peek(1).text == "fn") {
        p.functions.push_back(function());
        continue;
      }
      break;
    }
    if (is("exact")) {
      next();
      p.main_lang = Lang::Disc;
      p.main = block(Lang::Disc);
    } else if (is("sample")) {
      next();
      p.main_lang = Lang::Cont;
      p.main = block(Lang::Cont);
    } else {
      unexpected({"exact", "sample"});
    }
    if (cur().kind != Tok::End) unexpected({"end of input"});
    return p;
  }

  ExprPtr lone_expression(Lang lang) {
    ExprPtr e = lang == Lang::Cont ? seq() : expr(Lang::Disc);
    if (cur().kind != Tok::End) unexpected({"end of input"});
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t k) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool is(std::string_view text) const {
    return (cur().kind == Tok::Punct || cur().kind == Tok::Ident) && cur().text == text;
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    next();
    return true;
  }

  [[noreturn]] void unexpected(std::initializer_list<std::string_view> expected) const {
    std::string msg = "expected ";
    if (expected.size() > 1) msg += "one of ";
    bool first = true;
    for (auto e : expected) {
      if (!first) msg += ", ";
      first = false;
      msg += "'" + std::string(e) + "'";
    }
    msg += ", found " + (cur().kind == Tok::End ? std::string("end of input") : "'" + cur().text + "'");
    fail(cur().span, msg);
  }

  Token expect(std::string_view text) {
    if (!is(text)) unexpected({text});
    return next();
  }

  std::string identifier() {
    if (cur().kind != Tok::Ident || kKeywords.count(cur().text)) unexpected({"identifier"});
    return next().text;
  }

  long long integer_literal() {
    if (cur().kind != Tok::Int) unexpected({"integer literal"});
    const Token t = next();
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) fail(t.span, "integer literal out of range");
    return v;
  }

  // ---- declarations -------------------------------------------------------

  FunctionDef function() {
    FunctionDef f;
    f.span = cur().span;
    f.lang = next().text == "exact" ? Lang::Disc : Lang::Cont;
    expect("fn");
    f.name = identifier();
    expect("(");
    while (!is(")")) {
      Param prm;
      prm.span = cur().span;
      prm.name = identifier();
      expect(":");
      prm.type = type();
      f.params.push_back(std::move(prm));
      if (!accept(",")) break;
    }
    expect(")");
    expect("->");
    f.ret = type();
    f.body = block(f.lang);
    return f;
  }

  Type type() {
    const Token t = cur();
    if (accept("(")) {
      if (accept(")")) return Type::unit();
      std::vector<Type> items{type()};
      while (accept(",")) items.push_back(type());
      expect(")");
      Type out = items.back();
      for (std::size_t i = items.size() - 1; i-- > 0;) out = Type::prod(items[i], out);
      return out;
    }
    if (t.kind != Tok::Ident) unexpected({"type"});
    next();
    if (t.text == "Bool" || t.text == "bool") return Type::boolean();
    if (t.text == "Float" || t.text == "Real" || t.text == "real" || t.text == "float") return Type::real();
    if (t.text == "Unit" || t.text == "unit") return Type::unit();
    if (t.text == "Int" || t.text == "int") {
      if (accept("<")) {
        const long long arity = integer_literal();
        expect(">");
        return Type::integer(static_cast<int>(arity));
      }
      return Type::integer();
    }
    if (t.text == "List") {
      expect("<");
      Type elem = type();
      expect(">");
      return Type::list(std::move(elem));
    }
    fail(t.span, "unknown type '" + t.text + "'");
  }

  // ---- blocks and statements ----------------------------------------------

  ExprPtr block(Lang lang) {
    expect("{");
    ExprPtr body = lang == Lang::Disc ? expr(Lang::Disc) : seq();
    expect("}");
    return body;
  }

  // Cont statement sequence up to (not including) the closing brace.
  ExprPtr seq() {
    const Span span = cur().span;
    if (cur().kind == Tok::Ident && !kKeywords.count(cur().text) &&
        (peek(1).text == "~" || peek(1).text == "<-")) {
      std::string name = next().text;
      const bool is_assign = next().text == "<-";
      ExprPtr value = expr(Lang::Cont);
      if (is_assign) value = make_expr(ExprKind::Ret, value->span, {value});
      expect(";");
      return make_let(std::move(name), std::move(value), seq(), span);
    }
    ExprPtr e = expr(Lang::Cont);
    if (accept(";")) return make_let("_", std::move(e), seq(), span);
    return e;
  }

  // ---- expressions --------------------------------------------------------

  ExprPtr expr(Lang lang, bool observe_sugar = true) {
    const Span span = cur().span;
    if (accept("let")) {
      std::string name = identifier();
      expect("=");
      ExprPtr value = expr(lang, false);
      expect("in");
      return make_let(std::move(name), std::move(value), expr(lang), span);
    }
    if (lang == Lang::Disc && accept("observe")) {
      ExprPtr cond = or_expr(lang);
      ExprPtr obs = make_expr(ExprKind::Observe, span, {std::move(cond)});
      if (observe_sugar && accept("in")) return make_let("_", std::move(obs), expr(lang), span);
      return obs;
    }
    if (is("if")) return if_expr(lang);
    if (accept("ret")) return make_expr(ExprKind::Ret, span, {or_expr(lang)});
    return or_expr(lang);
  }

  ExprPtr if_expr(Lang lang) {
    const Span span = expect("if").span;
    ExprPtr guard = or_expr(lang);
    ExprPtr thn, els;
    if (accept("then")) {
      thn = expr(lang);
      expect("else");
      els = expr(lang);
    } else if (is("{")) {
      thn = block(lang);
      expect("else");
      els = is("if") ? if_expr(lang) : block(lang);
    } else {
      unexpected({"then", "{"});
    }
    return make_expr(ExprKind::Ite, span, {std::move(guard), std::move(thn), std::move(els)});
  }

  ExprPtr binary(ExprKind kind, Span span, ExprPtr a, ExprPtr b) {
    return make_expr(kind, span, {std::move(a), std::move(b)});
  }

  ExprPtr or_expr(Lang lang) {
    ExprPtr e = and_expr(lang);
    while (is("||")) {
      const Span span = next().span;
      e = binary(ExprKind::Or, span, std::move(e), and_expr(lang));
    }
    return e;
  }

  ExprPtr and_expr(Lang lang) {
    ExprPtr e = cmp_expr(lang);
    while (is("&&")) {
      const Span span = next().span;
      e = binary(ExprKind::And, span, std::move(e), cmp_expr(lang));
    }
    return e;
  }

  ExprPtr cmp_expr(Lang lang) {
    ExprPtr e = add_expr(lang);
    const Span span = cur().span;
    if (accept("==")) return binary(ExprKind::Eq, span, std::move(e), add_expr(lang));
    if (accept("!=")) return make_expr(ExprKind::Not, span, {binary(ExprKind::Eq, span, std::move(e), add_expr(lang))});
    if (accept("<=")) return binary(ExprKind::Le, span, std::move(e), add_expr(lang));
    if (accept("<")) return binary(ExprKind::Lt, span, std::move(e), add_expr(lang));
    if (accept(">=")) {
      ExprPtr rhs = add_expr(lang);
      return binary(ExprKind::Le, span, std::move(rhs), std::move(e));
    }
    if (accept(">")) {
      ExprPtr rhs = add_expr(lang);
      return binary(ExprKind::Lt, span, std::move(rhs), std::move(e));
    }
    return e;
  }

  ExprPtr add_expr(Lang lang) {
    ExprPtr e = mul_expr(lang);
    while (is("+") || is("-")) {
      const Token op = next();
      e = binary(op.text == "+" ? ExprKind::Add : ExprKind::Sub, op.span, std::move(e), mul_expr(lang));
    }
    return e;
  }

  ExprPtr mul_expr(Lang lang) {
    ExprPtr e = unary(lang);
    while (is("*") || is("/")) {
      const Token op = next();
      ExprPtr rhs = unary(lang);
      if (op.text == "*") {
        e = binary(ExprKind::Mul, op.span, std::move(e), std::move(rhs));
        continue;
      }
      const auto num = constant_of(*e);
      const auto den = constant_of(*rhs);
      if (!num || !den) fail(op.span, "division is only supported between numeric constants");
      if (*den == 0.0) fail(op.span, "division by zero in constant expression");
      e = make_real(*num / *den, e->span);
    }
    return e;
  }

  ExprPtr unary(Lang lang) {
    const Span span = cur().span;
    if (accept("!")) return make_expr(ExprKind::Not, span, {unary(lang)});
    if (accept("-")) {
      ExprPtr arg = unary(lang);
      if (arg->kind == ExprKind::RealLit) return make_real(-arg->real, span);
      if (arg->kind == ExprKind::IntLit) return make_int(-arg->integer, span);
      return make_expr(ExprKind::Neg, span, {std::move(arg)});
    }
    return postfix(lang);
  }

  ExprPtr postfix(Lang lang) {
    ExprPtr e = atom(lang);
    while (is("[")) {
      const Span span = next().span;
      auto idx = make_expr(ExprKind::Index, span, {std::move(e)});
      idx->integer = integer_literal();
      expect("]");
      e = std::move(idx);
    }
    return e;
  }

  std::vector<ExprPtr> arguments(Lang lang) {
    std::vector<ExprPtr> args;
    expect("(");
    while (!is(")")) {
      args.push_back(expr(lang));
      if (!accept(",")) break;
    }
    expect(")");
    return args;
  }

  ExprPtr boundary_body(Lang inner) {
    if (is("{")) return block(inner);
    expect("(");
    ExprPtr e = expr(inner);
    expect(")");
    return e;
  }

  ExprPtr atom(Lang lang) {
    const Token t = cur();
    const Span span = t.span;
    if (t.kind == Tok::Int) return make_int(integer_literal(), span);
    if (t.kind == Tok::Real) {
      next();
      return make_real(std::stod(t.text), span);
    }
    if (accept("(")) {
      if (accept(")")) return make_expr(ExprKind::Unit, span);
      std::vector<ExprPtr> items{expr(lang)};
      while (accept(",")) items.push_back(expr(lang));
      expect(")");
      ExprPtr out = items.back();
      for (std::size_t i = items.size() - 1; i-- > 0;)
        out = make_expr(ExprKind::Pair, items[i]->span, {items[i], out});
      return out;
    }
    if (is("{")) return block(lang);
    if (accept("[")) {
      expect("]");
      return make_expr(ExprKind::Nil, span);
    }
    if (t.kind != Tok::Ident) unexpected({"expression"});

    const std::string& w = t.text;
    if (w == "true" || w == "false") {
      next();
      return make_expr(w == "true" ? ExprKind::True : ExprKind::False, span);
    }
    if (w == "let" || w == "if" || w == "ret" || (w == "observe" && lang == Lang::Disc)) return expr(lang);
    if (w == "fst" || w == "snd") {
      next();
      return make_expr(w == "fst" ? ExprKind::Fst : ExprKind::Snd, span, {postfix(lang)});
    }
    if (w == "flip" || w == "bern") {
      next();
      return make_expr(ExprKind::Flip, span, {add_expr(Lang::Cont)});
    }
    if (w == "pois" || w == "poisson") {
      next();
      return make_expr(ExprKind::Pois, span, {add_expr(Lang::Cont)});
    }
    if (w == "unif" || w == "uniform") {
      next();
      if (is("(")) {
        auto args = arguments(Lang::Cont);
        if (args.size() != 2) fail(span, "unif expects two arguments");
        return make_expr(ExprKind::Unif, span, std::move(args));
      }
      ExprPtr lo = unary(Lang::Cont);
      ExprPtr hi = unary(Lang::Cont);
      return make_expr(ExprKind::Unif, span, {std::move(lo), std::move(hi)});
    }
    if (w == "discrete") {
      next();
      auto args = arguments(Lang::Cont);
      if (args.empty()) fail(span, "discrete expects at least one probability");
      return make_expr(ExprKind::Discrete, span, std::move(args));
    }
    if (w == "observe") {  // Cont form: observe(e, dist)
      next();
      expect("(");
      ExprPtr observed = expr(Lang::Cont);
      expect(",");
      ExprPtr dist = unary(Lang::Cont);
      if (dist->kind != ExprKind::Flip && dist->kind != ExprKind::Unif && dist->kind != ExprKind::Pois)
        fail(dist->span, "observe expects a flip, unif or pois distribution");
      expect(")");
      return make_expr(ExprKind::Obs, span, {std::move(observed), std::move(dist)});
    }
    if (w == "sample") {
      if (lang != Lang::Disc) fail(span, "'sample' boundary is only valid inside an exact term");
      next();
      return make_expr(ExprKind::Sample, span, {is("{") ? block(Lang::Cont) : boundary_body(Lang::Cont)});
    }
    if (w == "exact") {
      if (lang != Lang::Cont) fail(span, "'exact' boundary is only valid inside a sample term");
      next();
      return make_expr(ExprKind::Exact, span, {boundary_body(Lang::Disc)});
    }
    if (w == "while") {
      next();
      ExprPtr cond = or_expr(Lang::Cont);
      ExprPtr body = block(Lang::Cont);
      return make_expr(ExprKind::While, span, {std::move(cond), std::move(body)});
    }
    if (w == "push") {
      next();
      auto args = arguments(lang);
      if (args.size() != 2) fail(span, "push expects two arguments");
      return make_expr(ExprKind::Push, span, std::move(args));
    }
    if (w == "head" || w == "tail") {
      next();
      auto args = arguments(lang);
      if (args.size() != 1) fail(span, w + " expects one argument");
      return make_expr(w == "head" ? ExprKind::Head : ExprKind::Tail, span, std::move(args));
    }
    std::string name = identifier();
    if (is("(")) {
      auto call = make_expr(ExprKind::Call, span, arguments(lang));
      call->name = std::move(name);
      return call;
    }
    return make_var(std::move(name), span);
  }
};

}  // namespace

Program parse(std::string_view source) { return Parser(source).program(); }

ExprPtr parse_expression(std::string_view source, Lang lang) { return Parser(source).lone_expression(lang); }

}  // namespace multippl

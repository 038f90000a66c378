#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <set>

#include "bmv/parse.hpp"
#include "bmv/typecheck.hpp"
#include "lexer.hpp"

namespace bmv
{

namespace
{

using detail::Token;
using detail::TokenKind;

const std::set<std::string, std::less<>> kReserved = {
  "model", "class",   "abstract", "attributes", "association", "between", "role", "end", "constraints",
  "context", "inv",   "and",      "or",         "not",         "implies", "div",  "true", "false",
};

struct SyntaxError
{
  Diagnostic diagnostic;
};

class Parser
{
public:
  Parser(std::string_view source, std::string file, std::vector<Token> tokens)
  : source_(source), file_(std::move(file)), tokens_(std::move(tokens))
  {
  }

  // ---- token helpers -----------------------------------------------------

  [[nodiscard]] const Token & peek(std::size_t k = 0) const
  {
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }

  [[nodiscard]] bool at_end() const { return peek().kind == TokenKind::End; }

  const Token & next()
  {
    const Token & t = tokens_[pos_];
    prev_end_ = t.end;
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool accept(std::string_view word)
  {
    if (peek().is(word)) {
      next();
      return true;
    }
    return false;
  }

  void expect(std::string_view word)
  {
    if (!accept(word)) {
      fail(peek(), "expected `" + std::string(word) + "' but found " + describe(peek()));
    }
  }

  static bool is_name(const Token & t)
  {
    return t.kind == TokenKind::Identifier && kReserved.find(t.text) == kReserved.end();
  }

  std::string expect_name(const char * what)
  {
    if (!is_name(peek())) {
      fail(peek(), std::string("expected ") + what + " but found " + describe(peek()));
    }
    return next().text;
  }

  [[noreturn]] void fail(const Token & at, std::string message, std::string code = "SyntaxError") const
  {
    throw SyntaxError{{DiagnosticKind::Parse, std::move(code), std::move(message), at.location, {}}};
  }

  static std::string describe(const Token & t)
  {
    switch (t.kind) {
      case TokenKind::End: return "end of input";
      case TokenKind::String: return "string '" + t.text + "'";
      default: return "`" + t.text + "'";
    }
  }

  [[nodiscard]] std::size_t prev_end() const { return prev_end_; }
  [[nodiscard]] std::string_view source() const { return source_; }

  // ---- OCL expressions ---------------------------------------------------

  ExprPtr expression() { return implies_expr(); }

  // ---- models --------------------------------------------------------------

  Model model()
  {
    Model m;
    m.location = peek().location;
    expect("model");
    m.name = expect_name("model name");
    while (!at_end()) {
      if (peek().is("abstract") || peek().is("class")) {
        m.classes.push_back(class_decl());
      } else if (peek().is("association")) {
        m.associations.push_back(association_decl());
      } else if (accept("constraints")) {
        continue;
      } else if (peek().is("context")) {
        context_decl(m);
      } else {
        fail(peek(), "expected `class', `association', `constraints' or `context' but found " + describe(peek()));
      }
    }
    return m;
  }

private:
  std::shared_ptr<Expr> make(ExprKind kind, const Token & start) const
  {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->location = start.location;
    return e;
  }

  ExprPtr finish(std::shared_ptr<Expr> e, const Token & start) const
  {
    e->text = detail::slice_text(source_, start.begin, prev_end_);
    return e;
  }

  ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, const Token & start) const
  {
    auto e = make(ExprKind::Binary, start);
    e->binary_op = op;
    e->operands = {std::move(lhs), std::move(rhs)};
    return finish(std::move(e), start);
  }

  ExprPtr implies_expr()
  {
    const Token start = peek();
    auto lhs = or_expr();
    while (accept("implies")) {
      lhs = binary(BinaryOp::Implies, lhs, or_expr(), start);
    }
    return lhs;
  }

  ExprPtr or_expr()
  {
    const Token start = peek();
    auto lhs = and_expr();
    while (accept("or")) {
      lhs = binary(BinaryOp::Or, lhs, and_expr(), start);
    }
    return lhs;
  }

  ExprPtr and_expr()
  {
    const Token start = peek();
    auto lhs = equality_expr();
    while (accept("and")) {
      lhs = binary(BinaryOp::And, lhs, equality_expr(), start);
    }
    return lhs;
  }

  ExprPtr equality_expr()
  {
    const Token start = peek();
    auto lhs = relational_expr();
    for (;;) {
      if (accept("=")) {
        lhs = binary(BinaryOp::Equal, lhs, relational_expr(), start);
      } else if (accept("<>")) {
        lhs = binary(BinaryOp::NotEqual, lhs, relational_expr(), start);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr relational_expr()
  {
    const Token start = peek();
    auto lhs = additive_expr();
    for (;;) {
      if (accept("<")) {
        lhs = binary(BinaryOp::Less, lhs, additive_expr(), start);
      } else if (accept("<=")) {
        lhs = binary(BinaryOp::LessEqual, lhs, additive_expr(), start);
      } else if (accept(">")) {
        lhs = binary(BinaryOp::Greater, lhs, additive_expr(), start);
      } else if (accept(">=")) {
        lhs = binary(BinaryOp::GreaterEqual, lhs, additive_expr(), start);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr additive_expr()
  {
    const Token start = peek();
    auto lhs = multiplicative_expr();
    for (;;) {
      if (accept("+")) {
        lhs = binary(BinaryOp::Plus, lhs, multiplicative_expr(), start);
      } else if (accept("-")) {
        lhs = binary(BinaryOp::Minus, lhs, multiplicative_expr(), start);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr multiplicative_expr()
  {
    const Token start = peek();
    auto lhs = unary_expr();
    for (;;) {
      if (accept("*")) {
        lhs = binary(BinaryOp::Times, lhs, unary_expr(), start);
      } else if (accept("div")) {
        lhs = binary(BinaryOp::Div, lhs, unary_expr(), start);
      } else if (peek().is("/")) {
        fail(peek(), "real division `/' is not supported; use `div' for integers", "UnsupportedOperation");
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary_expr()
  {
    const Token start = peek();
    if (accept("not") || accept("-")) {
      auto e = make(ExprKind::Unary, start);
      e->unary_op = start.is("not") ? UnaryOp::Not : UnaryOp::Negate;
      e->operands = {unary_expr()};
      return finish(std::move(e), start);
    }
    return postfix_expr();
  }

  std::vector<ExprPtr> argument_list()
  {
    std::vector<ExprPtr> args;
    if (peek().is(")")) {
      return args;
    }
    args.push_back(expression());
    while (accept(",")) {
      args.push_back(expression());
    }
    return args;
  }

  ExprPtr postfix_expr()
  {
    const Token start = peek();
    ExprPtr current = primary_expr();
    for (;;) {
      if (accept(".")) {
        const std::string name = expect_name("property or operation name");
        if (accept("(")) {
          auto e = make(ExprKind::DotCall, start);
          e->name = name;
          e->operands.push_back(current);
          for (auto & a : argument_list()) e->operands.push_back(std::move(a));
          expect(")");
          current = finish(std::move(e), start);
        } else {
          auto e = make(ExprKind::Property, start);
          e->name = name;
          e->operands = {current};
          current = finish(std::move(e), start);
        }
      } else if (accept("->")) {
        auto e = make(ExprKind::ArrowCall, start);
        e->name = expect_name("collection operation name");
        expect("(");
        e->operands.push_back(current);
        iterator_declarator(*e);
        for (auto & a : argument_list()) e->operands.push_back(std::move(a));
        expect(")");
        current = finish(std::move(e), start);
      } else {
        return current;
      }
    }
  }

  // `v |`, `v : T |`, `a, b |` in front of an iterator body; absent otherwise.
  void iterator_declarator(Expr & e)
  {
    const std::size_t save_pos = pos_;
    const std::size_t save_end = prev_end_;
    std::vector<std::string> vars;
    std::vector<std::string> types;
    while (is_name(peek())) {
      vars.push_back(next().text);
      std::string type;
      if (accept(":")) {
        if (!is_name(peek())) break;
        type = next().text;
      }
      types.push_back(type);
      if (!accept(",")) break;
    }
    if (!vars.empty() && vars.size() == types.size() && accept("|")) {
      e.variables = std::move(vars);
      e.variable_types = std::move(types);
      return;
    }
    pos_ = save_pos;
    prev_end_ = save_end;
  }

  ExprPtr primary_expr()
  {
    const Token start = peek();
    switch (start.kind) {
      case TokenKind::Integer: {
        next();
        std::int64_t v = 0;
        auto res = std::from_chars(start.text.data(), start.text.data() + start.text.size(), v);
        if (res.ec != std::errc()) {
          fail(start, "integer literal `" + start.text + "' is out of range", "LiteralOutOfRange");
        }
        auto e = make(ExprKind::Literal, start);
        e->literal = v;
        return finish(std::move(e), start);
      }
      case TokenKind::Real: {
        next();
        auto e = make(ExprKind::Literal, start);
        e->literal = std::strtod(start.text.c_str(), nullptr);
        return finish(std::move(e), start);
      }
      case TokenKind::String: {
        next();
        auto e = make(ExprKind::Literal, start);
        e->literal = start.text;
        return finish(std::move(e), start);
      }
      case TokenKind::Identifier: break;
      default:
        if (accept("(")) {
          auto inner = expression();
          expect(")");
          return inner;
        }
        fail(start, "expected an expression but found " + describe(start));
    }

    if (start.is("true") || start.is("false")) {
      next();
      auto e = make(ExprKind::Literal, start);
      e->literal = start.is("true");
      return finish(std::move(e), start);
    }
    static const std::map<std::string, CollectionKind, std::less<>> kCollections = {
      {"Set", CollectionKind::Set},
      {"Bag", CollectionKind::Bag},
      {"Sequence", CollectionKind::Sequence},
      {"OrderedSet", CollectionKind::OrderedSet},
    };
    if (auto it = kCollections.find(start.text); it != kCollections.end() && peek(1).is("{")) {
      next();
      next();
      auto e = make(ExprKind::CollectionLiteral, start);
      e->collection_kind = it->second;
      if (!peek().is("}")) {
        e->operands.push_back(expression());
        while (accept(",")) e->operands.push_back(expression());
      }
      expect("}");
      return finish(std::move(e), start);
    }
    if (!is_name(start)) {
      fail(start, "unexpected keyword `" + start.text + "'");
    }
    next();
    auto e = make(ExprKind::Identifier, start);
    e->name = start.text;
    return finish(std::move(e), start);
  }

  Multiplicity multiplicity()
  {
    auto bound = [&](bool allow_star) -> std::optional<std::int64_t> {
      const Token & t = peek();
      if (allow_star && t.is("*")) {
        next();
        return std::nullopt;
      }
      if (t.kind != TokenKind::Integer) {
        fail(t, "expected a multiplicity bound but found " + describe(t));
      }
      next();
      return std::stoll(t.text);
    };
    Multiplicity m;
    if (peek().is("*")) {
      next();
      return m;
    }
    m.lower = *bound(false);
    if (accept("..")) {
      m.upper = bound(true);
    } else {
      m.upper = m.lower;
    }
    return m;
  }

  Class class_decl()
  {
    Class c;
    c.is_abstract = accept("abstract");
    c.location = peek().location;
    expect("class");
    c.location = peek().location;
    c.name = expect_name("class name");
    if (accept("<")) {
      c.parents.push_back(expect_name("parent class name"));
      while (accept(",")) c.parents.push_back(expect_name("parent class name"));
    }
    if (accept("attributes")) {
      while (is_name(peek())) {
        Attribute a;
        a.location = peek().location;
        a.name = next().text;
        expect(":");
        const Token & type_tok = peek();
        const std::string type = expect_name("attribute type");
        if (!parse_basic_type(type, a.type)) {
          fail(type_tok, "unsupported attribute type `" + type + "'; use Integer, Real, String or Boolean",
               "UnsupportedType");
        }
        accept(";");
        c.attributes.push_back(std::move(a));
      }
    }
    expect("end");
    return c;
  }

  AssociationEnd association_end()
  {
    AssociationEnd end;
    end.location = peek().location;
    end.class_name = expect_name("class name");
    expect("[");
    end.multiplicity = multiplicity();
    expect("]");
    if (accept("role")) {
      end.role = expect_name("role name");
    } else {
      end.role = end.class_name;
      end.role[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(end.role[0])));
    }
    accept(";");
    return end;
  }

  Association association_decl()
  {
    Association a;
    expect("association");
    a.location = peek().location;
    a.name = expect_name("association name");
    expect("between");
    a.ends[0] = association_end();
    a.ends[1] = association_end();
    if (!peek().is("end")) {
      fail(peek(), "only binary associations are supported", "UnsupportedAssociation");
    }
    expect("end");
    return a;
  }

  void context_decl(Model & m)
  {
    expect("context");
    const std::string cls = expect_name("context class name");
    int unnamed = 0;
    if (!peek().is("inv")) {
      fail(peek(), "expected `inv' after context " + cls);
    }
    while (peek().is("inv")) {
      Invariant inv;
      inv.location = peek().location;
      next();
      inv.context = cls;
      if (is_name(peek()) && peek(1).is(":")) {
        inv.name = next().text;
      } else {
        inv.name = "inv" + std::to_string(++unnamed);
      }
      expect(":");
      const Token start = peek();
      inv.body = expression();
      inv.text = detail::slice_text(source_, start.begin, prev_end_);
      m.invariants.push_back(std::move(inv));
    }
  }

  std::string_view source_;
  std::string file_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t prev_end_ = 0;

  friend class StateCommandReader;
};

Diagnostic state_error(std::string code, std::string message, const SourceLocation & loc)
{
  return Diagnostic{DiagnosticKind::State, std::move(code), std::move(message), loc, {}};
}

// Executes `!create`, `!set`, `!insert` commands against a model.
class StateCommandReader
{
public:
  StateCommandReader(Parser & p, const Model & model) : p_(p), model_(model) {}

  void run(SystemState & state, std::vector<Diagnostic> & errors)
  {
    while (!p_.at_end()) {
      p_.expect("!");
      const Token & cmd = p_.peek();
      if (cmd.is("create")) {
        p_.next();
        create(state, errors);
      } else if (cmd.is("set")) {
        p_.next();
        set(state, errors);
      } else if (cmd.is("insert")) {
        p_.next();
        insert(state, errors);
      } else {
        p_.fail(cmd, "unknown command " + Parser::describe(cmd) + "; expected create, set or insert");
      }
    }
  }

private:
  void create(SystemState & state, std::vector<Diagnostic> & errors)
  {
    std::vector<Token> names{p_.peek()};
    p_.expect_name("object name");
    while (p_.accept(",")) {
      names.push_back(p_.peek());
      p_.expect_name("object name");
    }
    p_.expect(":");
    const Token cls_tok = p_.peek();
    const std::string cls = p_.expect_name("class name");
    const Class * c = model_.find_class(cls);
    if (c == nullptr) {
      errors.push_back(state_error("UnknownClass", "unknown class `" + cls + "'", cls_tok.location));
      return;
    }
    if (c->is_abstract) {
      errors.push_back(state_error("AbstractInstantiation",
                                   "class `" + cls + "' is abstract and cannot be instantiated", cls_tok.location));
      return;
    }
    for (const auto & n : names) {
      if (state.objects.count(n.text) > 0) {
        errors.push_back(state_error("DuplicateObjectName", "object `" + n.text + "' already exists", n.location));
        continue;
      }
      state.objects.emplace(n.text, ObjectState{cls, {}});
    }
  }

  Value literal(const Token & at)
  {
    bool negative = p_.accept("-");
    const Token t = p_.peek();
    switch (t.kind) {
      case TokenKind::Integer:
        p_.next();
        return Value::integer(negative ? -std::stoll(t.text) : std::stoll(t.text));
      case TokenKind::Real:
        p_.next();
        return Value::real(negative ? -std::strtod(t.text.c_str(), nullptr) : std::strtod(t.text.c_str(), nullptr));
      case TokenKind::String:
        if (negative) break;
        p_.next();
        return Value::string(t.text);
      case TokenKind::Identifier:
        if (negative) break;
        if (t.is("true") || t.is("false")) {
          p_.next();
          return Value::boolean(t.is("true"));
        }
        if (t.is("null") || t.is("undefined")) {
          p_.next();
          return Value::undefined();
        }
        break;
      default: break;
    }
    p_.fail(at, "expected a literal value but found " + Parser::describe(t));
  }

  void set(SystemState & state, std::vector<Diagnostic> & errors)
  {
    const Token obj_tok = p_.peek();
    const std::string obj = p_.expect_name("object name");
    p_.expect(".");
    const Token attr_tok = p_.peek();
    const std::string attr = p_.expect_name("attribute name");
    p_.expect(":=");
    const Token value_tok = p_.peek();
    Value v = literal(value_tok);

    auto it = state.objects.find(obj);
    if (it == state.objects.end()) {
      errors.push_back(state_error("UnknownObject", "unknown object `" + obj + "'", obj_tok.location));
      return;
    }
    const Attribute * a = model_.find_attribute(it->second.class_name, attr);
    if (a == nullptr) {
      errors.push_back(state_error("UnknownAttribute",
                                   "class `" + it->second.class_name + "' has no attribute `" + attr + "'",
                                   attr_tok.location));
      return;
    }
    if (!v.is_undefined()) {
      const bool ok = (a->type.is(TypeKind::Integer) && v.is_integer()) ||
                      (a->type.is(TypeKind::Real) && v.is_number()) ||
                      (a->type.is(TypeKind::String) && v.is_string()) ||
                      (a->type.is(TypeKind::Boolean) && v.is_boolean());
      if (!ok) {
        errors.push_back(state_error("TypeMismatch",
                                     "value " + to_string(v) + " does not fit attribute `" + attr + "' of type " +
                                       to_string(a->type),
                                     value_tok.location));
        return;
      }
      if (a->type.is(TypeKind::Real) && v.is_integer()) {
        v = Value::real(static_cast<double>(v.as_integer()));
      }
    }
    it->second.attributes[attr] = std::move(v);
  }

  void insert(SystemState & state, std::vector<Diagnostic> & errors)
  {
    p_.expect("(");
    const Token a_tok = p_.peek();
    const std::string a = p_.expect_name("object name");
    p_.expect(",");
    const Token b_tok = p_.peek();
    const std::string b = p_.expect_name("object name");
    p_.expect(")");
    if (!p_.peek().is("into")) {
      p_.fail(p_.peek(), "expected `into' but found " + Parser::describe(p_.peek()));
    }
    p_.next();
    const Token assoc_tok = p_.peek();
    const std::string assoc = p_.expect_name("association name");

    const Association * as = model_.find_association(assoc);
    if (as == nullptr) {
      errors.push_back(state_error("UnknownAssociation", "unknown association `" + assoc + "'", assoc_tok.location));
      return;
    }
    const std::array<std::pair<const Token *, std::string>, 2> ends = {{{&a_tok, a}, {&b_tok, b}}};
    for (int i = 0; i < 2; ++i) {
      const auto & [tok, name] = ends[i];
      auto it = state.objects.find(name);
      if (it == state.objects.end()) {
        errors.push_back(state_error("UnknownObject", "unknown object `" + name + "'", tok->location));
        return;
      }
      if (!model_.is_kind_of(it->second.class_name, as->ends[i].class_name)) {
        errors.push_back(state_error("TypeMismatch",
                                     "object `" + name + "' of class `" + it->second.class_name +
                                       "' cannot be linked at end `" + as->ends[i].role + "' of `" + assoc + "'",
                                     tok->location));
        return;
      }
    }
    state.links.insert(Link{assoc, a, b});
  }

  Parser & p_;
  const Model & model_;
};

}  // namespace

ParseResult<ExprPtr> parse_ocl_untyped(std::string_view text, const std::string & file)
{
  ParseResult<ExprPtr> out;
  auto lexed = detail::lex(text, file);
  if (!lexed.diagnostics.empty()) {
    out.diagnostics = std::move(lexed.diagnostics);
    return out;
  }
  Parser p(text, file, std::move(lexed.tokens));
  try {
    auto e = p.expression();
    if (!p.at_end()) {
      p.fail(p.peek(), "unexpected " + Parser::describe(p.peek()) + " after expression");
    }
    out.value = std::move(e);
  } catch (const SyntaxError & err) {
    out.diagnostics.push_back(err.diagnostic);
  }
  return out;
}

ParseResult<ExprPtr> parse_ocl(std::string_view text, const std::string & context, const Model & model,
                               const std::string & file)
{
  auto raw = parse_ocl_untyped(text, file);
  if (!raw.ok()) {
    return raw;
  }
  return typecheck(*raw.value, TypeEnv::for_context(context), model);
}

ParseResult<Model> parse_model(std::string_view text, const std::string & file)
{
  ParseResult<Model> out;
  auto lexed = detail::lex(text, file);
  if (!lexed.diagnostics.empty()) {
    out.diagnostics = std::move(lexed.diagnostics);
    return out;
  }
  Parser p(text, file, std::move(lexed.tokens));
  Model model;
  try {
    model = p.model();
  } catch (const SyntaxError & err) {
    out.diagnostics.push_back(err.diagnostic);
    return out;
  }

  out.diagnostics = check_well_formed(model);
  if (!out.diagnostics.empty()) {
    return out;
  }
  for (auto & inv : model.invariants) {
    auto typed = typecheck(inv.body, TypeEnv::for_context(inv.context), model);
    if (!typed.ok()) {
      for (auto & d : typed.diagnostics) out.diagnostics.push_back(std::move(d));
      continue;
    }
    if (!(*typed.value)->standard_type.is(TypeKind::Boolean)) {
      out.diagnostics.push_back({DiagnosticKind::Type, "TypeMismatch",
                                 "invariant `" + inv.qualified_name() + "' must be Boolean but has type " +
                                   to_string((*typed.value)->standard_type),
                                 inv.body->location, {}});
      continue;
    }
    inv.body = std::move(*typed.value);
  }
  if (out.diagnostics.empty()) {
    out.value = std::move(model);
  }
  return out;
}

ParseResult<SystemState> parse_state_commands(std::string_view text, const Model & model, const std::string & file)
{
  ParseResult<SystemState> out;
  auto lexed = detail::lex(text, file);
  if (!lexed.diagnostics.empty()) {
    out.diagnostics = std::move(lexed.diagnostics);
    return out;
  }
  Parser p(text, file, std::move(lexed.tokens));
  SystemState state;
  try {
    StateCommandReader reader(p, model);
    reader.run(state, out.diagnostics);
  } catch (const SyntaxError & err) {
    out.diagnostics.push_back(err.diagnostic);
  }
  if (out.diagnostics.empty()) {
    out.value = std::move(state);
  }
  return out;
}

}  // namespace bmv

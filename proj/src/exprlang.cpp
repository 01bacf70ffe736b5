#include "heatwalk/exprlang.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

namespace heatwalk::expr {

ParseError::ParseError(const std::string& message, SourcePos pos)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                         message),
      pos_(pos) {}

EvalError::EvalError(const std::string& message, std::string subexpression)
    : std::runtime_error(message + " in '" + subexpression + "'"),
      subexpression_(std::move(subexpression)) {}

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok {
  Number, Ident, Plus, Minus, Star, Slash, Caret,
  LParen, RParen, LBracket, RBracket, Comma, End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  SourcePos pos;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_space();
    Token tok;
    tok.pos = pos_;
    tok.offset = i_;
    if (i_ >= src_.size()) return tok;
    const char c = src_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && digit_at(i_ + 1))) {
      return lex_number(tok);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
        advance();
      tok.kind = Tok::Ident;
      tok.text = src_.substr(tok.offset, i_ - tok.offset);
      return tok;
    }
    advance();
    switch (c) {
      case '+': tok.kind = Tok::Plus; return tok;
      case '-': tok.kind = Tok::Minus; return tok;
      case '*': tok.kind = Tok::Star; return tok;
      case '/': tok.kind = Tok::Slash; return tok;
      case '^': tok.kind = Tok::Caret; return tok;
      case '(': tok.kind = Tok::LParen; return tok;
      case ')': tok.kind = Tok::RParen; return tok;
      case '[': tok.kind = Tok::LBracket; return tok;
      case ']': tok.kind = Tok::RBracket; return tok;
      case ',': tok.kind = Tok::Comma; return tok;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", tok.pos);
    }
  }

 private:
  bool digit_at(std::size_t k) const {
    return k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]));
  }

  void advance() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  void skip_space() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance();
  }

  Token lex_number(Token tok) {
    while (digit_at(i_)) advance();
    if (i_ < src_.size() && src_[i_] == '.') {
      advance();
      while (digit_at(i_)) advance();
    }
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      std::size_t mark = i_;
      advance();
      if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) advance();
      if (!digit_at(i_)) {
        // not an exponent after all; give back the 'e'
        pos_.column -= static_cast<int>(i_ - mark);
        i_ = mark;
      } else {
        while (digit_at(i_)) advance();
      }
    }
    tok.kind = Tok::Number;
    tok.text = src_.substr(tok.offset, i_ - tok.offset);
    try {
      tok.number = std::stod(tok.text);
    } catch (const std::exception&) {
      throw ParseError("numeric literal '" + tok.text + "' out of range", tok.pos);
    }
    return tok;
  }

  const std::string& src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

// ------------------------------------------------------------------ AST

enum class NodeKind { Number, Pi, VarT, Coord, RedVar, Unary, Binary, Call, Norm, Reduce };
enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class Fn { Sin, Cos, Exp, Sqrt, Abs, Log };
enum class ReduceKind { Sum, Prod };

struct Node {
  NodeKind kind;
  double number = 0.0;                   // Number
  std::size_t coord_index = 0;           // Coord with literal index
  std::string name;                      // Coord/RedVar index name, Reduce variable
  bool coord_by_name = false;
  BinOp bin_op = BinOp::Add;
  Fn fn = Fn::Sin;
  ReduceKind reduce = ReduceKind::Sum;
  std::unique_ptr<Node> lhs, rhs;        // children (Unary/Call/Reduce use lhs)
  std::size_t src_begin = 0, src_end = 0;
};

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Exp: return "exp";
    case Fn::Sqrt: return "sqrt";
    case Fn::Abs: return "abs";
    case Fn::Log: return "log";
  }
  return "?";
}

bool is_reserved(const std::string& s) {
  static const char* names[] = {"t", "x",   "pi",  "sin", "cos",  "exp",
                                "sqrt", "abs", "log", "norm", "sum", "prod"};
  for (const char* n : names)
    if (s == n) return true;
  return false;
}

// --------------------------------------------------------------- parser

class Parser {
 public:
  Parser(const std::string& src, std::size_t dim) : src_(src), dim_(dim), lexer_(src) {
    bump();
  }

  std::unique_ptr<Node> parse() {
    auto node = parse_add();
    expect(Tok::End, "end of input");
    return node;
  }

 private:
  void bump() { current_ = lexer_.next(); }

  void expect(Tok kind, const char* what) {
    if (current_.kind != kind)
      throw ParseError(std::string("expected ") + what, current_.pos);
    if (kind != Tok::End) bump();
  }

  std::unique_ptr<Node> make(NodeKind kind, std::size_t begin) {
    auto n = std::make_unique<Node>();
    n->kind = kind;
    n->src_begin = begin;
    n->src_end = current_.offset;
    return n;
  }

  std::unique_ptr<Node> parse_add() {
    const std::size_t begin = current_.offset;
    auto lhs = parse_mul();
    while (current_.kind == Tok::Plus || current_.kind == Tok::Minus) {
      const BinOp op = current_.kind == Tok::Plus ? BinOp::Add : BinOp::Sub;
      bump();
      auto rhs = parse_mul();
      auto node = make(NodeKind::Binary, begin);
      node->bin_op = op;
      node->lhs = std::move(lhs);
      node->rhs = std::move(rhs);
      lhs = std::move(node);
    }
    return lhs;
  }

  std::unique_ptr<Node> parse_mul() {
    const std::size_t begin = current_.offset;
    auto lhs = parse_unary();
    while (current_.kind == Tok::Star || current_.kind == Tok::Slash) {
      const BinOp op = current_.kind == Tok::Star ? BinOp::Mul : BinOp::Div;
      bump();
      auto rhs = parse_unary();
      auto node = make(NodeKind::Binary, begin);
      node->bin_op = op;
      node->lhs = std::move(lhs);
      node->rhs = std::move(rhs);
      lhs = std::move(node);
    }
    return lhs;
  }

  std::unique_ptr<Node> parse_unary() {
    if (current_.kind == Tok::Minus) {
      const std::size_t begin = current_.offset;
      bump();
      auto child = parse_unary();
      auto node = make(NodeKind::Unary, begin);
      node->lhs = std::move(child);
      return node;
    }
    return parse_power();
  }

  std::unique_ptr<Node> parse_power() {
    const std::size_t begin = current_.offset;
    auto base = parse_primary();
    if (current_.kind == Tok::Caret) {
      bump();
      auto exponent = parse_unary();  // right-associative
      auto node = make(NodeKind::Binary, begin);
      node->bin_op = BinOp::Pow;
      node->lhs = std::move(base);
      node->rhs = std::move(exponent);
      return node;
    }
    return base;
  }

  std::unique_ptr<Node> parse_primary() {
    const std::size_t begin = current_.offset;
    switch (current_.kind) {
      case Tok::Number: {
        const double v = current_.number;
        bump();
        auto node = make(NodeKind::Number, begin);
        node->number = v;
        return node;
      }
      case Tok::LParen: {
        bump();
        auto inner = parse_add();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        return parse_ident(begin);
      default:
        throw ParseError("expected an expression", current_.pos);
    }
  }

  std::unique_ptr<Node> parse_ident(std::size_t begin) {
    const Token name = current_;
    bump();
    if (name.text == "pi") return make(NodeKind::Pi, begin);
    if (name.text == "t") return make(NodeKind::VarT, begin);
    if (name.text == "x") return parse_coord(begin, name.pos);
    if (name.text == "norm") {
      expect(Tok::LParen, "'(' after norm");
      if (current_.kind != Tok::Ident || current_.text != "x")
        throw ParseError("norm takes exactly the argument x", current_.pos);
      bump();
      expect(Tok::RParen, "')'");
      return make(NodeKind::Norm, begin);
    }
    if (name.text == "sum" || name.text == "prod")
      return parse_reduce(begin, name.text == "sum" ? ReduceKind::Sum : ReduceKind::Prod);
    for (Fn f : {Fn::Sin, Fn::Cos, Fn::Exp, Fn::Sqrt, Fn::Abs, Fn::Log}) {
      if (name.text == fn_name(f)) {
        expect(Tok::LParen, "'('");
        auto arg = parse_add();
        expect(Tok::RParen, "')'");
        auto node = make(NodeKind::Call, begin);
        node->fn = f;
        node->lhs = std::move(arg);
        return node;
      }
    }
    // a bare identifier must be a bound reduction index
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (*it == name.text) {
        auto node = make(NodeKind::RedVar, begin);
        node->name = name.text;
        return node;
      }
    }
    throw ParseError("unbound variable '" + name.text + "'", name.pos);
  }

  std::unique_ptr<Node> parse_coord(std::size_t begin, SourcePos xpos) {
    expect(Tok::LBracket, "'[' after x");
    auto node = make(NodeKind::Coord, begin);
    if (current_.kind == Tok::Number) {
      const double v = current_.number;
      if (v != std::floor(v) || v < 0)
        throw ParseError("coordinate index must be a non-negative integer", current_.pos);
      if (v >= static_cast<double>(dim_))
        throw ParseError("coordinate index " + current_.text + " out of range for dimension " +
                             std::to_string(dim_),
                         current_.pos);
      node->coord_index = static_cast<std::size_t>(v);
      node->coord_by_name = false;
      bump();
    } else if (current_.kind == Tok::Ident) {
      bool bound = false;
      for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
        if (*it == current_.text) bound = true;
      if (!bound)
        throw ParseError("index '" + current_.text + "' is not a bound reduction variable",
                         current_.pos);
      node->name = current_.text;
      node->coord_by_name = true;
      bump();
    } else {
      throw ParseError("expected a coordinate index", current_.pos);
    }
    expect(Tok::RBracket, "']'");
    node->src_end = current_.offset;
    (void)xpos;
    return node;
  }

  std::unique_ptr<Node> parse_reduce(std::size_t begin, ReduceKind kind) {
    expect(Tok::LParen, "'('");
    if (current_.kind != Tok::Ident)
      throw ParseError("expected a reduction variable name", current_.pos);
    if (is_reserved(current_.text))
      throw ParseError("'" + current_.text + "' is reserved and cannot name a reduction variable",
                       current_.pos);
    const std::string var = current_.text;
    bump();
    expect(Tok::Comma, "','");
    scopes_.push_back(var);
    auto body = parse_add();
    scopes_.pop_back();
    expect(Tok::RParen, "')'");
    auto node = make(NodeKind::Reduce, begin);
    node->reduce = kind;
    node->name = var;
    node->lhs = std::move(body);
    return node;
  }

  const std::string& src_;
  std::size_t dim_;
  Lexer lexer_;
  Token current_;
  std::vector<std::string> scopes_;
};

// ----------------------------------------------------------------- tape

enum class Op : std::uint8_t {
  PushNum, PushT, PushX, Norm,
  Add, Sub, Mul, Div, Pow, Neg,
  Sin, Cos, Exp, Sqrt, Abs, Log,
};

struct Instr {
  Op op;
  double value = 0.0;       // PushNum
  std::uint32_t index = 0;  // PushX
  std::uint32_t src_begin = 0, src_len = 0;
};

struct Binding {
  std::string name;
  std::size_t value;
};

}  // namespace

struct Expr::Impl {
  std::string source;
  std::size_t dim = 0;
  std::unique_ptr<Node> ast;
  std::vector<Instr> tape;
  std::size_t max_depth = 0;
};

namespace {

class Compiler {
 public:
  Compiler(std::size_t dim, std::vector<Instr>& tape) : dim_(dim), tape_(tape) {}

  std::size_t max_depth() const { return max_depth_; }

  void emit_node(const Node& node) {
    switch (node.kind) {
      case NodeKind::Number:
        push(node, Op::PushNum).value = node.number;
        break;
      case NodeKind::Pi:
        push(node, Op::PushNum).value = std::numbers::pi;
        break;
      case NodeKind::VarT:
        push(node, Op::PushT);
        break;
      case NodeKind::Norm:
        push(node, Op::Norm);
        break;
      case NodeKind::Coord: {
        std::size_t idx = node.coord_index;
        if (node.coord_by_name) idx = lookup(node.name);
        push(node, Op::PushX).index = static_cast<std::uint32_t>(idx);
        break;
      }
      case NodeKind::RedVar:
        push(node, Op::PushNum).value = static_cast<double>(lookup(node.name));
        break;
      case NodeKind::Unary:
        emit_node(*node.lhs);
        append(node, Op::Neg, 0);
        break;
      case NodeKind::Call: {
        emit_node(*node.lhs);
        Op op = Op::Sin;
        switch (node.fn) {
          case Fn::Sin: op = Op::Sin; break;
          case Fn::Cos: op = Op::Cos; break;
          case Fn::Exp: op = Op::Exp; break;
          case Fn::Sqrt: op = Op::Sqrt; break;
          case Fn::Abs: op = Op::Abs; break;
          case Fn::Log: op = Op::Log; break;
        }
        append(node, op, 0);
        break;
      }
      case NodeKind::Binary: {
        emit_node(*node.lhs);
        emit_node(*node.rhs);
        Op op = Op::Add;
        switch (node.bin_op) {
          case BinOp::Add: op = Op::Add; break;
          case BinOp::Sub: op = Op::Sub; break;
          case BinOp::Mul: op = Op::Mul; break;
          case BinOp::Div: op = Op::Div; break;
          case BinOp::Pow: op = Op::Pow; break;
        }
        append(node, op, 1);
        break;
      }
      case NodeKind::Reduce: {
        for (std::size_t k = 0; k < dim_; ++k) {
          bindings_.push_back({node.name, k});
          emit_node(*node.lhs);
          bindings_.pop_back();
          if (k > 0) append(node, node.reduce == ReduceKind::Sum ? Op::Add : Op::Mul, 1);
        }
        break;
      }
    }
  }

 private:
  std::size_t lookup(const std::string& name) const {
    for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it)
      if (it->name == name) return it->value;
    throw std::logic_error("exprlang: unbound reduction variable slipped past the parser");
  }

  Instr& push(const Node& node, Op op) {
    depth_ += 1;
    max_depth_ = std::max(max_depth_, depth_);
    return append(node, op, 0);
  }

  Instr& append(const Node& node, Op op, std::size_t consumed) {
    depth_ -= consumed;
    Instr instr;
    instr.op = op;
    instr.src_begin = static_cast<std::uint32_t>(node.src_begin);
    instr.src_len = static_cast<std::uint32_t>(node.src_end - node.src_begin);
    tape_.push_back(instr);
    return tape_.back();
  }

  std::size_t dim_;
  std::vector<Instr>& tape_;
  std::vector<Binding> bindings_;
  std::size_t depth_ = 0;
  std::size_t max_depth_ = 0;
};

// --------------------------------------------------------------- pretty

int precedence(const Node& node) {
  switch (node.kind) {
    case NodeKind::Binary:
      switch (node.bin_op) {
        case BinOp::Add:
        case BinOp::Sub: return 1;
        case BinOp::Mul:
        case BinOp::Div: return 2;
        case BinOp::Pow: return 4;
      }
      return 1;
    case NodeKind::Unary: return 3;
    default: return 5;
  }
}

std::string fmt_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_node(const Node& node, std::string& out, int min_prec) {
  const int prec = precedence(node);
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (node.kind) {
    case NodeKind::Number: out += fmt_number(node.number); break;
    case NodeKind::Pi: out += "pi"; break;
    case NodeKind::VarT: out += "t"; break;
    case NodeKind::Norm: out += "norm(x)"; break;
    case NodeKind::Coord:
      out += "x[";
      out += node.coord_by_name ? node.name : std::to_string(node.coord_index);
      out += ']';
      break;
    case NodeKind::RedVar: out += node.name; break;
    case NodeKind::Unary:
      out += '-';
      print_node(*node.lhs, out, 3);
      break;
    case NodeKind::Call:
      out += fn_name(node.fn);
      out += '(';
      print_node(*node.lhs, out, 0);
      out += ')';
      break;
    case NodeKind::Reduce:
      out += node.reduce == ReduceKind::Sum ? "sum(" : "prod(";
      out += node.name;
      out += ", ";
      print_node(*node.lhs, out, 0);
      out += ')';
      break;
    case NodeKind::Binary: {
      const char* sep = nullptr;
      switch (node.bin_op) {
        case BinOp::Add: sep = " + "; break;
        case BinOp::Sub: sep = " - "; break;
        case BinOp::Mul: sep = "*"; break;
        case BinOp::Div: sep = "/"; break;
        case BinOp::Pow: sep = "^"; break;
      }
      if (node.bin_op == BinOp::Pow) {
        // right-associative; base must bind tighter than ^
        print_node(*node.lhs, out, 5);
        out += sep;
        print_node(*node.rhs, out, 3);
      } else {
        print_node(*node.lhs, out, prec);
        out += sep;
        print_node(*node.rhs, out, prec + 1);
      }
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

Expr Expr::parse(const std::string& source, std::size_t dimension) {
  if (dimension == 0)
    throw ParseError("dimension must be >= 1", SourcePos{});
  auto impl = std::make_shared<Impl>();
  impl->source = source;
  impl->dim = dimension;
  Parser parser(impl->source, dimension);
  impl->ast = parser.parse();
  Compiler compiler(dimension, impl->tape);
  compiler.emit_node(*impl->ast);
  impl->max_depth = compiler.max_depth();
  return Expr(std::move(impl));
}

std::size_t Expr::dimension() const { return impl_->dim; }

std::string Expr::pretty() const {
  std::string out;
  print_node(*impl_->ast, out, 0);
  return out;
}

double Expr::eval(double t, const Point& x) const {
  const Impl& impl = *impl_;
  if (x.size() != impl.dim)
    throw std::invalid_argument("expr::eval: point has dimension " + std::to_string(x.size()) +
                                ", expression was parsed for " + std::to_string(impl.dim));
  std::vector<double> stack(impl.max_depth);
  std::size_t top = 0;  // next free slot

  const auto subexpr = [&impl](const Instr& instr) {
    return impl.source.substr(instr.src_begin, instr.src_len);
  };

  for (const Instr& instr : impl.tape) {
    switch (instr.op) {
      case Op::PushNum: stack[top++] = instr.value; break;
      case Op::PushT: stack[top++] = t; break;
      case Op::PushX: stack[top++] = x[instr.index]; break;
      case Op::Norm: stack[top++] = norm2(x); break;
      case Op::Add: --top; stack[top - 1] += stack[top]; break;
      case Op::Sub: --top; stack[top - 1] -= stack[top]; break;
      case Op::Mul: --top; stack[top - 1] *= stack[top]; break;
      case Op::Div: {
        --top;
        if (stack[top] == 0.0) throw EvalError("division by zero", subexpr(instr));
        stack[top - 1] /= stack[top];
        break;
      }
      case Op::Pow: {
        --top;
        const double base = stack[top - 1], exponent = stack[top];
        if (base == 0.0 && exponent < 0.0)
          throw EvalError("zero raised to a negative power", subexpr(instr));
        if (base < 0.0 && exponent != std::floor(exponent))
          throw EvalError("negative base with non-integer exponent", subexpr(instr));
        stack[top - 1] = std::pow(base, exponent);
        break;
      }
      case Op::Neg: stack[top - 1] = -stack[top - 1]; break;
      case Op::Sin: stack[top - 1] = std::sin(stack[top - 1]); break;
      case Op::Cos: stack[top - 1] = std::cos(stack[top - 1]); break;
      case Op::Exp: stack[top - 1] = std::exp(stack[top - 1]); break;
      case Op::Sqrt: {
        if (stack[top - 1] < 0.0) throw EvalError("square root of a negative value", subexpr(instr));
        stack[top - 1] = std::sqrt(stack[top - 1]);
        break;
      }
      case Op::Abs: stack[top - 1] = std::abs(stack[top - 1]); break;
      case Op::Log: {
        if (stack[top - 1] <= 0.0) throw EvalError("log of a non-positive value", subexpr(instr));
        stack[top - 1] = std::log(stack[top - 1]);
        break;
      }
    }
  }
  return stack[0];
}

}  // namespace heatwalk::expr

#include "qbudget/qasm.hpp"

#include <cctype>
#include <charconv>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

namespace qbudget {

QasmError::QasmError(int line, int column, const std::string& message)
    : ValidationError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                      ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, String, Symbol, Pragma, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

constexpr std::string_view kPragma = "unitary2q";

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      const int line = line_, col = col_;
      const char c = src_[pos_];
      if (c == '/' && peek(1) == '/') {
        std::string body;
        advance(2);
        while (pos_ < src_.size() && src_[pos_] != '\n') body += src_[pos_], advance(1);
        const auto first = body.find_first_not_of(" \t");
        if (first != std::string::npos && body.compare(first, kPragma.size(), kPragma) == 0 &&
            (first + kPragma.size() == body.size() ||
             std::isspace(static_cast<unsigned char>(body[first + kPragma.size()])))) {
          out.push_back({Tok::Pragma, body.substr(first + kPragma.size()), line, col});
        }
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          id += src_[pos_];
          advance(1);
        }
        out.push_back({Tok::Ident, id, line, col});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && std::isdigit(peek(1)))) {
        std::string num;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
          num += src_[pos_];
          advance(1);
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
          num += src_[pos_];
          advance(1);
          if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
            num += src_[pos_];
            advance(1);
          }
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            num += src_[pos_];
            advance(1);
          }
        }
        out.push_back({Tok::Number, num, line, col});
        continue;
      }
      if (c == '"') {
        advance(1);
        std::string s;
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') s += src_[pos_], advance(1);
        if (pos_ >= src_.size() || src_[pos_] != '"') throw QasmError(line, col, "unterminated string");
        advance(1);
        out.push_back({Tok::String, s, line, col});
        continue;
      }
      if (c == '-' && peek(1) == '>') {
        advance(2);
        out.push_back({Tok::Symbol, "->", line, col});
        continue;
      }
      if (c == '=' && peek(1) == '=') {
        advance(2);
        out.push_back({Tok::Symbol, "==", line, col});
        continue;
      }
      // Braces and '^' only appear in statements the parser rejects by name.
      if (std::string_view(";,[]()+-*/{}^").find(c) != std::string_view::npos) {
        advance(1);
        out.push_back({Tok::Symbol, std::string(1, c), line, col});
        continue;
      }
      throw QasmError(line, col, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  char peek(std::size_t off) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }
  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && pos_ < src_.size(); ++k) {
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
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance(1);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

double parse_double(const std::string& s, int line, int col) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw QasmError(line, col, "malformed number '" + s + "'");
  }
  return v;
}

struct PendingMatrix {
  std::string label;
  Matrix4 matrix;
  int line;
  int col;
};

PendingMatrix parse_pragma(const Token& tok) {
  std::istringstream in(tok.text);
  PendingMatrix p{{}, {}, tok.line, tok.col};
  if (!(in >> p.label)) throw QasmError(tok.line, tok.col, "unitary2q pragma without label");
  for (auto& entry : p.matrix) {
    std::string re, im;
    if (!(in >> re >> im)) {
      throw QasmError(tok.line, tok.col, "unitary2q pragma for '" + p.label + "' needs 32 numbers");
    }
    entry = {parse_double(re, tok.line, tok.col), parse_double(im, tok.line, tok.col)};
  }
  std::string extra;
  if (in >> extra) throw QasmError(tok.line, tok.col, "trailing data in unitary2q pragma");
  return p;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Circuit run() {
    if (at_ident("OPENQASM")) {
      next();
      const Token& v = expect(Tok::Number, "version number");
      if (v.text != "2.0" && v.text != "2") {
        throw QasmError(v.line, v.col, "unsupported OPENQASM version " + v.text);
      }
      expect_symbol(";");
    }
    while (cur().kind != Tok::End) statement();
    if (pending_) {
      throw QasmError(pending_->line, pending_->col,
                      "unitary2q pragma '" + pending_->label + "' not followed by its gate");
    }
    if (!circuit_) circuit_.emplace(0, 0);
    return std::move(*circuit_);
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at_ident(std::string_view s) const { return cur().kind == Tok::Ident && cur().text == s; }
  bool at_symbol(std::string_view s) const { return cur().kind == Tok::Symbol && cur().text == s; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw QasmError(t.line, t.col, msg);
  }

  const Token& expect(Tok kind, const std::string& what) {
    if (cur().kind != kind) {
      fail(cur(), "expected " + what + (cur().kind == Tok::End ? " at end of input"
                                                               : ", found '" + cur().text + "'"));
    }
    return next();
  }

  void expect_symbol(std::string_view s) {
    if (!at_symbol(s)) {
      fail(cur(), "expected '" + std::string(s) + "'" +
                      (cur().kind == Tok::End ? " at end of input" : ", found '" + cur().text + "'"));
    }
    next();
  }

  int integer() {
    const Token& t = expect(Tok::Number, "integer");
    int v = 0;
    const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size() || v < 0) {
      fail(t, "expected non-negative integer, found '" + t.text + "'");
    }
    return v;
  }

  double expr() {
    double v = term();
    while (at_symbol("+") || at_symbol("-")) {
      const bool plus = next().text == "+";
      const double rhs = term();
      v = plus ? v + rhs : v - rhs;
    }
    return v;
  }

  double term() {
    double v = unary();
    while (at_symbol("*") || at_symbol("/")) {
      const Token& op = next();
      const double rhs = unary();
      if (op.text == "*") {
        v *= rhs;
      } else {
        if (rhs == 0.0) fail(op, "division by zero");
        v /= rhs;
      }
    }
    return v;
  }

  double unary() {
    if (at_symbol("-")) {
      next();
      return -unary();
    }
    if (at_symbol("+")) {
      next();
      return unary();
    }
    if (at_symbol("(")) {
      next();
      const double v = expr();
      expect_symbol(")");
      return v;
    }
    if (at_ident("pi")) {
      next();
      return std::numbers::pi;
    }
    const Token& t = expect(Tok::Number, "number");
    return parse_double(t.text, t.line, t.col);
  }

  void declare(bool quantum) {
    const Token& kw = next();
    const Token& name = expect(Tok::Ident, "register name");
    expect_symbol("[");
    const int size = integer();
    expect_symbol("]");
    expect_symbol(";");
    std::string& slot = quantum ? qreg_ : creg_;
    if (!slot.empty()) fail(kw, "multiple " + kw.text + " declarations are not supported");
    if (circuit_ && !circuit_->empty()) fail(kw, kw.text + " after first operation");
    slot = name.text;
    (quantum ? nq_ : nc_) = size;
    circuit_.emplace(nq_, nc_);
  }

  struct Arg {
    int index;  // -1 = whole register
    const Token* tok;
  };

  Arg argument(bool quantum, bool allow_whole) {
    const Token& name = expect(Tok::Ident, quantum ? "qubit argument" : "clbit argument");
    const std::string& reg = quantum ? qreg_ : creg_;
    if (reg.empty()) fail(name, std::string("no ") + (quantum ? "qreg" : "creg") + " declared");
    if (name.text != reg) fail(name, "unknown register '" + name.text + "'");
    if (!at_symbol("[")) {
      if (!allow_whole) fail(name, "register broadcast is not supported here");
      return {-1, &name};
    }
    next();
    const Token& idx_tok = cur();
    const int idx = integer();
    expect_symbol("]");
    const int size = quantum ? nq_ : nc_;
    if (idx >= size) {
      fail(idx_tok, "index " + std::to_string(idx) + " out of range for register '" + reg +
                        "' of size " + std::to_string(size));
    }
    return {idx, &name};
  }

  void add(const Token& at, Operation op) {
    if (!circuit_) fail(at, "operation before qreg declaration");
    try {
      circuit_->append(std::move(op));
    } catch (const ValidationError& e) {
      fail(at, e.what());
    }
  }

  void statement() {
    const Token& t = cur();
    if (t.kind == Tok::Pragma) {
      if (pending_) fail(t, "consecutive unitary2q pragmas");
      pending_ = parse_pragma(next());
      return;
    }
    if (t.kind != Tok::Ident) fail(t, "expected statement, found '" + t.text + "'");
    if (pending_ && t.text != pending_->label) {
      fail(t, "unitary2q pragma '" + pending_->label + "' not followed by its gate");
    }
    if (t.text == "include") {
      next();
      expect(Tok::String, "file name");
      expect_symbol(";");
      return;
    }
    if (t.text == "qreg" || t.text == "creg") {
      declare(t.text == "qreg");
      return;
    }
    if (t.text == "gate" || t.text == "opaque" || t.text == "if" || t.text == "reset" ||
        t.text == "U" || t.text == "CX" || t.text == "OPENQASM") {
      fail(t, "unsupported statement '" + t.text + "'");
    }
    if (t.text == "measure") {
      next();
      const Arg q = argument(true, false);
      expect_symbol("->");
      const Arg c = argument(false, false);
      expect_symbol(";");
      Operation op{GateKind::Measure, {q.index}};
      op.clbit = c.index;
      add(t, std::move(op));
      return;
    }
    if (t.text == "barrier") {
      next();
      std::vector<int> qs;
      for (;;) {
        const Arg a = argument(true, true);
        if (a.index < 0) {
          for (int q = 0; q < nq_; ++q) qs.push_back(q);
        } else {
          qs.push_back(a.index);
        }
        if (!at_symbol(",")) break;
        next();
      }
      expect_symbol(";");
      add(t, {GateKind::Barrier, std::move(qs)});
      return;
    }
    gate(t);
  }

  void gate(const Token& t) {
    next();
    Operation op;
    if (pending_ && pending_->label == t.text) {
      op.kind = GateKind::Unitary2Q;
      op.matrix = pending_->matrix;
      op.label = pending_->label;
      pending_.reset();
    } else {
      const auto kind = gate_kind_from_name(t.text);
      if (!kind || *kind == GateKind::Unitary2Q) fail(t, "unknown gate '" + t.text + "'");
      op.kind = *kind;
    }
    if (gate_has_angle(op.kind)) {
      expect_symbol("(");
      op.angle = expr();
      expect_symbol(")");
    } else if (at_symbol("(")) {
      fail(cur(), "gate '" + t.text + "' takes no parameters");
    }
    for (;;) {
      op.qubits.push_back(argument(true, false).index);
      if (!at_symbol(",")) break;
      next();
    }
    expect_symbol(";");
    add(t, std::move(op));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string qreg_, creg_;
  int nq_ = 0, nc_ = 0;
  std::optional<Circuit> circuit_;
  std::optional<PendingMatrix> pending_;
};

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Circuit parse_qasm(std::string_view text) { return Parser(Lexer(text).run()).run(); }

std::string emit_qasm(const Circuit& circuit) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  if (circuit.num_qubits() > 0) out << "qreg q[" << circuit.num_qubits() << "];\n";
  if (circuit.num_clbits() > 0) out << "creg c[" << circuit.num_clbits() << "];\n";
  for (const auto& op : circuit.ops()) {
    if (op.kind == GateKind::Measure) {
      out << "measure q[" << op.qubits[0] << "] -> c[" << op.clbit << "];\n";
      continue;
    }
    if (op.kind == GateKind::Unitary2Q) {
      out << "// unitary2q " << op.label;
      for (const auto& e : *op.matrix) out << ' ' << shortest(e.real()) << ' ' << shortest(e.imag());
      out << '\n' << op.label;
    } else {
      out << gate_name(op.kind);
    }
    if (gate_has_angle(op.kind)) out << '(' << shortest(op.angle) << ')';
    for (std::size_t i = 0; i < op.qubits.size(); ++i) {
      out << (i == 0 ? " " : ",") << "q[" << op.qubits[i] << ']';
    }
    out << ";\n";
  }
  return out.str();
}

}  // namespace qbudget

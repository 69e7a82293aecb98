#include "bess/milp/lp_format.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bess/error.hpp"

namespace bess::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void append_number(std::string& out, double v) {
  if (std::isinf(v)) {
    out += v > 0 ? "inf" : "-inf";
    return;
  }
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

void append_expr(std::string& out, const std::vector<Term>& terms,
                 const Model& model) {
  if (terms.empty()) {
    out += '0';
    return;
  }
  bool first = true;
  for (const Term& t : terms) {
    double c = t.coef;
    if (first) {
      append_number(out, c);
    } else {
      out += c < 0 ? " - " : " + ";
      append_number(out, std::abs(c));
    }
    out += ' ';
    out += model.variable(t.var).name;
    first = false;
  }
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
  }
  return "=";
}

// ---- reader ---------------------------------------------------------------

enum class Tok { End, Number, Ident, Sense, Plus, Minus, Colon };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  Sense sense = Sense::Equal;
  int line = 1;
  int column = 1;
  bool line_start = false;  // first token on its line
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '(' || c == ')';
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    bool line_start = true;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        advance();
        line_start = true;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
        continue;
      }
      if (c == '\\') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      Token t;
      t.line = line_;
      t.column = column_;
      t.line_start = line_start;
      line_start = false;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        lex_number(t);
      } else if (ident_start(c)) {
        std::size_t begin = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
        t.kind = Tok::Ident;
        t.text = std::string(text_.substr(begin, pos_ - begin));
      } else if (c == '<' || c == '>' || c == '=') {
        advance();
        char n = pos_ < text_.size() ? text_[pos_] : '\0';
        t.kind = Tok::Sense;
        if (c == '<') {
          t.sense = Sense::LessEqual;
          if (n == '=') advance();
        } else if (c == '>') {
          t.sense = Sense::GreaterEqual;
          if (n == '=') advance();
        } else if (n == '<') {
          t.sense = Sense::LessEqual;
          advance();
        } else if (n == '>') {
          t.sense = Sense::GreaterEqual;
          advance();
        } else {
          t.sense = Sense::Equal;
        }
      } else if (c == '+') {
        advance();
        t.kind = Tok::Plus;
      } else if (c == '-') {
        advance();
        t.kind = Tok::Minus;
      } else if (c == ':') {
        advance();
        t.kind = Tok::Colon;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line_,
                         column_);
      }
      out.push_back(std::move(t));
    }
    Token end;
    end.line = line_;
    end.column = column_;
    end.line_start = true;
    out.push_back(end);
    return out;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void lex_number(Token& t) {
    std::size_t begin = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        advance();
      }
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      advance();
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
      digits();
    }
    if (pos_ < text_.size() && (ident_char(text_[pos_]))) {
      throw ParseError("malformed number", t.line, t.column);
    }
    std::string_view s = text_.substr(begin, pos_ - begin);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw ParseError("malformed number", t.line, t.column);
    }
    t.kind = Tok::Number;
    t.number = v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

enum class Section { Objective, Constraints, Bounds, Binaries, End };

struct RawRow {
  std::string name;
  std::vector<std::pair<int, double>> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

bool is_word(const Token& t, std::string_view w) {
  return t.kind == Tok::Ident && lower(t.text) == w;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Model run();

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  [[noreturn]] static void fail(const std::string& what, const Token& at) {
    throw ParseError(what, at.line, at.column);
  }
  bool at_name() const {
    return peek().kind == Tok::Ident && !is_reserved_word(peek().text);
  }

  std::optional<Section> header();
  std::optional<std::string> label();
  std::vector<std::pair<int, double>> expression();
  double value();
  void objective_section();
  void constraint_section();
  void bounds_section();
  void binaries_section();
  int variable(const Token& at);

  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  std::vector<std::string> names_;  // first-appearance order
  std::unordered_map<std::string, int> index_;
  std::vector<double> lo_, up_;
  std::vector<int> bounds_order_;
  std::vector<char> in_bounds_, binary_;
  std::vector<Token> where_;  // first mention of each variable
  std::vector<std::pair<int, double>> objective_;
  std::vector<RawRow> rows_;
};

std::optional<Section> Parser::header() {
  const Token& t = peek();
  if (t.kind != Tok::Ident || !t.line_start) return std::nullopt;
  std::string w = lower(t.text);
  if (w == "minimize" || w == "minimise" || w == "minimum" || w == "min") {
    take();
    return Section::Objective;
  }
  if ((w == "subject" && is_word(peek(1), "to")) ||
      (w == "such" && is_word(peek(1), "that"))) {
    take();
    take();
    return Section::Constraints;
  }
  if (w == "st" || w == "s.t.") {
    take();
    return Section::Constraints;
  }
  if (w == "bounds" || w == "bound") {
    take();
    return Section::Bounds;
  }
  if (w == "binaries" || w == "binary" || w == "bin") {
    take();
    return Section::Binaries;
  }
  if (w == "end") {
    take();
    return Section::End;
  }
  if (is_reserved_word(w) && w != "free" && w != "inf" && w != "infinity") {
    fail("unsupported section '" + t.text + "'", t);
  }
  return std::nullopt;
}

int Parser::variable(const Token& at) {
  auto it = index_.find(at.text);
  if (it != index_.end()) return it->second;
  if (!is_valid_name(at.text)) fail("invalid variable name '" + at.text + "'", at);
  int id = static_cast<int>(names_.size());
  index_.emplace(at.text, id);
  names_.push_back(at.text);
  lo_.push_back(0.0);
  up_.push_back(kInf);
  in_bounds_.push_back(0);
  binary_.push_back(0);
  where_.push_back(at);
  return id;
}

std::optional<std::string> Parser::label() {
  if (peek().kind == Tok::Ident && peek(1).kind == Tok::Colon) {
    const Token& t = take();
    take();
    if (!is_valid_name(t.text)) fail("invalid row name '" + t.text + "'", t);
    return t.text;
  }
  return std::nullopt;
}

std::vector<std::pair<int, double>> Parser::expression() {
  std::vector<std::pair<int, double>> terms;
  // The literal `0` stands for an empty expression.
  if (peek().kind == Tok::Number && peek().number == 0.0 && !(peek(1).kind == Tok::Ident && !is_reserved_word(peek(1).text))) {
    take();
    return terms;
  }
  bool first = true;
  for (;;) {
    double sign = 1.0;
    bool signed_term = false;
    if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      sign = take().kind == Tok::Minus ? -1.0 : 1.0;
      signed_term = true;
    } else if (!first) {
      break;
    }
    double coef = 1.0;
    bool has_coef = false;
    if (peek().kind == Tok::Number) {
      coef = take().number;
      has_coef = true;
    }
    if (!at_name()) {
      if (first && !signed_term && !has_coef) break;
      fail("expected a variable name", peek());
    }
    const Token& v = take();
    terms.emplace_back(variable(v), sign * coef);
    first = false;
  }
  return terms;
}

double Parser::value() {
  double sign = 1.0;
  if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
    sign = take().kind == Tok::Minus ? -1.0 : 1.0;
  }
  const Token& t = peek();
  if (t.kind == Tok::Number) {
    take();
    return sign * t.number;
  }
  if (is_word(t, "inf") || is_word(t, "infinity")) {
    take();
    return sign * kInf;
  }
  fail("expected a number", t);
}

void Parser::objective_section() {
  label();
  objective_ = expression();
}

void Parser::constraint_section() {
  while (peek().kind != Tok::End) {
    if (peek().line_start && peek().kind == Tok::Ident &&
        is_reserved_word(peek().text) && peek(1).kind != Tok::Colon) {
      return;
    }
    RawRow row;
    const Token& start = peek();
    if (auto name = label()) row.name = *name;
    row.terms = expression();
    if (peek().kind != Tok::Sense) fail("expected <=, >= or =", peek());
    row.sense = take().sense;
    row.rhs = value();
    if (!std::isfinite(row.rhs)) fail("right-hand side must be finite", start);
    rows_.push_back(std::move(row));
  }
}

void Parser::bounds_section() {
  while (peek().kind != Tok::End) {
    if (peek().line_start && peek().kind == Tok::Ident &&
        is_reserved_word(peek().text) && !is_word(peek(), "inf") &&
        !is_word(peek(), "infinity")) {
      return;
    }
    const Token start = peek();
    int var = -1;
    double lo = 0.0, up = kInf;
    if (at_name()) {
      var = variable(take());
      lo = lo_[var];
      up = up_[var];
      if (is_word(peek(), "free")) {
        take();
        lo = -kInf;
        up = kInf;
      } else {
        if (peek().kind != Tok::Sense) fail("expected a bound", peek());
        Sense s = take().sense;
        double v = value();
        if (s == Sense::LessEqual) up = v;
        if (s == Sense::GreaterEqual) lo = v;
        if (s == Sense::Equal) lo = up = v;
      }
    } else {
      double v1 = value();
      if (peek().kind != Tok::Sense) fail("expected <=, >= or =", peek());
      Sense s1 = take().sense;
      if (!at_name()) fail("expected a variable name", peek());
      var = variable(take());
      lo = lo_[var];
      up = up_[var];
      if (s1 == Sense::LessEqual) lo = v1;
      if (s1 == Sense::GreaterEqual) up = v1;
      if (s1 == Sense::Equal) lo = up = v1;
      if (peek().kind == Tok::Sense && !peek().line_start) {
        Sense s2 = take().sense;
        double v2 = value();
        if (s2 == Sense::LessEqual) up = v2;
        if (s2 == Sense::GreaterEqual) lo = v2;
        if (s2 == Sense::Equal) lo = up = v2;
      }
    }
    if (in_bounds_[var]) fail("duplicate variable '" + names_[var] + "'", start);
    if (lo > up) fail("inverted bounds for '" + names_[var] + "'", start);
    in_bounds_[var] = 1;
    bounds_order_.push_back(var);
    lo_[var] = lo;
    up_[var] = up;
  }
}

void Parser::binaries_section() {
  while (at_name()) {
    const Token t = take();
    int var = variable(t);
    if (binary_[var]) fail("duplicate variable '" + t.text + "'", t);
    binary_[var] = 1;
  }
}

Model Parser::run() {
  std::array<bool, 5> seen{};
  bool ended = false;
  while (peek().kind != Tok::End) {
    const Token& t = peek();
    std::optional<Section> sec = header();
    if (!sec) {
      if (t.kind == Tok::Ident && t.line_start) {
        fail("unknown section '" + t.text + "'", t);
      }
      fail("unexpected token", t);
    }
    auto k = static_cast<std::size_t>(*sec);
    if (seen[k]) fail("duplicate section", t);
    seen[k] = true;
    switch (*sec) {
      case Section::Objective: objective_section(); break;
      case Section::Constraints: constraint_section(); break;
      case Section::Bounds: bounds_section(); break;
      case Section::Binaries: binaries_section(); break;
      case Section::End: ended = true; break;
    }
    if (ended) break;
  }
  if (!ended) fail("missing End", peek());
  if (peek().kind != Tok::End) fail("text after End", peek());

  // Ids follow the Bounds listing, then first appearance elsewhere.
  std::vector<int> order = bounds_order_;
  for (int v = 0; v < static_cast<int>(names_.size()); ++v) {
    if (!in_bounds_[v]) order.push_back(v);
  }
  std::vector<int> id_of(names_.size());
  Model model;
  for (std::size_t k = 0; k < order.size(); ++k) {
    int v = order[k];
    id_of[v] = static_cast<int>(k);
    double lo = lo_[v], up = up_[v];
    if (binary_[v]) {
      if (!in_bounds_[v]) up = 1.0;
      if (lo < 0.0 || up > 1.0) {
        fail("binary '" + names_[v] + "' has bounds outside [0, 1]", where_[v]);
      }
    }
    model.add_variable(binary_[v] ? VarKind::Binary : VarKind::Continuous, lo, up,
                       names_[v]);
  }
  auto convert = [&](const std::vector<std::pair<int, double>>& terms) {
    LinearExpr e;
    for (auto [v, c] : terms) {
      e.add(VarId{static_cast<std::uint32_t>(id_of[v])}, c);
    }
    return e;
  };
  model.set_objective(convert(objective_));
  for (RawRow& row : rows_) {
    model.add_constraint(convert(row.terms), row.sense, row.rhs, row.name);
  }
  return model;
}

}  // namespace

std::string write_lp(const Model& model) {
  std::string out;
  out += "Minimize\n obj: ";
  std::vector<Term> obj;
  const auto& cost = model.objective();
  for (std::size_t j = 0; j < cost.size(); ++j) {
    if (cost[j] != 0.0) obj.push_back({VarId{static_cast<std::uint32_t>(j)}, cost[j]});
  }
  append_expr(out, obj, model);
  out += "\nSubject To\n";
  for (const Constraint& row : model.constraints()) {
    out += ' ';
    out += row.name;
    out += ": ";
    append_expr(out, row.terms, model);
    out += ' ';
    out += sense_text(row.sense);
    out += ' ';
    append_number(out, row.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const Variable& v : model.variables()) {
    out += ' ';
    append_number(out, v.lower);
    out += " <= ";
    out += v.name;
    out += " <= ";
    append_number(out, v.upper);
    out += '\n';
  }
  out += "Binaries\n";
  for (const Variable& v : model.variables()) {
    if (v.kind == VarKind::Binary) {
      out += ' ';
      out += v.name;
      out += '\n';
    }
  }
  out += "End\n";
  return out;
}

Model read_lp(std::string_view text) {
  Parser parser(Lexer(text).run());
  return parser.run();
}

}  // namespace bess::milp

#include "densitylab/parser.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace densitylab {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  SetExpr parse() {
    SetExpr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after expression");
    return e;
  }

 private:
  SetExpr expr() {
    skip_ws();
    const std::size_t start = pos_;
    const std::string word = keyword();
    try {
      if (word == "nat") return SetExpr::nat();
      if (word == "empty") return SetExpr::empty();
      if (word == "finite") return finite();
      if (word == "ap") return ap();
      if (word == "blocks") return blocks();
      if (word == "union") return binary([](const SetExpr& a, const SetExpr& b) { return union_of(a, b); });
      if (word == "inter") return binary([](const SetExpr& a, const SetExpr& b) { return inter_of(a, b); });
      if (word == "diff") return binary([](const SetExpr& a, const SetExpr& b) { return diff_of(a, b); });
      if (word == "compl") return complement();
      if (word == "mcopy") return mcopy();
    } catch (const DomainError& e) {
      throw ParseError(start, e.what());
    }
    throw ParseError(start,
                     "expected one of nat, empty, finite, ap, blocks, union, inter, diff, "
                     "compl, mcopy");
  }

  SetExpr finite() {
    expect('{');
    std::vector<std::int64_t> elems;
    skip_ws();
    if (peek() != '}') elems = int_list();
    expect('}');
    return SetExpr::finite(std::move(elems));
  }

  SetExpr ap() {
    expect('(');
    const std::int64_t r = integer();
    expect(',');
    const std::int64_t m = integer();
    expect(')');
    return SetExpr::ap(r, m);
  }

  SetExpr blocks() {
    expect('(');
    const std::int64_t b = integer();
    expect(',');
    const std::int64_t p = integer();
    expect(',');
    expect_word("on");
    expect('=');
    expect('[');
    std::vector<std::int64_t> on;
    skip_ws();
    if (peek() != ']') on = int_list();
    expect(']');
    expect(')');
    return SetExpr::blocks(b, p, std::move(on));
  }

  template <typename F>
  SetExpr binary(F combine) {
    expect('(');
    SetExpr a = expr();
    expect(',');
    SetExpr b = expr();
    expect(')');
    return combine(a, b);
  }

  SetExpr complement() {
    expect('(');
    SetExpr a = expr();
    expect(')');
    return compl_of(a);
  }

  SetExpr mcopy() {
    expect('(');
    SetExpr inner = expr();
    expect(',');
    const std::int64_t m = integer();
    CopyRule rule = CopyRule::first();
    skip_ws();
    if (peek() == ',') {
      ++pos_;
      rule = copy_rule();
    }
    expect(')');
    return m_copy(inner, m, rule);
  }

  CopyRule copy_rule() {
    skip_ws();
    const std::size_t start = pos_;
    const std::string word = keyword();
    if (word == "first") return CopyRule::first();
    if (word == "offset") {
      expect(':');
      return CopyRule::at_offset(integer());
    }
    if (word == "seed") {
      expect(':');
      return CopyRule::seeded(unsigned_integer());
    }
    throw ParseError(start, "expected copy rule: first, offset:<t> or seed:<u64>");
  }

  std::vector<std::int64_t> int_list() {
    std::vector<std::int64_t> out;
    out.push_back(integer());
    skip_ws();
    while (peek() == ',') {
      ++pos_;
      out.push_back(integer());
      skip_ws();
    }
    return out;
  }

  std::string keyword() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected a keyword");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::int64_t integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected an integer");
    try {
      return std::stoll(std::string(text_.substr(start, pos_ - start)));
    } catch (...) {
      throw ParseError(start, "integer out of range");
    }
  }

  std::uint64_t unsigned_integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected an unsigned integer");
    try {
      return std::stoull(std::string(text_.substr(start, pos_ - start)));
    } catch (...) {
      throw ParseError(start, "integer out of range");
    }
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void expect_word(std::string_view w) {
    skip_ws();
    const std::size_t start = pos_;
    if (keyword() != w) throw ParseError(start, "expected '" + std::string(w) + "'");
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

SetExpr parse_set_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace densitylab

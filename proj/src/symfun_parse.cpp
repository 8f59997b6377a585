// Recursive-descent parser for the textual function grammar:
//
//   sum      := term ('+' term)*
//   term     := factor ('*' factor)*
//   factor   := number | 't' ['^' exponent] | '(' 'ln' 't' ')' ['^' exponent]
//             | 'ln' 't' | 'exp' '(' [sign] [number ['*']] 't' ['/' number] ')'
//   exponent := signed-number | '(' signed-number ['/' number] ')'
//
// `ln(t)` is accepted wherever `ln t` is.

#include <cctype>
#include <cstdlib>

#include "lpq/symfun.hpp"

namespace lpq {
namespace {

class Parser {
public:
  explicit Parser(std::string_view s) : s_(s) {}

  std::vector<AsymptoticMonomial> parse_sum() {
    std::vector<AsymptoticMonomial> out{parse_term()};
    while (accept('+')) out.push_back(parse_term());
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return out;
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError("function parse error at offset " + std::to_string(pos_) + ": " + msg +
                          " in \"" + std::string(s_) + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool accept_word(std::string_view w) {
    skip_ws();
    if (s_.substr(pos_, w.size()) != w) return false;
    std::size_t end = pos_ + w.size();
    if (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) return false;
    pos_ = end;
    return true;
  }
  bool at_number() {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }
  double number() {
    skip_ws();
    const char* begin = s_.data() + pos_;
    std::string buf(begin, s_.size() - pos_);
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str()) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - buf.c_str());
    return v;
  }
  double signed_number() {
    double sign = 1;
    if (accept('-'))
      sign = -1;
    else
      accept('+');
    return sign * number();
  }
  double exponent() {
    if (accept('(')) {
      double v = signed_number();
      if (accept('/')) v /= number();
      expect(')');
      return v;
    }
    return signed_number();
  }
  void expect_t() {
    if (accept('(')) {
      if (!accept_word("t")) fail("expected 't'");
      expect(')');
    } else if (!accept_word("t")) {
      fail("expected 't'");
    }
  }

  AsymptoticMonomial parse_term() {
    AsymptoticMonomial m{1.0, 0.0, 0.0, 0.0};
    do parse_factor(m);
    while (accept('*'));
    return m;
  }

  void parse_factor(AsymptoticMonomial& m) {
    if (at_number()) {
      m.coeff *= number();
      return;
    }
    if (accept_word("t")) {
      m.alpha += accept('^') ? exponent() : 1.0;
      return;
    }
    if (accept_word("ln")) {
      expect_t();
      m.gamma += 1.0;
      return;
    }
    if (accept_word("exp")) {
      expect('(');
      double rate = 1.0;
      if (accept('-'))
        rate = -1.0;
      else
        accept('+');
      if (at_number()) {
        rate *= number();
        accept('*');
      }
      if (!accept_word("t")) fail("expected 't' inside exp(...)");
      if (accept('/')) rate /= number();
      expect(')');
      m.delta += rate;
      return;
    }
    if (accept('(')) {
      if (!accept_word("ln")) fail("expected 'ln t' after '('");
      expect_t();
      expect(')');
      m.gamma += accept('^') ? exponent() : 1.0;
      return;
    }
    fail("expected a factor");
  }
};

}  // namespace

SymFun SymFun::parse(std::string_view text, Interval domain) {
  return symbolic(Parser(text).parse_sum(), domain);
}

}  // namespace lpq

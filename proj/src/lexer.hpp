#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "canrt/errors.hpp"

namespace canrt::detail {

enum class TokenKind { identifier, number, punct, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  SourcePos pos;

  bool is(std::string_view punct_or_word) const {
    return kind != TokenKind::end && text == punct_or_word;
  }
};

bool is_identifier(std::string_view text);

// Shared tokenizer for agent sources and belief formulas. `//` comments run to end of line.
// Multi-character operators: <- ~> || -> => >=. The keyword `assert-not` is a single token.
std::vector<Token> tokenize(std::string_view source);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::end; }

  bool accept(std::string_view text);
  const Token& expect(std::string_view text);
  const Token& expect_identifier(std::string_view what);

  [[noreturn]] void fail(std::string message, std::vector<std::string> expected = {}) const;
  [[noreturn]] void unexpected(std::initializer_list<std::string_view> expected) const;

  // Bounds recursion in the descent parsers; throws ParseError past kMaxDepth.
  class Nest {
   public:
    explicit Nest(TokenStream& in);
    ~Nest() { --in_.depth_; }
    Nest(const Nest&) = delete;
    Nest& operator=(const Nest&) = delete;

   private:
    TokenStream& in_;
  };

  static constexpr int kMaxDepth = 200;

 private:
  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
  int depth_ = 0;
};

std::string describe(const Token& token);

}  // namespace canrt::detail

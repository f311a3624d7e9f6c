#include "lexer.hpp"

#include <cctype>

namespace canrt {

ParseError::ParseError(SourcePos pos, std::string message, std::vector<std::string> expected)
    : Error(message), pos_(pos), message_(std::move(message)), expected_(std::move(expected)) {}

std::string ParseError::render(std::string_view file) const {
  std::string out = std::string(file) + ":" + std::to_string(pos_.line) + ":" +
                    std::to_string(pos_.column) + ": " + message_;
  if (!expected_.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected_.size(); ++i) {
      if (i > 0) out += i + 1 == expected_.size() ? " or " : ", ";
      out += expected_[i];
    }
    out += ")";
  }
  return out;
}

ValidationError::ValidationError(Kind kind, SourcePos pos, std::string message)
    : Error(message), kind_(kind), pos_(pos), message_(std::move(message)) {}

std::string ValidationError::render(std::string_view file) const {
  return std::string(file) + ":" + std::to_string(pos_.line) + ":" + std::to_string(pos_.column) +
         ": " + message_;
}

StateLimitExceeded::StateLimitExceeded(std::size_t limit, std::size_t frontier)
    : Error("state limit of " + std::to_string(limit) + " exceeded with " +
            std::to_string(frontier) + " states still in the frontier"),
      limit_(limit),
      frontier_(frontier) {}

UnknownLabel::UnknownLabel(std::string label)
    : Error("unknown label: " + label), label_(std::move(label)) {}

namespace detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

constexpr std::string_view kTwoCharOps[] = {"<-", "~>", "||", "->", "=>", ">="};
constexpr std::string_view kSingleChars = ".:,;()[]{}~&|!+-<=>/*#";

}  // namespace

bool is_identifier(std::string_view text) {
  if (text.empty() || !ident_start(text.front())) return false;
  for (char c : text)
    if (!ident_char(c)) return false;
  return true;
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };

  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.pos = pos;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string_view word = src.substr(i, j - i);
      if (word == "assert" && src.substr(j, 4) == "-not" &&
          (j + 4 >= src.size() || !ident_char(src[j + 4]))) {
        j += 4;
        word = src.substr(i, j - i);
      }
      tok.kind = TokenKind::identifier;
      tok.text = std::string(word);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.'))
        ++j;
      // A trailing '.' terminates a statement rather than belonging to the number.
      if (src[j - 1] == '.') --j;
      tok.kind = TokenKind::number;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      std::string_view two = src.substr(i, 2);
      bool matched = false;
      for (auto op : kTwoCharOps) {
        if (two == op) {
          tok.kind = TokenKind::punct;
          tok.text = std::string(op);
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (kSingleChars.find(c) == std::string_view::npos) {
          auto byte = static_cast<unsigned char>(c);
          std::string shown = "'" + std::string(1, c) + "'";
          if (byte < 0x20 || byte >= 0x7f) {
            constexpr char hex[] = "0123456789abcdef";
            shown = std::string("byte 0x") + hex[byte >> 4] + hex[byte & 15];
          }
          throw ParseError(pos, "unexpected character " + shown);
        }
        tok.kind = TokenKind::punct;
        tok.text = std::string(1, c);
        advance(1);
      }
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.pos = pos;
  out.push_back(end);
  return out;
}

std::string describe(const Token& token) {
  switch (token.kind) {
    case TokenKind::end:
      return "end of input";
    case TokenKind::identifier:
      return "identifier '" + token.text + "'";
    case TokenKind::number:
      return "number '" + token.text + "'";
    case TokenKind::punct:
      return "'" + token.text + "'";
  }
  return token.text;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t at = cursor_ + ahead;
  return at < tokens_.size() ? tokens_[at] : tokens_.back();
}

const Token& TokenStream::next() {
  const Token& tok = peek();
  if (cursor_ + 1 < tokens_.size()) ++cursor_;
  return tok;
}

bool TokenStream::accept(std::string_view text) {
  if (peek().is(text)) {
    next();
    return true;
  }
  return false;
}

const Token& TokenStream::expect(std::string_view text) {
  if (!peek().is(text)) unexpected({text});
  return next();
}

const Token& TokenStream::expect_identifier(std::string_view what) {
  if (peek().kind != TokenKind::identifier) fail("expected " + std::string(what), {std::string(what)});
  return next();
}

void TokenStream::fail(std::string message, std::vector<std::string> expected) const {
  throw ParseError(peek().pos, std::move(message) + ", found " + describe(peek()),
                   std::move(expected));
}

void TokenStream::unexpected(std::initializer_list<std::string_view> expected) const {
  std::vector<std::string> names;
  for (auto e : expected) names.push_back("'" + std::string(e) + "'");
  throw ParseError(peek().pos, "unexpected " + describe(peek()), std::move(names));
}

TokenStream::Nest::Nest(TokenStream& in) : in_(in) {
  if (++in_.depth_ > kMaxDepth) {
    --in_.depth_;
    throw ParseError(in_.peek().pos, "nesting too deep");
  }
}

}  // namespace detail
}  // namespace canrt

#include "onto/parser.hpp"

#include <fstream>
#include <sstream>

namespace onto {

namespace {

struct Token {
  enum class Type { Name, Placeholder, LParen, RParen, End };
  Type type;
  std::string value;
  size_t offset;
};

bool isNameChar(char ch) {
  return (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') ||
         (ch >= '0' && ch <= '9') || ch == '_' || ch == '-';
}

class Lexer {
 public:
  Lexer(std::string_view text, bool allowPlaceholders)
      : text_(text), allowPlaceholders_(allowPlaceholders) {
    advance();
  }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
      ++pos_;
    size_t start = pos_;
    if (pos_ >= text_.size()) {
      current_ = {Token::Type::End, "", start};
      return;
    }
    char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      current_ = {Token::Type::LParen, "(", start};
      return;
    }
    if (ch == ')') {
      ++pos_;
      current_ = {Token::Type::RParen, ")", start};
      return;
    }
    if (ch == '?' && allowPlaceholders_) {
      ++pos_;
      size_t nameStart = pos_;
      while (pos_ < text_.size() && isNameChar(text_[pos_])) ++pos_;
      if (pos_ == nameStart)
        throw ParseError(start, "expected placeholder label after '?'");
      current_ = {Token::Type::Placeholder,
                  std::string(text_.substr(nameStart, pos_ - nameStart)),
                  start};
      return;
    }
    if (isNameChar(ch)) {
      while (pos_ < text_.size() && isNameChar(text_[pos_])) ++pos_;
      current_ = {Token::Type::Name,
                  std::string(text_.substr(start, pos_ - start)), start};
      return;
    }
    throw ParseError(start, std::string("unexpected character '") + ch + "'");
  }

  std::string_view text_;
  bool allowPlaceholders_;
  size_t pos_ = 0;
  Token current_;
};

class Parser {
 public:
  Parser(std::string_view text, bool allowPlaceholders)
      : lexer_(text, allowPlaceholders) {}

  Rule rule() {
    size_t bodyStart = lexer_.peek().offset;
    if (lexer_.peek().type == Token::Type::Name &&
        lexer_.peek().value == "Nothing")
      throw ParseError(bodyStart, "rule body cannot be Nothing");
    ConceptPtr body = conceptExpr();
    Token kw = lexer_.take();
    if (kw.type != Token::Type::Name || kw.value != "SubClassOf")
      throw ParseError(kw.offset, "expected 'SubClassOf'");
    ConceptPtr head;
    if (lexer_.peek().type == Token::Type::Name &&
        lexer_.peek().value == "Nothing") {
      // Nothing is only legal as the entire head.
      Token bot = lexer_.take();
      if (lexer_.peek().type != Token::Type::End)
        throw ParseError(lexer_.peek().offset,
                         "Nothing must be the entire head");
      (void)bot;
      head = Concept::bottom();
    } else {
      head = conceptExpr();
    }
    if (lexer_.peek().type != Token::Type::End)
      throw ParseError(lexer_.peek().offset, "trailing input after rule");
    return Rule(std::move(body), std::move(head));
  }

 private:
  ConceptPtr conceptExpr() {
    std::vector<ConceptPtr> parts;
    parts.push_back(term());
    while (lexer_.peek().type == Token::Type::Name &&
           lexer_.peek().value == "and") {
      lexer_.take();
      parts.push_back(term());
    }
    return Concept::conjunction(std::move(parts));
  }

  ConceptPtr term() {
    Token t = lexer_.take();
    switch (t.type) {
      case Token::Type::LParen: {
        ConceptPtr inner = conceptExpr();
        Token close = lexer_.take();
        if (close.type != Token::Type::RParen)
          throw ParseError(close.offset, "expected ')'");
        return inner;
      }
      case Token::Type::Placeholder:
        return Concept::placeholder(t.value);
      case Token::Type::Name: {
        if (t.value == "Nothing")
          throw ParseError(t.offset, "Nothing is only legal as the full head");
        if (t.value == "and" || t.value == "some" || t.value == "SubClassOf")
          throw ParseError(t.offset, "keyword '" + t.value +
                                         "' cannot be a concept name");
        if (lexer_.peek().type == Token::Type::Name &&
            lexer_.peek().value == "some") {
          lexer_.take();
          return Concept::existential(t.value, term());
        }
        return Concept::atomic(t.value);
      }
      default:
        throw ParseError(t.offset, "expected a concept term");
    }
  }

  Lexer lexer_;
};

std::string stripComment(const std::string& line) {
  size_t hash = line.find('#');
  std::string out = hash == std::string::npos ? line : line.substr(0, hash);
  // Tolerate CRLF fixture files.
  while (!out.empty() && (out.back() == '\r' || out.back() == ' ' ||
                          out.back() == '\t'))
    out.pop_back();
  return out;
}

}  // namespace

Rule parse_rule(std::string_view text, bool allowPlaceholders) {
  return Parser(text, allowPlaceholders).rule();
}

std::vector<Rule> parse_rule_stream(std::istream& in,
                                    const std::string& name) {
  std::vector<Rule> out;
  std::string line;
  size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::string body = stripComment(line);
    if (body.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(parse_rule(body));
    } catch (const std::exception& e) {
      throw std::runtime_error(name + ":" + std::to_string(lineNo) + ": " +
                               e.what());
    }
  }
  return out;
}

Ontology load_ontology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rule file: " + path);
  Ontology onto;
  for (const Rule& r : parse_rule_stream(in, path)) onto.add(r);
  return onto;
}

void save_rules(const std::vector<Rule>& rules, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write rule file: " + path);
  for (const Rule& r : rules) out << r.id() << "\n";
}

}  // namespace onto

#pragma once

#include <map>
#include <memory>
#include <string>

#include "onto/concept.hpp"

namespace onto {

struct NliRequest {
  std::string prompt;
  int maxTokens = 4;
  double temperature = 0.0;  // deterministic decoding
};

struct NliVerdict {
  enum class Label { True, False, Unparseable };
  Label label = Label::Unparseable;
  std::string rawText;
};

// Prompt prefixes 1..5; each ends with a colon and is followed by
// "<statement>."
std::string prompt_prefix(int variant);
std::string build_prompt(const Rule& rule, int variant = 1);

// First alphabetic token decides, case-insensitively: "true" / "false",
// anything else is unparseable (scored as a negative downstream).
NliVerdict parse_verdict(const std::string& rawText);

struct NliTransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class NliClient {
 public:
  virtual ~NliClient() = default;
  virtual NliVerdict classify(const NliRequest& request) = 0;
};

// Table-driven client for tests and offline benchmarks: extracts the
// statement back out of the prompt and answers from the table
// (statement -> true?), defaulting to False.
class MockNliClient : public NliClient {
 public:
  MockNliClient() = default;
  explicit MockNliClient(std::map<std::string, bool> statementTruth)
      : truth_(std::move(statementTruth)) {}

  NliVerdict classify(const NliRequest& request) override;
  size_t callCount() const { return calls_; }

  // truth.tsv rows: statement \t 1|0
  static MockNliClient fromTruthFile(const std::string& path);
  static std::string statementOfPrompt(const std::string& prompt);

 private:
  std::map<std::string, bool> truth_;
  size_t calls_ = 0;
};

// Generic JSON-over-HTTP text-completion call. Request body:
// {"prompt": ..., "max_tokens": ..., "temperature": 0}. The response text
// is read from a dot-separated field path ("text", "choices.0.text").
class HttpNliClient : public NliClient {
 public:
  HttpNliClient(std::string endpoint, std::string authToken, int timeoutMs,
                std::string textFieldPath = "text");
  // Reads NLI_ENDPOINT, NLI_AUTH_TOKEN, NLI_TIMEOUT_MS (default 30000) and
  // NLI_TEXT_FIELD.
  static HttpNliClient fromEnv();

  NliVerdict classify(const NliRequest& request) override;

 private:
  std::string endpoint_;
  std::string authToken_;
  int timeoutMs_;
  std::string textFieldPath_;
};

}  // namespace onto

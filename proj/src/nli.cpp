#include "onto/nli.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "onto/verbalize.hpp"

namespace onto {

std::string prompt_prefix(int variant) {
  switch (variant) {
    case 1:
      return "Classify the text into True or False. Reply with only one "
             "word: True or False. Determine if the following statement is "
             "valid:";
    case 2:
      return "Assess the validity of the following statement. Reply with "
             "only one word: True or False. Determine if the following "
             "statement is valid:";
    case 3:
      return "Assess the validity of the following rule. Reply with only "
             "one word: True or False. Determine if the following rule is "
             "valid:";
    case 4:
      return "Classify the text into True or False. Reply with only one "
             "word: True or False. Determine if the following is a valid "
             "rule:";
    case 5:
      return "Classify the text into True or False. Reply with only one "
             "word: True or False. Determine if the following is valid "
             "statement:";
    default:
      throw std::invalid_argument("prompt variant must be in 1..5");
  }
}

std::string build_prompt(const Rule& rule, int variant) {
  return prompt_prefix(variant) + " " + verbalize_rule(rule).statement + ".";
}

NliVerdict parse_verdict(const std::string& rawText) {
  NliVerdict v;
  v.rawText = rawText;
  size_t i = 0;
  while (i < rawText.size() && !std::isalpha(static_cast<unsigned char>(rawText[i])))
    ++i;
  std::string token;
  while (i < rawText.size() && std::isalpha(static_cast<unsigned char>(rawText[i])))
    token += static_cast<char>(
        std::tolower(static_cast<unsigned char>(rawText[i++])));
  if (token == "true")
    v.label = NliVerdict::Label::True;
  else if (token == "false")
    v.label = NliVerdict::Label::False;
  else
    v.label = NliVerdict::Label::Unparseable;
  return v;
}

std::string MockNliClient::statementOfPrompt(const std::string& prompt) {
  // Every prompt variant ends ": <statement>." — take the last colon.
  size_t colon = prompt.rfind(": ");
  if (colon == std::string::npos) return prompt;
  std::string statement = prompt.substr(colon + 2);
  if (!statement.empty() && statement.back() == '.') statement.pop_back();
  return statement;
}

NliVerdict MockNliClient::classify(const NliRequest& request) {
  ++calls_;
  auto it = truth_.find(statementOfPrompt(request.prompt));
  bool answer = it != truth_.end() && it->second;
  NliVerdict v;
  v.rawText = answer ? "True" : "False";
  v.label = answer ? NliVerdict::Label::True : NliVerdict::Label::False;
  return v;
}

MockNliClient MockNliClient::fromTruthFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open truth file: " + path);
  std::map<std::string, bool> truth;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t tab = line.rfind('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path + ": expected statement\\tlabel");
    truth[line.substr(0, tab)] = line.substr(tab + 1) == "1";
  }
  return MockNliClient(std::move(truth));
}

HttpNliClient::HttpNliClient(std::string endpoint, std::string authToken,
                             int timeoutMs, std::string textFieldPath)
    : endpoint_(std::move(endpoint)),
      authToken_(std::move(authToken)),
      timeoutMs_(timeoutMs),
      textFieldPath_(std::move(textFieldPath)) {}

HttpNliClient HttpNliClient::fromEnv() {
  const char* endpoint = std::getenv("NLI_ENDPOINT");
  if (!endpoint || !*endpoint)
    throw std::runtime_error("NLI_ENDPOINT is not set");
  const char* token = std::getenv("NLI_AUTH_TOKEN");
  const char* timeout = std::getenv("NLI_TIMEOUT_MS");
  const char* field = std::getenv("NLI_TEXT_FIELD");
  return HttpNliClient(endpoint, token ? token : "",
                       timeout ? std::atoi(timeout) : 30000,
                       field && *field ? field : "text");
}

namespace {

// "choices.0.text" style field paths.
nlohmann::json digField(const nlohmann::json& root, const std::string& path) {
  nlohmann::json cur = root;
  std::istringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (cur.is_array()) {
      size_t idx = std::stoull(part);
      if (idx >= cur.size())
        throw NliTransportError("response field path out of range: " + path);
      cur = cur[idx];
    } else if (cur.is_object() && cur.contains(part)) {
      cur = cur[part];
    } else {
      throw NliTransportError("response lacks field: " + path);
    }
  }
  return cur;
}

}  // namespace

NliVerdict HttpNliClient::classify(const NliRequest& request) {
  std::string host = endpoint_;
  std::string path = "/";
  size_t scheme = host.find("://");
  std::string rest = scheme == std::string::npos ? host : host.substr(scheme + 3);
  size_t slash = rest.find('/');
  if (slash != std::string::npos) {
    path = rest.substr(slash);
    rest = rest.substr(0, slash);
  }
  std::string base =
      (scheme == std::string::npos ? "http://" : host.substr(0, scheme + 3)) +
      rest;

  httplib::Client client(base);
  client.set_connection_timeout(0, timeoutMs_ * 1000);
  client.set_read_timeout(timeoutMs_ / 1000, (timeoutMs_ % 1000) * 1000);
  httplib::Headers headers;
  if (!authToken_.empty())
    headers.emplace("Authorization", "Bearer " + authToken_);

  nlohmann::json body = {{"prompt", request.prompt},
                         {"max_tokens", request.maxTokens},
                         {"temperature", request.temperature}};
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res)
    throw NliTransportError("request to " + endpoint_ + " failed: " +
                            httplib::to_string(res.error()));
  if (res->status != 200)
    throw NliTransportError("request to " + endpoint_ + " returned status " +
                            std::to_string(res->status));
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(res->body);
  } catch (const std::exception& e) {
    throw NliTransportError(std::string("response is not JSON: ") + e.what());
  }
  nlohmann::json text = digField(parsed, textFieldPath_);
  if (!text.is_string())
    throw NliTransportError("response text field is not a string");
  return parse_verdict(text.get<std::string>());
}

}  // namespace onto

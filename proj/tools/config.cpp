#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>

namespace typlab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(const std::string& key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    parts.push_back(trim(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

double to_real(const std::string& key, const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || errno == ERANGE)
    throw UsageError("parameter " + key + ": '" + s + "' is not a number");
  return x;
}

std::uint64_t to_whole(const std::string& key, const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const auto x = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || *end != '\0' || errno == ERANGE)
    throw UsageError("parameter " + key + ": '" + s + "' is not a non-negative integer");
  return x;
}

}  // namespace

std::map<std::string, std::string> parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> out;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const auto where = source + ":" + std::to_string(number) + ": ";
    if (eq == std::string::npos) throw UsageError(where + "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw UsageError(where + "bad key '" + key + "'");
    if (value.empty()) throw UsageError(where + "empty value for '" + key + "'");
    if (!out.emplace(key, value).second) throw UsageError(where + "duplicate key '" + key + "'");
  }
  return out;
}

Params::Params(std::vector<ParamSpec> specs) : specs_(std::move(specs)) {
  for (const auto& s : specs_) values_[s.key] = s.fallback;
}

bool Params::known(const std::string& key) const { return values_.contains(key); }

void Params::merge(const std::map<std::string, std::string>& layer, const std::string& source) {
  for (const auto& [k, v] : layer) {
    if (!known(k)) throw UsageError(source + ": unknown key '" + k + "'");
    values_[k] = v;
  }
}

void Params::set(const std::string& key, const std::string& value) {
  if (!known(key)) throw UsageError("unknown key '" + key + "'");
  values_[key] = value;
}

const std::string& Params::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw std::logic_error("undeclared parameter " + key);
  return it->second;
}

double Params::real(const std::string& key) const { return to_real(key, text(key)); }

std::uint64_t Params::whole(const std::string& key) const { return to_whole(key, text(key)); }

std::vector<double> Params::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& part : split_commas(text(key))) out.push_back(to_real(key, part));
  return out;
}

std::vector<std::uint64_t> Params::wholes(const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const auto& part : split_commas(text(key))) out.push_back(to_whole(key, part));
  return out;
}

const std::string& Params::choice(const std::string& key, const std::vector<std::string>& choices) const {
  const auto& v = text(key);
  if (std::find(choices.begin(), choices.end(), v) == choices.end()) {
    std::string list;
    for (const auto& c : choices) list += (list.empty() ? "" : "|") + c;
    throw UsageError("parameter " + key + " must be one of " + list + ", got '" + v + "'");
  }
  return v;
}

std::string Params::echo() const {
  std::string out;
  for (const auto& s : specs_) {
    if (!out.empty()) out += ' ';
    out += s.key + '=' + values_.at(s.key);
  }
  return out;
}

}  // namespace typlab::cli

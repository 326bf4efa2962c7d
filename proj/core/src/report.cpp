#include "scallop/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "scallop/errors.hpp"

namespace scallop {

void Report::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}
void Report::set(const std::string& key, const char* value) {
  kv_[key] = value;
}
void Report::set(const std::string& key, double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  kv_[key] = buf;
}
void Report::set(const std::string& key, int value) {
  kv_[key] = std::to_string(value);
}
void Report::set(const std::string& key, long long value) {
  kv_[key] = std::to_string(value);
}
void Report::set(const std::string& key, std::size_t value) {
  kv_[key] = std::to_string(value);
}
void Report::set(const std::string& key, bool value) {
  kv_[key] = value ? "true" : "false";
}

bool Report::has(const std::string& key) const { return kv_.count(key) > 0; }

const std::string& Report::get_string(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw Error("Report: missing key '" + key + "'");
  return it->second;
}

double Report::get_double(const std::string& key) const {
  const std::string& s = get_string(key);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw Error("Report: key '" + key + "' is not a number");
  return v;
}

int Report::get_int(const std::string& key) const {
  return static_cast<int>(get_double(key));
}

bool Report::get_bool(const std::string& key) const {
  const std::string& s = get_string(key);
  if (s == "true") return true;
  if (s == "false") return false;
  throw Error("Report: key '" + key + "' is not a bool");
}

std::string Report::to_text() const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

std::string Report::to_text_excluding(const std::string& prefix) const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    if (k.rfind(prefix, 0) == 0) continue;
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

Report Report::from_text(const std::string& text) {
  Report doc;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find(" = ");
    if (eq == std::string::npos)
      throw Error("Report::from_text: malformed line '" + line + "'");
    doc.kv_[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return doc;
}

std::string Report::key(const std::string& group, int index,
                        const std::string& field) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%05d", index);
  std::string out = group;
  out += '.';
  out += buf;
  out += '.';
  out += field;
  return out;
}

}  // namespace scallop

#pragma once

#include <map>
#include <string>

namespace scallop {

/// Flat key-tree text document: one `path.to.key = value` line per entry,
/// emitted in sorted key order so identical content is byte-identical.
/// Doubles are written with 17 significant digits and survive a round trip
/// exactly.
class Report {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, const char* value);
  void set(const std::string& key, double value);
  void set(const std::string& key, int value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, std::size_t value);
  void set(const std::string& key, bool value);

  bool has(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

  std::string to_text() const;
  static Report from_text(const std::string& text);

  /// Text with keys under the given prefixes dropped (used to compare runs
  /// modulo timings).
  std::string to_text_excluding(const std::string& prefix) const;

  /// "group.0007.field" style key helper; zero-padded for sortability.
  static std::string key(const std::string& group, int index,
                         const std::string& field);

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace scallop

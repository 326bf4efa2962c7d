#include "scallop/fs_vector.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "scallop/errors.hpp"

namespace scallop {

FsVector FsVector::from_pairs(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  FsVector v;
  v.entries_.reserve(entries.size());
  for (const Entry& e : entries) {
    if (!v.entries_.empty() && v.entries_.back().first == e.first) {
      v.entries_.back().second += e.second;
      if (v.entries_.back().second == 0.0) v.entries_.pop_back();
    } else if (e.second != 0.0) {
      v.entries_.push_back(e);
    }
  }
  return v;
}

FsVector FsVector::unit(std::int32_t index, double coeff) {
  FsVector v;
  if (coeff != 0.0) v.entries_.push_back({index, coeff});
  return v;
}

FsVector FsVector::from_dense(std::span<const double> values,
                              std::int32_t first_index) {
  FsVector v;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] != 0.0)
      v.entries_.push_back({first_index + static_cast<std::int32_t>(k), values[k]});
  }
  return v;
}

double FsVector::at(std::int32_t index) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const Entry& e, std::int32_t i) { return e.first < i; });
  if (it != entries_.end() && it->first == index) return it->second;
  return 0.0;
}

std::int32_t FsVector::max_index() const {
  return entries_.empty() ? 0 : entries_.back().first;
}

void FsVector::set(std::int32_t index, double coeff) {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const Entry& e, std::int32_t i) { return e.first < i; });
  if (it != entries_.end() && it->first == index) {
    if (coeff == 0.0) {
      entries_.erase(it);
    } else {
      it->second = coeff;
    }
  } else if (coeff != 0.0) {
    entries_.insert(it, {index, coeff});
  }
}

namespace {

// Merge two sorted entry lists with per-entry combiner (b scaled by s).
std::vector<FsVector::Entry> merge_scaled(const std::vector<FsVector::Entry>& a,
                                          const std::vector<FsVector::Entry>& b,
                                          double s) {
  std::vector<FsVector::Entry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      double c = s * b[j].second;
      if (c != 0.0) out.push_back({b[j].first, c});
      ++j;
    } else {
      double c = a[i].second + s * b[j].second;
      if (c != 0.0) out.push_back({a[i].first, c});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

FsVector& FsVector::operator+=(const FsVector& rhs) {
  entries_ = merge_scaled(entries_, rhs.entries_, 1.0);
  return *this;
}

FsVector& FsVector::operator-=(const FsVector& rhs) {
  entries_ = merge_scaled(entries_, rhs.entries_, -1.0);
  return *this;
}

FsVector& FsVector::operator*=(double s) {
  if (s == 0.0) {
    entries_.clear();
    return *this;
  }
  for (Entry& e : entries_) e.second *= s;
  return *this;
}

FsVector axpy(double a, const FsVector& x, const FsVector& y) {
  FsVector out;
  out.entries_ = merge_scaled(y.entries_, x.entries_, a);
  return out;
}

double inner(const FsVector& a, const FsVector& b) {
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  double acc = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].first < eb[j].first) {
      ++i;
    } else if (eb[j].first < ea[i].first) {
      ++j;
    } else {
      acc += ea[i].second * eb[j].second;
      ++i;
      ++j;
    }
  }
  return acc;
}

double norm_sq(const FsVector& a) {
  double acc = 0.0;
  for (const auto& e : a.entries()) acc += e.second * e.second;
  return acc;
}

double norm(const FsVector& a) { return std::sqrt(norm_sq(a)); }

double dist_sq(const FsVector& a, const FsVector& b) {
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  double acc = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
      acc += ea[i].second * ea[i].second;
      ++i;
    } else if (i == ea.size() || eb[j].first < ea[i].first) {
      acc += eb[j].second * eb[j].second;
      ++j;
    } else {
      double d = ea[i].second - eb[j].second;
      acc += d * d;
      ++i;
      ++j;
    }
  }
  return acc;
}

double dist(const FsVector& a, const FsVector& b) {
  return std::sqrt(dist_sq(a, b));
}

std::string FsVector::to_text() const {
  std::string out = "{";
  char buf[64];
  bool first = true;
  for (const Entry& e : entries_) {
    if (!first) out += ",";
    std::snprintf(buf, sizeof(buf), "%d:%.17g", e.first, e.second);
    out += buf;
    first = false;
  }
  out += "}";
  return out;
}

FsVector FsVector::parse(const std::string& text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) {
    throw Error("FsVector::parse: " + msg + " in '" + text + "'");
  };
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos >= text.size() || text[pos] != '{') fail("expected '{'");
  ++pos;
  FsVector v;
  std::int32_t last_index = 0;
  while (pos < text.size() && text[pos] != '}') {
    char* end = nullptr;
    long idx = std::strtol(text.c_str() + pos, &end, 10);
    if (end == text.c_str() + pos) fail("expected index");
    pos = static_cast<std::size_t>(end - text.c_str());
    if (pos >= text.size() || text[pos] != ':') fail("expected ':'");
    ++pos;
    double coeff = std::strtod(text.c_str() + pos, &end);
    if (end == text.c_str() + pos) fail("expected coefficient");
    pos = static_cast<std::size_t>(end - text.c_str());
    if (idx <= last_index) fail("indices must be strictly increasing");
    last_index = static_cast<std::int32_t>(idx);
    if (coeff != 0.0) v.entries_.push_back({last_index, coeff});
    if (pos < text.size() && text[pos] == ',') ++pos;
  }
  if (pos >= text.size() || text[pos] != '}') fail("expected '}'");
  return v;
}

}  // namespace scallop

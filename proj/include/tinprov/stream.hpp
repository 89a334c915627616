#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tinprov/types.hpp"

namespace tinprov {

// Bijection between external vertex labels and dense indices, assigned in
// first-seen order.
class VertexTable {
 public:
  VertexId intern(std::string_view label) {
    auto it = index_.find(std::string(label));
    if (it != index_.end()) return it->second;
    VertexId id{static_cast<std::uint32_t>(labels_.size())};
    labels_.emplace_back(label);
    index_.emplace(labels_.back(), id);
    return id;
  }

  std::optional<VertexId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& label(VertexId v) const { return labels_.at(v.index); }

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, VertexId> index_;
};

struct Diagnostic {
  std::size_t line{0};
  std::string message;
};

struct IngestResult {
  std::vector<Interaction> interactions;
  std::vector<Diagnostic> rejected;
  bool had_header{false};
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// Tab-separated when the line contains a tab, comma-separated otherwise.
inline std::vector<std::string_view> split_fields(std::string_view line) {
  const char sep = line.find('\t') != std::string_view::npos ? '\t' : ',';
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    fields.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

}  // namespace detail

// Reads `source,dest,time,quantity` records. Comment lines start with '#';
// a first data line whose time field is not numeric is taken as a header.
// Bad records are reported with their 1-based line number and skipped.
inline IngestResult read_interactions(std::istream& in, VertexTable& table) {
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;

    auto fields = detail::split_fields(view);
    if (fields.size() != 4) {
      result.rejected.push_back(
          {line_no, "expected 4 fields, got " + std::to_string(fields.size())});
      seen_data = true;
      continue;
    }
    auto time = detail::parse_real(fields[2]);
    if (!seen_data) {
      seen_data = true;
      if (!time) {
        result.had_header = true;
        continue;
      }
    }
    auto quantity = detail::parse_real(fields[3]);
    if (fields[0].empty() || fields[1].empty()) {
      result.rejected.push_back({line_no, "empty vertex label"});
      continue;
    }
    if (!time || !std::isfinite(*time) || *time < 0) {
      result.rejected.push_back({line_no, "bad time field '" + std::string(fields[2]) + "'"});
      continue;
    }
    if (!quantity || !std::isfinite(*quantity)) {
      result.rejected.push_back(
          {line_no, "bad quantity field '" + std::string(fields[3]) + "'"});
      continue;
    }
    if (*quantity <= 0) {
      result.rejected.push_back(
          {line_no, "non-positive quantity '" + std::string(fields[3]) + "'"});
      continue;
    }
    Interaction r;
    r.source = table.intern(fields[0]);
    r.dest = table.intern(fields[1]);
    r.time = *time;
    r.quantity = *quantity;
    result.interactions.push_back(r);
  }
  return result;
}

// Puts the stream in nondecreasing time order, keeping input order among
// equal times. Returns true if a reorder was needed. Already ordered input
// is left untouched.
inline bool ensure_time_order(std::vector<Interaction>& stream) {
  auto by_time = [](const Interaction& a, const Interaction& b) { return a.time < b.time; };
  if (std::is_sorted(stream.begin(), stream.end(), by_time)) return false;
  std::stable_sort(stream.begin(), stream.end(), by_time);
  return true;
}

// Shortest decimal text that reads back to the same double.
inline std::string format_real(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

// Writes `source,dest,time,quantity` lines. Without a table, vertex i is
// labelled `v<i>`.
inline void write_interactions(std::ostream& os, std::span<const Interaction> stream,
                               const VertexTable* table = nullptr) {
  auto label = [&](VertexId v) {
    return table ? table->label(v) : "v" + std::to_string(v.index);
  };
  for (const auto& r : stream) {
    os << label(r.source) << ',' << label(r.dest) << ',' << format_real(r.time) << ','
       << format_real(r.quantity) << '\n';
  }
}

inline std::size_t vertex_count(std::span<const Interaction> stream) {
  std::uint32_t n = 0;
  for (const auto& r : stream) n = std::max({n, r.source.index + 1, r.dest.index + 1});
  return n;
}

}  // namespace tinprov

#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tinprov/alert.hpp"
#include "tinprov/engine.hpp"
#include "tinprov/stream.hpp"

namespace tinprov {

struct VertexSnapshot {
  VertexId vertex;
  Quantity total{0};
  std::vector<SnapshotEntry> entries;
};

struct SnapshotFrame {
  std::size_t step{0};  // interactions processed when the frame was taken
  std::vector<VertexSnapshot> buffers;
};

// Non-empty buffers, largest totals first when `top_n` limits the output,
// otherwise in vertex order.
inline SnapshotFrame take_snapshot(const Engine& engine, std::size_t top_n = 0) {
  SnapshotFrame frame;
  frame.step = engine.processed();
  std::vector<VertexId> vertices;
  for (std::uint32_t i = 0; i < engine.num_vertices(); ++i) {
    if (engine.total(VertexId{i}) > 0) vertices.push_back(VertexId{i});
  }
  if (top_n > 0 && top_n < vertices.size()) {
    std::stable_sort(vertices.begin(), vertices.end(), [&](VertexId a, VertexId b) {
      return engine.total(a) > engine.total(b);
    });
    vertices.resize(top_n);
  }
  for (VertexId v : vertices) frame.buffers.push_back({v, engine.total(v), engine.snapshot(v)});
  return frame;
}

struct ShrinkStats {
  std::size_t total_shrinks{0};
  std::size_t nonempty_buffers{0};
  std::size_t shrunk_buffers{0};
  double avg_shrinks{0};      // shrinks per non-empty buffer
  double pct_shrunk{0};       // % of non-empty buffers shrunk at least once
};

inline ShrinkStats shrink_stats(const Engine& engine) {
  ShrinkStats s;
  for (std::uint32_t i = 0; i < engine.num_vertices(); ++i) {
    VertexId v{i};
    if (!(engine.total(v) > 0)) continue;
    ++s.nonempty_buffers;
    const auto n = engine.shrink_count(v);
    s.total_shrinks += n;
    if (n > 0) ++s.shrunk_buffers;
  }
  if (s.nonempty_buffers > 0) {
    s.avg_shrinks = static_cast<double>(s.total_shrinks) / static_cast<double>(s.nonempty_buffers);
    s.pct_shrunk =
        100.0 * static_cast<double>(s.shrunk_buffers) / static_cast<double>(s.nonempty_buffers);
  }
  return s;
}

// Mean route length over all resident parcels; nullopt without paths.
inline std::optional<double> average_path_length(const Engine& engine) {
  if (!engine.config().track_paths) return std::nullopt;
  std::size_t parcels = 0, length = 0;
  for (std::uint32_t i = 0; i < engine.num_vertices(); ++i) {
    for (const auto& e : engine.snapshot(VertexId{i})) {
      ++parcels;
      length += e.path ? e.path->size() : 0;
    }
  }
  if (parcels == 0) return 0.0;
  return static_cast<double>(length) / static_cast<double>(parcels);
}

struct RunOptions {
  EngineConfig config;
  std::size_t snapshot_every{0};  // 0: one frame at the end
  std::optional<Quantity> alert_threshold;
  std::size_t top_n{0};
};

struct RunReport {
  std::string policy;
  std::size_t interactions{0};
  std::size_t rejected{0};
  bool reordered{false};
  double wall_seconds{0};
  std::size_t peak_entries{0};
  std::size_t final_entries{0};
  Quantity total_buffered{0};
  Quantity dropped_dust{0};
  ShrinkStats shrink;
  std::optional<double> avg_path_length;
  std::size_t path_nodes{0};
  std::vector<Alert> alerts;
};

using FrameSink = std::function<void(const SnapshotFrame&)>;

// Full replay of an already time-ordered stream.
inline RunReport run_replay(std::span<const Interaction> stream, std::size_t num_vertices,
                            const RunOptions& options, const FrameSink& sink) {
  if (options.alert_threshold && !is_proportional_policy(options.config.policy)) {
    throw ConfigError("alerts need a proportional policy");
  }
  Engine engine(options.config, num_vertices);
  std::optional<AlertScanner> scanner;
  if (options.alert_threshold) scanner.emplace(*options.alert_threshold, options.config.epsilon);

  RunReport report;
  report.policy = std::string(policy_name(options.config.policy));
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < stream.size(); ++i) {
    engine.process(stream[i]);
    report.peak_entries = std::max(report.peak_entries, engine.entry_count());
    if (scanner) {
      if (auto a = scanner->observe(i, stream[i], engine)) report.alerts.push_back(*a);
    }
    if (options.snapshot_every > 0 && (i + 1) % options.snapshot_every == 0 && sink) {
      sink(take_snapshot(engine, options.top_n));
    }
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (sink && (options.snapshot_every == 0 || stream.size() % options.snapshot_every != 0 ||
               stream.empty())) {
    sink(take_snapshot(engine, options.top_n));
  }

  report.interactions = stream.size();
  report.final_entries = engine.entry_count();
  for (std::uint32_t i = 0; i < engine.num_vertices(); ++i) {
    report.total_buffered += engine.total(VertexId{i});
    report.dropped_dust += engine.dropped_dust(VertexId{i});
  }
  report.shrink = shrink_stats(engine);
  report.avg_path_length = average_path_length(engine);
  if (const auto* paths = engine.paths()) report.path_nodes = paths->node_count();
  return report;
}

// Renders vertex and origin labels.
class Labeler {
 public:
  explicit Labeler(const VertexTable* table = nullptr,
                   const std::vector<std::string>* group_labels = nullptr)
      : table_(table), groups_(group_labels) {}

  std::string vertex(VertexId v) const {
    if (table_ && v.index < table_->size()) return table_->label(v);
    return "v" + std::to_string(v.index);
  }

  std::string origin(const Origin& o) const {
    switch (o.kind) {
      case Origin::Kind::vertex:
        return vertex(VertexId{o.id});
      case Origin::Kind::group:
        if (groups_ && o.id < groups_->size()) return (*groups_)[o.id];
        return "g" + std::to_string(o.id);
      case Origin::Kind::rest:
        return "*rest*";
      case Origin::Kind::unknown:
        return "*unknown*";
    }
    return "";
  }

  std::string path(const std::vector<VertexId>& route) const {
    std::string out;
    for (std::size_t i = 0; i < route.size(); ++i) {
      if (i) out += '>';
      out += vertex(route[i]);
    }
    return out;
  }

 private:
  const VertexTable* table_;
  const std::vector<std::string>* groups_;
};

struct CsvColumns {
  bool birth_time{false};
  bool path{false};

  static CsvColumns for_config(const EngineConfig& config) {
    return {config.policy == Policy::least_recently_born ||
                config.policy == Policy::most_recently_born,
            config.track_paths};
  }
};

inline void write_csv_header(std::ostream& os, CsvColumns columns) {
  os << "vertex,origin,quantity";
  if (columns.birth_time) os << ",birth_time";
  if (columns.path) os << ",path";
  os << '\n';
}

// One row per provenance entry; NoProv buffers get one row with an empty
// origin carrying the total.
inline void write_csv_frame(std::ostream& os, const SnapshotFrame& frame, const Labeler& labels,
                            CsvColumns columns) {
  for (const auto& buf : frame.buffers) {
    const std::string vertex = labels.vertex(buf.vertex);
    if (buf.entries.empty()) {
      os << vertex << ",," << format_real(buf.total);
      if (columns.birth_time) os << ',';
      if (columns.path) os << ',';
      os << '\n';
      continue;
    }
    for (const auto& e : buf.entries) {
      os << vertex << ',' << labels.origin(e.origin) << ',' << format_real(e.quantity);
      if (columns.birth_time) os << ',' << (e.birth_time ? format_real(*e.birth_time) : "");
      if (columns.path) os << ',' << (e.path ? labels.path(*e.path) : "");
      os << '\n';
    }
  }
}

inline nlohmann::json frame_to_json(const SnapshotFrame& frame, const Labeler& labels) {
  nlohmann::json buffers = nlohmann::json::array();
  for (const auto& buf : frame.buffers) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : buf.entries) {
      nlohmann::json j{{"origin", labels.origin(e.origin)}, {"quantity", e.quantity}};
      if (e.birth_time) j["birth_time"] = *e.birth_time;
      if (e.path) {
        nlohmann::json route = nlohmann::json::array();
        for (VertexId v : *e.path) route.push_back(labels.vertex(v));
        j["path"] = std::move(route);
      }
      entries.push_back(std::move(j));
    }
    buffers.push_back(
        {{"vertex", labels.vertex(buf.vertex)}, {"total", buf.total}, {"entries", std::move(entries)}});
  }
  return {{"step", frame.step}, {"buffers", std::move(buffers)}};
}

inline nlohmann::json report_to_json(const RunReport& r, const Labeler& labels) {
  nlohmann::json alerts = nlohmann::json::array();
  for (const auto& a : r.alerts) {
    alerts.push_back({{"interaction", a.index},
                      {"vertex", labels.vertex(a.vertex)},
                      {"total", a.total},
                      {"origins", a.origin_count}});
  }
  nlohmann::json j{{"policy", r.policy},
                   {"interactions", r.interactions},
                   {"rejected", r.rejected},
                   {"reordered", r.reordered},
                   {"wall_seconds", r.wall_seconds},
                   {"peak_entries", r.peak_entries},
                   {"final_entries", r.final_entries},
                   {"total_buffered", r.total_buffered},
                   {"dropped_dust", r.dropped_dust},
                   {"shrinks", r.shrink.total_shrinks},
                   {"avg_shrinks", r.shrink.avg_shrinks},
                   {"pct_shrunk", r.shrink.pct_shrunk},
                   {"alerts", std::move(alerts)}};
  if (r.avg_path_length) {
    j["avg_path_length"] = *r.avg_path_length;
    j["path_nodes"] = r.path_nodes;
  }
  return j;
}

inline void write_report_text(std::ostream& os, const RunReport& r, const Labeler& labels) {
  os << "policy: " << r.policy << '\n'
     << "interactions: " << r.interactions << '\n'
     << "rejected: " << r.rejected << '\n'
     << "reordered: " << (r.reordered ? "yes" : "no") << '\n'
     << "wall_seconds: " << format_real(r.wall_seconds) << '\n'
     << "peak_entries: " << r.peak_entries << '\n'
     << "final_entries: " << r.final_entries << '\n'
     << "total_buffered: " << format_real(r.total_buffered) << '\n'
     << "dropped_dust: " << format_real(r.dropped_dust) << '\n'
     << "shrinks: " << r.shrink.total_shrinks << '\n'
     << "avg_shrinks: " << format_real(r.shrink.avg_shrinks) << '\n'
     << "pct_shrunk: " << format_real(r.shrink.pct_shrunk) << '\n';
  if (r.avg_path_length) {
    os << "avg_path_length: " << format_real(*r.avg_path_length) << '\n'
       << "path_nodes: " << r.path_nodes << '\n';
  }
  os << "alerts: " << r.alerts.size() << '\n';
  for (const auto& a : r.alerts) {
    os << "alert: interaction=" << a.index << " vertex=" << labels.vertex(a.vertex)
       << " total=" << format_real(a.total) << " origins=" << a.origin_count << '\n';
  }
}

}  // namespace tinprov

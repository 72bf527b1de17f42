#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace effad {

enum class TraceKind {
  Handled,
  ContinuationCaptured,
  Resumed,
  CellNew,
  CellRead,
  CellWrite,
  CheckpointEnter,
  CheckpointReplay,
  RegionReleased,
};

std::string_view trace_kind_name(TraceKind kind);

struct TraceEvent {
  TraceKind kind;
  std::string detail;
  std::uint64_t step = 0;
};

/// Collects engine events in execution order. Steps are assigned on emission
/// and are strictly increasing.
class Tracer {
 public:
  void emit(TraceKind kind, std::string detail);

  /// Fresh identifier linking a ContinuationCaptured to its Resumed event.
  std::uint64_t next_capture() { return ++captures_; }

  const std::vector<TraceEvent>& events() const { return events_; }

 private:
  std::vector<TraceEvent> events_;
  std::uint64_t captures_ = 0;
};

/// One line per event: `step NNN  KIND  detail`.
std::string render_line(const TraceEvent& e);

}  // namespace effad

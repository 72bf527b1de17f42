#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "effad/trace.hpp"
#include "effad/value.hpp"

namespace effad {

enum class WriteKind { Seed, Accumulate, ReplaySeed };

struct WriteRecord {
  CellId cell;
  double value;
  WriteKind kind;
};

/// Handle for a region of allocations; regions are released LIFO.
struct Mark {
  std::size_t level = 0;
  std::uint64_t first = 0;
};

/// Mutable adjoint cells with live-cell accounting.
class CellStore {
 public:
  explicit CellStore(Tracer* tracer = nullptr) : tracer_(tracer) {}

  CellId new_cell(double v);
  double read(CellId id) const;
  void write(CellId id, double v, WriteKind kind = WriteKind::Accumulate);

  Mark mark_region();
  /// Releases every live cell allocated since `m`. `m` must be the most
  /// recent unreleased mark.
  void release_region(Mark m);

  bool is_live(CellId id) const;

  std::size_t live_count() const { return live_; }
  std::size_t peak_live() const { return peak_; }
  std::size_t total_allocations() const { return cells_.size(); }

  void enable_write_log(bool on = true) { log_writes_ = on; }
  const std::vector<WriteRecord>& write_log() const { return writes_; }

 private:
  const double& checked(CellId id) const;

  std::vector<std::optional<double>> cells_;
  std::vector<std::uint64_t> marks_;
  std::size_t live_ = 0;
  std::size_t peak_ = 0;
  bool log_writes_ = false;
  std::vector<WriteRecord> writes_;
  Tracer* tracer_;
};

}  // namespace effad

#include "effad/cellstore.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "effad/errors.hpp"

namespace effad {

namespace {

std::string_view kind_tag(WriteKind k) {
  switch (k) {
    case WriteKind::Seed:
      return "seed";
    case WriteKind::Accumulate:
      return "accumulate";
    case WriteKind::ReplaySeed:
      return "replay-seed";
  }
  return "?";
}

}  // namespace

CellId CellStore::new_cell(double v) {
  CellId id{cells_.size()};
  cells_.emplace_back(v);
  ++live_;
  peak_ = std::max(peak_, live_);
  if (tracer_) {
    tracer_->emit(TraceKind::CellNew,
                  fmt::format("<{}> = {}", id.index, format_real(v)));
  }
  return id;
}

const double& CellStore::checked(CellId id) const {
  if (id.index >= cells_.size())
    throw DanglingCell(fmt::format("<{}> was never allocated", id.index));
  const auto& cell = cells_[id.index];
  if (!cell) throw DanglingCell(fmt::format("<{}> was released", id.index));
  return *cell;
}

double CellStore::read(CellId id) const {
  double v = checked(id);
  if (tracer_) {
    tracer_->emit(TraceKind::CellRead,
                  fmt::format("<{}> -> {}", id.index, format_real(v)));
  }
  return v;
}

void CellStore::write(CellId id, double v, WriteKind kind) {
  checked(id);
  cells_[id.index] = v;
  if (log_writes_) writes_.push_back(WriteRecord{id, v, kind});
  if (tracer_) {
    tracer_->emit(TraceKind::CellWrite,
                  fmt::format("<{}> := {} ({})", id.index, format_real(v),
                              kind_tag(kind)));
  }
}

Mark CellStore::mark_region() {
  marks_.push_back(cells_.size());
  return Mark{marks_.size(), cells_.size()};
}

void CellStore::release_region(Mark m) {
  if (marks_.empty() || m.level != marks_.size() || marks_.back() != m.first) {
    throw NonNestedRelease(fmt::format(
        "mark {} released while {} marks are open", m.level, marks_.size()));
  }
  marks_.pop_back();
  std::size_t freed = 0;
  for (auto i = m.first; i < cells_.size(); ++i) {
    if (cells_[i]) {
      cells_[i].reset();
      ++freed;
    }
  }
  live_ -= freed;
  if (tracer_) {
    tracer_->emit(TraceKind::RegionReleased,
                  fmt::format("region {} freed {} cells, {} live", m.level,
                              freed, live_));
  }
}

bool CellStore::is_live(CellId id) const {
  return id.index < cells_.size() && cells_[id.index].has_value();
}

}  // namespace effad

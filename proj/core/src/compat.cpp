#include "tripmatch/compat.hpp"

#include <algorithm>
#include <string>

#include "tripmatch/error.hpp"

namespace tripmatch {

std::size_t CompatTable::state_index(int type, int clock) const {
  const auto t = static_cast<std::size_t>(type);
  if (type < 0 || t >= max_clock_.size()) {
    throw InvalidArgument("type index " + std::to_string(type) + " out of range");
  }
  if (clock < -window_ || clock > max_clock_[t]) {
    throw InvalidArgument("clock " + std::to_string(clock) + " outside state range");
  }
  return type_base_[t] + static_cast<std::size_t>(clock + window_);
}

std::span<const CompatEntry> CompatTable::compatible(int type, int clock) const {
  const std::size_t s = state_index(type, clock);
  return std::span<const CompatEntry>(entries_).subspan(
      state_offsets_[s], state_offsets_[s + 1] - state_offsets_[s]);
}

bool CompatTable::contains(int new_type, int type, int clock) const {
  const auto row = compatible(type, clock);
  return std::binary_search(row.begin(), row.end(), CompatEntry{new_type, 0},
                            [](const CompatEntry& a, const CompatEntry& b) {
                              return a.new_type < b.new_type;
                            });
}

CompatTable build_compat_table(const TripGeometry& geometry, const CompatOptions& options) {
  if (options.waiting_window < 0) throw InvalidArgument("waiting window must be >= 0");
  const std::size_t n = geometry.type_count();
  const int window = options.waiting_window;

  std::size_t states = 0;
  for (std::size_t j = 0; j < n; ++j) {
    states += static_cast<std::size_t>(geometry.length(static_cast<int>(j)) + window);
  }
  // Worst case every state is compatible with every type.
  if (states > options.max_entries || states * n > options.max_entries) {
    throw SizingError("compatibility table needs up to " + std::to_string(states * n) +
                      " entries; cap is " + std::to_string(options.max_entries));
  }

  CompatTable table;
  table.window_ = window;
  table.on_trip_ = options.on_trip;
  table.state_offsets_.reserve(states + 1);
  table.state_offsets_.push_back(0);
  for (std::size_t j = 0; j < n; ++j) {
    const int jt = static_cast<int>(j);
    table.max_clock_.push_back(geometry.length(jt) - 1);
    table.type_base_.push_back(table.state_offsets_.size() - 1);
    for (int u = -window; u <= geometry.length(jt) - 1; ++u) {
      if (u <= 0 || options.on_trip) {
        for (std::size_t i = 0; i < n; ++i) {
          const int it = static_cast<int>(i);
          if (geometry.is_compatible(it, jt, u)) {
            table.entries_.push_back({it, geometry.shared_trip_length(it, jt, u)});
          }
        }
      }
      table.state_offsets_.push_back(table.entries_.size());
    }
  }
  return table;
}

}  // namespace tripmatch

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tripmatch/netgraph.hpp"

namespace tripmatch {

struct CompatOptions {
  int waiting_window = 0;  // T
  bool on_trip = true;     // false empties N+ for every clock u > 0
  std::size_t max_entries = 50'000'000;
};

struct CompatEntry {
  int new_type = 0;
  int shared_length = 0;  // l_{i,j}^u
};

// N+_{j,u} for every solo state (j, u), -T <= u <= l_j - 1, with the shared
// lengths cached. Entries of one state are sorted by new_type.
class CompatTable {
 public:
  int waiting_window() const noexcept { return window_; }
  bool on_trip_enabled() const noexcept { return on_trip_; }
  std::size_t type_count() const noexcept { return max_clock_.size(); }
  int min_clock() const noexcept { return -window_; }
  int max_clock(int type) const { return max_clock_.at(static_cast<std::size_t>(type)); }

  std::size_t state_count() const noexcept { return state_offsets_.size() - 1; }
  std::size_t entry_count() const noexcept { return entries_.size(); }

  std::span<const CompatEntry> compatible(int type, int clock) const;
  bool contains(int new_type, int type, int clock) const;

 private:
  friend CompatTable build_compat_table(const TripGeometry&, const CompatOptions&);
  std::size_t state_index(int type, int clock) const;

  int window_ = 0;
  bool on_trip_ = true;
  std::vector<int> max_clock_;
  std::vector<std::size_t> type_base_;       // first state index of each type
  std::vector<std::size_t> state_offsets_;   // CSR over entries_
  std::vector<CompatEntry> entries_;
};

// Throws SizingError when the table would exceed options.max_entries.
CompatTable build_compat_table(const TripGeometry& geometry, const CompatOptions& options);

}  // namespace tripmatch

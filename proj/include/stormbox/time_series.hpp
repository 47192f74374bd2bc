#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stormbox {

/// Step-held scalar series over simulation time (seconds since start).
///
/// The value at t is the value of the latest sample with time <= t, and 0
/// before the first sample. Sample times must be strictly increasing.
class TimeSeries {
 public:
  struct Entry {
    double time = 0.0;
    double value = 0.0;
  };

  TimeSeries() = default;
  explicit TimeSeries(std::vector<Entry> entries);

  double value_at(double time) const;

  std::span<const Entry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  /// Index of the sample governing `time`, or -1 before the first sample.
  std::ptrdiff_t sample_index(double time) const;

  static bool strictly_increasing(std::span<const Entry> entries);

 private:
  std::vector<Entry> entries_;
};

}  // namespace stormbox

#include "stormbox/time_series.hpp"

#include <algorithm>
#include <stdexcept>

namespace stormbox {

TimeSeries::TimeSeries(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (!strictly_increasing(entries_)) {
    throw std::invalid_argument("time series sample times must be strictly increasing");
  }
}

bool TimeSeries::strictly_increasing(std::span<const Entry> entries) {
  return std::adjacent_find(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
           return !(a.time < b.time);
         }) == entries.end();
}

std::ptrdiff_t TimeSeries::sample_index(double time) const {
  auto it = std::upper_bound(entries_.begin(), entries_.end(), time,
                             [](double t, const Entry& e) { return t < e.time; });
  return std::distance(entries_.begin(), it) - 1;
}

double TimeSeries::value_at(double time) const {
  const auto i = sample_index(time);
  return i < 0 ? 0.0 : entries_[static_cast<std::size_t>(i)].value;
}

}  // namespace stormbox

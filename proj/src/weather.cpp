#include "cornbn/weather.hpp"

#include <algorithm>
#include <chrono>

#include <fmt/format.h>

#include "cornbn/errors.hpp"

namespace cornbn {

double compute_gdd(double t_max, double t_min, double t_base) {
  if (t_max < t_min) {
    throw Error(ErrorKind::InvalidRange,
                fmt::format("t_max {} is below t_min {}", t_max, t_min));
  }
  const double hi = std::clamp(t_max, kGddFloor, kGddCeiling);
  const double lo = std::clamp(t_min, kGddFloor, kGddCeiling);
  return std::max(0.0, (hi + lo) / 2.0 - t_base);
}

int days_in_month(int year, int month) {
  using namespace std::chrono;
  const year_month_day_last last{std::chrono::year{year} / std::chrono::month{static_cast<unsigned>(month)} / std::chrono::last};
  return static_cast<int>(static_cast<unsigned>(last.day()));
}

MonthlyAggregate aggregate_month(std::span<const DailyWeather> days, int month,
                                 AggregateMode mode, const AggregateOptions& options) {
  if (month < options.first_month || month > options.last_month) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("month {} outside the configured season {}..{}", month,
                            options.first_month, options.last_month));
  }
  MonthlyAggregate out;
  double sum = 0.0;
  for (const auto& d : days) {
    if (d.date.month != month) continue;
    const bool needs_temps = mode != AggregateMode::RainTotal;
    if (needs_temps ? !(d.t_max && d.t_min) : !d.precip) {
      ++out.skipped_days;
      continue;
    }
    switch (mode) {
      case AggregateMode::GddSum:
      case AggregateMode::GddMean:
        sum += compute_gdd(*d.t_max, *d.t_min, options.t_base);
        break;
      case AggregateMode::RainTotal:
        sum += *d.precip;
        break;
      case AggregateMode::TempMean:
        if (*d.t_max < *d.t_min) {
          throw Error(ErrorKind::InvalidRange,
                      fmt::format("t_max {} is below t_min {}", *d.t_max, *d.t_min));
        }
        sum += (*d.t_max + *d.t_min) / 2.0;
        break;
    }
    ++out.used_days;
  }
  if (out.used_days == 0) {
    throw Error(ErrorKind::EmptyMonth, fmt::format("no usable days in month {}", month));
  }
  const bool averaged = mode == AggregateMode::TempMean || mode == AggregateMode::GddMean;
  out.value = averaged ? sum / out.used_days : sum;
  return out;
}

}  // namespace cornbn

#pragma once

#include <optional>
#include <span>

namespace cornbn {

inline constexpr double kDefaultBaseTemp = 50.0;  // °F
inline constexpr double kGddFloor = 50.0;         // °F, minimum growth temperature
inline constexpr double kGddCeiling = 86.0;       // °F, optimum temperature

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;
};

/// One day of station weather. Temperatures in °F, precipitation in inches.
struct DailyWeather {
  Date date;
  std::optional<double> t_max;
  std::optional<double> t_min;
  std::optional<double> precip;
};

/// Growing degree days for one day: both temperatures are held inside
/// [50, 86] °F before averaging. With the default base the result lies in
/// [0, 36] and reaches 18 at (86, 50). Throws InvalidRange when t_max < t_min.
double compute_gdd(double t_max, double t_min, double t_base = kDefaultBaseTemp);

enum class AggregateMode { GddSum, GddMean, RainTotal, TempMean };

struct AggregateOptions {
  int first_month = 5;
  int last_month = 9;
  double t_base = kDefaultBaseTemp;
};

struct MonthlyAggregate {
  double value = 0.0;
  int used_days = 0;
  int skipped_days = 0;  // days of the month present in the input but lacking a needed field
};

// Days outside `month` are ignored; days missing a needed field are skipped
// and counted. Throws EmptyMonth when no usable day remains.
MonthlyAggregate aggregate_month(std::span<const DailyWeather> days, int month,
                                 AggregateMode mode, const AggregateOptions& options = {});

int days_in_month(int year, int month);

}  // namespace cornbn

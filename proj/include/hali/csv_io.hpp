#pragma once

#include <string>
#include <vector>

#include "hali/signal.hpp"

namespace hali {

/// Reads `time,value` or single-column `value` CSV. Missing samples are the
/// literal NaN (case-insensitive). With a time column the sampling rate is
/// derived from the spacing unless fs_hint > 0; single-column files require
/// fs_hint.
Signal read_signal_csv(const std::string& path, double fs_hint = 0.0);

/// Writes `time,value` rows with 17 significant digits; missing samples are
/// written as NaN. Round-trips double precision exactly.
void write_signal_csv(const std::string& path, const Signal& signal);

/// `start,length` rows, 0-based sample indices.
void write_intervals_csv(const std::string& path, const std::vector<MissingInterval>& intervals);
std::vector<MissingInterval> read_intervals_csv(const std::string& path);

/// One `name,series...` row per column; used by the decomposition dumps.
void write_series_csv(const std::string& path, const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& columns);

std::string format_double(double v);  ///< shortest representation with 17 significant digits

}  // namespace hali

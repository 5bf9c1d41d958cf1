#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "syncstab/scan.hpp"
#include "syncstab/trace_sample.hpp"

namespace syncstab {

/// Header `E,ln_E,trace,det_residual,class`, numbers with 17 significant digits.
void write_samples_csv(std::ostream& out, const std::vector<TraceSample>& samples);
std::vector<TraceSample> read_samples_csv(std::istream& in);

/// Run metadata shared by every JSON document.
nlohmann::json run_meta(const RunConfig& cfg);

/// {"intervals": [{"e_lo", "e_hi", "sign", "collapsed"}, ...], "meta": {...}}
nlohmann::json intervals_json(const std::vector<InstabilityInterval>& intervals,
                              const RunConfig& cfg);
nlohmann::json samples_json(const std::vector<TraceSample>& samples, const RunConfig& cfg);

/// tr F_E against ln E with the two guide lines at +-2.
void write_trace_svg(std::ostream& out, const std::vector<TraceSample>& samples);

struct EmitPaths {
  std::string csv;
  std::string json;
  std::string svg;
};

/// Writes whichever outputs have a non-empty path. Throws InputError when a
/// path cannot be opened for writing.
void emit(const std::vector<TraceSample>& samples, const std::vector<InstabilityInterval>& intervals,
          const RunConfig& cfg, const EmitPaths& paths);

}  // namespace syncstab

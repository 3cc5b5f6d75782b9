#pragma once

#include <string>

#include "mgdm/experiment.hpp"

namespace mgdm::harness {

struct OutputFormats {
  bool csv = true;
  bool manifest = true;
  bool svg = true;
};

/// Writes summary.csv (long format, header kind,method,param,index,stat,value),
/// manifest.json (spec echo, seeds, skipped points, version) and plot.svg into
/// `dir`. Throws empty_data for an empty table and io_error on write failure.
/// Output bytes depend only on the inputs, never on time or environment.
void emit_outputs(const ExperimentSpec& spec, const ExperimentResult& result,
                  const std::string& dir, const OutputFormats& formats = {});

/// Formats a double so the value round-trips exactly (shortest of %.17g family
/// that parses back to the same bits).
std::string format_double(double value);

}  // namespace mgdm::harness

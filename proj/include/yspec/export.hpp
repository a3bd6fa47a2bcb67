#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "yspec/discrete.hpp"
#include "yspec/solver.hpp"
#include "yspec/stokes.hpp"

namespace yspec {

// Deterministic text output: every floating-point field is printed with
// %.17g (shortest form that round-trips a double is used on the JSON side),
// rows come in a canonical order, and runs with identical inputs produce
// byte-identical files regardless of thread count.

// key=value pairs echoed into the output header; std::map keeps them sorted.
using ParamMap = std::map<std::string, std::string>;

std::string fmt17(double v);

void write_skeleton_csv(std::ostream& os, const SpectralSkeleton& s,
                        const ParamMap& params);
void write_skeleton_json(std::ostream& os, const SpectralSkeleton& s,
                         const ParamMap& params);

void write_spectrum_csv(std::ostream& os, const EigenvalueSet& eigs,
                        const ContainmentReport& cont, const ParamMap& params);
void write_spectrum_json(std::ostream& os, const EigenvalueSet& eigs,
                         const ContainmentReport& cont, const ParamMap& params);

void write_limits_csv(std::ostream& os, const LimitReport& rep,
                      const ParamMap& params);
void write_limits_json(std::ostream& os, const LimitReport& rep,
                       const ParamMap& params);

void write_grid_csv(std::ostream& os, const PseudospectraGrid& g,
                    const ParamMap& params);
void write_grid_json(std::ostream& os, const PseudospectraGrid& g,
                     const ParamMap& params);

}  // namespace yspec

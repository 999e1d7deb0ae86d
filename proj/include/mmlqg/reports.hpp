#pragma once

#include <string>
#include <vector>

#include "mmlqg/moments.hpp"
#include "mmlqg/nash.hpp"
#include "mmlqg/nce.hpp"
#include "mmlqg/population.hpp"
#include "mmlqg/riccati.hpp"
#include "mmlqg/study.hpp"

namespace mmlqg {

// CSV artifact builders with fixed, documented headers. Both the CLI and the
// acceptance suite go through these, so byte-identity checks cover the real
// output path.
std::string riccati_csv(const RiccatiSolution& sol);
std::string nce_csv(const NceSolution& sol, const ValidatedParams& vp);
std::string moments_csv(const MomentTrajectory& moments);
std::string costs_csv(const CostReport& report);
std::string gap_csv(const std::vector<GapReport>& reports,
                    int n_paths, const std::vector<std::uint64_t>& seeds);
std::string convergence_csv(const ConvergenceTable& table);
std::string paths_csv(const PopulationSample& sample);

}  // namespace mmlqg

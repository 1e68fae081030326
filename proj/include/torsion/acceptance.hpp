#ifndef TORSION_ACCEPTANCE_HPP
#define TORSION_ACCEPTANCE_HPP

#include "torsion/report.hpp"

namespace torsion {

/// The acceptance battery, criteria 1..10, with pinned tolerances. Details
/// carry no timings so the summary is deterministic.
SuiteSummary run_acceptance_suite();

/// Criteria 1..9 only (what criterion 10 reruns to check determinism).
SuiteSummary run_core_criteria();

}  // namespace torsion

#endif

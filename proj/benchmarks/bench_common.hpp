#pragma once

#include "ularma/simulate.hpp"

namespace bench {

// ULARMA(1,1) with the sinusoid covariate; the workhorse scenario for timings.
inline ularma::SimulatedPath path(std::size_t n, std::uint64_t seed = 42) {
  ularma::Scenario scn;
  scn.spec = ularma::ModelSpec::make(1, 1, 1);
  scn.gamma_true = ularma::ParamVector::from_flat(scn.spec, std::vector<double>{0.5, 0.5, 0.2, -0.4});
  scn.n = n;
  scn.covariate_rule = ularma::CovariateRule::sinusoid;
  scn.seed = seed;
  return ularma::simulate_replica(scn, 0);
}

}  // namespace bench

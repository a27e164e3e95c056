#pragma once

#include "quantk/json_io.hpp"
#include "quantk/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace quantk {

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  int trials = 0;
  int failures = 0;
  bool pass = false;
  Json config;            // tolerances, constants, environment echo
  Json results;           // per-trial records, both sides of every inequality
  double elapsed_seconds = 0;

  Json to_json() const;   // envelope + payload (timestamp lives in the envelope)
};

// suite in {filtration, commutator, difference, pairing-params, kappa,
// nerve, index, all}; unknown names throw.
SuiteReport run_suite(const std::string& suite, int trials, std::uint64_t seed);

SuiteReport suite_filtration(int trials, std::uint64_t seed);
SuiteReport suite_commutator(int trials, std::uint64_t seed);
SuiteReport suite_difference(int trials, std::uint64_t seed);
SuiteReport suite_pairing_params(int trials, std::uint64_t seed);
SuiteReport suite_kappa(int trials, std::uint64_t seed);
SuiteReport suite_nerve(int covers, std::uint64_t seed);
// index equivalence over sizes x fluxes plus the gapped vanishing run
SuiteReport suite_index(const std::vector<int>& sizes, int flux_lo, int flux_hi,
                        int vanishing_trials, std::uint64_t seed);
SuiteReport suite_all(std::uint64_t seed);

// shared random generators (exposed for the unit tests)
SpacePtr random_point_cloud_space(TrialRng& rng, int min_pts, int max_pts);
FilteredOperator random_banded_operator(SpacePtr space, int internal_dim, double radius,
                                        TrialRng& rng);
LipschitzElement random_lipschitz_element(SpacePtr space, int n, TrialRng& rng,
                                          bool real_valued);
// exact idempotent with controlled propagation plus a banded perturbation
// scaled to the requested defect
UnitizedOperator random_quasiidempotent(SpacePtr space, int internal_dim, double target_defect,
                                        double radius, TrialRng& rng);

}  // namespace quantk

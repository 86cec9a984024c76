// Copyright 2026 The wgs-mbc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WGS_VERIFICATION_HPP
#define WGS_VERIFICATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wgs/statevector_oracle.hpp"

namespace wgs {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

struct VerifyConfig {
    std::uint64_t seed = 20260611;
    std::int64_t mc_trials = 100000;
    int threads = 1;
    int n = 2;
    std::optional<double> phi;  // extra grid point for the gadget suite
    double tolerance = 1e-9;
    OracleConfig oracle;
};

CheckResult verify_closed_form(const VerifyConfig &cfg);
CheckResult verify_gadget_probabilities(const VerifyConfig &cfg);
CheckResult verify_cz_locals(const VerifyConfig &cfg);
CheckResult verify_near_deterministic(const VerifyConfig &cfg);
CheckResult verify_cluster_state(const VerifyConfig &cfg);
CheckResult verify_monte_carlo(const VerifyConfig &cfg);
CheckResult verify_register_sampling(const VerifyConfig &cfg);
CheckResult verify_bounds(const VerifyConfig &cfg);
CheckResult verify_properties(const VerifyConfig &cfg);

/// Oracle run of one full line (2 targets + 5 + 14k ancillas) against the
/// Kraus-algebra prediction for every branch.
CheckResult verify_line_oracle(double phi, int k, const VerifyConfig &cfg);

std::vector<std::string> suite_names();
/// Throws InvalidParams for an unknown suite.
std::vector<CheckResult> run_suite(const std::string &suite, const VerifyConfig &cfg);

}  // namespace wgs

#endif

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

#ifndef WGS_MONTECARLO_RUNNER_HPP
#define WGS_MONTECARLO_RUNNER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wgs/protocol_gadgets.hpp"

namespace wgs {

struct McReport {
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    double estimate = 0;
    double std_error = 0;  // sqrt(p(1-p)/N) at the estimate
    double analytic_value = 0;
    double z_score = 0;  // against the analytic variance
};

/// Trial t of edge e draws from PhiloxStream(seed, t, e).
McReport estimate_edge(double phi, int k, int m, std::int64_t trials, std::uint64_t seed, int threads = 1);
McReport estimate_protocol(double phi, int n, int k, int m, std::int64_t trials, std::uint64_t seed,
                           int threads = 1);

struct SweepRow {
    double phi;
    int n, k, m;
    double N, Dk, Em, P;
    McReport report;
};

std::vector<SweepRow> sweep(const std::vector<double> &phis, const std::vector<int> &ks, const std::vector<int> &ms,
                            int n, std::int64_t trials, std::uint64_t seed, int threads = 1);
std::string sweep_csv(const std::vector<SweepRow> &rows);

/// Exact distribution over full register tuples of near_det_cz, by enumeration.
std::map<std::string, double> register_distribution(const NearDetModel &model, int k, int m);
std::string register_key(const NearDetCzOutcome &o);

struct ChiSquare {
    double statistic = 0;
    int dof = 0;
    double p_value = 0;
    std::size_t cells = 0;
};
/// Sampler vs enumeration; cells with expected count < 5 are pooled.
ChiSquare register_goodness_of_fit(double phi, int k, int m, std::int64_t trials, std::uint64_t seed);

}  // namespace wgs

#endif

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

#include "wgs/montecarlo_runner.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "wgs/error.hpp"
#include "wgs/philox.hpp"

namespace wgs {

namespace {

// Counts successes of `trial(t)` over [0, trials), split into contiguous
// chunks. Each trial owns its substream, so the total is thread-count independent.
template <class F>
std::int64_t count_parallel(std::int64_t trials, int threads, F trial) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::int64_t>(trials, 64))));
    std::vector<std::int64_t> counts(threads, 0);
    auto work = [&](int w) {
        std::int64_t lo = trials * w / threads, hi = trials * (w + 1) / threads;
        std::int64_t c = 0;
        for (std::int64_t t = lo; t < hi; t++) {
            c += trial(t);
        }
        counts[w] = c;
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; w++) {
            pool.emplace_back(work, w);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    std::int64_t total = 0;
    for (auto c : counts) {
        total += c;
    }
    return total;
}

McReport make_report(std::int64_t trials, std::int64_t successes, double analytic_value) {
    McReport r;
    r.trials = trials;
    r.successes = successes;
    r.estimate = static_cast<double>(successes) / trials;
    r.std_error = std::sqrt(r.estimate * (1 - r.estimate) / trials);
    r.analytic_value = analytic_value;
    double sd = std::sqrt(analytic_value * (1 - analytic_value) / trials);
    r.z_score = sd > 0 ? (r.estimate - analytic_value) / sd : (r.estimate == analytic_value ? 0.0 : INFINITY);
    return r;
}

bool edge_trial(const NearDetModel &model, int k, int m, std::uint64_t seed, std::int64_t t, int e) {
    PhiloxStream rng(seed, static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(e));
    SampledSource src([&rng] { return rng.uniform(); });
    return near_det_cz(model, k, m, src, {false}).success;
}

void check_trials(std::int64_t trials) {
    if (trials < 1) {
        throw Error(ErrorCode::InvalidParams, "trials must be >= 1");
    }
}

}  // namespace

McReport estimate_edge(double phi, int k, int m, std::int64_t trials, std::uint64_t seed, int threads) {
    check_trials(trials);
    NearDetModel model = NearDetModel::build(phi);
    std::int64_t s =
        count_parallel(trials, threads, [&](std::int64_t t) { return edge_trial(model, k, m, seed, t, 0); });
    return make_report(trials, s, d_k(phi, k) * d_k(phi, k) * e_m(phi, m));
}

McReport estimate_protocol(double phi, int n, int k, int m, std::int64_t trials, std::uint64_t seed, int threads) {
    check_trials(trials);
    if (n < 2) {
        throw Error(ErrorCode::InvalidParams, "n must be >= 2");
    }
    NearDetModel model = NearDetModel::build(phi);
    int edges = 2 * n * (n - 1);
    std::int64_t s = count_parallel(trials, threads, [&](std::int64_t t) {
        // Edges are independent; the first failure decides the trial.
        for (int e = 0; e < edges; e++) {
            if (!edge_trial(model, k, m, seed, t, e)) {
                return false;
            }
        }
        return true;
    });
    return make_report(trials, s, overall_probability(phi, n, k, m));
}

std::vector<SweepRow> sweep(const std::vector<double> &phis, const std::vector<int> &ks, const std::vector<int> &ms,
                            int n, std::int64_t trials, std::uint64_t seed, int threads) {
    if (phis.empty() || ks.empty() || ms.empty()) {
        throw Error(ErrorCode::InvalidParams, "sweep grids must be nonempty");
    }
    std::vector<SweepRow> rows;
    for (double phi : phis) {
        for (int k : ks) {
            for (int m : ms) {
                SweepRow r{phi, n, k, m, consumed_qubits(n, k, m), d_k(phi, k), e_m(phi, m),
                           overall_probability(phi, n, k, m), {}};
                r.report = estimate_protocol(phi, n, k, m, trials, seed, threads);
                rows.push_back(r);
            }
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::ostringstream out;
    out << "phi,n,k,m,N,Dk,Em,P,estimate,stderr,z\n";
    out << std::setprecision(12);
    for (const auto &r : rows) {
        out << r.phi << "," << r.n << "," << r.k << "," << r.m << "," << std::setprecision(17) << r.N
            << std::setprecision(12) << "," << r.Dk << "," << r.Em << "," << r.P << "," << r.report.estimate << ","
            << r.report.std_error << "," << r.report.z_score << "\n";
    }
    return out.str();
}

std::string register_key(const NearDetCzOutcome &o) {
    std::ostringstream key;
    for (const auto &[name, value] : o.registers()) {
        key << name << "=" << value << ";";
    }
    return key.str();
}

std::map<std::string, double> register_distribution(const NearDetModel &model, int k, int m) {
    std::map<std::string, double> dist;
    enumerate_near_det_cz(model, k, m, [&dist](const NearDetCzOutcome &o, double p) {
        if (p > 0) {
            dist[register_key(o)] += p;
        }
    });
    return dist;
}

ChiSquare register_goodness_of_fit(double phi, int k, int m, std::int64_t trials, std::uint64_t seed) {
    check_trials(trials);
    NearDetModel model = NearDetModel::build(phi);
    auto dist = register_distribution(model, k, m);
    std::map<std::string, std::int64_t> seen;
    for (std::int64_t t = 0; t < trials; t++) {
        PhiloxStream rng(seed, static_cast<std::uint32_t>(t), 0xFFFFFFFFu);
        SampledSource src([&rng] { return rng.uniform(); });
        seen[register_key(near_det_cz(model, k, m, src))]++;
    }
    ChiSquare out;
    double pool_exp = 0, pool_obs = 0;
    for (const auto &[key, p] : dist) {
        double expected = p * trials;
        double observed = seen.count(key) ? static_cast<double>(seen.at(key)) : 0.0;
        if (expected < 5) {
            pool_exp += expected;
            pool_obs += observed;
            continue;
        }
        out.statistic += (observed - expected) * (observed - expected) / expected;
        out.cells++;
    }
    for (const auto &[key, c] : seen) {
        if (!dist.count(key)) {
            pool_obs += c;  // a tuple the enumeration never produced
        }
    }
    if (pool_exp > 0) {
        out.statistic += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
        out.cells++;
    } else if (pool_obs > 0) {
        out.statistic = INFINITY;
    }
    out.dof = static_cast<int>(out.cells) - 1;
    if (out.dof < 1 || !std::isfinite(out.statistic)) {
        out.p_value = std::isfinite(out.statistic) ? 1.0 : 0.0;
        return out;
    }
    boost::math::chi_squared dist_chi(out.dof);
    out.p_value = boost::math::cdf(boost::math::complement(dist_chi, out.statistic));
    return out;
}

}  // namespace wgs

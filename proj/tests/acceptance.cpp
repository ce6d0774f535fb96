// Acceptance suite: one pass/fail line per criterion, exact arithmetic
// throughout. Exit status 0 iff every criterion passes.

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "fjrw/correlator.hpp"
#include "fjrw/localization.hpp"
#include "fjrw/model.hpp"
#include "fjrw/mu.hpp"
#include "fjrw/verify.hpp"

using namespace fjrw;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << name;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++failures;
}

std::vector<int> all_states(const ModelSpec& m) {
    std::vector<int> v;
    for (int b = 1; b <= m.r; ++b) v.push_back(b);
    return v;
}

std::vector<ModelSpec> matrix() {
    return {
        ModelSpec(2, {1}),          ModelSpec(3, {1}),       ModelSpec(3, {1, 1}),
        ModelSpec(5, {1}),          ModelSpec(5, {1, 1}),    ModelSpec(5, {1, 1, 1, 1, 1}),
        ModelSpec(6, {1, 2}),       ModelSpec(6, {1, 2, 3}), ModelSpec(6, {2, 3}),
        ModelSpec(6, {1, 1, 2, 3, 3}),
    };
}

const ModelSpec quintic(5, {1, 1, 1, 1, 1});
const ModelSpec rspin5(5, {1});

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
    // 1. multiset aggregation vs the ordered brute-force expansion, t <= 5
    {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        for (const ModelSpec& m : {quintic, rspin5}) {
            TruncationPolicy pol{5, 0, -10, 10, 0};
            ok = ok && mu_series(m, all_states(m), pol) ==
                           mu_series_bruteforce(m, all_states(m), pol);
        }
        double dt = seconds_since(t0);
        report(1, "mu-series aggregation equals ordered expansion (t-deg 5)", ok && dt < 10,
               std::to_string(dt).substr(0, 5) + "s");
    }

    // 2. every length-1 sequence has mu = 1, across the model matrix
    {
        bool ok = true;
        TruncationPolicy pol{1, 0, -8, 8, 0};
        for (const ModelSpec& m : matrix())
            for (int b = 1; b <= m.r; ++b)
                ok = ok && mu_coefficient(m, {b}, pol) ==
                               TruncatedSeries::constant(pol, Rational(1));
        report(2, "mu of every singleton sequence is 1", ok);
    }

    // 3. wall-crossing identity, g in {0,1,2,3}, plus a negative control
    {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string detail;
        for (const ModelSpec& m : {quintic, rspin5}) {
            TruncationPolicy pol{6, 2, -5, 3, 0};
            for (int g = 0; g <= 3 && ok; ++g) {
                CheckReport rep =
                    check_wallcrossing_identity(m, g, all_states(m), pol, g == 0);
                if (!rep.ok) {
                    ok = false;
                    detail = "g=" + std::to_string(g) + ": " + rep.detail;
                }
            }
            MuPerturbation bad{to_multiset(std::vector<int>{2, 2}), Rational(1, 7)};
            CheckReport ctrl = check_wallcrossing_identity(m, 1, all_states(m), pol, false,
                                                           BroadMode::AsWritten, &bad);
            if (ctrl.ok) {
                ok = false;
                detail = "negative control did not fail";
            }
        }
        double dt = seconds_since(t0);
        report(3, "wall-crossing identity, g <= 3, t-deg 6, u-deg 2, psi-deg 3",
               ok && dt < 300, detail.empty() ? std::to_string(dt).substr(0, 6) + "s" : detail);
    }

    // 4. closed-form dilaton reduction for the quintic up to t^10
    {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string detail;
        TruncationPolicy pol{10, 0, -2, 2, 0};
        for (int g : {1, 2, 3}) {
            CheckReport rep = check_dilaton_closed_form(quintic, g, pol);
            if (!rep.ok) {
                ok = false;
                detail = "g=" + std::to_string(g) + ": " + rep.detail;
            }
        }
        double dt = seconds_since(t0);
        report(4, "dilaton closed form (I0 powers, log I0 at genus 1) up to t^10",
               ok && dt < 60, detail.empty() ? std::to_string(dt).substr(0, 5) + "s" : detail);
    }

    // 5. residue vs truncation route, |J| <= 5, d <= 4, >= 500 cases
    {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        long cases = 0;
        for (const ModelSpec& m : matrix()) {
            TruncationPolicy pol{0, 0, -20, 12, 0};
            for_each_multiset<int>(all_states(m), 5, [&](const Multiset<int>& ms) {
                if (ms.empty()) return;
                std::vector<int> J = multiset_to_vector(ms);
                for (long d = 0; d <= 4; ++d) {
                    ok = ok && check_residue_identity(m, J, d, pol).ok;
                    ++cases;
                }
            });
        }
        double dt = seconds_since(t0);
        report(5, "residue extraction equals truncated substitution", ok && cases >= 500 && dt < 30,
               std::to_string(cases) + " cases, " + std::to_string(dt).substr(0, 5) + "s");
    }

    // 6. genus-0 resummation and J-function two-form equality, r <= 5
    {
        bool ok = true;
        std::string detail;
        for (const ModelSpec& m : {ModelSpec(2, {1}), ModelSpec(3, {1}), ModelSpec(3, {1, 1}),
                                   rspin5, quintic}) {
            TruncationPolicy pol{5, 2, -12, 3, 0};
            CheckReport rep = check_genus0_resummation(m, pol);
            if (!rep.ok) {
                ok = false;
                detail = "resummation r=" + std::to_string(m.r) + ": " + rep.detail;
                break;
            }
            TruncationPolicy jpol{4, 2, -10, 2, 0};
            JFunctionResult jr = assemble_J_function(m, jpol);
            if (!jr.report.ok) {
                ok = false;
                detail = "jfunction r=" + std::to_string(m.r) + ": " + jr.report.detail;
                break;
            }
        }
        report(6, "genus-0 resummation and J-function two-form equality", ok, detail);
    }

    // 7. scalar formula suite on >= 200 randomized valid profiles
    {
        std::mt19937 rng(2024);
        bool ok = true;
        auto models = matrix();
        std::uniform_int_distribution<std::size_t> model_d(0, models.size() - 1);
        int count = 0;
        for (int i = 0; i < 250; ++i) {
            const ModelSpec& m = models[model_d(rng)];
            GammaType gamma = detail::random_valid_gamma(m, rng);
            ++count;
            try {
                if (!selection_rule(m, gamma)) ok = false;
                Int v0 = virtual_dimension(m, gamma, false);
                Int v1 = virtual_dimension(m, gamma, true);
                if (v1 - v0 != 1) ok = false;
                Rational eps = epsilon_gamma(m, gamma);
                if (eps * eps != rational_pow(Rational(m.r), 2 - 2 * gamma.genus)) ok = false;
            } catch (const std::exception&) {
                ok = false;
            }
            if (!gamma.light.empty()) {
                FixedPointDatum nd = node_data(m, gamma.light);
                long total = 1, count_r = 0;
                for (int b : gamma.light) {
                    total += b - 1;
                    if (b == m.r) ++count_r;
                }
                if (m.r * nd.node_ell + nd.node_k != total) ok = false;
                if ((nd.a_infinity + nd.node_k) % m.r != 0) ok = false;
                if (nd.bundle_shift_c !=
                    nd.node_ell - count_r + (nd.node_k == m.r ? 1 : 0))
                    ok = false;
            }
        }
        report(7, "scalar formulas on randomized valid profiles", ok && count >= 200,
               std::to_string(count) + " profiles");
    }

    // 8. twisted mu at lambda = 0 equals untwisted mu, |J| <= 4
    {
        bool ok = true;
        for (const ModelSpec& m : matrix()) {
            TruncationPolicy pol{0, 0, -10, 10, 4 * m.s()};
            for_each_multiset<int>(all_states(m), 4, [&](const Multiset<int>& ms) {
                if (ms.empty()) return;
                std::vector<int> J = multiset_to_vector(ms);
                TruncatedSeries tw = mu_coefficient(m, J, pol, /*twisted=*/true);
                for (int a = 1; a <= m.s(); ++a)
                    tw = tw.substitute(lambda_gen(a), TruncatedSeries::zero(pol));
                ok = ok && tw == mu_coefficient(m, J, pol, /*twisted=*/false);
            });
        }
        report(8, "twisted mu degenerates to untwisted mu at lambda = 0", ok);
    }

    // 9. determinism: two verify-all runs with one seed are byte-identical
    {
        VerifyConfig cfg;
        cfg.t_deg = 3;
        cfg.u_deg = 1;
        cfg.psi_deg = 2;
        cfg.max_genus = 1;
        cfg.seed = 42;
        cfg.random_gamma_count = 50;
        VerifyResult a = run_verify_all(cfg);
        VerifyResult b = run_verify_all(cfg);
        report(9, "verify-all is byte-identical across runs with one seed",
               a.ok && b.ok && a.report == b.report);
    }

    if (failures == 0) std::cout << "ALL CRITERIA PASSED" << std::endl;
    return failures == 0 ? 0 : 1;
}

#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fjrw/correlator.hpp"
#include "fjrw/localization.hpp"
#include "fjrw/model.hpp"
#include "fjrw/mu.hpp"

namespace fjrw {

// ---------------------------------------------------------------------------
// Orchestrated verification suite. Every check is exact; the report is a
// deterministic function of (bounds, seed) so that two runs with the same
// configuration are byte-identical.
// ---------------------------------------------------------------------------

struct VerifyConfig {
    int t_deg = 4;
    int u_deg = 2;
    int psi_deg = 2;
    int max_genus = 2;
    unsigned long seed = 1;
    int random_gamma_count = 200;
};

struct VerifyResult {
    bool ok = true;
    std::string report;
};

namespace detail {

inline std::vector<ModelSpec> test_matrix() {
    return {
        ModelSpec(2, {1}),
        ModelSpec(3, {1}),
        ModelSpec(3, {1, 1}),
        ModelSpec(5, {1}),
        ModelSpec(5, {1, 1, 1, 1, 1}),
        ModelSpec(6, {1, 2}),
        ModelSpec(6, {1, 2, 3}),
    };
}

inline std::vector<int> all_states(const ModelSpec& model) {
    std::vector<int> v;
    for (int b = 1; b <= model.r; ++b) v.push_back(b);
    return v;
}

class ReportBuilder {
public:
    void line(bool ok, const std::string& name, const std::string& detail) {
        out_ << (ok ? "PASS" : "FAIL") << "  " << name;
        if (!detail.empty()) out_ << "  (" << detail << ")";
        out_ << "\n";
        ok_ = ok_ && ok;
    }
    bool ok() const { return ok_; }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    bool ok_ = true;
};

/// A random insertion profile satisfying the selection rule: the last
/// light value is solved for mod r.
inline GammaType random_valid_gamma(const ModelSpec& model, std::mt19937& rng) {
    std::uniform_int_distribution<int> genus_d(0, 3), count_d(0, 3), state_d(1, model.r);
    for (;;) {
        int g = genus_d(rng);
        std::vector<int> heavy, light;
        int m = count_d(rng), n = count_d(rng);
        for (int i = 0; i < m; ++i) heavy.push_back(state_d(rng));
        for (int i = 0; i < n; ++i) light.push_back(state_d(rng));
        long acc = 2 * g - 2;
        for (int a : heavy) acc += 1 - a;
        for (int b : light) acc += 1 - b;
        light.push_back(model.canonical_state(1 + acc));
        GammaType gamma(model, g, heavy, light);
        if (selection_rule(model, gamma)) return gamma;
    }
}

} // namespace detail

inline VerifyResult run_verify_all(const VerifyConfig& cfg = {}) {
    detail::ReportBuilder rb;
    ModelSpec quintic(5, {1, 1, 1, 1, 1});
    ModelSpec rspin5(5, {1});

    // 1. mu-series aggregation vs brute-force ordered expansion
    for (const ModelSpec& model : {quintic, rspin5}) {
        TruncationPolicy pol{cfg.t_deg, 0, -8, 8, 0};
        StateVector agg = mu_series(model, detail::all_states(model), pol);
        StateVector brute = mu_series_bruteforce(model, detail::all_states(model), pol);
        rb.line(agg == brute, "mu-aggregation",
                "r=" + std::to_string(model.r) + " s=" + std::to_string((int)model.weights.size()));
    }

    // 2. mu on every length-1 sequence is 1
    {
        bool ok = true;
        TruncationPolicy pol{1, 0, -8, 8, 0};
        for (const ModelSpec& model : detail::test_matrix())
            for (int b = 1; b <= model.r; ++b)
                ok = ok && mu_coefficient(model, {b}, pol) ==
                               TruncatedSeries::constant(pol, Rational(1));
        rb.line(ok, "mu-singletons", "all models, all states");
    }

    // 3. wall-crossing identity, with a negative control at g=1
    for (const ModelSpec& model : {quintic, rspin5}) {
        TruncationPolicy pol{cfg.t_deg, cfg.u_deg, -(cfg.psi_deg + 2), cfg.psi_deg, 0};
        for (int g = 0; g <= cfg.max_genus; ++g) {
            CheckReport rep = check_wallcrossing_identity(model, g, detail::all_states(model),
                                                          pol, /*g0_mask=*/g == 0);
            rb.line(rep.ok, "wallcross", "r=" + std::to_string(model.r) +
                                             " s=" + std::to_string((int)model.weights.size()) +
                                             " g=" + std::to_string(g) +
                                             (rep.ok ? "" : "; " + rep.detail));
        }
        MuPerturbation bad{to_multiset(std::vector<int>{2, 2}), Rational(1, 7)};
        CheckReport rep = check_wallcrossing_identity(model, 1, detail::all_states(model), pol,
                                                      false, BroadMode::AsWritten, &bad);
        rb.line(!rep.ok, "wallcross-negative-control",
                "perturbed mu must break the identity, r=" + std::to_string(model.r));
    }

    // 4. dilaton reduction closed form (Calabi-Yau case)
    {
        TruncationPolicy pol{cfg.t_deg + 4, 0, -2, 2, 0};
        for (int g = 1; g <= std::max(3, cfg.max_genus); ++g) {
            CheckReport rep = check_dilaton_closed_form(quintic, g, pol);
            rb.line(rep.ok, "dilaton-closed-form",
                    "quintic g=" + std::to_string(g) + (rep.ok ? "" : "; " + rep.detail));
        }
    }

    // 5. residue/truncation Laurent identity
    {
        bool ok = true;
        long cases = 0;
        for (const ModelSpec& model : detail::test_matrix()) {
            TruncationPolicy pol{0, 0, -16, 10, 0};
            for_each_multiset<int>(detail::all_states(model), 4, [&](const Multiset<int>& m) {
                if (m.empty()) return;
                std::vector<int> J = multiset_to_vector(m);
                for (long d = 0; d <= 3; ++d) {
                    ok = ok && check_residue_identity(model, J, d, pol).ok;
                    ++cases;
                }
            });
        }
        rb.line(ok, "residue-identity", std::to_string(cases) + " cases");
    }

    // 6. genus-0 resummation and the two J-function forms
    for (const ModelSpec& model : {ModelSpec(3, {1}), rspin5, quintic}) {
        TruncationPolicy pol{std::min(cfg.t_deg, 4), cfg.u_deg, -(cfg.psi_deg + 4), cfg.psi_deg, 0};
        CheckReport rep = check_genus0_resummation(model, pol);
        rb.line(rep.ok, "genus0-resummation",
                "r=" + std::to_string(model.r) + " s=" + std::to_string((int)model.weights.size()) +
                    (rep.ok ? "" : "; " + rep.detail));
        JFunctionResult jr = assemble_J_function(model, pol);
        rb.line(jr.report.ok, "jfunction-two-forms",
                "r=" + std::to_string(model.r) + " s=" + std::to_string((int)model.weights.size()) +
                    (jr.report.ok ? "" : "; " + jr.report.detail));
    }

    // 7. scalar formulas on randomized valid insertion profiles
    {
        std::mt19937 rng(static_cast<std::mt19937::result_type>(cfg.seed));
        bool ok = true;
        std::string first_bad;
        auto matrix = detail::test_matrix();
        std::uniform_int_distribution<std::size_t> model_d(0, matrix.size() - 1);
        for (int i = 0; i < cfg.random_gamma_count && ok; ++i) {
            const ModelSpec& model = matrix[model_d(rng)];
            GammaType gamma = detail::random_valid_gamma(model, rng);
            try {
                Int v0 = virtual_dimension(model, gamma, false);
                Int v1 = virtual_dimension(model, gamma, true);
                if (v1 - v0 != 1) ok = false;
                Rational eps = epsilon_gamma(model, gamma);
                if (eps * eps != rational_pow(Rational(model.r), 2 - 2 * gamma.genus)) ok = false;
            } catch (const std::exception& e) {
                ok = false;
                first_bad = e.what();
            }
            if (!ok && first_bad.empty()) first_bad = gamma.str();
            // node data invariants on the light tail
            if (!gamma.light.empty()) {
                FixedPointDatum nd = node_data(model, gamma.light);
                long total = 1;
                long count_r = 0;
                for (int b : gamma.light) {
                    total += b - 1;
                    if (b == model.r) ++count_r;
                }
                if (model.r * nd.node_ell + nd.node_k != total) ok = false;
                if ((nd.a_infinity + nd.node_k) % model.r != 0) ok = false;
                long c_expect = nd.node_ell - count_r + (nd.node_k == model.r ? 1 : 0);
                if (nd.bundle_shift_c != c_expect) ok = false;
            }
        }
        rb.line(ok, "scalar-formulas",
                std::to_string(cfg.random_gamma_count) + " random profiles, seed=" +
                    std::to_string(cfg.seed) + (first_bad.empty() ? "" : "; " + first_bad));
    }

    // 8. twisted mu at lambda = 0 degenerates to untwisted mu
    {
        bool ok = true;
        for (const ModelSpec& model : detail::test_matrix()) {
            int s = static_cast<int>(model.weights.size());
            TruncationPolicy pol{0, 0, -8, 8, 4 * s};
            for_each_multiset<int>(detail::all_states(model), 3, [&](const Multiset<int>& m) {
                if (m.empty()) return;
                std::vector<int> J = multiset_to_vector(m);
                TruncatedSeries tw = mu_coefficient(model, J, pol, /*twisted=*/true);
                for (int a = 1; a <= s; ++a)
                    tw = tw.substitute(lambda_gen(a), TruncatedSeries::zero(pol));
                ok = ok && tw == mu_coefficient(model, J, pol, /*twisted=*/false);
            });
        }
        rb.line(ok, "twisted-degeneration", "lambda = 0 recovers untwisted mu");
    }

    return {rb.ok(), rb.str()};
}

} // namespace fjrw

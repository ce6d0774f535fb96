// Command-line front end: series computations, scalar formulas,
// fixed-point enumeration, and the mechanical identity checks.
//
// Exit codes: 0 success, 1 a check failed (a structured mismatch report is
// printed), 2 I/O or parse error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fjrw/correlator.hpp"
#include "fjrw/json_io.hpp"
#include "fjrw/localization.hpp"
#include "fjrw/model.hpp"
#include "fjrw/mu.hpp"
#include "fjrw/verify.hpp"

namespace {

using namespace fjrw;

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

std::vector<int> parse_vars(const std::string& s, const ModelSpec& model) {
    if (s.empty() || s == "all") {
        std::vector<int> v;
        for (int b = 1; b <= model.r; ++b) v.push_back(b);
        return v;
    }
    std::vector<int> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) {
                if (cur[0] == 't') cur = cur.substr(1);
                out.push_back(std::stoi(cur));
            }
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

BroadMode parse_mode(const std::string& s) {
    if (s == "as-written") return BroadMode::AsWritten;
    if (s == "narrow" || s == "narrow-redefined") return BroadMode::NarrowRedefined;
    throw std::invalid_argument("unknown broad mode: " + s);
}

void emit_series(const TruncatedSeries& s, const std::string& format, std::ostream& os) {
    if (format == "json") {
        os << series_to_json(s).dump() << "\n";
    } else if (format == "csv") {
        os << "monomial,num,den\n";
        for (const auto& [m, c] : s.terms())
            os << (m.exps.empty() ? "1" : m.str()) << ","
               << boost::multiprecision::numerator(c).str() << ","
               << boost::multiprecision::denominator(c).str() << "\n";
    } else {
        os << s.str() << "\n";
    }
}

int emit_check(const CheckReport& rep, const std::string& format) {
    if (rep.ok) {
        std::cout << (format == "json" ? std::string("{\"ok\":true}") : "ok: " + rep.detail)
                  << "\n";
        return 0;
    }
    if (format == "json") {
        json j{{"ok", false},
               {"detail", rep.detail},
               {"symbol", rep.symbol},
               {"lhs", rep.lhs},
               {"rhs", rep.rhs}};
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "FAIL: " << rep.detail << "\n";
        if (!rep.symbol.empty()) std::cout << "  at " << rep.symbol << "\n";
        if (!rep.lhs.empty()) std::cout << "  lhs = " << rep.lhs << "\n";
        if (!rep.rhs.empty()) std::cout << "  rhs = " << rep.rhs << "\n";
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-arithmetic engine for mu-series, I-functions, fixed-point data, "
                 "and formal wall-crossing identity checks"};
    app.require_subcommand(1);

    // Honored for forward compatibility; all current computations run on
    // one thread and output assembly is always deterministic.
    if (const char* tc = std::getenv("FJRW_THREADS")) (void)tc;

    std::string model_path, format = "text", gamma_str, vars = "all", mode_str = "as-written";
    std::string j_list, d_list;
    int max_deg = 5, t_deg = 4, u_deg = 2, psi_deg = 2, genus = 1, state = 1;
    long d_power = 0;
    bool twisted = false, genus0 = false, g0_mask = false, master = false;
    unsigned long seed = 1;

    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("--model", model_path, "model file (JSON: {\"r\":..,\"weights\":[..]})")
            ->required();
        cmd->add_option("--format", format, "output format: text|json|csv");
    };

    auto* c_mu = app.add_subcommand("mu", "the mu-series over the chosen light variables");
    add_model(c_mu);
    c_mu->add_option("--vars", vars, "light variables, e.g. t2,t3 (default: all)");
    c_mu->add_option("--max-deg", max_deg, "t-degree bound");
    c_mu->add_flag("--twisted", twisted, "include the twisting parameters lambda");
    c_mu->add_option("--broad-mode", mode_str, "as-written|narrow-redefined");

    auto* c_ifunc = app.add_subcommand("ifunc", "I_0 and I_1 in the Calabi-Yau case");
    add_model(c_ifunc);
    c_ifunc->add_option("--max-deg", max_deg, "t-degree bound");

    auto* c_vdim = app.add_subcommand("vdim", "virtual dimension (ordinary and master)");
    add_model(c_vdim);
    c_vdim->add_option("--gamma", gamma_str, "insertion profile \"g=G;a1,..|b1,..\"")->required();
    c_vdim->add_flag("--master", master, "print only the master-space value");

    auto* c_sel = app.add_subcommand("selection", "selection-rule test for a profile");
    add_model(c_sel);
    c_sel->add_option("--gamma", gamma_str)->required();

    auto* c_eps = app.add_subcommand("epsilon", "the scalar factor epsilon_gamma");
    add_model(c_eps);
    c_eps->add_option("--gamma", gamma_str)->required();

    auto* c_cls = app.add_subcommand("classify", "narrow/broad classification of a state");
    add_model(c_cls);
    c_cls->add_option("--state", state, "state in 1..r")->required();

    auto* c_node = app.add_subcommand("node-data", "node invariants of a light subset");
    add_model(c_node);
    c_node->add_option("--J", j_list, "comma-separated light values")->required();

    auto* c_fp = app.add_subcommand("fixed-points", "fixed-point components for a profile");
    add_model(c_fp);
    c_fp->add_option("--gamma", gamma_str)->required();
    c_fp->add_flag("--genus0", genus0, "genus-0 variant (no F_inf, full J allowed)");

    auto* c_jf = app.add_subcommand("jfunc", "the big J-function, both forms");
    add_model(c_jf);
    c_jf->add_option("--t-deg", t_deg);
    c_jf->add_option("--u-deg", u_deg);
    c_jf->add_option("--psi-deg", psi_deg);

    auto* c_check = app.add_subcommand("check", "mechanical identity checks");
    c_check->require_subcommand(1);

    auto* c_wc = c_check->add_subcommand("wallcross", "all-genus wall-crossing identity");
    add_model(c_wc);
    c_wc->add_option("--genus", genus)->required();
    c_wc->add_option("--t-deg", t_deg);
    c_wc->add_option("--u-deg", u_deg);
    c_wc->add_option("--psi-deg", psi_deg);
    c_wc->add_flag("--g0-mask", g0_mask, "compare modulo u-linear terms (required at genus 0)");
    c_wc->add_option("--broad-mode", mode_str);

    auto* c_dil = c_check->add_subcommand("dilaton", "dilaton-reduction closed form");
    add_model(c_dil);
    c_dil->add_option("--genus", genus)->required();
    c_dil->add_option("--t-deg", t_deg);

    auto* c_g0 = c_check->add_subcommand("genus0", "genus-0 resummation");
    add_model(c_g0);
    c_g0->add_option("--t-deg", t_deg);
    c_g0->add_option("--psi-deg", psi_deg);

    auto* c_res = c_check->add_subcommand("residue", "residue vs truncation route");
    add_model(c_res);
    c_res->add_option("--J", j_list, "comma-separated light values")->required();
    c_res->add_option("--d", d_power, "z-shift exponent");

    auto* c_agg = c_check->add_subcommand("mu-aggregation",
                                          "multiset aggregation vs ordered expansion");
    add_model(c_agg);
    c_agg->add_option("--max-deg", max_deg);

    auto* c_all = app.add_subcommand("verify-all", "run the full verification suite");
    c_all->add_option("--seed", seed, "seed for randomized scalar suites");
    c_all->add_option("--t-deg", t_deg);
    c_all->add_option("--u-deg", u_deg);
    c_all->add_option("--psi-deg", psi_deg);
    genus = 2;
    c_all->add_option("--max-genus", genus, "largest genus for the wall-crossing check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_all->parsed()) {
            VerifyConfig cfg;
            cfg.seed = seed;
            cfg.t_deg = t_deg;
            cfg.u_deg = u_deg;
            cfg.psi_deg = psi_deg;
            cfg.max_genus = genus;
            VerifyResult res = run_verify_all(cfg);
            std::cout << res.report;
            std::cout << (res.ok ? "ALL CHECKS PASSED" : "FAILURES PRESENT") << "\n";
            return res.ok ? 0 : 1;
        }

        ModelSpec model = load_model_file(model_path);
        BroadMode mode = parse_mode(mode_str);

        if (c_mu->parsed()) {
            TruncationPolicy pol{max_deg, 0, -4 * max_deg - 4, 4 * max_deg + 4,
                                 twisted ? max_deg * (int)model.weights.size() : 0};
            StateVector mu = mu_series(model, parse_vars(vars, model), pol, mode, twisted);
            for (int k = 1; k <= model.r; ++k) {
                if (format != "json") std::cout << "phi_" << k << ": ";
                emit_series(mu.comp(k), format, std::cout);
            }
            return 0;
        }
        if (c_ifunc->parsed()) {
            TruncationPolicy pol{max_deg, 0, -max_deg - 2, max_deg + 2, 0};
            IFunctions ifn = extract_I_functions(model, pol);
            if (format == "json") {
                json j{{"I0", series_to_json(ifn.I0)}, {"I1", series_to_json(ifn.I1)}};
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "I0: " << ifn.I0.str() << "\nI1: " << ifn.I1.str() << "\n";
            }
            return 0;
        }
        if (c_vdim->parsed()) {
            GammaType gamma = parse_gamma(model, gamma_str);
            if (master) {
                std::cout << virtual_dimension(model, gamma, true).str() << "\n";
            } else {
                std::cout << "ordinary: " << virtual_dimension(model, gamma, false).str()
                          << "\nmaster: " << virtual_dimension(model, gamma, true).str() << "\n";
            }
            return 0;
        }
        if (c_sel->parsed()) {
            bool ok = selection_rule(model, parse_gamma(model, gamma_str));
            std::cout << (ok ? "satisfied" : "violated") << "\n";
            return 0;
        }
        if (c_eps->parsed()) {
            std::cout << rational_to_string(epsilon_gamma(model, parse_gamma(model, gamma_str)))
                      << "\n";
            return 0;
        }
        if (c_cls->parsed()) {
            StateClass cls = classify_state(model, state);
            std::cout << (cls == StateClass::Narrow ? "narrow" : "broad") << "\n";
            return 0;
        }
        if (c_node->parsed()) {
            FixedPointDatum d = node_data(model, parse_int_list(j_list));
            if (format == "json") {
                json j{{"k", d.node_k},
                       {"ell", d.node_ell},
                       {"a_infinity", d.a_infinity},
                       {"r_prime", d.r_prime},
                       {"c", d.bundle_shift_c}};
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "k=" << d.node_k << " ell=" << d.node_ell
                          << " a_inf=" << d.a_infinity << " r'=" << d.r_prime
                          << " c=" << d.bundle_shift_c << "\n";
            }
            return 0;
        }
        if (c_fp->parsed()) {
            GammaType gamma = parse_gamma(model, gamma_str);
            auto fps = enumerate_fixed_points(model, gamma, genus0);
            if (format == "json") {
                json arr = json::array();
                for (const auto& d : fps) {
                    json j{{"tag", d.tag()}};
                    if (d.kind == FixedPointDatum::Kind::FJ) {
                        j["k"] = d.node_k;
                        j["ell"] = d.node_ell;
                        j["a_infinity"] = d.a_infinity;
                        j["r_prime"] = d.r_prime;
                        j["c"] = d.bundle_shift_c;
                    }
                    arr.push_back(std::move(j));
                }
                std::cout << arr.dump() << "\n";
            } else {
                for (const auto& d : fps) {
                    std::cout << d.tag();
                    if (d.kind == FixedPointDatum::Kind::FJ)
                        std::cout << "  k=" << d.node_k << " ell=" << d.node_ell
                                  << " a_inf=" << d.a_infinity << " r'=" << d.r_prime
                                  << " c=" << d.bundle_shift_c;
                    std::cout << "\n";
                }
            }
            return 0;
        }
        if (c_jf->parsed()) {
            TruncationPolicy pol{t_deg, u_deg, -psi_deg - 4, psi_deg, 0};
            JFunctionResult res = assemble_J_function(model, pol);
            for (int k = 1; k <= model.r; ++k) {
                const auto& comp = res.resummed.comps[static_cast<std::size_t>(k - 1)];
                std::cout << "phi_" << k << " scalar: ";
                emit_series(comp.scalar, format, std::cout);
                for (const auto& [sym, coeff] : comp.symbols.terms)
                    std::cout << "  " << sym.str() << " * (" << coeff.str() << ")\n";
            }
            return emit_check(res.report, format);
        }
        if (c_wc->parsed()) {
            TruncationPolicy pol{t_deg, u_deg, -psi_deg - 2, psi_deg, 0};
            std::vector<int> all = parse_vars("all", model);
            bool mask = g0_mask || genus == 0;
            return emit_check(check_wallcrossing_identity(model, genus, all, pol, mask, mode),
                              format);
        }
        if (c_dil->parsed()) {
            TruncationPolicy pol{t_deg, 0, -2, 2, 0};
            return emit_check(check_dilaton_closed_form(model, genus, pol), format);
        }
        if (c_g0->parsed()) {
            TruncationPolicy pol{t_deg, 0, -psi_deg - 4, psi_deg, 0};
            return emit_check(check_genus0_resummation(model, pol), format);
        }
        if (c_res->parsed()) {
            TruncationPolicy pol{0, 0, -16, 10, 0};
            ResidueCheck rc = check_residue_identity(model, parse_int_list(j_list), d_power, pol);
            CheckReport rep =
                rc.ok ? CheckReport::success("residue route equals truncation route")
                      : CheckReport{false, "residue route differs from truncation route", "",
                                    rc.residue_route.str(), rc.truncation_route.str(), false};
            return emit_check(rep, format);
        }
        if (c_agg->parsed()) {
            TruncationPolicy pol{max_deg, 0, -8, 8, 0};
            std::vector<int> all = parse_vars("all", model);
            bool ok = mu_series(model, all, pol) == mu_series_bruteforce(model, all, pol);
            CheckReport rep = ok ? CheckReport::success("aggregated and ordered routes agree")
                                 : CheckReport{false, "aggregation mismatch", "", "", "", false};
            return emit_check(rep, format);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

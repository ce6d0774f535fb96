#pragma once

#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fjrw/correlator.hpp"
#include "fjrw/model.hpp"
#include "fjrw/mu.hpp"
#include "fjrw/partitions.hpp"
#include "fjrw/series.hpp"

namespace fjrw {

// psi generator labels: id 0 is the distinguished marking on a fixed-point
// component (y_1 on F_0 / F_inf, x_J on F_J); ids 1..n are the light
// markings y_j.
inline Gen psi_distinguished() { return psi_gen(0); }
inline Gen psi_light(int j) { return psi_gen(j); }

// ---------------------------------------------------------------------------
// Fixed-point data attached to a light-marking subset J:
//   r*ell + k = 1 + sum_{j in J} (b_j - 1),  a_inf = -k mod r,
//   r' = r / gcd(r, k),  c = ell - #{b_j = r} (+1 when k = r).
// ---------------------------------------------------------------------------

struct FixedPointDatum {
    enum class Kind { F0, Finf, FJ } kind{Kind::FJ};
    std::vector<int> J;      // light indices (1-based), for FJ
    std::vector<int> b_on_J; // the light values on J
    int node_k{1};
    long node_ell{0};
    int a_infinity{1};
    int r_prime{1};
    long bundle_shift_c{0};

    std::string tag() const {
        switch (kind) {
        case Kind::F0: return "F0";
        case Kind::Finf: return "Finf";
        case Kind::FJ: {
            std::string s = "FJ:{";
            for (std::size_t i = 0; i < J.size(); ++i)
                s += (i ? "," : "") + std::to_string(J[i]);
            return s + "}";
        }
        }
        return "?";
    }
};

inline FixedPointDatum node_data(const ModelSpec& model, const std::vector<int>& b_on_J) {
    FixedPointDatum d;
    d.kind = FixedPointDatum::Kind::FJ;
    d.b_on_J = b_on_J;
    long total = 1;
    long count_r = 0;
    for (int b : b_on_J) {
        if (b < 1 || b > model.r) throw std::out_of_range("J-value outside 1..r");
        total += b - 1;
        if (b == model.r) ++count_r;
    }
    d.node_k = model.canonical_state(total);
    d.node_ell = (total - d.node_k) / model.r;
    d.a_infinity = model.canonical_state(-static_cast<long>(d.node_k));
    d.r_prime = model.r / std::gcd(model.r, d.node_k);
    d.bundle_shift_c = d.node_ell - count_r + (d.node_k == model.r ? 1 : 0);
    return d;
}

/// Fixed-point components of the master space. Standard variant: F_0,
/// F_inf, and one F_J per {1} strictly-subset J subset {1..n}. Genus-0
/// variant (g = 0, one heavy marking, n >= 2): no F_inf, and J = {1..n}
/// is allowed.
inline std::vector<FixedPointDatum> enumerate_fixed_points(const ModelSpec& model,
                                                           const GammaType& gamma,
                                                           bool genus_zero_variant) {
    int n = gamma.n();
    if (n < 1) throw std::invalid_argument("fixed-point enumeration requires n >= 1");
    if (genus_zero_variant) {
        if (gamma.genus != 0 || gamma.m() != 1 || n < 2)
            throw std::invalid_argument("genus-0 variant requires g = 0, m = 1, n >= 2");
    } else if (!gamma.heavy_stable()) {
        throw std::invalid_argument("standard variant requires 2g - 2 + m >= 0");
    }

    std::vector<FixedPointDatum> out;
    FixedPointDatum f0;
    f0.kind = FixedPointDatum::Kind::F0;
    out.push_back(f0);
    if (!genus_zero_variant) {
        FixedPointDatum finf;
        finf.kind = FixedPointDatum::Kind::Finf;
        out.push_back(finf);
    }
    // subsets J with 1 in J and |J| >= 2; full set only in the g=0 variant
    for (unsigned mask = 1; mask < (1u << n); mask += 2) {
        std::vector<int> J, vals;
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j)) {
                J.push_back(j + 1);
                vals.push_back(gamma.light[static_cast<std::size_t>(j)]);
            }
        if (J.size() < 2) continue;
        FixedPointDatum d = node_data(model, vals);
        d.J = J;
        out.push_back(d);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Equivariant Euler-class contributions as Laurent series in z with
// polynomial psi-dependence. 1/(z - psi) expands as sum psi^k z^{-k-1}.
// ---------------------------------------------------------------------------

inline TruncatedSeries geometric_z_psi(const TruncationPolicy& pol) {
    TruncatedSeries out = TruncatedSeries::zero(pol);
    for (int k = 0; k <= pol.z_max && -1 - k >= pol.z_min; ++k) {
        Monomial m = Monomial::of(z_gen(), -1 - k) * Monomial::of(psi_distinguished(), k);
        out.add_term(m, Rational(1));
    }
    return out;
}

/// The component's localization contribution. F_0 gives 1/(z - psi),
/// F_inf gives 1/(-z + psi), F_J gives
/// (-1)^{sum ell} r' mu_J(-z) / (z - psi_{x_J}); the r' factor is kept
/// explicit and cancelled downstream against the degree-1/r' covering.
inline TruncatedSeries localization_contribution(const ModelSpec& model,
                                                 const FixedPointDatum& datum,
                                                 const TruncationPolicy& pol,
                                                 bool twisted = false) {
    TruncatedSeries geo = geometric_z_psi(pol);
    switch (datum.kind) {
    case FixedPointDatum::Kind::F0: return geo;
    case FixedPointDatum::Kind::Finf: return -geo;
    case FixedPointDatum::Kind::FJ: break;
    }
    SequenceData sd = sequence_data(model, datum.b_on_J);
    TruncatedSeries mu = mu_coefficient(model, datum.b_on_J, pol, twisted);
    TruncatedSeries mu_minus_z =
        mu.substitute(z_gen(), -TruncatedSeries::generator(pol, z_gen()));
    Rational sign(parity_sign(Int(sd.ell_total)));
    return geo * mu_minus_z * (sign * Rational(datum.r_prime));
}

// ---------------------------------------------------------------------------
// The residue/truncation Laurent identity behind the node-smoothing
// relations: the z^{-1} coefficient of z^d mu_J(-z) / (z - psi) equals
// [z^d mu_J(-z)]_+ evaluated at z = psi. Both routes are computed
// independently.
// ---------------------------------------------------------------------------

struct ResidueCheck {
    TruncatedSeries residue_route;    // z^{-1} extraction
    TruncatedSeries truncation_route; // [.]_+ |_{z=psi}
    bool ok{false};
};

inline ResidueCheck check_residue_identity(const ModelSpec& model,
                                           const std::vector<int>& J_values, long d,
                                           const TruncationPolicy& pol,
                                           bool twisted = false) {
    TruncatedSeries mu = mu_coefficient(model, J_values, pol, twisted);
    TruncatedSeries mu_minus_z =
        mu.substitute(z_gen(), -TruncatedSeries::generator(pol, z_gen()));
    TruncatedSeries zd =
        TruncatedSeries::monomial(pol, Monomial::of(z_gen(), static_cast<int>(d)), Rational(1));
    TruncatedSeries shifted = zd * mu_minus_z;

    ResidueCheck out{TruncatedSeries::zero(pol), TruncatedSeries::zero(pol), false};
    out.residue_route = (shifted * geometric_z_psi(pol)).coefficient_of_z(-1);
    out.truncation_route = shifted.truncate_z_nonneg().substitute(
        z_gen(), TruncatedSeries::generator(pol, psi_distinguished()));
    out.ok = out.residue_route == out.truncation_route;
    return out;
}

// ---------------------------------------------------------------------------
// The residue relation: sum the contributions over all fixed points,
// weight by prod psi_{y_j}^{d_j}, extract the z^{-1} coefficient and
// return the induced relation as tagged formal terms (moduli labels are
// opaque tags; virtual classes are never computed). Each F_J term is
// cross-checked against the truncation route, and the epsilon-factor
// bookkeeping eps_gamma = (-1)^{sum ell} eps_{gamma_J} is verified.
// ---------------------------------------------------------------------------

struct TaggedRelation {
    struct Term {
        std::string tag;
        TruncatedSeries value;
    };
    std::vector<Term> terms;
    bool consistent{true};
    std::string note;
};

inline TaggedRelation residue_relation(const ModelSpec& model, const GammaType& gamma,
                                       const std::vector<long>& d_powers,
                                       bool genus_zero_variant, const TruncationPolicy& pol,
                                       long heavy_psi_power = 0) {
    int n = gamma.n();
    if (static_cast<int>(d_powers.size()) != n)
        throw std::invalid_argument("d_powers must match the number of light markings");
    TaggedRelation rel;
    bool check_epsilon = !genus_zero_variant && selection_rule(model, gamma);

    for (const FixedPointDatum& fp : enumerate_fixed_points(model, gamma, genus_zero_variant)) {
        TruncatedSeries value = localization_contribution(model, fp, pol);
        // psi_{y_j} weights. On F_J the classes for j in J restrict to z.
        long d_J = 0;
        std::vector<bool> in_J(static_cast<std::size_t>(n) + 1, false);
        if (fp.kind == FixedPointDatum::Kind::FJ)
            for (int j : fp.J) in_J[static_cast<std::size_t>(j)] = true;
        for (int j = 1; j <= n; ++j) {
            long d = d_powers[static_cast<std::size_t>(j - 1)];
            if (d == 0) continue;
            if (in_J[static_cast<std::size_t>(j)]) {
                d_J += d;
            } else {
                value = value * TruncatedSeries::monomial(
                                    pol, Monomial::of(psi_light(j), static_cast<int>(d)),
                                    Rational(1));
            }
        }
        if (fp.kind == FixedPointDatum::Kind::FJ) {
            value = value * TruncatedSeries::monomial(
                                pol, Monomial::of(z_gen(), static_cast<int>(d_J)), Rational(1));
            // covering map of degree 1/r': cancels the explicit r' factor
            value *= Rational(1, fp.r_prime);
        }
        if (genus_zero_variant && heavy_psi_power > 0 &&
            fp.kind == FixedPointDatum::Kind::FJ &&
            static_cast<int>(fp.J.size()) == n) {
            // On the J = {1..n} component the heavy psi class restricts to -z.
            value = value *
                    TruncatedSeries::monomial(pol,
                                              Monomial::of(z_gen(), static_cast<int>(heavy_psi_power)),
                                              rational_pow(Rational(-1), heavy_psi_power));
        } else if (genus_zero_variant && heavy_psi_power > 0) {
            value = value * TruncatedSeries::monomial(
                                pol, Monomial::of(psi_gen(n + 1), static_cast<int>(heavy_psi_power)),
                                Rational(1));
        }

        TruncatedSeries residue = value.coefficient_of_z(-1);
        rel.terms.push_back({fp.tag(), residue});

        if (fp.kind == FixedPointDatum::Kind::FJ &&
            !(genus_zero_variant && static_cast<int>(fp.J.size()) == n)) {
            // Cross-check against [z^{sum d_J} mu_J(-z)]_+ |_{z=psi_J}.
            TruncatedSeries expect =
                check_residue_identity(model, fp.b_on_J, d_J, pol).truncation_route;
            SequenceData sd = sequence_data(model, fp.b_on_J);
            expect *= Rational(parity_sign(Int(sd.ell_total)));
            for (int j = 1; j <= n; ++j) {
                long d = d_powers[static_cast<std::size_t>(j - 1)];
                if (d == 0 || in_J[static_cast<std::size_t>(j)]) continue;
                expect = expect * TruncatedSeries::monomial(
                                      pol, Monomial::of(psi_light(j), static_cast<int>(d)),
                                      Rational(1));
            }
            if (genus_zero_variant && heavy_psi_power > 0)
                expect = expect * TruncatedSeries::monomial(
                                      pol, Monomial::of(psi_gen(n + 1),
                                                        static_cast<int>(heavy_psi_power)),
                                      Rational(1));
            if (!(rel.terms.back().value == expect)) {
                rel.consistent = false;
                rel.note = "F_J residue disagrees with the truncation route at " + fp.tag();
            }
            if (check_epsilon) {
                // eps_gamma = (-1)^{sum ell} eps_{gamma_J}
                std::vector<int> heavy_J = gamma.heavy;
                heavy_J.push_back(sd.k);
                std::vector<int> light_J;
                for (int j = 1; j <= n; ++j)
                    if (!in_J[static_cast<std::size_t>(j)])
                        light_J.push_back(gamma.light[static_cast<std::size_t>(j - 1)]);
                GammaType gamma_J(model, gamma.genus, heavy_J, light_J);
                Rational eps = epsilon_gamma(model, gamma);
                Rational eps_J = epsilon_gamma(model, gamma_J);
                if (eps != Rational(parity_sign(Int(sd.ell_total))) * eps_J) {
                    rel.consistent = false;
                    rel.note = "epsilon-factor bookkeeping fails at " + fp.tag();
                }
            }
        }
    }
    return rel;
}

// ---------------------------------------------------------------------------
// Genus-0 abstract correlators < phi_a / (z - psi), psi^{c_1} phi_{k_1},
// ..., psi^{c_h} phi_{k_h} >_{0,1+h}. Normalized to zero when unstable
// (1 + h <= 2) or when the selection rule for the underlying insertion
// profile fails (the master space exists only on-shell).
// ---------------------------------------------------------------------------

struct G0Symbol {
    int a{1};
    std::vector<Insertion> ins; // sorted

    friend auto operator<=>(const G0Symbol&, const G0Symbol&) = default;

    std::string str() const {
        std::string s = "<phi_" + std::to_string(a) + "/(z-psi)";
        for (const auto& i : ins) {
            s += ",";
            if (i.c > 0) s += "psi^" + std::to_string(i.c) + " ";
            s += "phi_" + std::to_string(i.b);
        }
        return s + ">_inf_{0," + std::to_string(1 + ins.size()) + "}";
    }
};

inline std::optional<G0Symbol> make_g0_symbol(const ModelSpec& model, int a,
                                              std::vector<Insertion> ins) {
    if (static_cast<int>(ins.size()) < 2) return std::nullopt; // <...>_{0,<=2} := 0
    long acc = -2 + (1 - a);
    for (const auto& i : ins) acc += 1 - i.b;
    if (acc % model.r != 0) return std::nullopt; // selection rule
    std::sort(ins.begin(), ins.end());
    return G0Symbol{a, std::move(ins)};
}

struct G0Expr {
    std::map<G0Symbol, TruncatedSeries> terms;

    void add(const G0Symbol& sym, const TruncatedSeries& coeff) {
        if (coeff.is_zero()) return;
        auto it = terms.find(sym);
        if (it == terms.end()) {
            terms.emplace(sym, coeff);
        } else {
            it->second += coeff;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    G0Expr& operator+=(const G0Expr& o) {
        for (const auto& [s, c] : o.terms) add(s, c);
        return *this;
    }

    friend bool operator==(const G0Expr& a, const G0Expr& b) { return a.terms == b.terms; }
};

/// sum_{n>=2} 1/n! < phi_a/(z-psi), slots^n > over multisets of slots.
inline G0Expr expand_g0_multiset(const ModelSpec& model, int a, const SlotMap& slots,
                                 const TruncationPolicy& pol) {
    G0Expr out;
    std::vector<std::pair<Insertion, TruncatedSeries>> flat(slots.begin(), slots.end());
    std::vector<Insertion> chosen;
    std::function<void(std::size_t, const TruncatedSeries&)> rec =
        [&](std::size_t i, const TruncatedSeries& coeff) {
            if (coeff.is_zero()) return;
            if (i == flat.size()) {
                if (auto sym = make_g0_symbol(model, a, chosen)) out.add(*sym, coeff);
                return;
            }
            rec(i + 1, coeff);
            TruncatedSeries acc = coeff;
            for (int mult = 1;; ++mult) {
                acc = acc * flat[i].second * Rational(1, mult);
                if (acc.is_zero()) break;
                for (int k = 0; k < mult; ++k) chosen.push_back(flat[i].first);
                rec(i + 1, acc);
                for (int k = 0; k < mult; ++k) chosen.pop_back();
            }
        };
    rec(0, TruncatedSeries::constant(pol, Rational(1)));
    return out;
}

inline CheckReport g0_compare(const std::vector<G0Expr>& lhs, const std::vector<G0Expr>& rhs) {
    for (std::size_t k = 0; k < lhs.size(); ++k) {
        std::map<G0Symbol, std::pair<const TruncatedSeries*, const TruncatedSeries*>> joined;
        for (const auto& [s, c] : lhs[k].terms) joined[s].first = &c;
        for (const auto& [s, c] : rhs[k].terms) joined[s].second = &c;
        for (const auto& [sym, pr] : joined) {
            bool same = pr.first && pr.second && *pr.first == *pr.second;
            if (!same)
                return {false,
                        "mismatch in phi_" + std::to_string(k + 1) + " component",
                        sym.str(),
                        pr.first ? pr.first->str() : "0",
                        pr.second ? pr.second->str() : "0",
                        false};
        }
    }
    return CheckReport::success("genus-0 expressions agree");
}

// ---------------------------------------------------------------------------
// Genus-0 resummation check:
//   sum_{n>=2} sum_a phi^a / n! < phi_a/(z-psi), (mu^+(t,-psi))^n >_{0,1+n}
// accumulates mu^-(t, z). The multiset route (left) and the labeled
// set-partition route standing in for the 0-theory pairing
// < phi_a/(z-psi) | phi_B >^0 = mu^-_B(z) (right) must agree symbol by
// symbol, and the scalar bookkeeping must reproduce mu^-(t, z) exactly.
// ---------------------------------------------------------------------------

inline CheckReport check_genus0_resummation(const ModelSpec& model,
                                            const TruncationPolicy& pol,
                                            const MuPerturbation* perturb = nullptr) {
    std::vector<int> all_vars;
    for (int b = 1; b <= model.r; ++b) all_vars.push_back(b);

    // Left: multiset expansion of the mu^+(t,-psi) insertions.
    SlotMap slots = mu_plus_slots(model, all_vars, pol, BroadMode::AsWritten, perturb);
    std::vector<G0Expr> lhs(static_cast<std::size_t>(model.r));
    for (int a = 1; a <= model.r; ++a)
        lhs[static_cast<std::size_t>(pairing_partner(model, a) - 1)] +=
            expand_g0_multiset(model, a, slots, pol);

    // Right: per light multiset, the set-partition expansion (blocks of
    // size h >= 2; the h = 1 layer is the redefined-to-zero <...>_{0,2}).
    std::vector<G0Expr> rhs(static_cast<std::size_t>(model.r));
    StateVector scalar_accum(model, pol);
    for_each_multiset<int>(all_vars, pol.max_t_degree, [&](const Multiset<int>& m) {
        std::vector<int> vals = multiset_to_vector(m);
        int n = static_cast<int>(vals.size());
        SequenceData sd = sequence_data(model, vals);
        int a = pairing_partner(model, sd.k);
        Monomial tmono;
        for (const auto& [b, mult] : m) tmono = tmono * Monomial::of(t_gen(b), mult);
        TruncatedSeries base = TruncatedSeries::monomial(
            pol, tmono, Rational(1) / Rational(multiset_aut(m)));

        scalar_accum.comp(sd.k) +=
            mu_coefficient(model, vals, pol).truncate_z_neg() * base;

        for_each_set_partition(n, [&](const std::vector<std::vector<int>>& blocks) {
            if (blocks.size() < 2) return;
            Rational coeff(1);
            std::vector<Insertion> heavy;
            for (const auto& idx : blocks) {
                std::vector<LightMark> block;
                for (int i : idx) block.push_back(LightMark{0, vals[static_cast<std::size_t>(i)]});
                auto ins = block_insertion(model, block, pol);
                if (!ins) {
                    coeff = 0;
                    break;
                }
                heavy.push_back(ins->first);
                coeff *= ins->second;
            }
            if (coeff == 0) return;
            if (auto sym = make_g0_symbol(model, a, heavy))
                rhs[static_cast<std::size_t>(sd.k - 1)].add(*sym, base * coeff);
        });
    });

    CheckReport rep = g0_compare(lhs, rhs);
    if (!rep.ok) return rep;

    // Scalar side: the accumulated 0-theory values are exactly mu^-(t, z).
    StateVector expected = mu_minus(model, all_vars, pol);
    if (!(scalar_accum == expected))
        return {false, "scalar accumulation does not reproduce mu^-(t,z)", "", "", "", false};
    return CheckReport::success("genus-0 resummation holds");
}

// ---------------------------------------------------------------------------
// The big J-function, in the definitional form and in the resummed form,
// as abstract-correlator-valued state vectors. The two forms must agree.
// ---------------------------------------------------------------------------

struct JComponent {
    TruncatedSeries scalar;
    G0Expr symbols;

    explicit JComponent(const TruncationPolicy& pol) : scalar(TruncatedSeries::zero(pol)) {}
};

struct JFunction {
    std::vector<JComponent> comps; // index k-1 <-> phi_k

    JFunction(const ModelSpec& model, const TruncationPolicy& pol)
        : comps(static_cast<std::size_t>(model.r), JComponent(pol)) {}
};

struct JFunctionResult {
    JFunction definitional;
    JFunction resummed;
    CheckReport report;
};

inline JFunctionResult assemble_J_function(const ModelSpec& model, const TruncationPolicy& pol,
                                           bool with_u = true) {
    std::vector<int> all_vars;
    for (int b = 1; b <= model.r; ++b) all_vars.push_back(b);

    SlotMap u_slots = with_u ? u_variable_slots(model, pol) : SlotMap{};
    SlotMap mu_slots = mu_plus_slots(model, all_vars, pol);

    auto scalar_common = [&](JFunction& jf) {
        // u(-z) + z phi_1 + mu^+(t, z)
        StateVector plus = mu_plus(model, all_vars, pol);
        for (int k = 1; k <= model.r; ++k) jf.comps[static_cast<std::size_t>(k - 1)].scalar += plus.comp(k);
        jf.comps[0].scalar += TruncatedSeries::generator(pol, z_gen());
        if (with_u) {
            for (int c = 0; c <= pol.z_max; ++c)
                for (int b = 1; b <= model.r; ++b) {
                    Monomial m = Monomial::of(u_gen(c, b), 1) * Monomial::of(z_gen(), c);
                    jf.comps[static_cast<std::size_t>(b - 1)].scalar +=
                        TruncatedSeries::monomial(pol, m, Rational(parity_sign(Int(c))));
                }
        }
    };

    JFunctionResult res{JFunction(model, pol), JFunction(model, pol), CheckReport::success("")};
    scalar_common(res.definitional);
    scalar_common(res.resummed);

    // Resummed form: one joint multiset expansion over
    // u + mu^+(t, -psi).
    SlotMap joint = u_slots;
    for (const auto& [ins, c] : mu_slots) merge_slot(joint, ins, c);
    for (int a = 1; a <= model.r; ++a)
        res.resummed.comps[static_cast<std::size_t>(pairing_partner(model, a) - 1)].symbols +=
            expand_g0_multiset(model, a, joint, pol);

    // Definitional form: mu^-(t,z) rendered through the genus-0
    // resummation (its scalar value is verified by
    // check_genus0_resummation), plus the partition-sum expansion of
    // < phi_a/(z-psi), u^m | t^n >^0 for m >= 1.
    for (int a = 1; a <= model.r; ++a)
        res.definitional.comps[static_cast<std::size_t>(pairing_partner(model, a) - 1)].symbols +=
            expand_g0_multiset(model, a, mu_slots, pol);

    if (with_u) {
        // Enumerate u-multisets of size >= 1 (weight prod 1/mult!) and
        // light multisets with their set partitions.
        std::vector<std::pair<Insertion, TruncatedSeries>> uflat(u_slots.begin(), u_slots.end());
        for (int a = 1; a <= model.r; ++a) {
            G0Expr& target =
                res.definitional.comps[static_cast<std::size_t>(pairing_partner(model, a) - 1)].symbols;

            // collect (fixed heavy insertions from blocks, base coefficient)
            std::vector<std::pair<std::vector<Insertion>, TruncatedSeries>> light_layers;
            light_layers.emplace_back(std::vector<Insertion>{},
                                      TruncatedSeries::constant(pol, Rational(1)));
            for_each_multiset<int>(all_vars, pol.max_t_degree, [&](const Multiset<int>& m) {
                std::vector<int> vals = multiset_to_vector(m);
                int n = static_cast<int>(vals.size());
                Monomial tmono;
                for (const auto& [b, mult] : m) tmono = tmono * Monomial::of(t_gen(b), mult);
                TruncatedSeries base = TruncatedSeries::monomial(
                    pol, tmono, Rational(1) / Rational(multiset_aut(m)));
                for_each_set_partition(n, [&](const std::vector<std::vector<int>>& blocks) {
                    Rational coeff(1);
                    std::vector<Insertion> heavy;
                    for (const auto& idx : blocks) {
                        std::vector<LightMark> block;
                        for (int i : idx)
                            block.push_back(LightMark{0, vals[static_cast<std::size_t>(i)]});
                        auto ins = block_insertion(model, block, pol);
                        if (!ins) {
                            coeff = 0;
                            break;
                        }
                        heavy.push_back(ins->first);
                        coeff *= ins->second;
                    }
                    if (coeff == 0) return;
                    light_layers.emplace_back(heavy, base * coeff);
                });
            });

            std::vector<Insertion> chosen;
            std::function<void(std::size_t, const TruncatedSeries&, int)> rec =
                [&](std::size_t i, const TruncatedSeries& coeff, int u_count) {
                    if (coeff.is_zero()) return;
                    if (i == uflat.size()) {
                        if (u_count < 1) return; // the m >= 1 sector
                        for (const auto& [heavy, base] : light_layers) {
                            std::vector<Insertion> all = chosen;
                            all.insert(all.end(), heavy.begin(), heavy.end());
                            if (auto sym = make_g0_symbol(model, a, all))
                                target.add(*sym, coeff * base);
                        }
                        return;
                    }
                    rec(i + 1, coeff, u_count);
                    TruncatedSeries acc = coeff;
                    for (int mult = 1;; ++mult) {
                        acc = acc * uflat[i].second * Rational(1, mult);
                        if (acc.is_zero()) break;
                        for (int k = 0; k < mult; ++k) chosen.push_back(uflat[i].first);
                        rec(i + 1, acc, u_count + mult);
                        for (int k = 0; k < mult; ++k) chosen.pop_back();
                    }
                };
            rec(0, TruncatedSeries::constant(pol, Rational(1)), 0);
        }
    }

    // compare
    for (int k = 1; k <= model.r; ++k) {
        const auto& d = res.definitional.comps[static_cast<std::size_t>(k - 1)];
        const auto& s = res.resummed.comps[static_cast<std::size_t>(k - 1)];
        if (!(d.scalar == s.scalar)) {
            res.report = {false, "scalar mismatch in phi_" + std::to_string(k) + " component",
                          "", d.scalar.str(), s.scalar.str(), false};
            return res;
        }
    }
    std::vector<G0Expr> dsym, ssym;
    for (const auto& c : res.definitional.comps) dsym.push_back(c.symbols);
    for (const auto& c : res.resummed.comps) ssym.push_back(c.symbols);
    res.report = g0_compare(dsym, ssym);
    if (res.report.ok) res.report.detail = "J-function forms agree";
    return res;
}

} // namespace fjrw

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "fjrw/model.hpp"
#include "fjrw/partitions.hpp"
#include "fjrw/series.hpp"

namespace fjrw {

/// Rising factorial [x]_n = x (x+1) ... (x+n-1); the empty product is 1.
inline Rational pochhammer(const Rational& x, unsigned n) {
    Rational out(1);
    for (unsigned i = 0; i < n; ++i) out *= x + i;
    return out;
}

enum class BroadMode {
    AsWritten,       // k_{alpha,B} = q_alpha + <q_alpha (k_B - 1)>
    NarrowRedefined, // k_{alpha,B} = <q_alpha k_B>
};

// ---------------------------------------------------------------------------
// Per-sequence data k_B, ell_{alpha,B}, k_{alpha,B}. These depend only on
// the multiset of entries, so a sequence and any reordering agree.
// ---------------------------------------------------------------------------

struct SequenceData {
    std::vector<int> entries;      // the b_j, as given
    int k{1};                      // 1 <= k_B <= r, k_B - 1 = sum (b_j - 1) mod r
    std::vector<long> ell;         // ell_{alpha,B} >= 0
    std::vector<Rational> k_alpha; // per-alpha Pochhammer base
    long ell_total{0};

    long ell_sum() const { return ell_total; }
};

inline SequenceData sequence_data(const ModelSpec& model, const std::vector<int>& B,
                                  BroadMode mode = BroadMode::AsWritten) {
    SequenceData d;
    d.entries = B;
    long shift = 0;
    for (int b : B) {
        if (b < 1 || b > model.r) throw std::out_of_range("sequence entry outside 1..r");
        shift += b - 1;
    }
    d.k = model.canonical_state(1 + shift);
    d.ell.reserve(model.s());
    d.k_alpha.reserve(model.s());
    for (int alpha = 0; alpha < model.s(); ++alpha) {
        Rational q = model.charge(alpha);
        Rational frac_sum(0);
        for (int b : B) frac_sum += frac_part(q * Rational(b - 1));
        long ell = static_cast<long>(floor_int(frac_sum));
        d.ell.push_back(ell);
        d.ell_total += ell;
        if (mode == BroadMode::AsWritten)
            d.k_alpha.push_back(q + frac_part(q * Rational(d.k - 1)));
        else
            d.k_alpha.push_back(frac_part(q * Rational(d.k)));
    }
    return d;
}

// ---------------------------------------------------------------------------
// mu_B(z): untwisted, a single Laurent monomial
//     prod_alpha [k_{alpha,B}]_{ell_{alpha,B}} * z^{1-n+sum ell}.
// Twisted variant: z^{1-n} prod_alpha prod_{i<ell_alpha} ((k_alpha+i) z +
// w_alpha lambda_alpha).
// ---------------------------------------------------------------------------

inline TruncatedSeries mu_coefficient(const ModelSpec& model, const std::vector<int>& B,
                                      const TruncationPolicy& pol, bool twisted = false,
                                      BroadMode mode = BroadMode::AsWritten) {
    SequenceData d = sequence_data(model, B, mode);
    int n = static_cast<int>(B.size());
    if (!twisted) {
        Rational coeff(1);
        for (int alpha = 0; alpha < model.s(); ++alpha)
            coeff *= pochhammer(d.k_alpha[alpha], static_cast<unsigned>(d.ell[alpha]));
        int zexp = 1 - n + static_cast<int>(d.ell_total);
        return TruncatedSeries::monomial(pol, Monomial::of(z_gen(), zexp), coeff);
    }
    TruncatedSeries out =
        TruncatedSeries::monomial(pol, Monomial::of(z_gen(), 1 - n), Rational(1));
    for (int alpha = 0; alpha < model.s(); ++alpha) {
        for (long i = 0; i < d.ell[alpha]; ++i) {
            TruncatedSeries factor = TruncatedSeries::zero(pol);
            factor.add_term(Monomial::of(z_gen(), 1), d.k_alpha[alpha] + i);
            factor.add_term(Monomial::of(lambda_gen(alpha + 1), 1),
                            Rational(model.weights[alpha]));
            out = out * factor;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// State vectors: H_W-valued series, components indexed by phi_1..phi_r.
// ---------------------------------------------------------------------------

struct StateVector {
    std::vector<TruncatedSeries> comps; // size r, index k-1 <-> phi_k

    StateVector(const ModelSpec& model, const TruncationPolicy& pol)
        : comps(static_cast<std::size_t>(model.r), TruncatedSeries::zero(pol)) {}

    TruncatedSeries& comp(int k) { return comps.at(static_cast<std::size_t>(k - 1)); }
    const TruncatedSeries& comp(int k) const { return comps.at(static_cast<std::size_t>(k - 1)); }

    StateVector& operator+=(const StateVector& o) {
        for (std::size_t i = 0; i < comps.size(); ++i) comps[i] += o.comps[i];
        return *this;
    }

    friend bool operator==(const StateVector& a, const StateVector& b) {
        return a.comps == b.comps;
    }

    bool is_zero() const {
        for (const auto& c : comps)
            if (!c.is_zero()) return false;
        return true;
    }
};

/// Optional single-coefficient perturbation, used for negative-control
/// testing: adds delta to mu_B whenever the multiset of B equals `entries`.
struct MuPerturbation {
    Multiset<int> entries;
    Rational delta{1};

    bool matches(const Multiset<int>& m) const { return m == entries; }
};

inline Multiset<int> to_multiset(const std::vector<int>& B) {
    Multiset<int> m;
    for (int b : B) ++m[b];
    return m;
}

// ---------------------------------------------------------------------------
// mu(t, z): aggregated over multisets with multinomial weights.
// The n! in the definition combines with the number of orderings of a
// multiset so that each multiset contributes t^B / prod(mult!).
// ---------------------------------------------------------------------------

inline StateVector mu_series(const ModelSpec& model, const std::vector<int>& active_vars,
                             const TruncationPolicy& pol,
                             BroadMode mode = BroadMode::AsWritten, bool twisted = false,
                             const MuPerturbation* perturb = nullptr) {
    StateVector out(model, pol);
    for_each_multiset<int>(active_vars, pol.max_t_degree, [&](const Multiset<int>& m) {
        std::vector<int> B = multiset_to_vector(m);
        TruncatedSeries mu = mu_coefficient(model, B, pol, twisted, mode);
        if (perturb && perturb->matches(m))
            mu += TruncatedSeries::constant(pol, perturb->delta);
        Monomial tmono;
        for (const auto& [b, mult] : m) tmono = tmono * Monomial::of(t_gen(b), mult);
        Rational weight = Rational(1) / Rational(multiset_aut(m));
        int k = sequence_data(model, B, mode).k;
        out.comp(k) += mu * TruncatedSeries::monomial(pol, tmono, weight);
    });
    return out;
}

/// Slow reference expansion straight from the definition: sum over ordered
/// sequences B_n with weight 1/n!. Used to cross-check the multiset
/// aggregation.
inline StateVector mu_series_bruteforce(const ModelSpec& model,
                                        const std::vector<int>& active_vars,
                                        const TruncationPolicy& pol,
                                        BroadMode mode = BroadMode::AsWritten,
                                        bool twisted = false) {
    StateVector out(model, pol);
    std::vector<bool> active(static_cast<std::size_t>(model.r) + 1, false);
    for (int b : active_vars) active.at(static_cast<std::size_t>(b)) = true;
    for (int n = 1; n <= pol.max_t_degree; ++n) {
        Rational weight = Rational(1) / Rational(factorial(static_cast<unsigned>(n)));
        for_each_sequence(model.r, n, [&](const std::vector<int>& B) {
            for (int b : B)
                if (!active[static_cast<std::size_t>(b)]) return;
            TruncatedSeries mu = mu_coefficient(model, B, pol, twisted, mode);
            Monomial tmono;
            for (int b : B) tmono = tmono * Monomial::of(t_gen(b), 1);
            int k = sequence_data(model, B, mode).k;
            out.comp(k) += mu * TruncatedSeries::monomial(pol, tmono, weight);
        });
    }
    return out;
}

inline StateVector mu_plus(const ModelSpec& model, const std::vector<int>& active_vars,
                           const TruncationPolicy& pol, BroadMode mode = BroadMode::AsWritten,
                           bool twisted = false) {
    StateVector mu = mu_series(model, active_vars, pol, mode, twisted);
    for (auto& c : mu.comps) c = c.truncate_z_nonneg();
    return mu;
}

inline StateVector mu_minus(const ModelSpec& model, const std::vector<int>& active_vars,
                            const TruncationPolicy& pol, BroadMode mode = BroadMode::AsWritten,
                            bool twisted = false) {
    StateVector mu = mu_series(model, active_vars, pol, mode, twisted);
    for (auto& c : mu.comps) c = c.truncate_z_neg();
    return mu;
}

// ---------------------------------------------------------------------------
// I-functions in the Calabi-Yau case (q = 1, t restricted to t*phi_2):
//   mu^+(t phi_2, z) = (I_0(t) - 1) z phi_1 + I_1(t) phi_2.
// ---------------------------------------------------------------------------

struct IFunctions {
    TruncatedSeries I0;
    TruncatedSeries I1;
};

inline IFunctions extract_I_functions(const ModelSpec& model, const TruncationPolicy& pol) {
    if (!model.is_calabi_yau())
        throw std::domain_error("I-function extraction requires the Calabi-Yau case q = 1");
    StateVector plus = mu_plus(model, {2}, pol);
    for (int k = 1; k <= model.r; ++k) {
        if (k == 1 || k == 2) continue;
        if (!plus.comp(k).is_zero())
            throw std::logic_error("mu^+(t phi_2, z) has an unexpected phi_" +
                                   std::to_string(k) + " component");
    }
    for (const auto& [m, c] : plus.comp(1).terms())
        if (m.z_exponent() != 1)
            throw std::logic_error("phi_1 component of mu^+(t phi_2, z) is not purely linear in z");
    for (const auto& [m, c] : plus.comp(2).terms())
        if (m.z_exponent() != 0)
            throw std::logic_error("phi_2 component of mu^+(t phi_2, z) has z-dependence");
    IFunctions out{plus.comp(1).coefficient_of_z(1) +
                       TruncatedSeries::constant(pol, Rational(1)),
                   plus.comp(2).coefficient_of_z(0)};
    return out;
}

} // namespace fjrw

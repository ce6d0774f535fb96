#pragma once

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fjrw/rational.hpp"

namespace fjrw {

// ---------------------------------------------------------------------------
// Fermat model data: W = sum_a X_a^{r/w_a}, with charges q_a = w_a / r.
// ---------------------------------------------------------------------------

struct ModelSpec {
    int r{0};
    std::vector<int> weights;

    ModelSpec(int r_, std::vector<int> w) : r(r_), weights(std::move(w)) {
        if (r < 2) throw std::invalid_argument("model requires r >= 2");
        if (weights.empty()) throw std::invalid_argument("model requires at least one weight");
        int g = r;
        for (int w : weights) {
            if (w <= 0) throw std::invalid_argument("weights must be positive");
            if (r % w != 0 || r / w < 2)
                throw std::invalid_argument("each r/w_alpha must be an integer >= 2");
            g = std::gcd(g, w);
        }
        if (g != 1) throw std::invalid_argument("gcd(r, w_1, ..., w_s) must be 1");
    }

    int s() const { return static_cast<int>(weights.size()); }

    Rational charge(int alpha) const { return Rational(weights.at(alpha), r); }

    Rational total_charge() const {
        Rational q(0);
        for (int w : weights) q += Rational(w, r);
        return q;
    }

    bool is_calabi_yau() const { return total_charge() == 1; }

    /// Canonical representative of an integer mod r in {1..r}.
    int canonical_state(long a) const {
        long m = a % r;
        if (m <= 0) m += r;
        return static_cast<int>(m);
    }
};

enum class StateClass { Narrow, Broad };

/// phi_a is narrow iff a*q_alpha is never an integer.
inline StateClass classify_state(const ModelSpec& model, int a) {
    if (a < 1 || a > model.r) throw std::out_of_range("state index outside 1..r");
    for (int alpha = 0; alpha < model.s(); ++alpha)
        if (is_integer(Rational(a) * model.charge(alpha))) return StateClass::Broad;
    return StateClass::Narrow;
}

/// The pairing partner a' with a + a' = 0 mod r, in {1..r}.
inline int pairing_partner(const ModelSpec& model, int a) {
    return model.canonical_state(-static_cast<long>(a));
}

// ---------------------------------------------------------------------------
// Insertion profile gamma = (a_1..a_m | b_1..b_n) at genus g.
// ---------------------------------------------------------------------------

struct GammaType {
    int genus{0};
    std::vector<int> heavy;
    std::vector<int> light;

    GammaType(const ModelSpec& model, int g, std::vector<int> a, std::vector<int> b)
        : genus(g) {
        if (g < 0) throw std::invalid_argument("genus must be >= 0");
        heavy.reserve(a.size());
        light.reserve(b.size());
        for (int x : a) heavy.push_back(model.canonical_state(x));
        for (int x : b) light.push_back(model.canonical_state(x));
    }

    int m() const { return static_cast<int>(heavy.size()); }
    int n() const { return static_cast<int>(light.size()); }

    bool heavy_stable() const { return 2 * genus - 2 + m() >= 0; }
    bool moduli_nonempty() const {
        int k = 2 * genus - 2 + m();
        return k >= 0 && !(k == 0 && n() == 0);
    }

    std::string str() const {
        std::string s = "g=" + std::to_string(genus) + ";";
        for (std::size_t i = 0; i < heavy.size(); ++i)
            s += (i ? "," : "") + std::to_string(heavy[i]);
        s += "|";
        for (std::size_t j = 0; j < light.size(); ++j)
            s += (j ? "," : "") + std::to_string(light[j]);
        return s;
    }
};

/// Parses "g=G;a1,a2,...|b1,b2,..." (the "g=G;" prefix optional, empty
/// sides allowed).
inline GammaType parse_gamma(const ModelSpec& model, std::string_view text) {
    int genus = 0;
    auto semi = text.find(';');
    if (text.rfind("g=", 0) == 0) {
        if (semi == std::string_view::npos)
            throw std::invalid_argument("gamma: expected ';' after g=G");
        genus = std::stoi(std::string(text.substr(2, semi - 2)));
        text = text.substr(semi + 1);
    }
    auto bar = text.find('|');
    if (bar == std::string_view::npos)
        throw std::invalid_argument("gamma: expected 'a1,..|b1,..'");
    auto parse_list = [](std::string_view part) {
        std::vector<int> out;
        std::size_t pos = 0;
        while (pos < part.size()) {
            auto comma = part.find(',', pos);
            auto piece = part.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
            if (!piece.empty()) out.push_back(std::stoi(std::string(piece)));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        return out;
    };
    return GammaType(model, genus, parse_list(text.substr(0, bar)),
                     parse_list(text.substr(bar + 1)));
}

// ---------------------------------------------------------------------------
// Closed-form scalar invariants.
// ---------------------------------------------------------------------------

/// Selection rule: 2g-2 + sum(1-a_i) + sum(1-b_j) = 0 mod r.
inline bool selection_rule(const ModelSpec& model, const GammaType& gamma) {
    long acc = 2 * gamma.genus - 2;
    for (int a : gamma.heavy) acc += 1 - a;
    for (int b : gamma.light) acc += 1 - b;
    long m = acc % model.r;
    return m == 0;
}

/// Sum over alpha of sum_i <q_alpha (a_i - 1)> + sum_j <q_alpha (b_j - 1)>.
inline Rational total_fractional_shift(const ModelSpec& model, const GammaType& gamma) {
    Rational acc(0);
    for (int alpha = 0; alpha < model.s(); ++alpha) {
        Rational q = model.charge(alpha);
        for (int a : gamma.heavy) acc += frac_part(q * Rational(a - 1));
        for (int b : gamma.light) acc += frac_part(q * Rational(b - 1));
    }
    return acc;
}

/// Virtual dimension (3-s+2q)(g-1) + m + n [+1 on the master space] minus
/// the total fractional shift. The result must be an integer when the
/// selection rule holds.
inline Int virtual_dimension(const ModelSpec& model, const GammaType& gamma, bool master) {
    Rational dim = (Rational(3 - model.s()) + 2 * model.total_charge()) *
                   Rational(gamma.genus - 1);
    dim += gamma.m() + gamma.n();
    if (master) dim += 1;
    dim -= total_fractional_shift(model, gamma);
    if (!is_integer(dim))
        throw std::domain_error("virtual dimension is not an integer; gamma is inconsistent "
                                "with the selection rule");
    return to_integer(dim);
}

/// epsilon_gamma = r^{1-g} * (-1)^{(2q-s)(g-1) - total fractional shift}.
inline Rational epsilon_gamma(const ModelSpec& model, const GammaType& gamma) {
    Rational expo = (2 * model.total_charge() - model.s()) * Rational(gamma.genus - 1);
    expo -= total_fractional_shift(model, gamma);
    if (!is_integer(expo))
        throw std::domain_error("epsilon_gamma: sign exponent is not an integer "
                                "(selection rule fails for this gamma)");
    Rational value = rational_pow(Rational(model.r), 1 - gamma.genus);
    return value * parity_sign(to_integer(expo));
}

} // namespace fjrw

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fjrw/rational.hpp"

namespace fjrw {

// ---------------------------------------------------------------------------
// Generators
//
// The generator set of a computation session: the light-insertion
// variables t_1..t_r, the heavy-insertion variables u_{c,b}, the
// equivariant/Laurent variable z, the twisting parameters lambda_alpha and
// bounded formal psi classes (one per marking label).
// ---------------------------------------------------------------------------

enum class GenKind : std::uint8_t { T = 0, U = 1, Z = 2, Lambda = 3, Psi = 4 };

struct Gen {
    GenKind kind{GenKind::Z};
    std::int16_t i{0}; // psi power slot for U (the descendant index c)
    std::int16_t j{0}; // basis/marking index

    friend auto operator<=>(const Gen&, const Gen&) = default;

    std::string name() const {
        switch (kind) {
        case GenKind::T: return "t" + std::to_string(j);
        case GenKind::U: return "u" + std::to_string(i) + "_" + std::to_string(j);
        case GenKind::Z: return "z";
        case GenKind::Lambda: return "lam" + std::to_string(j);
        case GenKind::Psi: return "psi" + std::to_string(j);
        }
        return "?";
    }

    static std::optional<Gen> parse(std::string_view s) {
        auto num = [](std::string_view v, int& out) {
            if (v.empty()) return false;
            out = 0;
            for (char c : v) {
                if (c < '0' || c > '9') return false;
                out = out * 10 + (c - '0');
            }
            return true;
        };
        int a = 0, b = 0;
        if (s == "z") return Gen{GenKind::Z, 0, 0};
        if (s.size() > 3 && s.substr(0, 3) == "lam" && num(s.substr(3), b))
            return Gen{GenKind::Lambda, 0, static_cast<std::int16_t>(b)};
        if (s.size() > 3 && s.substr(0, 3) == "psi" && num(s.substr(3), b))
            return Gen{GenKind::Psi, 0, static_cast<std::int16_t>(b)};
        if (s.size() > 1 && s[0] == 't' && num(s.substr(1), b))
            return Gen{GenKind::T, 0, static_cast<std::int16_t>(b)};
        if (s.size() > 2 && s[0] == 'u') {
            auto sep = s.find('_');
            if (sep != std::string_view::npos && num(s.substr(1, sep - 1), a) &&
                num(s.substr(sep + 1), b))
                return Gen{GenKind::U, static_cast<std::int16_t>(a),
                           static_cast<std::int16_t>(b)};
        }
        return std::nullopt;
    }
};

inline Gen t_gen(int b) { return Gen{GenKind::T, 0, static_cast<std::int16_t>(b)}; }
inline Gen u_gen(int c, int b) {
    return Gen{GenKind::U, static_cast<std::int16_t>(c), static_cast<std::int16_t>(b)};
}
inline Gen z_gen() { return Gen{GenKind::Z, 0, 0}; }
inline Gen lambda_gen(int a) { return Gen{GenKind::Lambda, 0, static_cast<std::int16_t>(a)}; }
inline Gen psi_gen(int id) { return Gen{GenKind::Psi, 0, static_cast<std::int16_t>(id)}; }

// ---------------------------------------------------------------------------
// Monomial: sparse exponent vector. Only z may carry a negative exponent.
// Zero exponents are never stored.
// ---------------------------------------------------------------------------

struct Monomial {
    // sorted by generator, no zero exponents
    std::vector<std::pair<Gen, int>> exps;

    static Monomial one() { return {}; }

    static Monomial of(Gen g, int e) {
        Monomial m;
        if (e != 0) m.exps.emplace_back(g, e);
        m.validate();
        return m;
    }

    bool is_one() const { return exps.empty(); }

    int exponent(Gen g) const {
        auto it = std::lower_bound(exps.begin(), exps.end(), g,
                                   [](const auto& p, const Gen& q) { return p.first < q; });
        return (it != exps.end() && it->first == g) ? it->second : 0;
    }

    void validate() const {
        for (const auto& [g, e] : exps) {
            if (e == 0) throw std::logic_error("zero exponent stored in monomial");
            if (e < 0 && g.kind != GenKind::Z)
                throw std::domain_error("negative exponent on non-Laurent generator " + g.name());
        }
    }

    Monomial operator*(const Monomial& o) const {
        Monomial out;
        out.exps.reserve(exps.size() + o.exps.size());
        auto a = exps.begin(), b = o.exps.begin();
        while (a != exps.end() || b != o.exps.end()) {
            if (b == o.exps.end() || (a != exps.end() && a->first < b->first)) {
                out.exps.push_back(*a++);
            } else if (a == exps.end() || b->first < a->first) {
                out.exps.push_back(*b++);
            } else {
                int e = a->second + b->second;
                if (e != 0) out.exps.emplace_back(a->first, e);
                ++a;
                ++b;
            }
        }
        out.validate();
        return out;
    }

    int degree_of_kind(GenKind k) const {
        int d = 0;
        for (const auto& [g, e] : exps)
            if (g.kind == k) d += e;
        return d;
    }

    int t_degree() const { return degree_of_kind(GenKind::T); }
    int u_degree() const { return degree_of_kind(GenKind::U); }
    int lambda_degree() const { return degree_of_kind(GenKind::Lambda); }
    int z_exponent() const { return exponent(z_gen()); }

    int max_psi_exponent() const {
        int d = 0;
        for (const auto& [g, e] : exps)
            if (g.kind == GenKind::Psi) d = std::max(d, e);
        return d;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [g, e] : exps) d += e;
        return d;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps == b.exps; }

    // Canonical graded-lexicographic order over the fixed generator
    // enumeration; serialized output and map iteration are deterministic.
    friend bool operator<(const Monomial& a, const Monomial& b) {
        int da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db;
        return std::lexicographical_compare(
            a.exps.begin(), a.exps.end(), b.exps.begin(), b.exps.end(),
            [](const auto& x, const auto& y) {
                if (x.first != y.first) return x.first < y.first;
                return x.second > y.second; // higher power of an earlier gen first
            });
    }

    std::string str() const {
        if (exps.empty()) return "1";
        std::string s;
        for (const auto& [g, e] : exps) {
            if (!s.empty()) s += "*";
            s += g.name();
            if (e != 1) s += "^" + std::to_string(e);
        }
        return s;
    }
};

// ---------------------------------------------------------------------------
// Truncation policy. Bounds are enforced eagerly at every operation.
// psi powers are bounded per generator by z_max.
// ---------------------------------------------------------------------------

struct TruncationPolicy {
    int max_t_degree{0};
    int max_u_degree{0};
    int z_min{0};
    int z_max{0};
    int max_lambda_degree{0};

    friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;

    void validate() const {
        if (max_t_degree < 0 || max_u_degree < 0 || max_lambda_degree < 0 || z_max < 0)
            throw std::invalid_argument("truncation bounds must be >= 0 (z_min may be negative)");
        if (z_min > z_max) throw std::invalid_argument("z_min > z_max");
    }

    bool admits(const Monomial& m) const {
        if (m.t_degree() > max_t_degree) return false;
        if (m.u_degree() > max_u_degree) return false;
        if (m.lambda_degree() > max_lambda_degree) return false;
        int ze = m.z_exponent();
        if (ze < z_min || ze > z_max) return false;
        for (const auto& [g, e] : m.exps)
            if (g.kind == GenKind::Psi && e > z_max) return false;
        return true;
    }
};

struct PolicyMismatch : std::invalid_argument {
    PolicyMismatch() : std::invalid_argument("incompatible truncation policies") {}
};

// ---------------------------------------------------------------------------
// TruncatedSeries: exact multivariate truncated Laurent/power series.
// Values are immutable in spirit: all operations return fresh series.
// ---------------------------------------------------------------------------

class TruncatedSeries {
public:
    using TermMap = std::map<Monomial, Rational>;

    explicit TruncatedSeries(TruncationPolicy pol) : policy_(pol) { pol.validate(); }

    static TruncatedSeries zero(const TruncationPolicy& pol) { return TruncatedSeries(pol); }

    static TruncatedSeries constant(const TruncationPolicy& pol, const Rational& c) {
        TruncatedSeries s(pol);
        s.add_term(Monomial::one(), c);
        return s;
    }

    static TruncatedSeries monomial(const TruncationPolicy& pol, const Monomial& m,
                                    const Rational& c) {
        TruncatedSeries s(pol);
        s.add_term(m, c);
        return s;
    }

    static TruncatedSeries generator(const TruncationPolicy& pol, Gen g) {
        return monomial(pol, Monomial::of(g, 1), Rational(1));
    }

    const TruncationPolicy& policy() const { return policy_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0 || !policy_.admits(m)) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    TruncatedSeries operator-() const {
        TruncatedSeries out(policy_);
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
        return out;
    }

    TruncatedSeries operator+(const TruncatedSeries& o) const {
        require_compatible(o);
        TruncatedSeries out = *this;
        for (const auto& [m, c] : o.terms_) out.add_term(m, c);
        return out;
    }

    TruncatedSeries operator-(const TruncatedSeries& o) const {
        require_compatible(o);
        TruncatedSeries out = *this;
        for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
        return out;
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) {
        require_compatible(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    TruncatedSeries& operator-=(const TruncatedSeries& o) {
        require_compatible(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    TruncatedSeries operator*(const TruncatedSeries& o) const {
        require_compatible(o);
        TruncatedSeries out(policy_);
        for (const auto& [ma, ca] : terms_)
            for (const auto& [mb, cb] : o.terms_) out.add_term(ma * mb, ca * cb);
        return out;
    }

    TruncatedSeries operator*(const Rational& c) const {
        TruncatedSeries out(policy_);
        if (c == 0) return out;
        for (const auto& [m, x] : terms_) out.terms_.emplace(m, x * c);
        return out;
    }

    TruncatedSeries& operator*=(const Rational& c) {
        if (c == 0) {
            terms_.clear();
        } else {
            for (auto& [m, x] : terms_) x *= c;
        }
        return *this;
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        if (a.policy_ != b.policy_) throw PolicyMismatch();
        return a.terms_ == b.terms_;
    }

    /// Sub-series of terms with z-exponent >= 0 (the [.]_+ truncation).
    TruncatedSeries truncate_z_nonneg() const {
        TruncatedSeries out(policy_);
        for (const auto& [m, c] : terms_)
            if (m.z_exponent() >= 0) out.terms_.emplace(m, c);
        return out;
    }

    /// Complement: strictly negative z powers. plus + minus reconstructs.
    TruncatedSeries truncate_z_neg() const {
        TruncatedSeries out(policy_);
        for (const auto& [m, c] : terms_)
            if (m.z_exponent() < 0) out.terms_.emplace(m, c);
        return out;
    }

    /// Coefficient of z^k, as a series in the remaining generators.
    TruncatedSeries coefficient_of_z(int k) const {
        TruncatedSeries out(policy_);
        for (const auto& [m, c] : terms_) {
            if (m.z_exponent() != k) continue;
            Monomial rest;
            for (const auto& [g, e] : m.exps)
                if (g.kind != GenKind::Z) rest.exps.emplace_back(g, e);
            out.add_term(rest, c);
        }
        return out;
    }

    TruncatedSeries filter(const std::function<bool(const Monomial&)>& keep) const {
        TruncatedSeries out(policy_);
        for (const auto& [m, c] : terms_)
            if (keep(m)) out.terms_.emplace(m, c);
        return out;
    }

    /// Formal substitution generator -> value, re-truncated. A generator
    /// occurring with a negative exponent requires an invertible value
    /// (a single monomial with unit-invertible support).
    TruncatedSeries substitute(Gen g, const TruncatedSeries& value) const {
        require_compatible(value);
        TruncatedSeries out(policy_);
        std::map<int, TruncatedSeries> power_cache;
        for (const auto& [m, c] : terms_) {
            int e = m.exponent(g);
            Monomial rest;
            for (const auto& [gg, ee] : m.exps)
                if (gg != g) rest.exps.emplace_back(gg, ee);
            if (e == 0) {
                out.add_term(rest, c);
                continue;
            }
            auto it = power_cache.find(e);
            if (it == power_cache.end())
                it = power_cache.emplace(e, pow_of(value, e)).first;
            out += it->second * TruncatedSeries::monomial(policy_, rest, c);
        }
        return out;
    }

    /// Integer power; negative powers require a single invertible monomial.
    static TruncatedSeries pow_of(const TruncatedSeries& s, int e) {
        if (e == 0) return constant(s.policy_, Rational(1));
        if (e > 0) {
            TruncatedSeries out = s;
            for (int i = 1; i < e; ++i) out = out * s;
            return out;
        }
        TruncatedSeries inv = invert_monomial(s);
        TruncatedSeries out = inv;
        for (int i = 1; i < -e; ++i) out = out * inv;
        return out;
    }

    /// Minimal t+u+lambda degree among stored terms; 0 for the zero series.
    int min_positive_degree() const {
        int best = -1;
        for (const auto& [m, c] : terms_) {
            int d = m.t_degree() + m.u_degree() + m.lambda_degree();
            if (best < 0 || d < best) best = d;
        }
        return best < 0 ? 0 : best;
    }

    bool has_z_or_psi() const {
        for (const auto& [m, c] : terms_)
            for (const auto& [g, e] : m.exps)
                if (g.kind == GenKind::Z || g.kind == GenKind::Psi) return true;
        return false;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += rational_to_string(c);
            if (!m.is_one()) s += "*" + m.str();
        }
        return s;
    }

private:
    void require_compatible(const TruncatedSeries& o) const {
        if (policy_ != o.policy_) throw PolicyMismatch();
    }

    static TruncatedSeries invert_monomial(const TruncatedSeries& s) {
        if (s.terms_.size() != 1)
            throw std::domain_error("substitution into a negative exponent requires an "
                                    "invertible (single-monomial) value");
        const auto& [m, c] = *s.terms_.begin();
        Monomial inv;
        for (const auto& [g, e] : m.exps) {
            if (g.kind != GenKind::Z)
                throw std::domain_error("monomial is not invertible within the policy");
            inv.exps.emplace_back(g, -e);
        }
        return monomial(s.policy_, inv, Rational(1) / c);
    }

    TruncationPolicy policy_;
    TermMap terms_;
};

inline TruncatedSeries operator*(const Rational& c, const TruncatedSeries& s) { return s * c; }

// ---------------------------------------------------------------------------
// Analytic-style operations on series with nilpotent argument. These are
// only defined for pure t/u/lambda series (no z or psi content), where
// truncation makes every positive-order series nilpotent.
// ---------------------------------------------------------------------------

namespace detail {
inline void require_nilpotent_arg(const TruncatedSeries& s, const char* op) {
    if (s.coefficient(Monomial::one()) != 0)
        throw std::domain_error(std::string(op) + " requires a zero constant term");
    if (s.has_z_or_psi())
        throw std::domain_error(std::string(op) + " requires a pure t/u/lambda series");
}

inline int nilpotency_bound(const TruncatedSeries& s) {
    const auto& p = s.policy();
    return p.max_t_degree + p.max_u_degree + p.max_lambda_degree + 1;
}
} // namespace detail

/// log(1+s) = sum_{m>=1} (-1)^{m+1} s^m / m, for s with zero constant term.
inline TruncatedSeries series_log1p(const TruncatedSeries& s) {
    detail::require_nilpotent_arg(s, "series_log1p");
    TruncatedSeries out = TruncatedSeries::zero(s.policy());
    TruncatedSeries power = TruncatedSeries::constant(s.policy(), Rational(1));
    int bound = detail::nilpotency_bound(s);
    for (int m = 1; m <= bound; ++m) {
        power = power * s;
        if (power.is_zero()) break;
        out += power * Rational((m % 2 == 1) ? 1 : -1, m);
    }
    return out;
}

/// exp(s) for s with zero constant term.
inline TruncatedSeries series_exp(const TruncatedSeries& s) {
    detail::require_nilpotent_arg(s, "series_exp");
    TruncatedSeries out = TruncatedSeries::constant(s.policy(), Rational(1));
    TruncatedSeries power = TruncatedSeries::constant(s.policy(), Rational(1));
    int bound = detail::nilpotency_bound(s);
    for (int m = 1; m <= bound; ++m) {
        power = power * s * Rational(1, m);
        if (power.is_zero()) break;
        out += power;
    }
    return out;
}

/// Multiplicative inverse of a series with a nonzero constant term (and no
/// z/psi content): 1/(c(1+h)) = (1/c) sum (-h)^m.
inline TruncatedSeries series_inverse(const TruncatedSeries& s) {
    Rational c = s.coefficient(Monomial::one());
    if (c == 0) throw std::domain_error("series_inverse requires a nonzero constant term");
    if (s.has_z_or_psi())
        throw std::domain_error("series_inverse requires a pure t/u/lambda series");
    TruncatedSeries h = s * (Rational(1) / c) - TruncatedSeries::constant(s.policy(), Rational(1));
    TruncatedSeries out = TruncatedSeries::constant(s.policy(), Rational(1));
    TruncatedSeries power = TruncatedSeries::constant(s.policy(), Rational(1));
    int bound = detail::nilpotency_bound(s);
    for (int m = 1; m <= bound; ++m) {
        power = power * h * Rational(-1);
        if (power.is_zero()) break;
        out += power;
    }
    return out * (Rational(1) / c);
}

/// s^e for integer e (negative allowed when s is invertible as above).
inline TruncatedSeries series_int_pow(const TruncatedSeries& s, int e) {
    if (e >= 0) return TruncatedSeries::pow_of(s, e);
    return TruncatedSeries::pow_of(series_inverse(s), -e);
}

} // namespace fjrw

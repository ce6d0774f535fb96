#pragma once

#include <compare>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fjrw/model.hpp"
#include "fjrw/mu.hpp"
#include "fjrw/partitions.hpp"
#include "fjrw/series.hpp"

namespace fjrw {

// ---------------------------------------------------------------------------
// Abstract infinity-theory correlator symbols < psi^{c_1} phi_{b_1}, ... >_g.
// Insertions are kept sorted, encoding the S_m symmetry of markings.
// Unstable symbols (2g - 2 + m <= 0, no light markings in the infinity
// theory) are normalized to zero at construction.
// ---------------------------------------------------------------------------

struct Insertion {
    int c{0}; // psi power
    int b{1}; // state index
    friend auto operator<=>(const Insertion&, const Insertion&) = default;
};

struct CorrSymbol {
    int genus{0};
    std::vector<Insertion> ins; // sorted

    friend auto operator<=>(const CorrSymbol&, const CorrSymbol&) = default;

    int m() const { return static_cast<int>(ins.size()); }

    bool is_dilaton_leftover() const {
        return genus == 1 && ins.size() == 1 && ins[0] == Insertion{1, 1};
    }

    std::string str() const {
        std::string s = "<";
        for (std::size_t i = 0; i < ins.size(); ++i) {
            if (i) s += ",";
            if (ins[i].c > 0) s += "psi^" + std::to_string(ins[i].c) + " ";
            s += "phi_" + std::to_string(ins[i].b);
        }
        s += ">_inf_{" + std::to_string(genus) + "," + std::to_string(ins.size()) + "}";
        return s;
    }
};

/// nullopt when the moduli space behind the symbol is empty.
inline std::optional<CorrSymbol> make_symbol(int genus, std::vector<Insertion> ins) {
    std::sort(ins.begin(), ins.end());
    if (2 * genus - 2 + static_cast<int>(ins.size()) <= 0) return std::nullopt;
    return CorrSymbol{genus, std::move(ins)};
}

// ---------------------------------------------------------------------------
// Linear combinations of symbols with exact series coefficients.
// ---------------------------------------------------------------------------

struct CorrelatorExpr {
    std::map<CorrSymbol, TruncatedSeries> terms;

    void add(const CorrSymbol& sym, const TruncatedSeries& coeff) {
        if (coeff.is_zero()) return;
        auto it = terms.find(sym);
        if (it == terms.end()) {
            terms.emplace(sym, coeff);
        } else {
            it->second += coeff;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    CorrelatorExpr& operator+=(const CorrelatorExpr& o) {
        for (const auto& [s, c] : o.terms) add(s, c);
        return *this;
    }

    CorrelatorExpr operator*(const TruncatedSeries& f) const {
        CorrelatorExpr out;
        for (const auto& [s, c] : terms) out.add(s, c * f);
        return out;
    }

    friend bool operator==(const CorrelatorExpr& a, const CorrelatorExpr& b) {
        return a.terms == b.terms;
    }

    bool is_zero() const { return terms.empty(); }
};

/// Structured outcome of a verification: either success, or the first
/// mismatching symbol with both coefficients.
struct CheckReport {
    bool ok{true};
    std::string detail;       // human-readable summary
    std::string symbol;       // offending symbol, if any
    std::string lhs;          // coefficient on the first route
    std::string rhs;          // coefficient on the second route
    bool normalization_only{false};

    static CheckReport success(std::string what) { return {true, std::move(what), "", "", "", false}; }
};

/// Compares two expressions, optionally masking coefficient terms first.
/// The mask keeps both expansions intact; it only restricts which
/// monomials participate in the comparison.
inline CheckReport compare_exprs(const CorrelatorExpr& a, const CorrelatorExpr& b,
                                 const std::function<bool(const Monomial&)>& mask = nullptr) {
    auto masked = [&](const TruncatedSeries& s) { return mask ? s.filter(mask) : s; };
    std::map<CorrSymbol, std::pair<TruncatedSeries, TruncatedSeries>> joined;
    for (const auto& [sym, c] : a.terms) {
        TruncatedSeries mc = masked(c);
        if (!mc.is_zero())
            joined.emplace(sym, std::make_pair(mc, TruncatedSeries::zero(c.policy())));
    }
    for (const auto& [sym, c] : b.terms) {
        TruncatedSeries mc = masked(c);
        if (mc.is_zero()) continue;
        auto it = joined.find(sym);
        if (it == joined.end())
            joined.emplace(sym, std::make_pair(TruncatedSeries::zero(c.policy()), mc));
        else
            it->second.second = mc;
    }
    for (const auto& [sym, pair] : joined) {
        if (!(pair.first == pair.second))
            return {false, "coefficient mismatch", sym.str(), pair.first.str(),
                    pair.second.str(), false};
    }
    return CheckReport::success("expressions agree");
}

// ---------------------------------------------------------------------------
// Multilinear expansion of F_g^inf over insertion slots.
//
// A slot is an insertion (c, b) together with its coefficient series; the
// generating function sum_m 1/m! <U^m> expands over multisets of slots with
// 1/mult! weights. Slots whose coefficients die under the policy prune the
// recursion early.
// ---------------------------------------------------------------------------

using SlotMap = std::map<Insertion, TruncatedSeries>;

inline void merge_slot(SlotMap& slots, const Insertion& ins, const TruncatedSeries& coeff) {
    if (coeff.is_zero()) return;
    auto it = slots.find(ins);
    if (it == slots.end()) {
        slots.emplace(ins, coeff);
    } else {
        it->second += coeff;
        if (it->second.is_zero()) slots.erase(it);
    }
}

/// Slots for the pure heavy variables u = sum u_{c,b} psi^c phi_b, with
/// psi powers bounded by the policy's z_max.
inline SlotMap u_variable_slots(const ModelSpec& model, const TruncationPolicy& pol) {
    SlotMap slots;
    if (pol.max_u_degree == 0) return slots;
    for (int c = 0; c <= pol.z_max; ++c)
        for (int b = 1; b <= model.r; ++b)
            slots.emplace(Insertion{c, b}, TruncatedSeries::generator(pol, u_gen(c, b)));
    return slots;
}

/// Slots for mu^+(t, -psi): each multiset B with z-exponent e in [0, z_max]
/// contributes the insertion psi^e phi_{k_B} with coefficient
/// (-1)^e mu_B t^B / aut(B).
inline SlotMap mu_plus_slots(const ModelSpec& model, const std::vector<int>& active_vars,
                             const TruncationPolicy& pol,
                             BroadMode mode = BroadMode::AsWritten,
                             const MuPerturbation* perturb = nullptr) {
    SlotMap slots;
    for_each_multiset<int>(active_vars, pol.max_t_degree, [&](const Multiset<int>& m) {
        std::vector<int> B = multiset_to_vector(m);
        SequenceData d = sequence_data(model, B, mode);
        TruncatedSeries mu = mu_coefficient(model, B, pol, false, mode);
        if (perturb && perturb->matches(m))
            mu += TruncatedSeries::constant(pol, perturb->delta);
        Monomial tmono;
        for (const auto& [b, mult] : m) tmono = tmono * Monomial::of(t_gen(b), mult);
        Rational weight = Rational(1) / Rational(multiset_aut(m));
        for (int e = 0; e <= pol.z_max; ++e) {
            Rational coeff = mu.coefficient(Monomial::of(z_gen(), e));
            if (coeff == 0) continue;
            coeff *= parity_sign(Int(e)); // z -> -psi
            merge_slot(slots, Insertion{e, d.k},
                       TruncatedSeries::monomial(pol, tmono, coeff * weight));
        }
    });
    return slots;
}

/// sum_m 1/m! < slots^m, fixed > as a symbol expansion. `fixed` insertions
/// are attached to every symbol and `base` scales every coefficient.
inline CorrelatorExpr expand_F_infinity(int genus, const SlotMap& slots,
                                        const TruncationPolicy& pol,
                                        const std::vector<Insertion>& fixed = {},
                                        const TruncatedSeries* base = nullptr) {
    CorrelatorExpr out;
    std::vector<std::pair<Insertion, TruncatedSeries>> flat(slots.begin(), slots.end());
    std::vector<Insertion> chosen = fixed;
    TruncatedSeries start = base ? *base : TruncatedSeries::constant(pol, Rational(1));

    std::function<void(std::size_t, const TruncatedSeries&)> rec =
        [&](std::size_t i, const TruncatedSeries& coeff) {
            if (coeff.is_zero()) return;
            if (i == flat.size()) {
                if (auto sym = make_symbol(genus, chosen)) out.add(*sym, coeff);
                return;
            }
            rec(i + 1, coeff); // multiplicity 0
            TruncatedSeries acc = coeff;
            for (int mult = 1;; ++mult) {
                acc = acc * flat[i].second * Rational(1, mult);
                if (acc.is_zero()) break;
                for (int k = 0; k < mult; ++k) chosen.push_back(flat[i].first);
                rec(i + 1, acc);
                for (int k = 0; k < mult; ++k) chosen.pop_back();
            }
        };
    rec(0, start);
    return out;
}

// ---------------------------------------------------------------------------
// The 0-theory generating function expanded through the wall-crossing
// partition sum: every 0-theory correlator with light insertions
// psi^{d_j} phi_{b_j} is rewritten as a sum over set partitions of the
// light markings, each block J contributing the heavy insertion
// [z^{sum d_J} mu_J(-z)]_+ |_{z=psi} phi_{k_J}.
// ---------------------------------------------------------------------------

/// A light marking with its descendant power.
struct LightMark {
    int d{0};
    int b{1};
    friend auto operator<=>(const LightMark&, const LightMark&) = default;
};

/// The heavy insertion produced by one block, or nullopt when the
/// truncation [.]_+ kills it (or the psi power exceeds the policy bound).
inline std::optional<std::pair<Insertion, Rational>>
block_insertion(const ModelSpec& model, const std::vector<LightMark>& block,
                const TruncationPolicy& pol, BroadMode mode = BroadMode::AsWritten) {
    std::vector<int> B;
    long d_sum = 0;
    for (const auto& lm : block) {
        B.push_back(lm.b);
        d_sum += lm.d;
    }
    SequenceData d = sequence_data(model, B, mode);
    Rational coeff(1);
    for (int alpha = 0; alpha < model.s(); ++alpha)
        coeff *= pochhammer(d.k_alpha[alpha], static_cast<unsigned>(d.ell[alpha]));
    long zexp = 1 - static_cast<long>(B.size()) + d.ell_total;
    // [z^{sum d} mu_J(-z)]_+ |_{z=psi}: a single monomial survives iff the
    // shifted exponent is >= 0.
    long e = zexp + d_sum;
    if (e < 0 || coeff == 0) return std::nullopt;
    if (e > pol.z_max) return std::nullopt; // psi-power truncation
    coeff *= parity_sign(Int(zexp)); // sign from mu_J(-z)
    return std::make_pair(Insertion{static_cast<int>(e), d.k}, coeff);
}

/// Expands a single 0-theory correlator < slots^m | lights > through the
/// partition sum, as an infinity-symbol expression. `lights` is a labeled
/// list; the sum runs over unordered set partitions (equivalently, ordered
/// partitions weighted by 1/h!).
inline CorrelatorExpr expand_correlator_zero(const ModelSpec& model, int genus,
                                             const SlotMap& u_slots,
                                             const std::vector<LightMark>& lights,
                                             const TruncationPolicy& pol,
                                             const TruncatedSeries& base,
                                             BroadMode mode = BroadMode::AsWritten) {
    CorrelatorExpr out;
    int n = static_cast<int>(lights.size());
    if (n == 0) {
        out += expand_F_infinity(genus, u_slots, pol, {}, &base);
        return out;
    }
    for_each_set_partition(n, [&](const std::vector<std::vector<int>>& blocks) {
        Rational coeff(1);
        std::vector<Insertion> heavy;
        heavy.reserve(blocks.size());
        for (const auto& idx : blocks) {
            std::vector<LightMark> block;
            block.reserve(idx.size());
            for (int i : idx) block.push_back(lights[static_cast<std::size_t>(i)]);
            auto ins = block_insertion(model, block, pol, mode);
            if (!ins) {
                coeff = 0;
                break;
            }
            heavy.push_back(ins->first);
            coeff *= ins->second;
        }
        if (coeff == 0) return;
        TruncatedSeries scaled = base * coeff;
        out += expand_F_infinity(genus, u_slots, pol, heavy, &scaled);
    });
    return out;
}

/// F^0_g(u, t) assembled from the partition-sum expansion of each
/// correlator. Light insertions are primary (d_j = 0) here; descendant
/// light powers are supported through expand_correlator_zero directly.
inline CorrelatorExpr expand_F_zero_via_wallcrossing(const ModelSpec& model, int genus,
                                                     const std::vector<int>& active_vars,
                                                     const TruncationPolicy& pol,
                                                     BroadMode mode = BroadMode::AsWritten) {
    SlotMap u_slots = u_variable_slots(model, pol);
    TruncatedSeries one = TruncatedSeries::constant(pol, Rational(1));
    CorrelatorExpr out = expand_F_infinity(genus, u_slots, pol); // n = 0 layer
    for_each_multiset<int>(active_vars, pol.max_t_degree, [&](const Multiset<int>& m) {
        std::vector<LightMark> lights;
        Monomial tmono;
        for (const auto& [b, mult] : m) {
            tmono = tmono * Monomial::of(t_gen(b), mult);
            for (int i = 0; i < mult; ++i) lights.push_back(LightMark{0, b});
        }
        TruncatedSeries base =
            TruncatedSeries::monomial(pol, tmono, Rational(1) / Rational(multiset_aut(m)));
        out += expand_correlator_zero(model, genus, u_slots, lights, pol, base, mode);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Wall-crossing check: F^0_g(u, t) = F^inf_g(u + mu^+(t, -psi)), with the
// g = 0 comparison masked to u-degree >= 2.
// ---------------------------------------------------------------------------

inline CheckReport check_wallcrossing_identity(const ModelSpec& model, int genus,
                                               const std::vector<int>& active_vars,
                                               const TruncationPolicy& pol,
                                               bool g0_mask = true,
                                               BroadMode mode = BroadMode::AsWritten,
                                               const MuPerturbation* perturb = nullptr) {
    CorrelatorExpr lhs = expand_F_zero_via_wallcrossing(model, genus, active_vars, pol, mode);

    SlotMap shifted = u_variable_slots(model, pol);
    for (const auto& [ins, coeff] : mu_plus_slots(model, active_vars, pol, mode, perturb))
        merge_slot(shifted, ins, coeff);
    CorrelatorExpr rhs = expand_F_infinity(genus, shifted, pol);

    std::function<bool(const Monomial&)> mask = nullptr;
    if (genus == 0 && g0_mask)
        mask = [](const Monomial& m) { return m.u_degree() >= 2; };
    CheckReport rep = compare_exprs(lhs, rhs, mask);
    if (rep.ok)
        rep.detail = "wall-crossing identity holds (genus " + std::to_string(genus) + ")";
    return rep;
}

// ---------------------------------------------------------------------------
// Dilaton rewrite: < psi phi_1, X >_{g,m+1} -> (2g - 2 + m) < X >_{g,m},
// applied until no psi^1 phi_1 insertion remains; the genus-1 leftover
// < psi phi_1 >_{1,1} is terminal.
// ---------------------------------------------------------------------------

inline CorrelatorExpr dilaton_reduce(const CorrelatorExpr& expr) {
    CorrelatorExpr out;
    for (const auto& [sym, coeff] : expr.terms) {
        CorrSymbol cur = sym;
        Rational factor(1);
        for (;;) {
            if (cur.is_dilaton_leftover()) break;
            auto it = std::find(cur.ins.begin(), cur.ins.end(), Insertion{1, 1});
            if (it == cur.ins.end()) break;
            cur.ins.erase(it);
            factor *= 2 * cur.genus - 2 + cur.m();
            if (factor == 0) break;
        }
        if (factor == 0) continue;
        if (2 * cur.genus - 2 + cur.m() <= 0 && !cur.is_dilaton_leftover()) continue;
        out.add(cur, coeff * factor);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dilaton closed-form check (q = 1, t = t phi_2, u = 0). Starting from the
// wall-crossing right-hand side with mu^+(t phi_2, -psi) =
// -(I_0 - 1) psi phi_1 + I_1 phi_2, reduce by the dilaton equation and
// compare against the closed form
//   g >  1:  I_0^{2g-2} * (reduced) = sum_n (I_1 / I_0)^n / n! <phi_2^n>
//   g == 1:  reduced = -log(I_0) <psi phi_1>_{1,1}
//                      + sum_{n>=1} (I_1 / I_0)^n / n! <phi_2^n>.
// On mismatch, the report states whether the discrepancy is a pure
// normalization (one common constant ratio across all symbols).
// ---------------------------------------------------------------------------

inline CheckReport check_dilaton_closed_form(const ModelSpec& model, int genus,
                                       const TruncationPolicy& pol) {
    if (genus < 1) throw std::invalid_argument("dilaton closed-form check requires genus >= 1");
    IFunctions ifn = extract_I_functions(model, pol);
    TruncatedSeries one = TruncatedSeries::constant(pol, Rational(1));

    SlotMap slots;
    merge_slot(slots, Insertion{1, 1}, -(ifn.I0 - one)); // (I0-1)(-psi) phi_1
    merge_slot(slots, Insertion{0, 2}, ifn.I1);
    CorrelatorExpr reduced = dilaton_reduce(expand_F_infinity(genus, slots, pol));

    TruncatedSeries ratio = ifn.I1 * series_inverse(ifn.I0);
    CorrelatorExpr closed;
    TruncatedSeries power = one;
    for (int n = 0;; ++n) {
        if (n > 0) {
            power = power * ratio * Rational(1, n);
            if (power.is_zero()) break;
        }
        if (auto sym = make_symbol(genus, std::vector<Insertion>(
                                              static_cast<std::size_t>(n), Insertion{0, 2})))
            closed.add(*sym, power);
        if (n > 3 * (pol.max_t_degree + 1)) break; // safety; power dies first
    }

    CorrelatorExpr lhs;
    if (genus == 1) {
        lhs = reduced;
        closed.add(CorrSymbol{1, {Insertion{1, 1}}}, -series_log1p(ifn.I0 - one));
    } else {
        TruncatedSeries scale = series_int_pow(ifn.I0, 2 * genus - 2);
        lhs = reduced * scale;
    }

    CheckReport rep = compare_exprs(lhs, closed);
    if (rep.ok) {
        rep.detail = "dilaton closed form holds (genus " + std::to_string(genus) + ")";
        return rep;
    }
    // Normalization audit: does one constant rescale fix every symbol?
    std::optional<Rational> common;
    bool normalization = true;
    for (const auto& [sym, c] : lhs.terms) {
        auto it = closed.terms.find(sym);
        if (it == closed.terms.end()) { normalization = false; break; }
        // compare leading coefficients termwise
        if (c.terms().size() != it->second.terms().size()) { normalization = false; break; }
        auto a = c.terms().begin();
        auto b = it->second.terms().begin();
        for (; a != c.terms().end(); ++a, ++b) {
            if (!(a->first == b->first) || b->second == 0) { normalization = false; break; }
            Rational q = a->second / b->second;
            if (!common) common = q;
            else if (*common != q) { normalization = false; break; }
        }
        if (!normalization) break;
    }
    rep.normalization_only = normalization && common && *common != 1;
    if (rep.normalization_only)
        rep.detail = "mismatch is a pure normalization: common ratio " +
                     rational_to_string(*common);
    return rep;
}

} // namespace fjrw

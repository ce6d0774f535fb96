#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fjrw/model.hpp"
#include "fjrw/series.hpp"

namespace fjrw {

using nlohmann::json;

// A series serializes as an ordered array of terms; the map iteration order
// is the canonical graded-lex monomial order, so output is deterministic
// and round-trips bit-exactly (numerators/denominators as decimal strings).

inline json series_to_json(const TruncatedSeries& s) {
    json arr = json::array();
    for (const auto& [mono, coeff] : s.terms()) {
        json m = json::object();
        for (const auto& [gen, exp] : mono.exps) m[gen.name()] = exp;
        arr.push_back({{"monomial", std::move(m)},
                       {"num", boost::multiprecision::numerator(coeff).str()},
                       {"den", boost::multiprecision::denominator(coeff).str()}});
    }
    return arr;
}

inline TruncatedSeries series_from_json(const json& arr, const TruncationPolicy& pol) {
    if (!arr.is_array()) throw std::invalid_argument("series JSON must be an array");
    TruncatedSeries out = TruncatedSeries::zero(pol);
    for (const auto& term : arr) {
        Monomial mono;
        for (const auto& [name, exp] : term.at("monomial").items()) {
            auto gen = Gen::parse(name);
            if (!gen) throw std::invalid_argument("unknown generator name: " + name);
            mono = mono * Monomial::of(*gen, exp.get<int>());
        }
        Rational coeff(Int(term.at("num").get<std::string>()),
                       Int(term.at("den").get<std::string>()));
        out.add_term(mono, coeff);
    }
    return out;
}

inline std::string series_to_text(const TruncatedSeries& s) { return s.str(); }

inline json policy_to_json(const TruncationPolicy& p) {
    return {{"max_t_degree", p.max_t_degree},
            {"max_u_degree", p.max_u_degree},
            {"z_min", p.z_min},
            {"z_max", p.z_max},
            {"max_lambda_degree", p.max_lambda_degree}};
}

inline json model_to_json(const ModelSpec& m) {
    return {{"r", m.r}, {"weights", m.weights}};
}

inline ModelSpec model_from_json(const json& j) {
    return ModelSpec(j.at("r").get<int>(), j.at("weights").get<std::vector<int>>());
}

inline ModelSpec load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    json j;
    in >> j;
    return model_from_json(j);
}

} // namespace fjrw

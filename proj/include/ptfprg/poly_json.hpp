#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "ptfprg/poly.hpp"

namespace ptfprg {

/// Malformed polynomial document.
class PolyFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// { "n": int, "d": int, "basis": "hermite"|"standard",
///   "terms": [ { "alpha": [int, ...], "c": float }, ... ] }
/// Terms are emitted in lexicographic alpha order.
inline nlohmann::json to_json(const Poly &p)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &[alpha, c] : p.terms()) {
        terms.push_back({{"alpha", alpha.to_vector()}, {"c", c}});
    }
    return {{"n", p.n()}, {"d", p.degree()}, {"basis", std::string(to_string(p.basis()))},
            {"terms", std::move(terms)}};
}

/// Parses the polynomial document. Terms must be strictly increasing in
/// lexicographic alpha order, which also rules out duplicates.
inline Poly poly_from_json(const nlohmann::json &j)
{
    try {
        if (!j.is_object()) {
            throw PolyFormatError("polynomial JSON must be an object");
        }
        for (const char *key : {"n", "d", "basis", "terms"}) {
            if (!j.contains(key)) {
                throw PolyFormatError(std::string("polynomial JSON missing \"") + key + "\"");
            }
        }
        const auto n = j.at("n").get<long long>();
        const auto d = j.at("d").get<int>();
        if (n < 0) {
            throw PolyFormatError("\"n\" must be non-negative");
        }
        const Basis basis = basis_from_string(j.at("basis").get<std::string>());
        if (!j.at("terms").is_array()) {
            throw PolyFormatError("\"terms\" must be an array");
        }
        Poly::Terms terms;
        std::optional<MultiIndex> prev;
        for (const auto &t : j.at("terms")) {
            const auto exps = t.at("alpha").get<std::vector<int>>();
            if (exps.size() != static_cast<std::size_t>(n)) {
                throw PolyFormatError("term alpha has length " + std::to_string(exps.size())
                                      + ", expected " + std::to_string(n));
            }
            MultiIndex alpha{std::span<const int>(exps)};
            if (prev && !(*prev < alpha)) {
                throw PolyFormatError(*prev == alpha
                                          ? "duplicate alpha " + alpha.to_string()
                                          : "terms not sorted at alpha " + alpha.to_string());
            }
            terms.emplace(alpha, t.at("c").get<double>());
            prev = alpha;
        }
        return Poly(static_cast<std::size_t>(n), d, basis, std::move(terms));
    } catch (const PolyFormatError &) {
        throw;
    } catch (const std::exception &e) {
        throw PolyFormatError(std::string("invalid polynomial JSON: ") + e.what());
    }
}

inline Poly parse_poly(const std::string &text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw PolyFormatError(std::string("malformed JSON: ") + e.what());
    }
    return poly_from_json(j);
}

inline Poly load_poly(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_poly(ss.str());
}

inline void save_poly(const Poly &p, const std::string &path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << to_json(p).dump(2) << '\n';
}

} // namespace ptfprg

#include "quarklet/serialization.hpp"

namespace quarklet {

nlohmann::json to_json(const Dyadic& d) { return nlohmann::json::array({d.numerator(), d.exponent()}); }

nlohmann::json to_json(const PiecewisePolynomial& f) {
    nlohmann::json breaks = nlohmann::json::array();
    for (const auto& b : f.breakpoints()) breaks.push_back(to_json(b));
    return {{"breakpoints", breaks}, {"pieces", f.pieces()}, {"closed_right", f.closed_right()}};
}

PiecewisePolynomial piecewise_from_json(const nlohmann::json& j) {
    std::vector<Dyadic> breaks;
    for (const auto& b : j.at("breakpoints")) breaks.push_back(Dyadic::make(b.at(0).get<std::int64_t>(), b.at(1).get<int>()));
    return PiecewisePolynomial(std::move(breaks), j.at("pieces").get<std::vector<PiecewisePolynomial::Coefficients>>(),
                               j.value("closed_right", false));
}

nlohmann::json system_to_json(const IntervalSystem& sys, int p_max, int j_max, bool with_elements) {
    const auto& p = sys.params();
    nlohmann::json levels = nlohmann::json::array();
    for (int j = sys.j0() - 1; j <= j_max; ++j) {
        levels.push_back({{"j", j},
                          {"nabla_first", sys.nabla_first(j)},
                          {"nabla_last", sys.nabla_last(j)},
                          {"nabla_size", sys.nabla_last(j) - sys.nabla_first(j) + 1},
                          {"delta_size", sys.delta_size(j + 1)}});
    }
    nlohmann::json out{{"m", p.m},
                       {"m_tilde", p.m_tilde},
                       {"j0", p.j0},
                       {"sigma", {sys.sigma().sigma_l, sys.sigma().sigma_r}},
                       {"p_max", p_max},
                       {"j_max", j_max},
                       {"levels", levels}};
    if (with_elements) {
        nlohmann::json elements = nlohmann::json::array();
        for (const auto& idx : sys.indices(p_max, j_max)) {
            auto e = to_json(*sys.element(idx));
            e["index"] = {idx.p, idx.j, idx.k};
            elements.push_back(std::move(e));
        }
        out["elements"] = std::move(elements);
    }
    return out;
}

}  // namespace quarklet

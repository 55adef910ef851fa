#include "portkit/config.hpp"

#include <algorithm>
#include <fstream>

namespace portkit {

using nlohmann::json;

namespace {

double number_at(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing key \"" + key + "\"");
    if (!j.at(key).is_number())
        throw ConfigError("key \"" + key + "\" must be a number");
    return j.at(key).get<double>();
}

}  // namespace

FuzzyNumber fuzzy_from_json(const json& j) {
    if (!j.is_object())
        throw ConfigError("fuzzy number must be an object (\"triangular\" or "
                          "\"breakpoints\")");
    try {
        if (j.contains("triangular")) {
            const auto& t = j.at("triangular");
            if (!t.is_array() || t.size() != 3)
                throw ConfigError("\"triangular\" must be an array [a, b, c]");
            return FuzzyNumber::triangular(t[0].get<double>(),
                                           t[1].get<double>(),
                                           t[2].get<double>());
        }
        if (j.contains("breakpoints")) {
            const auto& bs = j.at("breakpoints");
            if (!bs.is_array() || bs.empty())
                throw ConfigError(
                    "\"breakpoints\" must be a non-empty array of [x, level]");
            std::vector<Breakpoint> pts;
            for (const auto& b : bs) {
                if (!b.is_array() || b.size() != 2)
                    throw ConfigError(
                        "\"breakpoints\" entries must be [x, level] pairs");
                pts.push_back({b[0].get<double>(), b[1].get<double>()});
            }
            return FuzzyNumber(std::move(pts));
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid fuzzy number: ") + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid fuzzy number: ") + e.what());
    }
    throw ConfigError(
        "fuzzy number needs a \"triangular\" or \"breakpoints\" key");
}

json fuzzy_to_json(const FuzzyNumber& fv) {
    if (auto t = as_triangular(fv))
        return json{{"triangular", {(*t)[0], (*t)[1], (*t)[2]}}};
    json bs = json::array();
    for (const auto& p : fv.breakpoints()) bs.push_back({p.x, p.level});
    return json{{"breakpoints", bs}};
}

UtilityFunction utility_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
        throw ConfigError("utility needs a string \"family\" key");
    const std::string family = j.at("family").get<std::string>();
    try {
        if (family == "crra") return UtilityFunction::crra(number_at(j, "a"));
        if (family == "cara")
            return UtilityFunction::cara(number_at(j, "lambda"));
        if (family == "linear")
            return UtilityFunction::linear(number_at(j, "slope"));
        if (family == "hara")
            return UtilityFunction::hara(number_at(j, "theta"),
                                         number_at(j, "eta"),
                                         number_at(j, "gamma"));
    } catch (const DomainError& e) {
        throw ConfigError("invalid utility \"" + family + "\": " + e.what());
    }
    throw ConfigError("unknown utility family \"" + family + "\"");
}

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig cfg;
    cfg.w0 = number_at(j, "w0");
    cfg.r = number_at(j, "r");
    if (!j.contains("risky")) throw ConfigError("missing key \"risky\"");
    cfg.risky = fuzzy_from_json(j.at("risky"));
    if (j.contains("utility")) cfg.utility = utility_from_json(j.at("utility"));
    if (j.contains("backend")) {
        const auto b = j.at("backend").get<std::string>();
        if (b == "choquet")
            cfg.backend = BackendSelection::choquet;
        else if (b == "distributional")
            cfg.backend = BackendSelection::distributional;
        else if (b == "both")
            cfg.backend = BackendSelection::both;
        else
            throw ConfigError("key \"backend\" must be choquet, "
                              "distributional, or both");
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        if (!s.is_object() || !s.contains("k") || !s.at("k").is_array())
            throw ConfigError("key \"sweep\" must be {\"k\": [...]}");
        for (const auto& v : s.at("k")) {
            if (!v.is_number() || !(v.get<double>() > 0.0))
                throw ConfigError("\"sweep.k\" entries must be positive numbers");
            cfg.sweep_k.push_back(v.get<double>());
        }
        if (!std::is_sorted(cfg.sweep_k.begin(), cfg.sweep_k.end()))
            throw ConfigError("\"sweep.k\" must be sorted ascending");
    }
    if (j.contains("quadrature")) {
        const auto& q = j.at("quadrature");
        if (!q.is_object()) throw ConfigError("key \"quadrature\" must be an object");
        if (q.contains("abs_tol")) cfg.quadrature.abs_tol = number_at(q, "abs_tol");
        if (q.contains("rel_tol")) cfg.quadrature.rel_tol = number_at(q, "rel_tol");
        if (q.contains("max_subdivisions"))
            cfg.quadrature.max_subdivisions =
                static_cast<int>(number_at(q, "max_subdivisions"));
        if (q.contains("level_bisection_tol"))
            cfg.quadrature.level_bisection_tol =
                number_at(q, "level_bisection_tol");
        try {
            cfg.quadrature.validate();
        } catch (const DomainError& e) {
            throw ConfigError(std::string("invalid \"quadrature\": ") + e.what());
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("malformed JSON in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

json moment_set_to_json(const MomentSet& m) {
    return json{{"q", m.q},
                {"v", m.v},
                {"sk", m.sk},
                {"ku", m.ku},
                {"backend", to_string(m.backend)}};
}

json report_to_json(const AllocationReport& rep) {
    json j;
    j["w"] = rep.w;
    j["kmu"] = rep.kmu;
    j["alpha_exact"] = rep.exact.alpha;
    j["boundary"] = rep.exact.boundary;
    j["v_prime"] = rep.exact.v_prime;
    j["moments"] = {moment_set_to_json(rep.moments_distributional),
                    moment_set_to_json(rep.moments_choquet)};
    if (rep.indices) {
        j["indices"] = {{"r", rep.indices->r},
                        {"p", rep.indices->p},
                        {"t", rep.indices->t},
                        {"w", rep.indices->evaluated_at}};
    }
    auto orders = [](const std::map<int, std::optional<double>>& m) {
        json out;
        for (const auto& [n, v] : m)
            out[std::to_string(n)] = v ? json(*v) : json("singular");
        return out;
    };
    j["alpha_order"] = {
        {"distributional", orders(rep.alpha_order_distributional)},
        {"choquet", orders(rep.alpha_order_choquet)}};
    json roots;
    for (const auto& [n, v] : rep.foc_roots) roots[std::to_string(n)] = v;
    j["foc_roots"] = roots;
    j["order3_variants"] = {
        {"printed_sk2", rep.order3_printed_sk2},
        {"derivative_ratio_kurtosis", rep.order3_derivative_ratio_kurt}};
    return j;
}

std::optional<std::array<double, 3>> as_triangular(const FuzzyNumber& fv) {
    const auto& pts = fv.breakpoints();
    if (pts.size() == 1) {
        return std::array<double, 3>{pts[0].x, pts[0].x, pts[0].x};
    }
    if (pts.size() == 3 && pts[0].level == 0.0 && pts[1].level == 1.0 &&
        pts[2].level == 0.0) {
        return std::array<double, 3>{pts[0].x, pts[1].x, pts[2].x};
    }
    return std::nullopt;
}

}  // namespace portkit

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "portkit/fuzzy.hpp"
#include "portkit/moments.hpp"
#include "portkit/solver.hpp"
#include "portkit/utility.hpp"

namespace portkit {

enum class BackendSelection { choquet, distributional, both };

struct RunConfig {
    double w0 = 1.0;
    double r = 0.0;
    FuzzyNumber risky = FuzzyNumber::point(0.0);
    std::optional<UtilityFunction> utility;
    std::vector<double> sweep_k;
    BackendSelection backend = BackendSelection::distributional;
    QuadratureSpec quadrature;
};

// Throw ConfigError naming the offending key on any schema violation.
FuzzyNumber fuzzy_from_json(const nlohmann::json& j);
nlohmann::json fuzzy_to_json(const FuzzyNumber& fv);

UtilityFunction utility_from_json(const nlohmann::json& j);

RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

nlohmann::json moment_set_to_json(const MomentSet& m);
nlohmann::json report_to_json(const AllocationReport& rep);

// Recognizes a triangular shape (including degenerate a=b or b=c).
std::optional<std::array<double, 3>> as_triangular(const FuzzyNumber& fv);

}  // namespace portkit

#pragma once

#include <json.hpp>

#include "bellforge/quantum.hpp"

namespace bellforge {

// Correlation: {"m": int, "n": int, "p": [[[[real]]]]} indexed [x][y][a][b].
nlohmann::json to_json(const Correlation& p);
Correlation correlation_from_json(const nlohmann::json& j);

// BellFunctional mirrors the correlation schema plus "offset", "name",
// "local_bound" (null when unknown).
nlohmann::json to_json(const BellFunctional& f);
BellFunctional functional_from_json(const nlohmann::json& j);

// Strategy: {"dims": [DA, DB], "state": {"kind": "ket"|"rho",
// "data": ...}, "alice": [[effect]...], "bob": [...]} with complex numbers
// as [re, im] pairs.
nlohmann::json to_json(const QuantumStrategy& s);
QuantumStrategy strategy_from_json(const nlohmann::json& j);

Correlation load_correlation(const std::string& path);
BellFunctional load_functional(const std::string& path);
QuantumStrategy load_strategy(const std::string& path);

// Floats for CSV output: 9 significant digits.
std::string format_sig9(double v);

}  // namespace bellforge

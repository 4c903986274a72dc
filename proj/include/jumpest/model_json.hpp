#pragma once

#include <filesystem>

#include "json.hpp"
#include "jumpest/model.hpp"

namespace jumpest {

// Each family is stored as {"tag": <name>, "params": {...}}:
//
//   {"drift_family":     {"tag": "Constant", "params": {"b0": 0}},
//    "diffusion_family": {"tag": "BoundedSine", "params": {"sigma0": 1, "sigma1": 0.5}},
//    "jump_family":      {"tag": "Modulated", "params": {"eps": 0.2}},
//    "jump_time_law":    {"tag": "PoissonRate", "params": {"rho": 3}},
//    "mark_law":         {"tag": "UniformInterval", "params": {"m_lo": 0.5, "m_hi": 1.5}},
//    "x0": 0, "a_lower": 0.5, "a_upper": 2}
//
// Missing top-level keys keep the ModelSpec defaults. Unknown tags throw
// std::invalid_argument.
nlohmann::json model_to_json(const ModelSpec& model);
ModelSpec model_from_json(const nlohmann::json& j);
ModelSpec load_model(const std::filesystem::path& path);

}  // namespace jumpest

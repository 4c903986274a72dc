#include "jumpest/model_json.hpp"

#include <fstream>
#include <stdexcept>

namespace jumpest {

using nlohmann::json;

namespace {

json tagged(const char* tag, json params) { return json{{"tag", tag}, {"params", std::move(params)}}; }

const json& params_of(const json& j, const char* field) {
  if (!j.is_object() || !j.contains("tag"))
    throw std::invalid_argument(std::string(field) + ": expected {\"tag\": ..., \"params\": {...}}");
  static const json empty = json::object();
  return j.contains("params") ? j.at("params") : empty;
}

[[noreturn]] void unknown_tag(const char* field, const std::string& tag) {
  throw std::invalid_argument(std::string(field) + ": unknown tag '" + tag + "'");
}

}  // namespace

json model_to_json(const ModelSpec& m) {
  json j;
  j["drift_family"] = std::visit(
      overloaded{[](const ConstantDrift& d) { return tagged("Constant", {{"b0", d.b0}}); },
                 [](const SineDrift& d) { return tagged("BoundedSine", {{"b0", d.b0}, {"b1", d.b1}}); }},
      m.drift);
  j["diffusion_family"] = std::visit(
      overloaded{[](const ConstantDiffusion& d) { return tagged("Constant", {{"sigma", d.sigma}}); },
                 [](const SineDiffusion& d) {
                   return tagged("BoundedSine", {{"sigma0", d.sigma0}, {"sigma1", d.sigma1}});
                 }},
      m.diffusion);
  j["jump_family"] = std::visit(
      overloaded{[](const AdditiveJump&) { return tagged("Additive", json::object()); },
                 [](const ModulatedJump& d) { return tagged("Modulated", {{"eps", d.eps}}); }},
      m.jump);
  j["jump_time_law"] = std::visit(
      overloaded{[](const FixedCount& d) { return tagged("FixedK", {{"K", d.K}}); },
                 [](const PoissonArrivals& d) { return tagged("PoissonRate", {{"rho", d.rho}}); }},
      m.jump_times);
  j["mark_law"] = std::visit(
      overloaded{[](const UniformMarks& d) {
                   return tagged("UniformInterval", {{"m_lo", d.lo}, {"m_hi", d.hi}});
                 },
                 [](const GaussianShiftedMarks& d) {
                   return tagged("GaussianShifted", {{"mu", d.mu}, {"sd", d.sd}, {"floor", d.floor}});
                 }},
      m.marks);
  j["x0"] = m.x0;
  j["a_lower"] = m.a_lower;
  j["a_upper"] = m.a_upper;
  return j;
}

ModelSpec model_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("model: expected a JSON object");
  ModelSpec m;
  try {
    if (j.contains("drift_family")) {
      const auto& f = j.at("drift_family");
      const auto& p = params_of(f, "drift_family");
      const auto tag = f.at("tag").get<std::string>();
      if (tag == "Constant")
        m.drift = ConstantDrift{p.value("b0", 0.0)};
      else if (tag == "BoundedSine")
        m.drift = SineDrift{p.value("b0", 0.0), p.value("b1", 0.0)};
      else
        unknown_tag("drift_family", tag);
    }
    if (j.contains("diffusion_family")) {
      const auto& f = j.at("diffusion_family");
      const auto& p = params_of(f, "diffusion_family");
      const auto tag = f.at("tag").get<std::string>();
      if (tag == "Constant")
        m.diffusion = ConstantDiffusion{p.at("sigma").get<double>()};
      else if (tag == "BoundedSine")
        m.diffusion = SineDiffusion{p.at("sigma0").get<double>(), p.value("sigma1", 0.0)};
      else
        unknown_tag("diffusion_family", tag);
    }
    if (j.contains("jump_family")) {
      const auto& f = j.at("jump_family");
      const auto& p = params_of(f, "jump_family");
      const auto tag = f.at("tag").get<std::string>();
      if (tag == "Additive")
        m.jump = AdditiveJump{};
      else if (tag == "Modulated")
        m.jump = ModulatedJump{p.at("eps").get<double>()};
      else
        unknown_tag("jump_family", tag);
    }
    if (j.contains("jump_time_law")) {
      const auto& f = j.at("jump_time_law");
      const auto& p = params_of(f, "jump_time_law");
      const auto tag = f.at("tag").get<std::string>();
      if (tag == "FixedK")
        m.jump_times = FixedCount{p.at("K").get<std::size_t>()};
      else if (tag == "PoissonRate")
        m.jump_times = PoissonArrivals{p.at("rho").get<double>()};
      else
        unknown_tag("jump_time_law", tag);
    }
    if (j.contains("mark_law")) {
      const auto& f = j.at("mark_law");
      const auto& p = params_of(f, "mark_law");
      const auto tag = f.at("tag").get<std::string>();
      if (tag == "UniformInterval")
        m.marks = UniformMarks{p.at("m_lo").get<double>(), p.at("m_hi").get<double>()};
      else if (tag == "GaussianShifted")
        m.marks = GaussianShiftedMarks{p.at("mu").get<double>(), p.at("sd").get<double>(),
                                       p.value("floor", 0.05)};
      else
        unknown_tag("mark_law", tag);
    }
    m.x0 = j.value("x0", m.x0);
    m.a_lower = j.value("a_lower", m.a_lower);
    m.a_upper = j.value("a_upper", m.a_upper);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("model: ") + e.what());
  }
  return m;
}

ModelSpec load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("model file " + path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace jumpest

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace jumpest {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Drift b(t,x).
struct ConstantDrift {
  double b0 = 0.0;
};
struct SineDrift {  // b0 + b1 sin(x)
  double b0 = 0.0;
  double b1 = 0.0;
};
using DriftFamily = std::variant<ConstantDrift, SineDrift>;

// Diffusion a(t,x).
struct ConstantDiffusion {
  double sigma = 1.0;
};
struct SineDiffusion {  // sigma0 + sigma1 sin(x)
  double sigma0 = 1.0;
  double sigma1 = 0.0;
};
using DiffusionFamily = std::variant<ConstantDiffusion, SineDiffusion>;

// Jump coefficient c(x, theta).
struct AdditiveJump {};  // c = theta
struct ModulatedJump {   // c = theta (1 + eps cos(x))
  double eps = 0.0;
};
using JumpFamily = std::variant<AdditiveJump, ModulatedJump>;

// Law of the jump times on (0,1).
struct FixedCount {  // order statistics of K iid uniforms
  std::size_t K = 0;
};
struct PoissonArrivals {
  double rho = 0.0;
};
using JumpTimeLaw = std::variant<FixedCount, PoissonArrivals>;

// Law of the marks.
struct UniformMarks {
  double lo = 0.5;
  double hi = 1.5;
};
struct GaussianShiftedMarks {  // sign(v) max(|v|, floor), v = mu + sd Z
  double mu = 1.0;
  double sd = 0.2;
  double floor = 0.05;
};
using MarkLaw = std::variant<UniformMarks, GaussianShiftedMarks>;

struct ModelSpec {
  DriftFamily drift = ConstantDrift{};
  DiffusionFamily diffusion = ConstantDiffusion{};
  JumpFamily jump = AdditiveJump{};
  JumpTimeLaw jump_times = FixedCount{};
  MarkLaw marks = UniformMarks{};
  double x0 = 0.0;
  double a_lower = 0.5;
  double a_upper = 2.0;

  // Constant drift and diffusion: Gaussian increments can be sampled exactly
  // between jump times, whatever the jump family.
  bool constant_coefficients() const {
    return std::holds_alternative<ConstantDrift>(drift) &&
           std::holds_alternative<ConstantDiffusion>(diffusion);
  }
};

// sigma = 1, zero drift, additive jumps at Poisson(3) times with marks
// uniform on [0.5, 1.5].
inline ModelSpec compound_poisson_test_model() {
  ModelSpec m;
  m.jump_times = PoissonArrivals{3.0};
  m.marks = UniformMarks{0.5, 1.5};
  return m;
}

inline double eval_drift(const ModelSpec& m, double /*t*/, double x) {
  return std::visit(overloaded{[](const ConstantDrift& d) { return d.b0; },
                               [x](const SineDrift& d) { return d.b0 + d.b1 * std::sin(x); }},
                    m.drift);
}

inline double eval_diffusion(const ModelSpec& m, double /*t*/, double x) {
  return std::visit(
      overloaded{[](const ConstantDiffusion& d) { return d.sigma; },
                 [x](const SineDiffusion& d) { return d.sigma0 + d.sigma1 * std::sin(x); }},
      m.diffusion);
}

inline double eval_jump(const ModelSpec& m, double x, double theta) {
  return std::visit(
      overloaded{[theta](const AdditiveJump&) { return theta; },
                 [x, theta](const ModulatedJump& j) { return theta * (1.0 + j.eps * std::cos(x)); }},
      m.jump);
}

// dc/dtheta
inline double eval_jump_dtheta(const ModelSpec& m, double x, double /*theta*/) {
  return std::visit(overloaded{[](const AdditiveJump&) { return 1.0; },
                               [x](const ModulatedJump& j) { return 1.0 + j.eps * std::cos(x); }},
                    m.jump);
}

// dc/dx
inline double eval_jump_dx(const ModelSpec& m, double x, double theta) {
  return std::visit(
      overloaded{[](const AdditiveJump&) { return 0.0; },
                 [x, theta](const ModulatedJump& j) { return -theta * j.eps * std::sin(x); }},
      m.jump);
}

struct HypothesisCheck {
  std::string name;  // e.g. "ellipticity", "jump-identifiability"
  bool passed = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  std::string to_string() const;
};

// Checks the regularity and identifiability conditions analytically, then
// confirms the bounds on a (t,x) grid over [0,1] x [-20,20] and across the
// admissible marks. Never throws; failures are reported as entries.
ValidationReport validate_model(const ModelSpec& model);

// Throws std::invalid_argument carrying the report if validation fails.
void require_valid(const ModelSpec& model);

// Support of the mark law. Unbounded laws report bounded == false.
struct MarkSupport {
  double lo;
  double hi;
  bool bounded;
};
MarkSupport mark_support(const MarkLaw& law);

}  // namespace jumpest

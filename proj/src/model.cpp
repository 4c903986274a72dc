#include "jumpest/model.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace jumpest {
namespace {

constexpr double kScanXMin = -20.0;
constexpr double kScanXMax = 20.0;
constexpr int kScanTPoints = 101;
constexpr int kScanXPoints = 401;
constexpr int kScanThetaPoints = 11;
constexpr double kScanSlack = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::vector<double> theta_grid(const MarkLaw& law) {
  std::vector<double> out;
  std::visit(overloaded{[&](const UniformMarks& u) {
                          for (int j = 0; j < kScanThetaPoints; ++j)
                            out.push_back(u.lo + (u.hi - u.lo) * j / (kScanThetaPoints - 1));
                        },
                        [&](const GaussianShiftedMarks& g) {
                          for (int j = 0; j < kScanThetaPoints; ++j) {
                            double v = g.mu + g.sd * (-4.0 + 8.0 * j / (kScanThetaPoints - 1));
                            if (std::abs(v) < g.floor) v = v < 0.0 ? -g.floor : g.floor;
                            out.push_back(v);
                          }
                        }},
             law);
  return out;
}

bool all_finite(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

MarkSupport mark_support(const MarkLaw& law) {
  return std::visit(
      overloaded{[](const UniformMarks& u) { return MarkSupport{u.lo, u.hi, true}; },
                 [](const GaussianShiftedMarks&) {
                   constexpr double inf = std::numeric_limits<double>::infinity();
                   return MarkSupport{-inf, inf, false};
                 }},
      law);
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
  return os.str();
}

ValidationReport validate_model(const ModelSpec& m) {
  ValidationReport report;
  const bool modulated = std::holds_alternative<ModulatedJump>(m.jump);
  const double eps = modulated ? std::get<ModulatedJump>(m.jump).eps : 0.0;
  const MarkSupport support = mark_support(m.marks);

  // Absolutely continuous jump-time law.
  {
    HypothesisCheck c{"jump-time-density", true, ""};
    if (const auto* p = std::get_if<PoissonArrivals>(&m.jump_times)) {
      if (!(std::isfinite(p->rho) && p->rho >= 0.0)) {
        c.passed = false;
        c.detail = "Poisson rate must be finite and >= 0, got " + fmt(p->rho);
      }
    }
    report.checks.push_back(c);
  }

  // Bounded smooth coefficients.
  {
    HypothesisCheck c{"bounded-coefficients", true, ""};
    const bool finite =
        std::visit([](const auto& d) {
          if constexpr (std::is_same_v<std::decay_t<decltype(d)>, ConstantDrift>)
            return all_finite({d.b0});
          else
            return all_finite({d.b0, d.b1});
        }, m.drift) &&
        std::visit([](const auto& d) {
          if constexpr (std::is_same_v<std::decay_t<decltype(d)>, ConstantDiffusion>)
            return all_finite({d.sigma});
          else
            return all_finite({d.sigma0, d.sigma1});
        }, m.diffusion) &&
        all_finite({m.x0, m.a_lower, m.a_upper, eps});
    if (!finite) {
      c.passed = false;
      c.detail = "non-finite parameter";
    } else if (modulated && !(eps >= 0.0 && eps < 1.0)) {
      c.passed = false;
      c.detail = "modulated jump requires 0 <= eps < 1, got " + fmt(eps);
    } else if (modulated && !support.bounded) {
      c.passed = false;
      c.detail = "modulated jump requires a bounded mark law";
    } else if (const auto* s = std::get_if<SineDiffusion>(&m.diffusion); s && s->sigma1 < 0.0) {
      c.passed = false;
      c.detail = "sine diffusion requires sigma1 >= 0";
    }
    report.checks.push_back(c);
  }

  // Ellipticity: a in [a_lower, a_upper] and |1 + c'| >= a_lower.
  {
    HypothesisCheck c{"ellipticity", true, ""};
    auto fail = [&c](std::string why) {
      if (c.passed) c.detail = std::move(why);
      c.passed = false;
    };
    if (!(m.a_lower > 0.0 && m.a_lower <= m.a_upper)) {
      fail("need 0 < a_lower <= a_upper, got a_lower=" + fmt(m.a_lower) +
           " a_upper=" + fmt(m.a_upper));
    }
    std::visit(overloaded{[&](const ConstantDiffusion& d) {
                            if (d.sigma < m.a_lower || d.sigma > m.a_upper)
                              fail("sigma=" + fmt(d.sigma) + " outside [a_lower, a_upper]");
                          },
                          [&](const SineDiffusion& d) {
                            if (d.sigma0 - d.sigma1 < m.a_lower)
                              fail("sigma0 - sigma1 = " + fmt(d.sigma0 - d.sigma1) +
                                   " < a_lower; a(t,x) can drop below the bound");
                            if (d.sigma0 + d.sigma1 > m.a_upper)
                              fail("sigma0 + sigma1 = " + fmt(d.sigma0 + d.sigma1) +
                                   " > a_upper");
                          }},
               m.diffusion);
    if (modulated && support.bounded) {
      const double max_theta = std::max(std::abs(support.lo), std::abs(support.hi));
      if (max_theta * eps > 1.0 - m.a_lower)
        fail("|theta * eps| reaches " + fmt(max_theta * eps) + " > 1 - a_lower = " +
             fmt(1.0 - m.a_lower));
    }
    if (!modulated && m.a_lower > 1.0) fail("additive jumps have |1 + c'| = 1 < a_lower");

    if (c.passed) {
      std::size_t points = 0;
      for (int it = 0; it < kScanTPoints && c.passed; ++it) {
        const double t = static_cast<double>(it) / (kScanTPoints - 1);
        for (int ix = 0; ix < kScanXPoints; ++ix) {
          const double x = kScanXMin + (kScanXMax - kScanXMin) * ix / (kScanXPoints - 1);
          const double a = eval_diffusion(m, t, x);
          ++points;
          if (a < m.a_lower - kScanSlack || a > m.a_upper + kScanSlack) {
            fail("grid scan: a(" + fmt(t) + "," + fmt(x) + ")=" + fmt(a) + " out of bounds");
            break;
          }
        }
      }
      for (double theta : theta_grid(m.marks)) {
        for (int ix = 0; ix < kScanXPoints && c.passed; ++ix) {
          const double x = kScanXMin + (kScanXMax - kScanXMin) * ix / (kScanXPoints - 1);
          if (std::abs(1.0 + eval_jump_dx(m, x, theta)) < m.a_lower - kScanSlack)
            fail("grid scan: |1 + c'(" + fmt(x) + "," + fmt(theta) + ")| < a_lower");
        }
      }
      if (c.passed) c.detail = "grid scan of " + std::to_string(points) + " (t,x) points ok";
    }
    report.checks.push_back(c);
  }

  // Absolutely continuous marks and dc/dtheta != 0.
  {
    HypothesisCheck c{"mark-density", true, ""};
    std::visit(overloaded{[&](const UniformMarks& u) {
                            if (!(u.lo < u.hi)) {
                              c.passed = false;
                              c.detail = "uniform marks need m_lo < m_hi";
                            }
                          },
                          [&](const GaussianShiftedMarks& g) {
                            if (!(g.sd > 0.0)) {
                              c.passed = false;
                              c.detail = "gaussian marks need sd > 0";
                            }
                          }},
               m.marks);
    if (c.passed && modulated && eps >= 1.0) {
      c.passed = false;
      c.detail = "dc/dtheta = 1 + eps cos(x) vanishes for eps >= 1";
    }
    if (c.passed) {
      for (double theta : theta_grid(m.marks)) {
        for (int ix = 0; ix < kScanXPoints; ++ix) {
          const double x = kScanXMin + (kScanXMax - kScanXMin) * ix / (kScanXPoints - 1);
          if (eval_jump_dtheta(m, x, theta) == 0.0) {
            c.passed = false;
            c.detail = "grid scan: dc/dtheta = 0 at x=" + fmt(x);
          }
        }
      }
    }
    report.checks.push_back(c);
  }

  // The registry only holds continuous coefficient families.
  report.checks.push_back({"continuity", true, ""});

  // c(X_{T-}, Lambda) != 0.
  {
    HypothesisCheck c{"jump-identifiability", true, ""};
    std::visit(overloaded{[&](const UniformMarks& u) {
                            if (u.lo <= 0.0 && u.hi >= 0.0) {
                              c.passed = false;
                              c.detail = "mark interval [" + fmt(u.lo) + "," + fmt(u.hi) +
                                         "] contains 0, so a jump can vanish";
                            }
                          },
                          [&](const GaussianShiftedMarks& g) {
                            if (!(g.floor > 0.0)) {
                              c.passed = false;
                              c.detail = "gaussian marks need floor > 0";
                            }
                          }},
               m.marks);
    report.checks.push_back(c);
  }

  return report;
}

void require_valid(const ModelSpec& model) {
  const auto report = validate_model(model);
  if (!report.ok()) throw std::invalid_argument("model validation failed:\n" + report.to_string());
}

}  // namespace jumpest

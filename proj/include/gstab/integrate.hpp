#pragma once

#include "gstab/stationary.hpp"
#include "gstab/system.hpp"
#include "gstab/trajectory.hpp"

#include <functional>
#include <optional>

namespace gstab {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.5;
    double horizon = 100.0;
    double event_tol = 1e-10;
    double divergence_radius = 1e6;
};

/// Stop criterion "the trajectory has settled on the stationary set":
/// distance below dist_tol and active field norm below field_tol, both
/// sustained over a trailing window.
struct ConvergenceTarget {
    StationarySet set;
    double dist_tol = 1e-6;
    double field_tol = 1e-8;
    double window = 1.0;
};

/// Scalar watch function whose directional zero crossing stops the run
/// (Poincare-section support). Armed only after |g| first exceeds arm_tol.
struct SectionWatch {
    std::function<double(const Vec&)> g;
    int direction = +1;  // +1: stop on g rising through 0; -1: falling
    double arm_tol = 1e-8;
};

struct SectionHit {
    double time = 0.0;
    Vec state;
};

struct IntegrateOptions {
    std::optional<ConvergenceTarget> convergence;
    std::optional<SectionWatch> section;
};

struct IntegrationResult {
    Trajectory trajectory;
    std::optional<SectionHit> section_hit;
};

enum class SurfaceMode { cross_up, cross_down, sliding };

const char* to_string(SurfaceMode m);

/// Filippov mode at an on-surface point, from the surface-normal
/// components a = grad_s . f+ and b = grad_s . f-:
/// sliding iff a < 0 < b, otherwise crossing in the shared sign direction.
/// Throws DegenerateTangency when a or b vanishes within tolerance, or
/// when the gap is repelling (b < 0 < a).
SurfaceMode detect_mode(const SwitchingSurface& surface, const Vec& x);

/// Tangent Filippov field alpha*f+ + (1-alpha)*f- with
/// alpha = (grad_s . f-) / (grad_s . (f- - f+)).
Vec slide_field(const SwitchingSurface& surface, const Vec& x);

struct LieDerivative {
    double value = 0.0;
    FieldMode mode = FieldMode::smooth;
    /// Set when x lies on the surface in a crossing (non-sliding) mode;
    /// the value then uses the post-crossing branch.
    bool crossing_branch = false;
};

/// grad_V(x) . f(x) with f the active (branch, smooth, or sliding) field.
LieDerivative lie_derivative(const PiecewiseSmoothSystem& system,
                             const std::function<void(const Vec&, Vec&)>& grad_V,
                             const Vec& x,
                             double event_tol = 1e-10);

/// Adaptive Dormand-Prince 5(4) integration with surface-event
/// localization and Filippov sliding. Deterministic for fixed inputs.
IntegrationResult integrate(const PiecewiseSmoothSystem& system, const Vec& x0,
                            const IntegratorConfig& cfg,
                            const IntegrateOptions& opts);

Trajectory integrate(const PiecewiseSmoothSystem& system, const Vec& x0,
                     const IntegratorConfig& cfg);

}  // namespace gstab

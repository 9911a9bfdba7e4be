#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gstab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when the Filippov mode at a surface point cannot be decided
/// (a branch field is tangent to the surface, or the gap geometry is
/// repelling). Callers recover by perturbing the state.
class DegenerateTangency : public std::runtime_error {
public:
    explicit DegenerateTangency(const std::string& what)
        : std::runtime_error(what) {}
};

/// Smooth vector field x' = f(x) with an optional analytic Jacobian.
class SmoothField {
public:
    using EvalFn = std::function<void(const Vec&, Vec&)>;
    using JacFn = std::function<void(const Vec&, Mat&)>;

    SmoothField() = default;
    SmoothField(int dim, EvalFn eval, JacFn jac = nullptr)
        : dim_(dim), eval_(std::move(eval)), jac_(std::move(jac)) {}

    int dim() const { return dim_; }
    bool valid() const { return static_cast<bool>(eval_); }
    bool has_jacobian() const { return static_cast<bool>(jac_); }

    void evaluate_into(const Vec& x, Vec& out) const { eval_(x, out); }

    Vec operator()(const Vec& x) const {
        Vec out(dim_);
        eval_(x, out);
        return out;
    }

    void jacobian_into(const Vec& x, Mat& out) const { jac_(x, out); }

private:
    int dim_ = 0;
    EvalFn eval_;
    JacFn jac_;
};

/// Interval-valued term active on the switching surface: the inclusion
/// contributes base(x) + direction * [lo, hi] at s(x) = 0.
struct SetValuedGap {
    Vec direction;
    double lo = 0.0;
    double hi = 0.0;
    /// Drift part of the field on the surface, excluding the gap term.
    std::function<void(const Vec&, Vec&)> base;

    /// True if 0 is contained in base(x) + direction * [lo, hi].
    bool contains_zero(const Vec& x, double tol = 1e-9) const;
};

/// Codimension-one discontinuity surface s(x) = 0 with the branch fields
/// valid on either side.
struct SwitchingSurface {
    std::function<double(const Vec&)> s;
    std::function<void(const Vec&, Vec&)> grad_s;
    SmoothField branch_plus;   // valid for s > 0
    SmoothField branch_minus;  // valid for s < 0
    std::optional<SetValuedGap> setvalued_gap;

    double value(const Vec& x) const { return s(x); }
    Vec gradient(const Vec& x) const {
        Vec g(branch_plus.dim());
        grad_s(x, g);
        return g;
    }
};

/// A vector field that is either globally smooth or split by one
/// switching surface into two smooth branches.
class PiecewiseSmoothSystem {
public:
    PiecewiseSmoothSystem() = default;

    static PiecewiseSmoothSystem smooth(SmoothField field,
                                        std::vector<int> periodic_coords = {});
    static PiecewiseSmoothSystem switched(int dim, SwitchingSurface surface,
                                          std::vector<int> periodic_coords = {});

    int dim() const { return dim_; }
    bool has_surface() const { return !surfaces_.empty(); }
    const SwitchingSurface& surface() const { return surfaces_.front(); }
    const SmoothField& smooth_part() const { return *smooth_; }
    bool is_smooth() const { return smooth_.has_value(); }
    const std::vector<int>& periodic_coordinates() const { return periodic_coords_; }

    /// Field away from the surface; `region` (+1/-1) selects the branch
    /// when the state sits inside the surface tolerance band.
    void field_into(const Vec& x, Vec& out, int region = 0) const;
    Vec field(const Vec& x, int region = 0) const {
        Vec out(dim_);
        field_into(x, out, region);
        return out;
    }

    /// Time-reversed copy: all fields negated, surface geometry unchanged.
    PiecewiseSmoothSystem reversed() const;

private:
    int dim_ = 0;
    std::optional<SmoothField> smooth_;
    std::vector<SwitchingSurface> surfaces_;
    std::vector<int> periodic_coords_;
};

}  // namespace gstab

#include "gstab/system.hpp"

namespace gstab {

bool SetValuedGap::contains_zero(const Vec& x, double tol) const {
    Vec drift(direction.size());
    base(x, drift);
    // Least-squares gap value v* = argmin |drift + direction*v|, clamped
    // to [lo, hi]; zero is attainable iff the clamped residual vanishes.
    const double dd = direction.squaredNorm();
    if (dd == 0.0) return drift.norm() <= tol;
    double v = -direction.dot(drift) / dd;
    if (v < lo) v = lo;
    if (v > hi) v = hi;
    return (drift + direction * v).norm() <= tol;
}

PiecewiseSmoothSystem PiecewiseSmoothSystem::smooth(SmoothField field,
                                                    std::vector<int> periodic_coords) {
    PiecewiseSmoothSystem sys;
    sys.dim_ = field.dim();
    sys.smooth_ = std::move(field);
    sys.periodic_coords_ = std::move(periodic_coords);
    return sys;
}

PiecewiseSmoothSystem PiecewiseSmoothSystem::switched(int dim, SwitchingSurface surface,
                                                      std::vector<int> periodic_coords) {
    PiecewiseSmoothSystem sys;
    sys.dim_ = dim;
    sys.surfaces_.push_back(std::move(surface));
    sys.periodic_coords_ = std::move(periodic_coords);
    return sys;
}

void PiecewiseSmoothSystem::field_into(const Vec& x, Vec& out, int region) const {
    if (smooth_) {
        smooth_->evaluate_into(x, out);
        return;
    }
    const SwitchingSurface& sf = surfaces_.front();
    int side = region;
    if (side == 0) side = sf.value(x) >= 0.0 ? +1 : -1;
    if (side > 0) {
        sf.branch_plus.evaluate_into(x, out);
    } else {
        sf.branch_minus.evaluate_into(x, out);
    }
}

PiecewiseSmoothSystem PiecewiseSmoothSystem::reversed() const {
    auto negate = [](const SmoothField& f) {
        if (!f.valid()) return f;
        const int n = f.dim();
        return SmoothField(n, [f](const Vec& x, Vec& out) {
            f.evaluate_into(x, out);
            out = -out;
        });
    };
    PiecewiseSmoothSystem sys;
    sys.dim_ = dim_;
    sys.periodic_coords_ = periodic_coords_;
    if (smooth_) {
        sys.smooth_ = negate(*smooth_);
        return sys;
    }
    SwitchingSurface sf = surfaces_.front();
    sf.branch_plus = negate(surfaces_.front().branch_plus);
    sf.branch_minus = negate(surfaces_.front().branch_minus);
    if (sf.setvalued_gap) {
        auto base = sf.setvalued_gap->base;
        sf.setvalued_gap->base = [base](const Vec& x, Vec& out) {
            base(x, out);
            out = -out;
        };
        sf.setvalued_gap->direction = -sf.setvalued_gap->direction;
    }
    sys.surfaces_.push_back(std::move(sf));
    return sys;
}

}  // namespace gstab

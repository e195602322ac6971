#include "mrsim/modspec.hpp"

#include <cmath>

#include "mrsim/limiting.hpp"

namespace mrsim {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) {
        throw ModelError(what);
    }
}

void check_finite_vec(const Vec& v, Eigen::Index n, const std::string& model, const char* tag) {
    require(v.size() == n, model + ": " + tag + " has wrong size");
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw ModelError(model + ": non-finite " + tag + "[" + std::to_string(i) + "]");
        }
    }
}

void check_finite_mat(const Mat& m, Eigen::Index rows, Eigen::Index cols, const std::string& model,
                      const char* tag) {
    require(m.rows() == rows && m.cols() == cols, model + ": " + std::string(tag) + " has wrong shape");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j))) {
                throw ModelError(model + ": non-finite " + tag + "(" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
            }
        }
    }
}

}  // namespace

double ModelDescriptor::param(const std::string& name) const {
    for (const auto& [key, value] : params) {
        if (key == name) {
            return value;
        }
    }
    throw std::invalid_argument(model + ": unknown parameter '" + name + "'");
}

Vec limited_expressions(const ModelDescriptor& d, const Vec& x, const Vec& y) {
    Vec e(static_cast<Eigen::Index>(d.limited.size()));
    for (size_t i = 0; i < d.limited.size(); ++i) {
        e[static_cast<Eigen::Index>(i)] = d.limited[i].expression(x, y);
    }
    return e;
}

Vec limit_step(const ModelDescriptor& d, const Vec& proposed, const Vec& old_vals) {
    require(proposed.size() == static_cast<Eigen::Index>(d.limited.size()) &&
                old_vals.size() == proposed.size(),
            d.model + ": limit_step size mismatch");
    Vec out(proposed.size());
    for (size_t i = 0; i < d.limited.size(); ++i) {
        const auto& spec = d.limited[i];
        const auto idx = static_cast<Eigen::Index>(i);
        switch (spec.limiter) {
            case LimitedVarSpec::Limiter::pnjlim:
                out[idx] = pnjlim(proposed[idx], old_vals[idx], spec.vt, spec.xcrit);
                break;
            case LimitedVarSpec::Limiter::sinhlim:
                out[idx] = sinhlim(proposed[idx], old_vals[idx], spec.k);
                break;
            case LimitedVarSpec::Limiter::none:
                out[idx] = proposed[idx];
                break;
        }
    }
    return out;
}

EvalResult evaluate(const ModelDescriptor& d, const Vec& x, const Vec& y, const Vec& u,
                    const Vec* lim_vals) {
    const auto nx = static_cast<Eigen::Index>(d.x_names.size());
    const auto ny = static_cast<Eigen::Index>(d.y_names.size());
    const auto nz = static_cast<Eigen::Index>(d.z_names.size());
    const auto nu = static_cast<Eigen::Index>(d.u_names.size());
    const auto nl = static_cast<Eigen::Index>(d.limited.size());

    require(x.size() == nx, d.model + ": x has wrong size");
    require(y.size() == ny, d.model + ": y has wrong size");
    require(u.size() == nu, d.model + ": u has wrong size");

    Vec lims;
    if (lim_vals != nullptr) {
        require(lim_vals->size() == nl, d.model + ": lim_vals has wrong size");
        lims = *lim_vals;
    } else {
        lims = limited_expressions(d, x, y);
    }

    EvalResult r = d.eval_fn(x, y, u, lims);

    check_finite_vec(r.fe, nz, d.model, "fe");
    check_finite_vec(r.qe, nz, d.model, "qe");
    check_finite_vec(r.fi, ny, d.model, "fi");
    check_finite_vec(r.qi, ny, d.model, "qi");
    check_finite_mat(r.dfe_dx, nz, nx, d.model, "dfe_dx");
    check_finite_mat(r.dfe_dy, nz, ny, d.model, "dfe_dy");
    check_finite_mat(r.dqe_dx, nz, nx, d.model, "dqe_dx");
    check_finite_mat(r.dqe_dy, nz, ny, d.model, "dqe_dy");
    check_finite_mat(r.dfi_dx, ny, nx, d.model, "dfi_dx");
    check_finite_mat(r.dfi_dy, ny, ny, d.model, "dfi_dy");
    check_finite_mat(r.dqi_dx, ny, nx, d.model, "dqi_dx");
    check_finite_mat(r.dqi_dy, ny, ny, d.model, "dqi_dy");
    check_finite_mat(r.dfe_dlim, nz, nl, d.model, "dfe_dlim");
    check_finite_mat(r.dfi_dlim, ny, nl, d.model, "dfi_dlim");
    return r;
}

double check_jacobians(const ModelDescriptor& d, const Vec& x, const Vec& y, const Vec& u) {
    const EvalResult base = evaluate(d, x, y, u);

    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a) + std::abs(b)); };

    double worst = 0.0;
    auto probe = [&](bool wiggle_x, Eigen::Index j) {
        Vec xp = x, xm = x, yp = y, ym = y;
        double base_val = wiggle_x ? x[j] : y[j];
        const double h = 1e-7 * std::max(1.0, std::abs(base_val));
        (wiggle_x ? xp[j] : yp[j]) += h;
        (wiggle_x ? xm[j] : ym[j]) -= h;
        const EvalResult p = evaluate(d, xp, yp, u);
        const EvalResult m = evaluate(d, xm, ym, u);
        const double inv2h = 1.0 / (2.0 * h);
        for (Eigen::Index i = 0; i < base.fe.size(); ++i) {
            const double fd_f = (p.fe[i] - m.fe[i]) * inv2h;
            const double fd_q = (p.qe[i] - m.qe[i]) * inv2h;
            worst = std::max(worst, rel(wiggle_x ? base.dfe_dx(i, j) : base.dfe_dy(i, j), fd_f));
            worst = std::max(worst, rel(wiggle_x ? base.dqe_dx(i, j) : base.dqe_dy(i, j), fd_q));
        }
        for (Eigen::Index i = 0; i < base.fi.size(); ++i) {
            const double fd_f = (p.fi[i] - m.fi[i]) * inv2h;
            const double fd_q = (p.qi[i] - m.qi[i]) * inv2h;
            worst = std::max(worst, rel(wiggle_x ? base.dfi_dx(i, j) : base.dfi_dy(i, j), fd_f));
            worst = std::max(worst, rel(wiggle_x ? base.dqi_dx(i, j) : base.dqi_dy(i, j), fd_q));
        }
    };

    for (Eigen::Index j = 0; j < x.size(); ++j) {
        probe(true, j);
    }
    for (Eigen::Index j = 0; j < y.size(); ++j) {
        probe(false, j);
    }
    return worst;
}

}  // namespace mrsim

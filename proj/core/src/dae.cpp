#include "mrsim/dae.hpp"

#include <numeric>

#include "mrsim/devices.hpp"
#include "mrsim/limiting.hpp"

namespace mrsim {

namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }

    void unite(int a, int b) { parent[find(a)] = find(b); }
};

bool is_waveform_param(const std::string& key) {
    return key == "dc" || key == "ampl" || key == "freq" || key == "phase";
}

}  // namespace

DaeSystem DaeSystem::assemble(const Circuit& circuit, const Tolerances& tol) {
    DaeSystem dae;
    dae.tol_ = tol;

    std::vector<std::string> node_order;
    std::map<std::string, int> node_id;
    auto node_slot = [&](const std::string& node) -> int {
        if (node == "0") {
            return -1;
        }
        const auto it = node_id.find(node);
        if (it != node_id.end()) {
            return it->second;
        }
        const int id = static_cast<int>(node_order.size());
        node_id.emplace(node, id);
        node_order.push_back(node);
        return id;
    };

    for (const Instance& inst : circuit.instances) {
        if (dae.name_to_instance_.count(inst.name) != 0) {
            throw ModelError("duplicate instance '" + inst.name + "'");
        }
        dae.name_to_instance_[inst.name] = static_cast<int>(dae.instances_.size());

        CompiledInstance ci;
        ci.name = inst.name;
        ci.kind = inst.kind;
        ci.is_source = inst.is_source();
        ci.is_vsource = inst.kind == "vsource";
        ci.waveform = inst.waveform;
        if (ci.is_source) {
            std::map<std::string, double> model_params;
            for (const auto& [key, value] : inst.params) {
                if (key == "dc") {
                    ci.waveform.dc = value;
                } else if (is_waveform_param(key)) {
                    ci.waveform.has_sine = true;
                    if (key == "ampl") {
                        ci.waveform.ampl = value;
                    } else if (key == "freq") {
                        ci.waveform.freq = value;
                    } else {
                        ci.waveform.phase = value;
                    }
                } else {
                    model_params.emplace(key, value);
                }
            }
            ci.model = build_device(inst.kind, model_params);
        } else {
            ci.model = build_device(inst.kind, inst.params);
        }
        if (ci.model.x_names.size() != 1 || ci.model.z_names.size() != 1) {
            throw ModelError(inst.name + ": engine supports two-terminal devices only");
        }
        ci.node_p = node_slot(inst.node_p);
        ci.node_n = node_slot(inst.node_n);
        dae.instances_.push_back(std::move(ci));
    }

    for (const std::string& node : node_order) {
        dae.names_.push_back("v(" + node + ")");
        dae.kinds_.push_back(UnknownKind::voltage);
    }

    auto allocate_y = [&](CompiledInstance& ci) {
        const UnknownKind kind = (ci.is_vsource || ci.kind == "inductor") ? UnknownKind::current
                                                                          : UnknownKind::internal;
        for (const std::string& yname : ci.model.y_names) {
            ci.y_index.push_back(static_cast<int>(dae.names_.size()));
            dae.names_.push_back(yname + "(" + ci.name + ")");
            dae.kinds_.push_back(kind);
        }
    };
    for (CompiledInstance& ci : dae.instances_) {
        if (ci.is_vsource) {
            allocate_y(ci);
        }
    }
    for (CompiledInstance& ci : dae.instances_) {
        if (!ci.is_vsource) {
            allocate_y(ci);
        }
    }

    for (int i = 0; i < static_cast<int>(dae.names_.size()); ++i) {
        dae.name_to_unknown_[dae.names_[i]] = i;
    }

    for (size_t ii = 0; ii < dae.instances_.size(); ++ii) {
        CompiledInstance& ci = dae.instances_[ii];
        for (size_t l = 0; l < ci.model.limited.size(); ++l) {
            const LimitedVarSpec& spec = ci.model.limited[l];
            GlobalLimitedVar gv;
            gv.instance = static_cast<int>(ii);
            gv.local = static_cast<int>(l);
            if (spec.x_coeff.size() > 0 && spec.x_coeff[0] != 0.0) {
                if (ci.node_p >= 0) {
                    gv.expr.emplace_back(ci.node_p, spec.x_coeff[0]);
                }
                if (ci.node_n >= 0) {
                    gv.expr.emplace_back(ci.node_n, -spec.x_coeff[0]);
                }
            }
            for (int j = 0; j < spec.y_coeff.size(); ++j) {
                if (spec.y_coeff[j] != 0.0) {
                    gv.expr.emplace_back(ci.y_index[j], spec.y_coeff[j]);
                }
            }
            ci.lim_index.push_back(static_cast<int>(dae.limited_.size()));
            dae.limited_.push_back(std::move(gv));
        }
    }

    const int ground_slot = static_cast<int>(node_order.size());
    UnionFind uf(ground_slot + 1);
    for (const CompiledInstance& ci : dae.instances_) {
        const int a = ci.node_p >= 0 ? ci.node_p : ground_slot;
        const int b = ci.node_n >= 0 ? ci.node_n : ground_slot;
        uf.unite(a, b);
    }
    for (size_t i = 0; i < node_order.size(); ++i) {
        if (uf.find(static_cast<int>(i)) != uf.find(ground_slot)) {
            throw ModelError("floating node '" + node_order[i] +
                             "' (no conductive path to ground)");
        }
    }

    return dae;
}

double DaeSystem::abstol(int i) const {
    return kinds_[i] == UnknownKind::current ? tol_.abstol_i : tol_.abstol_v;
}

int DaeSystem::instance_index(const std::string& lowercase_name) const {
    const auto it = name_to_instance_.find(lowercase_name);
    return it == name_to_instance_.end() ? -1 : it->second;
}

int DaeSystem::unknown_index(const std::string& lowercase_name) const {
    const auto it = name_to_unknown_.find(lowercase_name);
    return it == name_to_unknown_.end() ? -1 : it->second;
}

Vec DaeSystem::limited_exprs(const Vec& x) const {
    Vec out = Vec::Zero(num_limited());
    for (int i = 0; i < num_limited(); ++i) {
        for (const auto& [idx, coeff] : limited_[i].expr) {
            out[i] += coeff * x[idx];
        }
    }
    return out;
}

Vec DaeSystem::limit_step(const Vec& proposed, const Vec& old_vals) const {
    Vec out(num_limited());
    for (int i = 0; i < num_limited(); ++i) {
        const GlobalLimitedVar& gv = limited_[i];
        const LimitedVarSpec& spec = instances_[gv.instance].model.limited[gv.local];
        switch (spec.limiter) {
            case LimitedVarSpec::Limiter::pnjlim:
                out[i] = pnjlim(proposed[i], old_vals[i], spec.vt, spec.xcrit);
                break;
            case LimitedVarSpec::Limiter::sinhlim:
                out[i] = sinhlim(proposed[i], old_vals[i], spec.k);
                break;
            case LimitedVarSpec::Limiter::none:
                out[i] = proposed[i];
                break;
        }
    }
    return out;
}

double DaeSystem::source_value(int instance, const EvalContext& ctx) const {
    if (ctx.source_overrides != nullptr) {
        const auto it = ctx.source_overrides->find(instance);
        if (it != ctx.source_overrides->end()) {
            return it->second;
        }
    }
    const SourceWaveform& w = instances_[instance].waveform;
    return ctx.dc ? w.dc_value() : w.value(ctx.t);
}

Vec DaeSystem::source_unit_vector(int instance) const {
    const CompiledInstance& ci = instances_[instance];
    Vec b = Vec::Zero(size());
    if (ci.is_vsource) {
        b[ci.y_index[0]] = 1.0;
    } else {
        if (ci.node_p >= 0) {
            b[ci.node_p] = -1.0;
        }
        if (ci.node_n >= 0) {
            b[ci.node_n] = 1.0;
        }
    }
    return b;
}

EvalPoint DaeSystem::eval(const Vec& x, const EvalContext& ctx, const Vec* lim_vals) const {
    const int n = size();
    EvalPoint out;
    out.f = Vec::Zero(n);
    out.q = Vec::Zero(n);
    out.G.reserve(static_cast<size_t>(8 * instances_.size()));
    out.C.reserve(static_cast<size_t>(4 * instances_.size()));
    if (lim_vals != nullptr) {
        out.df_dlim = Mat::Zero(n, num_limited());
    }

    Vec xloc(1);
    for (size_t ii = 0; ii < instances_.size(); ++ii) {
        const CompiledInstance& inst = instances_[ii];
        const int p = inst.node_p;
        const int m = inst.node_n;
        const double vp = p >= 0 ? x[p] : 0.0;
        const double vn = m >= 0 ? x[m] : 0.0;
        xloc[0] = vp - vn;

        const int ny = static_cast<int>(inst.y_index.size());
        Vec yloc(ny);
        for (int j = 0; j < ny; ++j) {
            yloc[j] = x[inst.y_index[j]];
        }
        Vec uloc(inst.model.u_names.size());
        if (inst.is_source) {
            uloc[0] = source_value(static_cast<int>(ii), ctx);
        }

        Vec lim_loc;
        const Vec* lim_ptr = nullptr;
        const int nl = static_cast<int>(inst.lim_index.size());
        if (lim_vals != nullptr && nl > 0) {
            lim_loc.resize(nl);
            for (int l = 0; l < nl; ++l) {
                lim_loc[l] = (*lim_vals)[inst.lim_index[l]];
            }
            lim_ptr = &lim_loc;
        }

        EvalResult res;
        try {
            res = evaluate(inst.model, xloc, yloc, uloc, lim_ptr);
        } catch (const ModelError& e) {
            throw ModelError(inst.name + ": " + e.what());
        }

        auto stamp_terminal = [&](int row, double s) {
            out.f[row] += s * res.fe[0];
            out.q[row] += s * res.qe[0];
            if (p >= 0) {
                out.G.emplace_back(row, p, s * res.dfe_dx(0, 0));
                out.C.emplace_back(row, p, s * res.dqe_dx(0, 0));
            }
            if (m >= 0) {
                out.G.emplace_back(row, m, -s * res.dfe_dx(0, 0));
                out.C.emplace_back(row, m, -s * res.dqe_dx(0, 0));
            }
            for (int j = 0; j < ny; ++j) {
                out.G.emplace_back(row, inst.y_index[j], s * res.dfe_dy(0, j));
                out.C.emplace_back(row, inst.y_index[j], s * res.dqe_dy(0, j));
            }
            if (lim_vals != nullptr) {
                for (int l = 0; l < nl; ++l) {
                    out.df_dlim(row, inst.lim_index[l]) += s * res.dfe_dlim(0, l);
                }
            }
        };
        if (p >= 0) {
            stamp_terminal(p, 1.0);
        }
        if (m >= 0) {
            stamp_terminal(m, -1.0);
        }

        for (int j = 0; j < ny; ++j) {
            const int row = inst.y_index[j];
            out.f[row] += res.fi[j];
            out.q[row] += res.qi[j];
            if (p >= 0) {
                out.G.emplace_back(row, p, res.dfi_dx(j, 0));
                out.C.emplace_back(row, p, res.dqi_dx(j, 0));
            }
            if (m >= 0) {
                out.G.emplace_back(row, m, -res.dfi_dx(j, 0));
                out.C.emplace_back(row, m, -res.dqi_dx(j, 0));
            }
            for (int k = 0; k < ny; ++k) {
                out.G.emplace_back(row, inst.y_index[k], res.dfi_dy(j, k));
                out.C.emplace_back(row, inst.y_index[k], res.dqi_dy(j, k));
            }
            if (lim_vals != nullptr) {
                for (int l = 0; l < nl; ++l) {
                    out.df_dlim(row, inst.lim_index[l]) += res.dfi_dlim(j, l);
                }
            }
        }

        const double g = tol_.gmin;
        if (p >= 0) {
            out.f[p] += g * (vp - vn);
            out.G.emplace_back(p, p, g);
            if (m >= 0) {
                out.G.emplace_back(p, m, -g);
            }
        }
        if (m >= 0) {
            out.f[m] -= g * (vp - vn);
            out.G.emplace_back(m, m, g);
            if (p >= 0) {
                out.G.emplace_back(m, p, -g);
            }
        }
    }
    return out;
}

}  // namespace mrsim

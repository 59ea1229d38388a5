#include "oreg/simulation.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oreg {

namespace {

// Flat state layout: [w | x0 | chi | zeta | eta | gram (row-major) | cross | xi1 | xi2].
struct StateLayout {
    int nw, n0, nchi, ne, neta, ntheta;
    int off_w, off_x0, off_chi, off_zeta, off_eta, off_gram, off_cross, off_xi1, off_xi2;
    int total;

    StateLayout(const PlantModel& plant, const RegulatorConfig& reg) {
        nw = plant.nw;
        n0 = plant.structure.n0;
        nchi = plant.structure.nchi();
        ne = plant.structure.ne;
        neta = reg.im.d * reg.im.ne;
        ntheta = reg.id.ntheta;
        off_w = 0;
        off_x0 = off_w + nw;
        off_chi = off_x0 + n0;
        off_zeta = off_chi + nchi;
        off_eta = off_zeta + ne;
        off_gram = off_eta + neta;
        off_cross = off_gram + ntheta * ntheta;
        off_xi1 = off_cross + ntheta;
        off_xi2 = off_xi1 + ne;
        total = off_xi2 + ne;
    }

    PlantState unpack_plant(const Vec& y) const {
        return PlantState{y.segment(off_w, nw), y.segment(off_x0, n0), y.segment(off_chi, nchi),
                          y.segment(off_zeta, ne)};
    }
    RegulatorState unpack_regulator(const Vec& y) const {
        RegulatorState r;
        r.eta = y.segment(off_eta, neta);
        r.id.gram = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                    Eigen::RowMajor>>(
            y.data() + off_gram, ntheta, ntheta);
        r.id.cross = y.segment(off_cross, ntheta);
        r.id.xi1 = y.segment(off_xi1, ne);
        r.id.xi2 = y.segment(off_xi2, ne);
        return r;
    }
    void pack(const PlantState& p, const RegulatorState& r, Vec& y) const {
        y.segment(off_w, nw) = p.w;
        y.segment(off_x0, n0) = p.x0;
        y.segment(off_chi, nchi) = p.chi;
        y.segment(off_zeta, ne) = p.zeta;
        y.segment(off_eta, neta) = r.eta;
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            y.data() + off_gram, ntheta, ntheta) = r.id.gram;
        y.segment(off_cross, ntheta) = r.id.cross;
        y.segment(off_xi1, ne) = r.id.xi1;
        y.segment(off_xi2, ne) = r.id.xi2;
    }
};

Vec chain_error(const ChainStructure& s, const Vec& chi) {
    Vec e(s.ne);
    int off = 0;
    for (int i = 0; i < s.ne; ++i) {
        e[i] = chi[off];
        off += s.chain_lengths[i];
    }
    return e;
}

}  // namespace

double rate_estimate(const AssembledRegulator& reg) {
    const auto& cfg = reg.config;
    double max_c = 0.0;
    int max_len = 1;
    for (std::size_t i = 0; i < cfg.stab.c.size(); ++i) {
        max_len = std::max(max_len, static_cast<int>(cfg.stab.c[i].size()));
        for (double cj : cfg.stab.c[i]) max_c = std::max(max_c, std::abs(cj));
    }
    const double r_im = std::abs(cfg.im.bottom_gain());
    const double r_zeta = cfg.stab.ell * reg.omega_L_sup;
    const double r_obs = cfg.id.m2 * cfg.id.rho * cfg.id.rho;
    const double r_chi = std::pow(cfg.stab.kappa, max_len) * max_c;
    return std::max(std::max(r_im, r_zeta), std::max(r_obs, r_chi));
}

double default_step(const AssembledRegulator& reg) {
    const double rate = rate_estimate(reg);
    const double dt = std::min(1e-3, 0.1 / rate);
    if (dt < 1e-7)
        throw std::invalid_argument(
            "default_step: gain-driven rate demands dt < 1e-7; lower the gains or supply dt");
    return dt;
}

RunRecord simulate(const Scenario& scenario, const GainSet& gains, const SimOptions& opts) {
    if (!(opts.tfinal > 0.0)) throw std::invalid_argument("simulate: tfinal must be > 0");

    RegulatorTunables tun = opts.tunables;
    if (opts.theta_frozen.size() > 0) tun.lambda = 0.0;
    AssembledRegulator reg = assemble(scenario, gains, tun);
    const RegulatorConfig& cfg = reg.config;
    const ChainStructure& chain = cfg.chain;
    const StateLayout lay(scenario.plant, cfg);

    const double dt = (opts.dt_override > 0.0) ? opts.dt_override : default_step(reg);
    const long nsteps = static_cast<long>(std::ceil(opts.tfinal / dt - 1e-9));
    const int wanted = std::max(2, opts.max_records);
    const long stride = std::max<long>(1, (nsteps + wanted - 2) / (wanted - 1));

    // Initial conditions.
    PlantState p0;
    p0.w = scenario.w0;
    p0.x0 = Vec::Zero(chain.n0);
    p0.chi = Vec::Zero(chain.nchi());
    p0.zeta = Vec::Zero(chain.ne);
    p0.chi[0] += opts.chi1_offset;
    RegulatorState r0 = RegulatorState::zero(cfg);
    if (opts.gram_warm_start > 0.0)
        r0.id.gram = opts.gram_warm_start * Mat::Identity(lay.ntheta, lay.ntheta);
    if (opts.theta_frozen.size() > 0) {
        if (opts.theta_frozen.size() != lay.ntheta)
            throw std::invalid_argument("simulate: theta_frozen dimension mismatch");
        r0.id.cross = cfg.id.Gamma * opts.theta_frozen;
    }
    if (opts.exact_start) {
        r0.eta = reg.oracle.eta_star(0.0);
        r0.id.xi1 = r0.eta.tail(chain.ne);
        Vec theta0 = ls_output(cfg.id, r0.id.gram, r0.id.cross);
        r0.id.xi2 = cfg.model.value(r0.eta, theta0);
    }

    Vec y(lay.total);
    lay.pack(p0, r0, y);

    auto rhs = [&](double /*t*/, const Vec& state) {
        PlantState ps = lay.unpack_plant(state);
        RegulatorState rs = lay.unpack_regulator(state);
        Vec e = chain_error(chain, ps.chi);
        RegulatorDerivative rd = regulator_rhs(cfg, rs, e, ps.chi, ps.zeta, ps.w);
        PlantState pd = plant_rhs(scenario.plant, ps, rd.u);
        Vec dy(lay.total);
        RegulatorState rdot;
        rdot.eta = std::move(rd.eta_dot);
        rdot.id.gram = std::move(rd.gram_dot);
        rdot.id.cross = std::move(rd.cross_dot);
        rdot.id.xi1 = std::move(rd.xi1_dot);
        rdot.id.xi2 = std::move(rd.xi2_dot);
        lay.pack(pd, rdot, dy);
        return dy;
    };

    RunRecord rec;
    rec.s_star_bound = reg.s_star_bound;
    rec.dt = dt;
    rec.total_steps = nsteps;
    rec.tail_fraction = opts.tail_fraction;
    const long est_records = nsteps / stride + 2;
    rec.times.reserve(est_records);
    rec.e.resize(est_records, chain.ne);
    rec.u.resize(est_records, chain.nu);
    rec.theta.resize(est_records, lay.ntheta);
    rec.eps_star.resize(est_records, chain.ne);
    rec.eta.resize(est_records, lay.neta);

    auto record_at = [&](double t, const Vec& state) {
        PlantState ps = lay.unpack_plant(state);
        RegulatorState rs = lay.unpack_regulator(state);
        Vec e = chain_error(chain, ps.chi);
        RegulatorDerivative rd = regulator_rhs(cfg, rs, e, ps.chi, ps.zeta, ps.w);

        const int k = static_cast<int>(rec.times.size());
        rec.times.push_back(t);
        rec.e.row(k) = e.transpose();
        rec.norm_e.push_back(e.norm());
        rec.u.row(k) = rd.u.transpose();
        rec.theta.row(k) = rd.theta.transpose();
        rec.eps_star.row(k) = reg.oracle.epsilon_star(t, rd.theta).transpose();
        rec.eta.row(k) = rs.eta.transpose();
        rec.eq8_residual.push_back(rd.eq8_residual);

        Mat Om = scenario.plant.Omega(ps);
        Mat sym = cfg.stab.Lmat.transpose() * Om.transpose() + Om * cfg.stab.Lmat;
        rec.min_eig_omega_L.push_back(min_eigenvalue_probe(sym));

        const double snorm = rs.id.gram.norm() + rs.id.cross.norm();
        rec.sigma_norm.push_back(snorm);
        if (snorm > rec.s_star_bound) rec.s_star_exceeded = true;
        rec.sigma1_min_eig.push_back(min_eigenvalue_probe(rs.id.gram));
        rec.sigma1_sym_defect.push_back(rs.id.symmetry_defect());
    };

    record_at(0.0, y);
    long step = 0;
    bool diverged = false;
    double t = 0.0;
    while (step < nsteps) {
        try {
            y = rk4_step(rhs, y, t, dt);
        } catch (const IntegrationBlowup& blow) {
            diverged = true;
            rec.divergence_time = blow.t;
            break;
        }
        ++step;
        t = static_cast<double>(step) * dt;
        if (!y.allFinite()) {
            diverged = true;
            rec.divergence_time = t;
            break;
        }
        // Re-symmetrize the gram block after each step to stop drift.
        {
            Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
                gram(y.data() + lay.off_gram, lay.ntheta, lay.ntheta);
            Mat sym = 0.5 * (gram + gram.transpose());
            gram = sym;
        }
        if (step % stride == 0 || step == nsteps) record_at(t, y);
    }
    rec.diverged = diverged;
    rec.final_state = y;

    const int n = rec.records();
    rec.e.conservativeResize(n, Eigen::NoChange);
    rec.u.conservativeResize(n, Eigen::NoChange);
    rec.theta.conservativeResize(n, Eigen::NoChange);
    rec.eps_star.conservativeResize(n, Eigen::NoChange);
    rec.eta.conservativeResize(n, Eigen::NoChange);
    return rec;
}

namespace {

const Mat& series_matrix(const RunRecord& r, const std::string& name) {
    if (name == "e") return r.e;
    if (name == "u") return r.u;
    if (name == "theta") return r.theta;
    if (name == "eps_star") return r.eps_star;
    if (name == "eta") return r.eta;
    throw std::invalid_argument("unknown series name: " + name);
}

}  // namespace

double tail_sup(const RunRecord& record, const std::string& series, double fraction) {
    if (record.diverged) throw DivergedRun("tail_sup: run diverged; tail metric undefined");
    if (!(fraction > 0.0) || fraction > 1.0)
        throw std::invalid_argument("tail_sup: fraction must be in (0, 1]");
    if (record.records() == 0) throw std::invalid_argument("tail_sup: empty record");
    const Mat& m = series_matrix(record, series);
    const double t0 = record.times.front();
    const double t1 = record.times.back();
    const double cut = t1 - fraction * (t1 - t0);
    double sup = 0.0;
    for (int k = 0; k < record.records(); ++k)
        if (record.times[k] >= cut) sup = std::max(sup, m.row(k).norm());
    return sup;
}

RegulationRatio theorem1_ratio(const RunRecord& record, double fraction) {
    RegulationRatio out;
    out.tail_e = tail_sup(record, "e", fraction);
    out.tail_eps = tail_sup(record, "eps_star", fraction);
    if (out.tail_eps < 1e-7) {
        out.asymptotic = true;
        out.ratio = std::numeric_limits<double>::quiet_NaN();
    } else {
        out.ratio = out.tail_e / out.tail_eps;
    }
    return out;
}

std::string sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::g: return "g";
        case SweepParameter::kappa: return "kappa";
        case SweepParameter::ell: return "ell";
        case SweepParameter::rho: return "rho";
        case SweepParameter::lambda: return "lambda";
        case SweepParameter::gamma_scale: return "gamma_scale";
    }
    throw std::invalid_argument("sweep_parameter_name: bad enum");
}

SweepParameter sweep_parameter_from_name(const std::string& name) {
    for (SweepParameter p : {SweepParameter::g, SweepParameter::kappa, SweepParameter::ell,
                             SweepParameter::rho, SweepParameter::lambda,
                             SweepParameter::gamma_scale})
        if (sweep_parameter_name(p) == name) return p;
    throw std::invalid_argument("unknown sweep parameter: " + name);
}

SweepEntry summarize(const RunRecord& record, double value) {
    SweepEntry s;
    s.value = value;
    s.diverged = record.diverged;
    if (record.diverged) return s;
    s.tail_e = tail_sup(record, "e", record.tail_fraction);
    s.tail_eps = tail_sup(record, "eps_star", record.tail_fraction);
    s.ratio = theorem1_ratio(record, record.tail_fraction);

    const double t0 = record.times.front();
    const double t1 = record.times.back();
    const double cut = t1 - record.tail_fraction * (t1 - t0);
    Vec acc = Vec::Zero(record.theta.cols());
    long count = 0;
    for (int k = 0; k < record.records(); ++k) {
        if (record.times[k] < cut) continue;
        acc += record.theta.row(k).transpose();
        ++count;
    }
    s.theta_tail_mean = (count > 0) ? Vec(acc / static_cast<double>(count)) : acc;
    return s;
}

namespace {

// One sweep run with the parameter applied in schedule order.
RunRecord sweep_run(const Scenario& scenario, const GainSet& base, SweepParameter parameter,
                    double value, const SimOptions& opts) {
    GainSet gains = base;
    SimOptions run_opts = opts;
    switch (parameter) {
        case SweepParameter::g:
            gains = tuning_schedule(base, {1.0, value / base.g, 1.0, 1.0});
            break;
        case SweepParameter::kappa:
            gains = tuning_schedule(base, {1.0, 1.0, value / base.kappa, 1.0});
            break;
        case SweepParameter::ell:
            gains = tuning_schedule(base, {1.0, 1.0, 1.0, value / base.ell});
            break;
        case SweepParameter::rho:
            gains = tuning_schedule(base, {value / base.rho, 1.0, 1.0, 1.0});
            break;
        case SweepParameter::lambda:
            run_opts.tunables.lambda = value;
            break;
        case SweepParameter::gamma_scale:
            run_opts.tunables.gamma_scale = value;
            break;
    }
    return simulate(scenario, gains, run_opts);
}

}  // namespace

std::vector<RunRecord> sweep_records(const Scenario& scenario, const GainSet& base,
                                     SweepParameter parameter, const std::vector<double>& values,
                                     const SimOptions& opts, bool parallel) {
    for (double v : values)
        if (!(v > 0.0)) throw std::invalid_argument("sweep: values must be > 0");
    std::vector<RunRecord> out(values.size());
    const int n = static_cast<int>(values.size());
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < n; ++i)
            out[i] = sweep_run(scenario, base, parameter, values[i], opts);
    } else {
        for (int i = 0; i < n; ++i)
            out[i] = sweep_run(scenario, base, parameter, values[i], opts);
    }
    return out;
}

std::vector<SweepEntry> sweep(const Scenario& scenario, const GainSet& base,
                              SweepParameter parameter, const std::vector<double>& values,
                              const SimOptions& opts, bool parallel) {
    std::vector<RunRecord> records = sweep_records(scenario, base, parameter, values, opts,
                                                   parallel);
    std::vector<SweepEntry> out;
    out.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        out.push_back(summarize(records[i], values[i]));
    return out;
}

}  // namespace oreg

#include "oreg/scenarios.hpp"

#include "oreg/jet.hpp"

namespace oreg {

std::vector<double> binomial_ascending(int n) {
    std::vector<double> c(n);
    double v = 1.0;
    for (int k = 0; k < n; ++k) {  // C(n, k), coefficient of s^k
        c[k] = v;
        v = v * (n - k) / (k + 1);
    }
    return c;
}

std::vector<double> binomial_descending(int n) {
    std::vector<double> c = binomial_ascending(n);
    std::reverse(c.begin(), c.end());
    return c;
}

void VtolParams::validate() const {
    if (!(gravity > 0.0)) throw std::invalid_argument("VtolParams: gravity must be > 0");
    if (!(B > 0.0)) throw std::invalid_argument("VtolParams: B must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("VtolParams: mass must be > 0");
    if (!(wind_omega > 0.0)) throw std::invalid_argument("VtolParams: wind_omega must be > 0");
    if (!(L_scalar < 0.0)) throw std::invalid_argument("VtolParams: L_scalar must be < 0");
}

PlantModel vtol_plant(const VtolParams& params) {
    params.validate();
    const double rho_g = params.gravity;
    const double B = params.B;
    const double w0fr = params.wind_omega;

    PlantModel m;
    m.structure = ChainStructure{0, 1, 1, {3}};
    m.nw = 2;
    m.exo = [w0fr](const Vec& w) { return Vec{{w0fr * w[1], -w0fr * w[0]}}; };
    m.f0 = [](const PlantState&) { return Vec::Zero(0); };
    m.b = [](const PlantState&) { return Mat::Zero(0, 1); };
    // Omega = -rho*B / cos^2(p3) expressed through tan(p3) = (d - chi3)/rho.
    m.Omega = [rho_g, B](const PlantState& s) {
        const double slope = (s.w[0] - s.chi[2]) / rho_g;
        return Mat{{-rho_g * B * (1.0 + slope * slope)}};
    };
    m.q = [rho_g, w0fr](const PlantState& s) {
        const double dd = s.w[0] - s.chi[2];
        const double lsd_minus_zeta = w0fr * s.w[1] - s.zeta[0];
        const double qv = -w0fr * w0fr * s.w[0] -
                          2.0 * lsd_minus_zeta * lsd_minus_zeta * dd / (dd * dd + rho_g * rho_g);
        return Vec{{qv}};
    };
    return m;
}

Vec vtol_raw_rhs(const VtolParams& params, const Vec& p, const Vec& w, double u, double v) {
    if (std::abs(p[2]) >= M_PI / 2.0) throw SingularAttitude(p[2]);
    Vec dp(4);
    dp[0] = p[1];
    dp[1] = w[0] - params.gravity * std::tan(p[2]) + v;
    dp[2] = p[3];
    dp[3] = params.B * u;
    return dp;
}

std::pair<Vec, Vec> vtol_transform(const VtolParams& params, const Vec& p, const Vec& w) {
    if (std::abs(p[2]) >= M_PI / 2.0) throw SingularAttitude(p[2]);
    const double c = std::cos(p[2]);
    Vec chi{{p[0], p[1], -params.gravity * std::tan(p[2]) + w[0]}};
    Vec zeta{{params.wind_omega * w[1] - params.gravity * p[3] / (c * c)}};
    return {std::move(chi), std::move(zeta)};
}

double vtol_control_law(const VtolParams& params, const Vec& p, double eta1, double kappa,
                        double ell, const std::vector<double>& c) {
    if (std::abs(p[2]) >= M_PI / 2.0) throw SingularAttitude(p[2]);
    const double rho_g = params.gravity;
    const double cth = std::cos(p[2]);
    const double k3 = kappa * kappa * kappa;
    return -params.L_scalar *
           (c[0] * ell * k3 * (p[0] + eta1) + c[1] * ell * kappa * kappa * p[1] +
            c[2] * ell * kappa * (-rho_g * std::tan(p[2])) +
            ell * (-rho_g * p[3] / (cth * cth)));
}

namespace {

// Jet of the sustaining input u*(t): the wind-aligned roll rate is
// p4* = rho * d_dot / (d^2 + rho^2) and u* = p4*_dot / B.
Jet vtol_u_star_jet(const VtolParams& params, double t, int order) {
    const double A = params.disturbance_amplitude();
    Jet d = Jet::harmonic(A, params.wind_omega, params.wind_phase, t, order + 2);
    Jet d_dot = d.shifted();                 // order + 1
    Jet dt = d.truncated(order + 1);
    Jet denom = dt * dt + Jet::constant(params.gravity * params.gravity, order + 1);
    Jet p4_star = params.gravity * (d_dot / denom);
    return (1.0 / params.B) * p4_star.shifted();  // order
}

Vec harmonic_w(double A, double omega, double phase, double t) {
    return Vec{{A * std::sin(omega * t + phase), A * std::cos(omega * t + phase)}};
}

}  // namespace

SteadyStateOracle vtol_steady_state(const VtolParams& params, double kappa, double ell, int d,
                                    const std::vector<double>& c, const PredictionModel& model) {
    params.validate();
    if (c.size() != 3) throw std::invalid_argument("vtol_steady_state: need 3 chain coefficients");
    if (d < 1) throw std::invalid_argument("vtol_steady_state: depth must be >= 1");
    const double A = params.disturbance_amplitude();
    const double omega = params.wind_omega;
    const double phase = params.wind_phase;
    const double q1 = c[2] / (c[0] * kappa * kappa);
    const double q2 = 1.0 / (c[0] * kappa * kappa * kappa);
    const double q3 = 1.0 / (c[0] * ell * params.L_scalar * kappa * kappa * kappa);
    const VtolParams p = params;

    SteadyStateOracle o;
    o.eta_star = [p, A, omega, phase, q1, q2, q3, d](double t) {
        Jet dj = Jet::harmonic(A, omega, phase, t, d + 1);
        Jet minus_u = -1.0 * vtol_u_star_jet(p, t, d);  // Omega(w,0)^{-1} q(w,0)
        Vec eta(d);
        for (int i = 0; i < d; ++i)
            eta[i] = q1 * dj.deriv(i) + q2 * dj.deriv(i + 1) + q3 * minus_u.deriv(i);
        return eta;
    };
    o.etad_dot_star = [p, A, omega, phase, q1, q2, q3, d](double t) {
        Jet dj = Jet::harmonic(A, omega, phase, t, d + 1);
        Jet minus_u = -1.0 * vtol_u_star_jet(p, t, d);
        return Vec{{q1 * dj.deriv(d) + q2 * dj.deriv(d + 1) + q3 * minus_u.deriv(d)}};
    };
    o.u_star = [p](double t) { return Vec{{vtol_u_star_jet(p, t, 0).value()}}; };
    o.x_star = [A, omega, phase](double t) {
        return PlantState{harmonic_w(A, omega, phase, t), Vec::Zero(0), Vec::Zero(3),
                          Vec::Zero(1)};
    };
    auto eta_fn = o.eta_star;
    auto etad_fn = o.etad_dot_star;
    o.epsilon_star = [eta_fn, etad_fn, model](double t, const Vec& theta) {
        return Vec(etad_fn(t) - model.value(eta_fn(t), theta));
    };
    return o;
}

Scenario vtol_scenario(const VtolParams& params) {
    params.validate();
    Scenario s;
    s.name = "vtol";
    s.plant = vtol_plant(params);
    s.d = 2;
    s.h = binomial_descending(s.d);
    s.c = {binomial_ascending(3)};
    s.Lmat = Mat{{params.L_scalar}};
    const double omega = params.wind_omega;
    s.nu = [omega](const Vec& w) { return Vec{{w[0], omega * w[1]}}; };
    const std::vector<double> c0 = s.c[0];
    s.Kw_builder = [c0](double kappa, double ell) {
        return Mat{{ell * c0[2] * kappa, ell}};
    };
    const double A = params.disturbance_amplitude();
    s.w0 = harmonic_w(A, omega, params.wind_phase, 0.0);
    s.omega_L_sup = params.gravity * params.B *
                    (1.0 + std::pow(3.0 * A / params.gravity, 2)) * std::abs(params.L_scalar);
    s.sigma_level = [A, omega, c0](double kappa, double ell, double multiplier) {
        (void)ell;
        const double level = multiplier * A * std::max(1.0, omega) * c0[2] / (c0[0] * kappa * kappa);
        if (!(level > 0.0) || !std::isfinite(level))
            return std::numeric_limits<double>::infinity();
        return level;
    };
    const VtolParams p = params;
    const int depth = s.d;
    s.steady = [p, c0, depth](double kappa, double ell, const PredictionModel& model) {
        return vtol_steady_state(p, kappa, ell, depth, c0, model);
    };
    return s;
}

Scenario linear_benchmark(double omega0, double amplitude, double phase) {
    if (!(omega0 > 0.0)) throw std::invalid_argument("linear_benchmark: omega0 must be > 0");

    Scenario s;
    s.name = "linear";
    s.plant.structure = ChainStructure{0, 1, 1, {2}};
    s.plant.nw = 2;
    s.plant.exo = [omega0](const Vec& w) { return Vec{{omega0 * w[1], -omega0 * w[0]}}; };
    s.plant.f0 = [](const PlantState&) { return Vec::Zero(0); };
    s.plant.b = [](const PlantState&) { return Mat::Zero(0, 1); };
    s.plant.q = [](const PlantState& st) { return Vec{{st.w[0]}}; };
    s.plant.Omega = [](const PlantState&) { return Mat{{1.0}}; };

    s.d = 2;
    s.h = binomial_descending(s.d);
    s.c = {binomial_ascending(2)};
    s.Lmat = Mat{{1.0}};
    s.w0 = harmonic_w(amplitude, omega0, phase, 0.0);
    s.omega_L_sup = 1.0;
    s.sigma_level = [](double, double, double) {
        return std::numeric_limits<double>::infinity();
    };
    const double A = amplitude;
    const std::vector<double> c0 = s.c[0];
    const int depth = s.d;
    s.steady = [A, omega0, phase, c0, depth](double kappa, double ell,
                                             const PredictionModel& model) {
        const double scale = 1.0 / (ell * c0[0] * kappa * kappa);
        SteadyStateOracle o;
        o.eta_star = [A, omega0, phase, scale, depth](double t) {
            Jet dj = Jet::harmonic(A, omega0, phase, t, depth);
            Vec eta(depth);
            for (int i = 0; i < depth; ++i) eta[i] = scale * dj.deriv(i);
            return eta;
        };
        o.etad_dot_star = [A, omega0, phase, scale, depth](double t) {
            Jet dj = Jet::harmonic(A, omega0, phase, t, depth);
            return Vec{{scale * dj.deriv(depth)}};
        };
        o.u_star = [A, omega0, phase](double t) {
            return Vec{{-A * std::sin(omega0 * t + phase)}};
        };
        o.x_star = [A, omega0, phase](double t) {
            return PlantState{harmonic_w(A, omega0, phase, t), Vec::Zero(0), Vec::Zero(2),
                              Vec::Zero(1)};
        };
        auto eta_fn = o.eta_star;
        auto etad_fn = o.etad_dot_star;
        o.epsilon_star = [eta_fn, etad_fn, model](double t, const Vec& theta) {
            return Vec(etad_fn(t) - model.value(eta_fn(t), theta));
        };
        return o;
    };
    return s;
}

AssembledRegulator assemble(const Scenario& scenario, const GainSet& gains,
                            const RegulatorTunables& tunables) {
    gains.validate();
    const ChainStructure& chain = scenario.plant.structure;
    const int ne = chain.ne;
    if (ne != 1)
        throw std::invalid_argument("assemble: built-in scenarios are single-error-channel");

    const double level = scenario.sigma_level
                             ? scenario.sigma_level(gains.kappa, gains.ell,
                                                    tunables.sigma_sat_multiplier)
                             : std::numeric_limits<double>::infinity();
    PredictionModel model = identity_linear_model(scenario.d, level);
    SteadyStateOracle oracle = scenario.steady(gains.kappa, gains.ell, model);

    // Sampled sups over one disturbance period feed the saturation defaults
    // and the declared identifier-state bound.
    const double omega0 = scenario.plant.exo ? std::abs(scenario.plant.exo(Vec{{0.0, 1.0}})[0])
                                             : 1.0;
    const double period = 2.0 * M_PI / std::max(omega0, 1e-6);
    const int nsamp = 1024;
    double sup_etad = 0.0, sup_gram = 0.0, sup_cross = 0.0;
    for (int k = 0; k < nsamp; ++k) {
        const double t = period * k / nsamp;
        const Vec etad = oracle.etad_dot_star(t);
        const Mat reg = model.regressor(oracle.eta_star(t));
        sup_etad = std::max(sup_etad, etad.cwiseAbs().maxCoeff());
        sup_gram = std::max(sup_gram, (reg * reg.transpose()).norm());
        sup_cross = std::max(sup_cross, (reg * etad).norm());
    }

    double psidot_bound = tunables.psidot_multiplier * sup_etad;
    if (!(psidot_bound > 0.0) || !std::isfinite(psidot_bound))
        psidot_bound = std::numeric_limits<double>::infinity();

    AssembledRegulator out;
    out.config.chain = chain;
    out.config.im = InternalModelConfig{scenario.d, ne, gains.g, scenario.h};
    out.config.model = model;
    out.config.id.ntheta = model.ntheta;
    out.config.id.lambda = tunables.lambda;
    out.config.id.Gamma = tunables.gamma_scale * Mat::Identity(model.ntheta, model.ntheta);
    out.config.id.m1 = tunables.m1;
    out.config.id.m2 = tunables.m2;
    out.config.id.rho = gains.rho;
    out.config.id.psidot_bound = psidot_bound;
    out.config.stab.kappa = gains.kappa;
    out.config.stab.ell = gains.ell;
    out.config.stab.c = scenario.c;
    out.config.stab.Lmat = scenario.Lmat;
    out.config.stab.nu = scenario.nu;
    if (scenario.Kw_builder) out.config.stab.Kw = scenario.Kw_builder(gains.kappa, gains.ell);
    out.config.validate();

    out.oracle = std::move(oracle);
    out.s_star_bound = std::max(2.0 * (sup_gram + sup_cross), 1e-12);
    out.omega_L_sup = scenario.omega_L_sup;
    out.sup_etad_dot = sup_etad;
    return out;
}

}  // namespace oreg

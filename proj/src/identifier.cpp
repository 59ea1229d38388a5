#include "oreg/identifier.hpp"

#include <Eigen/Cholesky>

namespace oreg {

void LsIdentifierConfig::validate() const {
    if (ntheta < 1) throw std::invalid_argument("LsIdentifierConfig: ntheta must be >= 1");
    if (lambda < 0.0) throw std::invalid_argument("LsIdentifierConfig: lambda must be >= 0");
    if (!(m1 > 0.0) || !(m2 > 0.0))
        throw std::invalid_argument("LsIdentifierConfig: m1, m2 must be > 0");
    if (!(rho > 0.0)) throw std::invalid_argument("LsIdentifierConfig: rho must be > 0");
    if (Gamma.rows() != ntheta || Gamma.cols() != ntheta)
        throw std::invalid_argument("LsIdentifierConfig: Gamma must be ntheta x ntheta");
    const double defect = (Gamma - Gamma.transpose()).cwiseAbs().maxCoeff();
    if (defect > 1e-12 * std::max(1.0, Gamma.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("LsIdentifierConfig: Gamma must be symmetric");
    if (Eigen::LLT<Mat>(Gamma).info() != Eigen::Success)
        throw std::invalid_argument("LsIdentifierConfig: Gamma must be positive definite");
}

IdentifierState IdentifierState::zero(int ntheta, int ne) {
    IdentifierState s;
    s.gram = Mat::Zero(ntheta, ntheta);
    s.cross = Vec::Zero(ntheta);
    s.xi1 = Vec::Zero(ne);
    s.xi2 = Vec::Zero(ne);
    return s;
}

double IdentifierState::symmetry_defect() const {
    return (gram - gram.transpose()).cwiseAbs().maxCoeff();
}

std::pair<Mat, Vec> ls_flow(const LsIdentifierConfig& cfg, const Mat& gram, const Vec& cross,
                            const Mat& reg, const Vec& xi2) {
    if (reg.rows() != cfg.ntheta || reg.cols() != xi2.size())
        throw std::invalid_argument("ls_flow: regressor dimensions inconsistent");
    Mat gram_dot = cfg.lambda * (reg * reg.transpose() - gram);
    Vec cross_dot = cfg.lambda * (reg * xi2 - cross);
    return {std::move(gram_dot), std::move(cross_dot)};
}

Vec ls_output(const LsIdentifierConfig& cfg, const Mat& gram, const Vec& cross) {
    try {
        return solve_spd(gram + cfg.Gamma, cross);
    } catch (const NotPositiveDefinite& e) {
        throw CorruptedIdentifierState(std::string("ls_output: ") + e.what());
    }
}

Vec theta_dot(const LsIdentifierConfig& cfg, const Mat& gram, const Vec& cross, const Mat& reg,
              const Vec& xi2, const Vec& theta) {
    if (cfg.lambda == 0.0) return Vec::Zero(cfg.ntheta);
    Vec rhs = reg * xi2 - reg * (reg.transpose() * theta) - cross + gram * theta;
    try {
        return cfg.lambda * solve_spd(gram + cfg.Gamma, rhs);
    } catch (const NotPositiveDefinite& e) {
        throw CorruptedIdentifierState(std::string("theta_dot: ") + e.what());
    }
}

std::pair<Vec, Vec> observer_rhs(const LsIdentifierConfig& cfg, const Vec& xi1, const Vec& xi2,
                                 const Vec& eta_d, const Vec& psidot_val) {
    if (xi1.size() != eta_d.size() || xi2.size() != eta_d.size() ||
        psidot_val.size() != eta_d.size())
        throw std::invalid_argument("observer_rhs: dimensions inconsistent");
    Vec innovation = xi1 - eta_d;
    Vec xi1_dot = xi2 - (cfg.m1 * cfg.rho) * innovation;
    Vec xi2_dot = psidot_val - (cfg.m2 * cfg.rho * cfg.rho) * innovation;
    return {std::move(xi1_dot), std::move(xi2_dot)};
}

Vec psidot_saturated(const PredictionModel& model, const InternalModelConfig& im,
                     const LsIdentifierConfig& cfg, const Vec& xi2, const Vec& eta,
                     const Mat& gram, const Vec& cross, const Vec& theta) {
    Vec drift = internal_model_drift(im, model, eta, theta);
    Mat reg = model.regressor(eta);
    Vec td = theta_dot(cfg, gram, cross, reg, xi2, theta);
    Vec raw = model.jacobian_eta(eta, theta) * drift + model.jacobian_theta(eta, theta) * td;
    return saturate(raw, cfg.psidot_bound);
}

double cost_functional_oracle(const PredictionModel& model, const IdealSignalHistory& history,
                              const Vec& theta, double lambda, const Mat& Gamma, double t) {
    const double reg_term = theta.dot(Gamma * theta);
    const auto n_avail = history.eta.size();
    std::size_t n = n_avail;
    if (history.dt > 0.0)
        n = std::min<std::size_t>(n_avail, static_cast<std::size_t>(std::floor(t / history.dt + 1e-9)) + 1);
    if (n < 2) return reg_term;

    std::vector<double> integrand(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = static_cast<double>(k) * history.dt;
        Vec eps = history.etad_dot[k] - model.value(history.eta[k], theta);
        integrand[k] = lambda * std::exp(-lambda * (t - s)) * eps.squaredNorm();
    }
    return trapezoid_integral(integrand, history.dt) + reg_term;
}

std::pair<Mat, Vec> ideal_sigma_star_oracle(const PredictionModel& model,
                                            const IdealSignalHistory& history, double lambda,
                                            double t) {
    const int ntheta = model.ntheta;
    const auto n_avail = history.eta.size();
    std::size_t n = n_avail;
    if (history.dt > 0.0)
        n = std::min<std::size_t>(n_avail, static_cast<std::size_t>(std::floor(t / history.dt + 1e-9)) + 1);
    Mat gram_star = Mat::Zero(ntheta, ntheta);
    Vec cross_star = Vec::Zero(ntheta);
    if (n < 2) return {std::move(gram_star), std::move(cross_star)};

    // Trapezoid weights: half at both ends, full inside.
    for (std::size_t k = 0; k < n; ++k) {
        const double s = static_cast<double>(k) * history.dt;
        const double wgt = lambda * std::exp(-lambda * (t - s)) * history.dt *
                           ((k == 0 || k == n - 1) ? 0.5 : 1.0);
        Mat reg = model.regressor(history.eta[k]);
        gram_star += wgt * (reg * reg.transpose());
        cross_star += wgt * (reg * history.etad_dot[k]);
    }
    return {std::move(gram_star), std::move(cross_star)};
}

}  // namespace oreg

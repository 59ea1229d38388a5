#include "oreg/regulator.hpp"

#include <Eigen/QR>

namespace oreg {

void GainSet::validate() const {
    if (!(rho > 1.0)) throw std::invalid_argument("GainSet: rho must be > 1");
    if (!(g > 1.0)) throw std::invalid_argument("GainSet: g must be > 1");
    if (!(kappa > 1.0)) throw std::invalid_argument("GainSet: kappa must be > 1");
    if (!(ell > 1.0)) throw std::invalid_argument("GainSet: ell must be > 1");
}

void StabilizerConfig::validate(const ChainStructure& s) const {
    if (!(kappa > 0.0) || !(ell > 0.0))
        throw std::invalid_argument("StabilizerConfig: kappa, ell must be > 0");
    if (static_cast<int>(c.size()) != s.ne)
        throw std::invalid_argument("StabilizerConfig: one coefficient list per chain");
    for (int i = 0; i < s.ne; ++i) {
        if (static_cast<int>(c[i].size()) != s.chain_lengths[i])
            throw std::invalid_argument("StabilizerConfig: coefficient count must match chain");
        if (!is_hurwitz(Polynomial{c[i]}))
            throw std::invalid_argument("StabilizerConfig: chain polynomial not Hurwitz");
    }
    if (Lmat.rows() != s.nu || Lmat.cols() != s.ne)
        throw std::invalid_argument("StabilizerConfig: Lmat must be nu x ne");
    Eigen::ColPivHouseholderQR<Mat> qr(Lmat);
    if (qr.rank() < s.ne)
        throw std::invalid_argument("StabilizerConfig: Lmat must have full column rank");
}

RowVec gain_row(int n, const std::vector<double>& c, double kappa) {
    if (static_cast<int>(c.size()) != n)
        throw std::invalid_argument("gain_row: need n coefficients");
    RowVec row(n);
    for (int j = 0; j < n; ++j) row[j] = -c[j] * std::pow(kappa, n - j);
    return row;
}

Mat gain_matrix(const ChainStructure& s, const std::vector<std::vector<double>>& c,
                double kappa) {
    Mat K = Mat::Zero(s.ne, s.nchi());
    int off = 0;
    for (int i = 0; i < s.ne; ++i) {
        const int len = s.chain_lengths[i];
        K.block(i, off, 1, len) = gain_row(len, c[i], kappa);
        off += len;
    }
    return K;
}

Vec control_law(const StabilizerConfig& cfg, const ChainStructure& s, const Vec& chi,
                const Vec& zeta, const Vec& eta1, const Vec& w) {
    Mat K = gain_matrix(s, cfg.c, cfg.kappa);
    // K(kappa) C^T picks the leading column of each chain block.
    Vec inner = cfg.ell * (K * chi) - cfg.ell * zeta;
    int off = 0;
    for (int i = 0; i < s.ne; ++i) {
        inner += (cfg.ell * K(i, off)) * eta1[i] * Vec::Unit(s.ne, i);
        off += s.chain_lengths[i];
    }
    if (cfg.Kw.has_value() && cfg.nu) inner += (*cfg.Kw) * cfg.nu(w);
    return cfg.Lmat * inner;
}

void RegulatorConfig::validate() const {
    chain.validate();
    im.validate();
    id.validate();
    stab.validate(chain);
    if (im.ne != chain.ne)
        throw std::invalid_argument("RegulatorConfig: internal model ne mismatch");
    if (model.ntheta != id.ntheta)
        throw std::invalid_argument("RegulatorConfig: model/identifier ntheta mismatch");
    if (model.d != im.d || model.ne != im.ne)
        throw std::invalid_argument("RegulatorConfig: model dimensions mismatch");
}

RegulatorState RegulatorState::zero(const RegulatorConfig& cfg) {
    RegulatorState s;
    s.eta = Vec::Zero(cfg.im.d * cfg.im.ne);
    s.id = IdentifierState::zero(cfg.id.ntheta, cfg.im.ne);
    return s;
}

RegulatorDerivative regulator_rhs(const RegulatorConfig& cfg, const RegulatorState& state,
                                  const Vec& e, const Vec& chi, const Vec& zeta, const Vec& w) {
    const int ne = cfg.im.ne;
    RegulatorDerivative out;

    out.theta = ls_output(cfg.id, state.id.gram, state.id.cross);
    out.psi_value = cfg.model.value(state.eta, out.theta);
    out.eta_dot = internal_model_rhs(cfg.im, cfg.model, state.eta, out.theta, e);

    Mat reg = cfg.model.regressor(state.eta);
    auto [gram_dot, cross_dot] = ls_flow(cfg.id, state.id.gram, state.id.cross, reg, state.id.xi2);
    out.gram_dot = std::move(gram_dot);
    out.cross_dot = std::move(cross_dot);

    Vec eta_d = state.eta.tail(ne);
    Vec psidot = psidot_saturated(cfg.model, cfg.im, cfg.id, state.id.xi2, state.eta,
                                  state.id.gram, state.id.cross, out.theta);
    auto [xi1_dot, xi2_dot] = observer_rhs(cfg.id, state.id.xi1, state.id.xi2, eta_d, psidot);
    out.xi1_dot = std::move(xi1_dot);
    out.xi2_dot = std::move(xi2_dot);

    out.u = control_law(cfg.stab, cfg.chain, chi, zeta, state.eta.head(ne), w);

    // eta_dot_d - psi must reproduce (h_d g^d) e exactly as evaluated.
    Vec implied = out.eta_dot.tail(ne) - out.psi_value;
    out.eq8_residual = (prediction_error_from_error(cfg.im, e) - implied).cwiseAbs().maxCoeff();
    return out;
}

GainSet tuning_schedule(const GainSet& seed, const GainMultipliers& m) {
    seed.validate();
    if (!(m.rho > 0.0) || !(m.g > 0.0) || !(m.kappa > 0.0) || !(m.ell > 0.0))
        throw std::invalid_argument("tuning_schedule: multipliers must be > 0");
    GainSet out = seed;
    out.rho = seed.rho * m.rho;
    out.g = seed.g * m.g;
    out.kappa = seed.kappa * m.kappa;
    bool floored = false;
    if (out.kappa < out.g) {
        out.kappa = out.g;
        floored = true;
    }
    out.ell = seed.ell * m.ell;
    out.tuning_order_tag = "rho->g->kappa->ell";
    if (floored) out.tuning_order_tag += " (kappa floored at g)";
    out.validate();
    return out;
}

}  // namespace oreg

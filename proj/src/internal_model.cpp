#include "oreg/internal_model.hpp"

namespace oreg {

void InternalModelConfig::validate() const {
    if (d < 1) throw std::invalid_argument("InternalModelConfig: d must be >= 1");
    if (ne < 1) throw std::invalid_argument("InternalModelConfig: ne must be >= 1");
    if (!(g > 0.0)) throw std::invalid_argument("InternalModelConfig: g must be > 0");
    if (static_cast<int>(h.size()) != d)
        throw std::invalid_argument("InternalModelConfig: need d injection coefficients");
    if (!is_hurwitz(polynomial_from_descending(h)))
        throw std::invalid_argument("InternalModelConfig: injection polynomial not Hurwitz");
}

double InternalModelConfig::bottom_gain() const { return h.back() * std::pow(g, d); }

double saturate(double s, double level) {
    if (!std::isfinite(level)) return s;
    return level * std::tanh(s / level);
}

Vec saturate(const Vec& v, double level) {
    if (!std::isfinite(level)) return v;
    return v.unaryExpr([level](double s) { return level * std::tanh(s / level); });
}

Vec internal_model_drift(const InternalModelConfig& cfg, const PredictionModel& model,
                         const Vec& eta, const Vec& theta) {
    if (eta.size() != cfg.d * cfg.ne)
        throw std::invalid_argument("internal_model_drift: |eta| must equal d*ne");
    Vec out(cfg.d * cfg.ne);
    if (cfg.d > 1) out.head((cfg.d - 1) * cfg.ne) = eta.tail((cfg.d - 1) * cfg.ne);
    out.tail(cfg.ne) = model.value(eta, theta);
    return out;
}

Vec internal_model_rhs(const InternalModelConfig& cfg, const PredictionModel& model,
                       const Vec& eta, const Vec& theta, const Vec& e) {
    if (e.size() != cfg.ne) throw std::invalid_argument("internal_model_rhs: |e| must equal ne");
    Vec out = internal_model_drift(cfg, model, eta, theta);
    double gain = cfg.g;
    for (int i = 0; i < cfg.d; ++i) {
        out.segment(i * cfg.ne, cfg.ne) += (gain * cfg.h[i]) * e;
        gain *= cfg.g;
    }
    return out;
}

Vec prediction_error_from_error(const InternalModelConfig& cfg, const Vec& e) {
    return cfg.bottom_gain() * e;
}

PredictionModel linear_model(std::function<Vec(const Vec&)> sigma,
                             std::function<Mat(const Vec&)> sigma_jacobian,
                             int ntheta_per_channel, double saturation_level, int d, int ne) {
    if (ntheta_per_channel < 1) throw std::invalid_argument("linear_model: ntheta must be >= 1");
    if (d < 1 || ne < 1) throw std::invalid_argument("linear_model: d and ne must be >= 1");

    PredictionModel m;
    m.d = d;
    m.ne = ne;
    m.ntheta = ntheta_per_channel * ne;
    m.saturation_level = saturation_level;
    const int ntc = ntheta_per_channel;
    const double level = saturation_level;

    auto sat_regressor = [sigma, level](const Vec& eta) { return saturate(sigma(eta), level); };

    // ntheta x ne: channel i's parameters see the shared saturated regressor.
    m.regressor = [sat_regressor, ntc, ne](const Vec& eta) {
        Vec s = sat_regressor(eta);
        Mat R = Mat::Zero(ntc * ne, ne);
        for (int i = 0; i < ne; ++i) R.block(i * ntc, i, ntc, 1) = s;
        return R;
    };
    m.value = [sat_regressor, ntc, ne](const Vec& eta, const Vec& theta) {
        Vec s = sat_regressor(eta);
        Vec out(ne);
        for (int i = 0; i < ne; ++i) out[i] = theta.segment(i * ntc, ntc).dot(s);
        return out;
    };
    m.jacobian_theta = [sat_regressor, ntc, ne](const Vec& eta, const Vec&) {
        Vec s = sat_regressor(eta);
        Mat J = Mat::Zero(ne, ntc * ne);
        for (int i = 0; i < ne; ++i) J.block(i, i * ntc, 1, ntc) = s.transpose();
        return J;
    };
    m.jacobian_eta = [sigma, sigma_jacobian, level, ntc, ne](const Vec& eta, const Vec& theta) {
        Vec raw = sigma(eta);
        Mat Jsig = sigma_jacobian(eta);  // ntc x (d*ne)
        if (std::isfinite(level)) {
            for (int r = 0; r < Jsig.rows(); ++r) {
                const double c = std::cosh(raw[r] / level);
                Jsig.row(r) *= 1.0 / (c * c);
            }
        }
        Mat J = Mat::Zero(ne, eta.size());
        for (int i = 0; i < ne; ++i)
            J.row(i) = theta.segment(i * ntc, ntc).transpose() * Jsig;
        return J;
    };
    return m;
}

PredictionModel identity_linear_model(int d, double saturation_level) {
    auto sigma = [](const Vec& eta) { return eta; };
    auto jac = [](const Vec& eta) {
        return Mat(Mat::Identity(eta.size(), eta.size()));
    };
    return linear_model(sigma, jac, d, saturation_level, d, 1);
}

}  // namespace oreg

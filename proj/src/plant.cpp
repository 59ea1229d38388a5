#include "oreg/plant.hpp"

#include <Eigen/Cholesky>

namespace oreg {

void ChainStructure::validate() const {
    if (ne < 1) throw std::invalid_argument("ChainStructure: ne must be >= 1");
    if (nu < ne) throw std::invalid_argument("ChainStructure: nu must be >= ne");
    if (n0 < 0) throw std::invalid_argument("ChainStructure: n0 must be >= 0");
    if (static_cast<int>(chain_lengths.size()) != ne)
        throw std::invalid_argument("ChainStructure: one chain length per error channel");
    for (int len : chain_lengths)
        if (len < 1) throw std::invalid_argument("ChainStructure: chain lengths must be >= 1");
}

ChainMatrices chain_matrices(const ChainStructure& s) {
    s.validate();
    const int nchi = s.nchi();
    ChainMatrices m;
    m.C = Mat::Zero(s.ne, nchi);
    m.F = Mat::Zero(nchi, nchi);
    m.H = Mat::Zero(nchi, s.ne);
    int off = 0;
    for (int i = 0; i < s.ne; ++i) {
        const int len = s.chain_lengths[i];
        m.C(i, off) = 1.0;
        for (int k = 0; k + 1 < len; ++k) m.F(off + k, off + k + 1) = 1.0;
        m.H(off + len - 1, i) = 1.0;
        off += len;
    }
    return m;
}

namespace {

void require_finite(const Vec& v, const char* label) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
            throw ModelEvaluationError(std::string("plant map ") + label +
                                       " returned non-finite value at coordinate " +
                                       std::to_string(i));
}

}  // namespace

PlantState plant_rhs(const PlantModel& model, const PlantState& state, const Vec& u) {
    const ChainStructure& s = model.structure;
    if (state.chi.size() != s.nchi() || state.zeta.size() != s.ne ||
        state.x0.size() != s.n0 || u.size() != s.nu)
        throw std::invalid_argument("plant_rhs: state/input dimensions inconsistent");

    PlantState d;
    d.w = model.exo(state.w);
    require_finite(d.w, "s");

    if (s.n0 > 0) {
        Vec f0v = model.f0(state);
        require_finite(f0v, "f0");
        d.x0 = f0v + model.b(state) * u;
        require_finite(d.x0, "b*u");
    } else {
        d.x0 = Vec::Zero(0);
    }

    // chi_dot = F*chi + H*zeta, evaluated blockwise.
    d.chi = Vec::Zero(s.nchi());
    int off = 0;
    for (int i = 0; i < s.ne; ++i) {
        const int len = s.chain_lengths[i];
        for (int k = 0; k + 1 < len; ++k) d.chi[off + k] = state.chi[off + k + 1];
        d.chi[off + len - 1] = state.zeta[i];
        off += len;
    }

    Vec qv = model.q(state);
    require_finite(qv, "q");
    Mat Om = model.Omega(state);
    d.zeta = qv + Om * u;
    require_finite(d.zeta, "Omega*u");
    return d;
}

Vec friend_input(const PlantModel& model, const PlantState& x_star) {
    Vec qv = model.q(x_star);
    Mat Om = model.Omega(x_star);
    Mat gram = Om * Om.transpose();
    Eigen::LLT<Mat> llt(gram);
    if (llt.info() != Eigen::Success)
        throw SingularGram("friend_input: Omega Omega^T is singular (row rank lost)");
    return -Om.transpose() * llt.solve(qv);
}

}  // namespace oreg

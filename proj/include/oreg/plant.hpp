#pragma once

#include "oreg/numerics.hpp"

#include <functional>
#include <numeric>

namespace oreg {

struct ModelEvaluationError : std::runtime_error {
    explicit ModelEvaluationError(const std::string& what) : std::runtime_error(what) {}
};

struct SingularGram : std::runtime_error {
    explicit SingularGram(const std::string& what) : std::runtime_error(what) {}
};

// Block dimensions of a plant in normal form: ne chains of integrators driven
// by zeta at the bottom, a residual state x0, and nu inputs with nu >= ne.
struct ChainStructure {
    int n0 = 0;
    int ne = 0;
    int nu = 0;
    std::vector<int> chain_lengths;  // one entry per chain, each >= 1

    int nchi() const { return std::accumulate(chain_lengths.begin(), chain_lengths.end(), 0); }
    void validate() const;
};

struct ChainMatrices {
    Mat C;  // ne x nchi, selects the first component of each chain
    Mat F;  // nchi x nchi, block-diagonal shift-up
    Mat H;  // nchi x ne, block-diagonal bottom injection
};

// The block matrices for which e = C*chi and chi_dot = F*chi + H*zeta.
ChainMatrices chain_matrices(const ChainStructure& s);

struct PlantState {
    Vec w;     // exosystem state
    Vec x0;    // residual dynamics
    Vec chi;   // stacked integrator chains
    Vec zeta;  // chain bottom drives
};

// One normal-form plant: callable maps plus the exosystem field. Maps take the
// full state (w is carried inside PlantState). Immutable after construction.
struct PlantModel {
    ChainStructure structure;
    int nw = 0;
    std::function<Vec(const PlantState&)> f0;     // -> n0
    std::function<Mat(const PlantState&)> b;      // -> n0 x nu
    std::function<Vec(const PlantState&)> q;      // -> ne
    std::function<Mat(const PlantState&)> Omega;  // -> ne x nu, full row rank
    std::function<Vec(const Vec&)> exo;           // w -> w_dot
};

// Time derivative of the full plant state under input u.
PlantState plant_rhs(const PlantModel& model, const PlantState& state, const Vec& u);

// The steady-state input u* = -Omega^T (Omega Omega^T)^{-1} q annihilating the
// zeta drift at (w, x*). Throws SingularGram when Omega loses row rank.
Vec friend_input(const PlantModel& model, const PlantState& x_star);

}  // namespace oreg

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace oreg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using RowVec = Eigen::RowVectorXd;

// State became non-finite during integration; carries the time of the failing step.
struct IntegrationBlowup : std::runtime_error {
    explicit IntegrationBlowup(double time)
        : std::runtime_error("integration blow-up at t=" + std::to_string(time)), t(time) {}
    double t;
};

struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

// Monic real polynomial: coeffs[k] is the coefficient of s^k, the leading
// coefficient 1 of s^degree is implied. coeffs must be nonempty.
struct Polynomial {
    std::vector<double> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()); }
};

// Monic polynomial from coefficients listed in descending powers below the
// leading term, i.e. {a_1,...,a_n} for s^n + a_1 s^{n-1} + ... + a_n.
Polynomial polynomial_from_descending(const std::vector<double>& a);

// True iff all roots lie in the open left half plane, decided by the Routh
// table. A vanishing pivot reports false (marginal cases are rejected).
bool is_hurwitz(const Polynomial& p);

// Classical fixed-step RK4 update. Throws IntegrationBlowup if any stage
// evaluation or the result is non-finite.
template <class Rhs>
Vec rk4_step(Rhs&& rhs, const Vec& y, double t, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be > 0");
    const Vec k1 = rhs(t, y);
    const Vec k2 = rhs(t + 0.5 * dt, Vec(y + (0.5 * dt) * k1));
    const Vec k3 = rhs(t + 0.5 * dt, Vec(y + (0.5 * dt) * k2));
    const Vec k4 = rhs(t + dt, Vec(y + dt * k3));
    Vec out = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!out.allFinite() || !k1.allFinite() || !k2.allFinite() || !k3.allFinite() ||
        !k4.allFinite())
        throw IntegrationBlowup(t);
    return out;
}

// Solve A x = b for symmetric positive definite A by Cholesky factorization.
// Rejects matrices that are asymmetric beyond 1e-10 relative or fail to factor.
Vec solve_spd(const Mat& A, const Vec& b);

// Composite trapezoid rule over uniformly spaced samples.
double trapezoid_integral(std::span<const double> samples, double dt);

// Lower bound estimate of the minimum eigenvalue of a symmetric matrix via
// bisection on the shift that keeps A - s*I factorizable. Diagnostic use.
double min_eigenvalue_probe(const Mat& A, double rel_tol = 1e-10);

}  // namespace oreg

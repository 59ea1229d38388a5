#include "oreg/numerics.hpp"

#include <Eigen/Cholesky>

#include <algorithm>

namespace oreg {

Polynomial polynomial_from_descending(const std::vector<double>& a) {
    Polynomial p;
    p.coeffs.assign(a.rbegin(), a.rend());
    if (p.coeffs.empty()) throw std::invalid_argument("polynomial: empty coefficient list");
    return p;
}

bool is_hurwitz(const Polynomial& p) {
    const int n = p.degree();
    if (n < 1) throw std::invalid_argument("is_hurwitz: degree must be >= 1");

    // Full coefficient list, descending powers: b[0]=1 (monic), b[k] = coeff of s^{n-k}.
    std::vector<double> b(n + 1);
    b[0] = 1.0;
    for (int k = 1; k <= n; ++k) b[k] = p.coeffs[n - k];

    // Routh table; rows hold every other coefficient.
    const int width = n / 2 + 1;
    std::vector<double> prev(width, 0.0), cur(width, 0.0), next(width, 0.0);
    for (int j = 0; j < width; ++j) prev[j] = (2 * j <= n) ? b[2 * j] : 0.0;
    for (int j = 0; j < width; ++j) cur[j] = (2 * j + 1 <= n) ? b[2 * j + 1] : 0.0;

    double scale = 0.0;
    for (int k = 0; k <= n; ++k) scale = std::max(scale, std::abs(b[k]));
    const double zero_tol = 1e-14 * scale;

    if (prev[0] <= zero_tol) return false;
    for (int row = 1; row <= n; ++row) {
        const double pivot = cur[0];
        if (!(pivot > zero_tol)) return false;  // zero or negative pivot: not Hurwitz
        for (int j = 0; j + 1 < width; ++j)
            next[j] = (pivot * prev[j + 1] - prev[0] * cur[j + 1]) / pivot;
        next[width - 1] = 0.0;
        prev = cur;
        cur = next;
        if (row == n) break;
    }
    return true;
}

Vec solve_spd(const Mat& A, const Vec& b) {
    if (A.rows() != A.cols()) throw std::invalid_argument("solve_spd: matrix must be square");
    if (A.rows() != b.size()) throw std::invalid_argument("solve_spd: dimension mismatch");
    const double sym_defect = (A - A.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(A.cwiseAbs().maxCoeff(), 1e-300);
    if (sym_defect > 1e-10 * scale)
        throw NotPositiveDefinite("solve_spd: matrix asymmetric beyond tolerance");
    Eigen::LLT<Mat> llt(A);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("solve_spd: Cholesky factorization failed");
    return llt.solve(b);
}

double trapezoid_integral(std::span<const double> samples, double dt) {
    if (samples.size() < 2) throw std::invalid_argument("trapezoid_integral: need >= 2 samples");
    if (!(dt > 0.0)) throw std::invalid_argument("trapezoid_integral: dt must be > 0");
    double acc = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) acc += samples[i];
    return acc * dt;
}

double min_eigenvalue_probe(const Mat& A, double rel_tol) {
    if (A.rows() != A.cols()) throw std::invalid_argument("min_eigenvalue_probe: square only");
    const int n = static_cast<int>(A.rows());
    if (n == 0) return 0.0;
    const Mat S = 0.5 * (A + A.transpose());
    const double r = std::max(S.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);

    auto pd_after_shift = [&](double s) {
        Mat shifted = S - s * Mat::Identity(n, n);
        return Eigen::LLT<Mat>(shifted).info() == Eigen::Success;
    };

    // Gershgorin bounds the spectrum to [-r, r].
    double lo = -r, hi = r;
    if (!pd_after_shift(lo)) return lo;  // pathological scaling; report the bound
    while (hi - lo > rel_tol * r) {
        const double mid = 0.5 * (lo + hi);
        if (pd_after_shift(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace oreg

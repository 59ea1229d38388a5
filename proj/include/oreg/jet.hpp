#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oreg {

// Truncated Taylor expansion of a scalar signal at one time instant:
// d[k] holds the k-th time derivative (not divided by k!). Supports the
// rational arithmetic needed to chain derivatives of harmonic signals.
class Jet {
  public:
    Jet() = default;
    explicit Jet(int order) : d_(static_cast<std::size_t>(order) + 1, 0.0) {}

    static Jet constant(double value, int order) {
        Jet j(order);
        j.d_[0] = value;
        return j;
    }

    // a*sin(omega*t + phase) and all its derivatives at time t.
    static Jet harmonic(double a, double omega, double phase, double t, int order) {
        Jet j(order);
        double scale = a;
        for (int k = 0; k <= order; ++k) {
            j.d_[k] = scale * std::sin(omega * t + phase + k * 0.5 * M_PI);
            scale *= omega;
        }
        return j;
    }

    int order() const { return static_cast<int>(d_.size()) - 1; }
    double deriv(int k) const { return d_.at(static_cast<std::size_t>(k)); }
    double value() const { return d_[0]; }

    Jet truncated(int order) const {
        if (order > this->order()) throw std::invalid_argument("Jet::truncated: order too high");
        Jet j(order);
        for (int k = 0; k <= order; ++k) j.d_[k] = d_[k];
        return j;
    }

    // Drop the value: the jet of the signal's time derivative (order shrinks by 1).
    Jet shifted() const {
        if (order() < 1) throw std::invalid_argument("Jet::shifted: order too low");
        Jet j(order() - 1);
        for (int k = 0; k <= j.order(); ++k) j.d_[k] = d_[k + 1];
        return j;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet out(common_order(a, b));
        for (int k = 0; k <= out.order(); ++k) out.d_[k] = a.d_[k] + b.d_[k];
        return out;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet out(common_order(a, b));
        for (int k = 0; k <= out.order(); ++k) out.d_[k] = a.d_[k] - b.d_[k];
        return out;
    }
    friend Jet operator*(double s, const Jet& a) {
        Jet out = a;
        for (double& v : out.d_) v *= s;
        return out;
    }
    friend Jet operator*(const Jet& a, double s) { return s * a; }

    // Leibniz product rule.
    friend Jet operator*(const Jet& a, const Jet& b) {
        const int n = common_order(a, b);
        Jet out(n);
        for (int k = 0; k <= n; ++k) {
            double acc = 0.0;
            for (int j = 0; j <= k; ++j) acc += binom(k, j) * a.d_[j] * b.d_[k - j];
            out.d_[k] = acc;
        }
        return out;
    }

    // Quotient via the product-rule recurrence: (a/b)^{(k)} solves
    // a^{(k)} = sum_j C(k,j) q^{(j)} b^{(k-j)}.
    friend Jet operator/(const Jet& a, const Jet& b) {
        const int n = common_order(a, b);
        if (b.d_[0] == 0.0) throw std::invalid_argument("Jet division by zero value");
        Jet out(n);
        for (int k = 0; k <= n; ++k) {
            double acc = a.d_[k];
            for (int j = 0; j < k; ++j) acc -= binom(k, j) * out.d_[j] * b.d_[k - j];
            out.d_[k] = acc / b.d_[0];
        }
        return out;
    }

  private:
    static int common_order(const Jet& a, const Jet& b) {
        if (a.order() != b.order())
            throw std::invalid_argument("Jet arithmetic requires equal orders");
        return a.order();
    }
    static double binom(int n, int k) {
        double r = 1.0;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    }

    std::vector<double> d_;
};

}  // namespace oreg

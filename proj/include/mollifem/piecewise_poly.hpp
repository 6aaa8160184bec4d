#ifndef MOLLIFEM_PIECEWISE_POLY_HPP
#define MOLLIFEM_PIECEWISE_POLY_HPP

#include "mollifem/errors.hpp"

#include <Eigen/Core>

#include <vector>

namespace mollifem {

namespace poly {

// Dense monomial coefficients, p(t) = c[0] + c[1] t + ... Free functions so the
// piecewise layer stays expression-like.

double eval(const Eigen::VectorXd& c, double t);
Eigen::VectorXd multiply(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
Eigen::VectorXd add(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
Eigen::VectorXd antiderivative(const Eigen::VectorXd& c);

/// Coefficients of t -> p(t + delta) (Taylor re-centre).
Eigen::VectorXd recentre(const Eigen::VectorXd& c, double delta);

} // namespace poly

/// A compactly supported function that is polynomial between consecutive
/// breakpoints and identically zero outside [front, back]. Piece i holds
/// coefficients in the local variable t = x - breakpoints[i], which keeps the
/// representation well conditioned even when pieces are many orders of
/// magnitude narrower than their distance from the origin.
class PiecewisePoly {
public:
    PiecewisePoly(std::vector<double> breakpoints, std::vector<Eigen::VectorXd> pieces);

    static PiecewisePoly constant(double a, double b, double value);

    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<Eigen::VectorXd>& pieces() const { return pieces_; }
    double support_lo() const { return breaks_.front(); }
    double support_hi() const { return breaks_.back(); }
    int max_degree() const;

    /// Pointwise value; pieces are taken left-closed/right-open, the last one
    /// right-closed, and anything outside the support evaluates to zero.
    double operator()(double x) const;

    double integral() const;
    double integral(double a, double b) const;
    /// Integral of x^r times this function over the whole line.
    double moment(int r) const;
    double squared_l2() const;
    double squared_l2(double a, double b) const;

    PiecewisePoly shifted(double dx) const;
    /// x -> value_scale * p(x / arg_scale); arg_scale must be positive.
    PiecewisePoly scaled(double arg_scale, double value_scale) const;

private:
    std::vector<double> breaks_;
    std::vector<Eigen::VectorXd> pieces_;

    std::size_t piece_index(double x) const; // valid only inside the support
};

/// Exact convolution (f * g)(x) = integral of f(y) g(x - y) dy. Breakpoints of
/// the result are the pairwise sums of the input breakpoints; piece degrees are
/// deg(f piece) + deg(g piece) + 1. Computed symbolically, not by quadrature.
PiecewisePoly convolve(const PiecewisePoly& f, const PiecewisePoly& g);

} // namespace mollifem

#endif

#ifndef MOLLIFEM_KERNEL_HPP
#define MOLLIFEM_KERNEL_HPP

#include "mollifem/errors.hpp"
#include "mollifem/fe.hpp"
#include "mollifem/piecewise_poly.hpp"
#include "mollifem/quadrature.hpp"

#include <Eigen/Core>

#include <memory>
#include <string>
#include <vector>

namespace mollifem {

/// Smallest order r >= 1 with a non-vanishing moment, for a shape of unit mass.
/// Throws NotAProbabilityWeight when the mass is not 1, OrderCapExceeded when
/// every moment up to the cap vanishes.
int detect_order(const PiecewisePoly& shape, int cap = 10);

/// A compactly supported piecewise-polynomial smoothing weight of unit mass.
/// The regularisation order s_r is detected from its moments on construction.
class Kernel {
public:
    static Kernel from_shape(PiecewisePoly shape);

    /// Indicator of [0, 1]; uncentred, order 1.
    static Kernel uniform_right();
    /// (1/2) times the indicator of [-1, 1]; symmetric, order 2.
    static Kernel uniform_symmetric();

    const PiecewisePoly& shape() const { return shape_; }
    int order() const { return s_r_; }

    /// The rescaled kernel K_beta(x) = K(x / beta) / beta.
    PiecewisePoly scaled(double beta) const;

private:
    Kernel(PiecewisePoly shape, int s_r) : shape_(std::move(shape)), s_r_(s_r) {}
    PiecewisePoly shape_;
    int s_r_;
};

enum class KernelKind { K, H };

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);
Kernel make_kernel(KernelKind kind);

/// Exact integral of x^r K(x) dx.
double moment(const Kernel& kernel, int r);

/// Closed-form K_beta * phi_i, supported on the sum of the two supports.
PiecewisePoly convolve_basis(const Kernel& kernel, double beta, const FEBasis& basis, int i);

/// Composite-Simpson estimate of (K_beta * g)(x) for a scalar g supported on
/// [0, 1]; the integration window is the intersection of the supports, so the
/// kernel's own jumps sit on the window ends. Independent of the closed form.
template <class F>
double convolve_oracle(const Kernel& kernel, double beta, F&& g, double x, long m)
{
    if (!(beta > 0.0))
        throw ValidationError("convolve_oracle: beta must be positive");
    const double lo = std::max(0.0, x - beta * kernel.shape().support_hi());
    const double hi = std::min(1.0, x - beta * kernel.shape().support_lo());
    if (!(hi > lo))
        return 0.0;
    const PiecewisePoly kb = kernel.scaled(beta);
    // The kernel jumps exactly at the window ends; nudge the endpoint samples
    // strictly inside so rounding in x - y cannot land them on the wrong side.
    const double margin = (hi - lo) * 1e-12;
    auto integrand = [&](double y) {
        const double yy = std::min(std::max(y, lo + margin), hi - margin);
        return kb(x - yy) * g(yy);
    };
    return simpson(integrand, GridSpec{m, lo, hi});
}

/// All mollified basis functions for one (basis, kernel, beta) triple. One
/// convolution is computed per shape class and translated to each node.
class MollifiedBasis {
public:
    MollifiedBasis(const FEBasis& basis, const Kernel& kernel, double beta);

    const FEBasis& basis() const { return basis_; }
    double beta() const { return beta_; }

    double eval(int i, double x) const;
    PiecewisePoly poly(int i) const;

    /// Exact L2(R) norms of the mollified basis functions.
    Eigen::VectorXd norms() const;

    int num_classes() const { return static_cast<int>(class_polys_.size()); }
    int class_of(int i) const { return basis_.class_of(i); }
    /// Convolved class shape, node at the origin.
    const PiecewisePoly& class_poly(int cls) const { return class_polys_[static_cast<std::size_t>(cls)]; }

    std::pair<int, int> active_range(double x) const;

private:
    FEBasis basis_;
    Kernel kernel_;
    double beta_;
    std::vector<PiecewisePoly> class_polys_;
    double support_radius_;
};

/// Shared, idempotently populated cache of mollified bases; the same closed
/// forms are reused across every Monte Carlo draw.
std::shared_ptr<const MollifiedBasis> mollified_basis_cache(const FEBasis& basis,
                                                            const Kernel& kernel, double beta);

/// Sum of z_i (K_beta * phi_i)(x); beta = 0 falls back to plain reconstruction.
double mollified_reconstruct(const FEBasis& basis, const NodalVector& z, const Kernel& kernel,
                             double beta, double x);

/// Exact L2(R) norms of the K_beta * phi_i.
Eigen::VectorXd mollified_norms(const FEBasis& basis, const Kernel& kernel, double beta);

} // namespace mollifem

#endif

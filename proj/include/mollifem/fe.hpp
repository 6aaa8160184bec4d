#ifndef MOLLIFEM_FE_HPP
#define MOLLIFEM_FE_HPP

#include "mollifem/errors.hpp"
#include "mollifem/piecewise_poly.hpp"

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace mollifem {

enum class Family { P1, P2 };

std::string to_string(Family family);
Family family_from_string(const std::string& name);

/// Uniform nodal design on [0, 1]. For P1 the mesh parameter is h = 1/(n-1)
/// and nodes sit at i*h; for P2 (n odd) it is h = 2/(n-1) and nodes sit at
/// i*h/2, alternating element vertices and midpoints.
struct Design {
    Family family = Family::P1;
    int n = 0;
    double h = 0.0;
    Eigen::VectorXd nodes;
};

Design build_design(Family family, int n);

using NodalVector = Eigen::VectorXd;

/// Values of f at the design nodes.
NodalVector sample(const std::function<double(double)>& f, const Design& design);

/// Nodal Lagrange basis. Every basis function is a translate of one of a few
/// shape classes (boundary/interior, and for P2 vertex/midpoint), which the
/// rest of the library exploits for caching.
class FEBasis {
public:
    FEBasis(Family family, int n);

    const Design& design() const { return design_; }
    Family family() const { return design_.family; }
    int size() const { return design_.n; }
    int approximation_order() const { return s_a_; }
    double node_spacing() const { return spacing_; }

    double eval(int i, double x) const;

    /// Exact piecewise-polynomial form of basis function i (restricted to [0,1]).
    PiecewisePoly basis_poly(int i) const;

    int num_classes() const { return static_cast<int>(class_polys_.size()); }
    int class_of(int i) const;
    /// Shape of a class, with the node translated to the origin.
    const PiecewisePoly& class_poly(int cls) const { return class_polys_[static_cast<std::size_t>(cls)]; }

    /// Index range [lo, hi] of basis functions whose support can contain x.
    std::pair<int, int> active_range(double x, double extra_radius = 0.0) const;

private:
    Design design_;
    int s_a_;
    double spacing_;
    std::vector<PiecewisePoly> class_polys_;
    std::vector<int> class_of_;
};

/// Sum of z_i phi_i(x); only the O(1) bases covering x are evaluated.
double reconstruct(const FEBasis& basis, const NodalVector& z, double x);

/// Exact L2(0,1) norms of the basis functions.
Eigen::VectorXd basis_l2_norms(const FEBasis& basis);

} // namespace mollifem

#endif

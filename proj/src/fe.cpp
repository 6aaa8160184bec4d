#include "mollifem/fe.hpp"

#include <algorithm>
#include <cmath>

namespace mollifem {

std::string to_string(Family family)
{
    return family == Family::P1 ? "P1" : "P2";
}

Family family_from_string(const std::string& name)
{
    if (name == "P1" || name == "p1")
        return Family::P1;
    if (name == "P2" || name == "p2")
        return Family::P2;
    throw ValidationError("unknown finite-element family '" + name + "' (expected P1 or P2)");
}

Design build_design(Family family, int n)
{
    if (n < 3)
        throw ValidationError("build_design: need at least 3 nodes, got " + std::to_string(n));
    if (family == Family::P2 && n % 2 == 0)
        throw EvenNodeCount("build_design: P2 requires an odd node count, got " + std::to_string(n));

    Design d;
    d.family = family;
    d.n = n;
    d.h = (family == Family::P1) ? 1.0 / (n - 1) : 2.0 / (n - 1);
    const double spacing = 1.0 / (n - 1);
    d.nodes.resize(n);
    for (int i = 0; i < n; ++i)
        d.nodes[i] = i * spacing;
    d.nodes[n - 1] = 1.0;
    return d;
}

NodalVector sample(const std::function<double(double)>& f, const Design& design)
{
    NodalVector v(design.n);
    for (int i = 0; i < design.n; ++i)
        v[i] = f(design.nodes[i]);
    return v;
}

namespace {

// Hat shape (1 - |z|) on [-1,1] in mesh units, as node-relative pieces.
PiecewisePoly p1_interior(double h)
{
    Eigen::VectorXd up(2), down(2);
    up << 0.0, 1.0 / h;
    down << 1.0, -1.0 / h;
    return PiecewisePoly({-h, 0.0, h}, {up, down});
}

PiecewisePoly p1_left(double h)
{
    Eigen::VectorXd down(2);
    down << 1.0, -1.0 / h;
    return PiecewisePoly({0.0, h}, {down});
}

PiecewisePoly p1_right(double h)
{
    Eigen::VectorXd up(2);
    up << 0.0, 1.0 / h;
    return PiecewisePoly({-h, 0.0}, {up});
}

// Vertex shape (1 - |z|)(1 - 2|z|) on [-1,1] in units of h.
// Right half in local t from the node: 1 - 3t/h + 2t^2/h^2.
// Left half in local t from -h:            -t/h + 2t^2/h^2.
Eigen::VectorXd p2_vertex_right(double h)
{
    Eigen::VectorXd c(3);
    c << 1.0, -3.0 / h, 2.0 / (h * h);
    return c;
}

Eigen::VectorXd p2_vertex_left(double h)
{
    Eigen::VectorXd c(3);
    c << 0.0, -1.0 / h, 2.0 / (h * h);
    return c;
}

PiecewisePoly p2_vertex_interior(double h)
{
    return PiecewisePoly({-h, 0.0, h}, {p2_vertex_left(h), p2_vertex_right(h)});
}

PiecewisePoly p2_vertex_boundary_left(double h)
{
    return PiecewisePoly({0.0, h}, {p2_vertex_right(h)});
}

PiecewisePoly p2_vertex_boundary_right(double h)
{
    return PiecewisePoly({-h, 0.0}, {p2_vertex_left(h)});
}

// Midpoint bubble (1 - 4z^2) on [-1/2, 1/2] in units of h; in local t from
// -h/2 this is 4t/h - 4t^2/h^2.
PiecewisePoly p2_midpoint(double h)
{
    Eigen::VectorXd c(3);
    c << 0.0, 4.0 / h, -4.0 / (h * h);
    return PiecewisePoly({-0.5 * h, 0.5 * h}, {c});
}

} // namespace

FEBasis::FEBasis(Family family, int n) : design_(build_design(family, n))
{
    s_a_ = (family == Family::P1) ? 2 : 3;
    spacing_ = 1.0 / (n - 1);

    const double h = design_.h;
    class_of_.assign(static_cast<std::size_t>(n), 0);
    if (family == Family::P1) {
        class_polys_ = {p1_left(h), p1_interior(h), p1_right(h)};
        for (int i = 0; i < n; ++i)
            class_of_[static_cast<std::size_t>(i)] = (i == 0) ? 0 : (i == n - 1 ? 2 : 1);
    } else {
        class_polys_ = {p2_vertex_boundary_left(h), p2_midpoint(h), p2_vertex_interior(h),
                        p2_vertex_boundary_right(h)};
        for (int i = 0; i < n; ++i) {
            if (i == 0)
                class_of_[static_cast<std::size_t>(i)] = 0;
            else if (i == n - 1)
                class_of_[static_cast<std::size_t>(i)] = 3;
            else
                class_of_[static_cast<std::size_t>(i)] = (i % 2 == 1) ? 1 : 2;
        }
    }
}

int FEBasis::class_of(int i) const
{
    if (i < 0 || i >= design_.n)
        throw ValidationError("basis index " + std::to_string(i) + " out of range");
    return class_of_[static_cast<std::size_t>(i)];
}

double FEBasis::eval(int i, double x) const
{
    const PiecewisePoly& shape = class_polys_[static_cast<std::size_t>(class_of(i))];
    return shape(x - design_.nodes[i]);
}

PiecewisePoly FEBasis::basis_poly(int i) const
{
    const PiecewisePoly& shape = class_polys_[static_cast<std::size_t>(class_of(i))];
    return shape.shifted(design_.nodes[i]);
}

std::pair<int, int> FEBasis::active_range(double x, double extra_radius) const
{
    const double radius = design_.h + extra_radius;
    int lo = static_cast<int>(std::ceil((x - radius) / spacing_));
    int hi = static_cast<int>(std::floor((x + radius) / spacing_));
    lo = std::max(lo, 0);
    hi = std::min(hi, design_.n - 1);
    return {lo, hi};
}

double reconstruct(const FEBasis& basis, const NodalVector& z, double x)
{
    if (z.size() != basis.size())
        throw ValidationError("reconstruct: nodal vector length " + std::to_string(z.size()) +
                              " does not match design size " + std::to_string(basis.size()));
    auto [lo, hi] = basis.active_range(x);
    double v = 0.0;
    for (int i = lo; i <= hi; ++i)
        v += z[i] * basis.eval(i, x);
    return v;
}

Eigen::VectorXd basis_l2_norms(const FEBasis& basis)
{
    std::vector<double> class_norm(static_cast<std::size_t>(basis.num_classes()));
    for (int c = 0; c < basis.num_classes(); ++c)
        class_norm[static_cast<std::size_t>(c)] = std::sqrt(basis.class_poly(c).squared_l2());
    Eigen::VectorXd out(basis.size());
    for (int i = 0; i < basis.size(); ++i)
        out[i] = class_norm[static_cast<std::size_t>(basis.class_of(i))];
    return out;
}

} // namespace mollifem

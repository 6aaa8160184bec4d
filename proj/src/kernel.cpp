#include "mollifem/kernel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace mollifem {

int detect_order(const PiecewisePoly& shape, int cap)
{
    const double mass = shape.moment(0);
    if (std::abs(mass - 1.0) > 1e-12)
        throw NotAProbabilityWeight("kernel mass is " + std::to_string(mass) + ", expected 1");
    for (int r = 1; r <= cap; ++r)
        if (std::abs(shape.moment(r)) > 1e-8)
            return r;
    throw OrderCapExceeded("all kernel moments up to order " + std::to_string(cap) + " vanish");
}

Kernel Kernel::from_shape(PiecewisePoly shape)
{
    const int s_r = detect_order(shape);
    return Kernel(std::move(shape), s_r);
}

Kernel Kernel::uniform_right()
{
    return from_shape(PiecewisePoly::constant(0.0, 1.0, 1.0));
}

Kernel Kernel::uniform_symmetric()
{
    return from_shape(PiecewisePoly::constant(-1.0, 1.0, 0.5));
}

PiecewisePoly Kernel::scaled(double beta) const
{
    if (!(beta > 0.0))
        throw ValidationError("Kernel::scaled: beta must be positive");
    return shape_.scaled(beta, 1.0 / beta);
}

std::string to_string(KernelKind kind)
{
    return kind == KernelKind::K ? "K" : "H";
}

KernelKind kernel_kind_from_string(const std::string& name)
{
    if (name == "K" || name == "k")
        return KernelKind::K;
    if (name == "H" || name == "h")
        return KernelKind::H;
    throw ValidationError("unknown kernel '" + name + "' (expected K or H)");
}

Kernel make_kernel(KernelKind kind)
{
    return kind == KernelKind::K ? Kernel::uniform_right() : Kernel::uniform_symmetric();
}

double moment(const Kernel& kernel, int r)
{
    return kernel.shape().moment(r);
}

PiecewisePoly convolve_basis(const Kernel& kernel, double beta, const FEBasis& basis, int i)
{
    if (!(beta > 0.0))
        throw ValidationError("convolve_basis: beta must be positive (beta = 0 is the identity)");
    return convolve(kernel.scaled(beta), basis.basis_poly(i));
}

MollifiedBasis::MollifiedBasis(const FEBasis& basis, const Kernel& kernel, double beta)
    : basis_(basis), kernel_(kernel), beta_(beta)
{
    if (!(beta > 0.0))
        throw ValidationError("MollifiedBasis: beta must be positive");
    const PiecewisePoly kb = kernel.scaled(beta);
    class_polys_.reserve(static_cast<std::size_t>(basis.num_classes()));
    for (int c = 0; c < basis.num_classes(); ++c)
        class_polys_.push_back(convolve(kb, basis.class_poly(c)));
    support_radius_ = 0.0;
    for (const auto& p : class_polys_)
        support_radius_ = std::max({support_radius_, std::abs(p.support_lo()), std::abs(p.support_hi())});
}

double MollifiedBasis::eval(int i, double x) const
{
    return class_polys_[static_cast<std::size_t>(basis_.class_of(i))](x - basis_.design().nodes[i]);
}

PiecewisePoly MollifiedBasis::poly(int i) const
{
    return class_polys_[static_cast<std::size_t>(basis_.class_of(i))].shifted(basis_.design().nodes[i]);
}

Eigen::VectorXd MollifiedBasis::norms() const
{
    std::vector<double> class_norm(class_polys_.size());
    for (std::size_t c = 0; c < class_polys_.size(); ++c)
        class_norm[c] = std::sqrt(class_polys_[c].squared_l2());
    Eigen::VectorXd out(basis_.size());
    for (int i = 0; i < basis_.size(); ++i)
        out[i] = class_norm[static_cast<std::size_t>(basis_.class_of(i))];
    return out;
}

std::pair<int, int> MollifiedBasis::active_range(double x) const
{
    const double spacing = basis_.node_spacing();
    int lo = static_cast<int>(std::ceil((x - support_radius_) / spacing)) - 1;
    int hi = static_cast<int>(std::floor((x + support_radius_) / spacing)) + 1;
    return {std::max(lo, 0), std::min(hi, basis_.size() - 1)};
}

namespace {

struct CacheKey {
    Family family;
    int n;
    double beta;
    std::vector<double> kernel_breaks;

    bool operator<(const CacheKey& o) const
    {
        return std::tie(family, n, beta, kernel_breaks) <
               std::tie(o.family, o.n, o.beta, o.kernel_breaks);
    }
};

CacheKey make_key(const FEBasis& basis, const Kernel& kernel, double beta)
{
    CacheKey key;
    key.family = basis.family();
    key.n = basis.size();
    key.beta = beta;
    key.kernel_breaks = kernel.shape().breakpoints();
    for (const auto& piece : kernel.shape().pieces())
        for (Eigen::Index k = 0; k < piece.size(); ++k)
            key.kernel_breaks.push_back(piece[k]);
    return key;
}

std::mutex cache_mutex;
std::map<CacheKey, std::shared_ptr<const MollifiedBasis>> cache; // NOLINT

} // namespace

std::shared_ptr<const MollifiedBasis> mollified_basis_cache(const FEBasis& basis,
                                                            const Kernel& kernel, double beta)
{
    const CacheKey key = make_key(basis, kernel, beta);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
    }
    auto built = std::make_shared<const MollifiedBasis>(basis, kernel, beta);
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto [it, inserted] = cache.emplace(key, std::move(built));
    return it->second;
}

double mollified_reconstruct(const FEBasis& basis, const NodalVector& z, const Kernel& kernel,
                             double beta, double x)
{
    if (z.size() != basis.size())
        throw ValidationError("mollified_reconstruct: nodal vector length mismatch");
    if (beta == 0.0)
        return reconstruct(basis, z, x);
    auto mb = mollified_basis_cache(basis, kernel, beta);
    auto [lo, hi] = mb->active_range(x);
    double v = 0.0;
    for (int i = lo; i <= hi; ++i)
        v += z[i] * mb->eval(i, x);
    return v;
}

Eigen::VectorXd mollified_norms(const FEBasis& basis, const Kernel& kernel, double beta)
{
    if (!(beta > 0.0))
        throw ValidationError("mollified_norms: beta must be positive");
    return mollified_basis_cache(basis, kernel, beta)->norms();
}

} // namespace mollifem

#include "mollifem/experiment.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace mollifem {

std::string to_string(Strategy strategy)
{
    switch (strategy) {
    case Strategy::Regularise: return "regularise";
    case Strategy::DontRegularise: return "dont_regularise";
    case Strategy::EitherRegularisePreferred: return "either_regularise_preferred";
    }
    return "?";
}

namespace {

void require_positive_orders(int s_a, int s_r, int d)
{
    if (s_a < 1 || s_r < 1 || d < 1)
        throw ValidationError("orders s_a, s_r and dimension d must be positive");
}

} // namespace

double beta_star(double sigma, double h, int s_r, int d)
{
    if (!(sigma > 0.0) || !(h > 0.0))
        throw ValidationError("beta_star: sigma and h must be positive");
    require_positive_orders(1, s_r, d);
    const double denom = 2.0 * s_r + d;
    return std::pow(sigma, 2.0 / denom) * std::pow(h, d / denom);
}

double lambda_max(int s_a, int s_r, int d)
{
    require_positive_orders(s_a, s_r, d);
    return s_a + 0.5 * d * (static_cast<double>(s_a) / s_r - 1.0);
}

std::pair<double, RateBound> predicted_gamma(const RegimeParams& p)
{
    require_positive_orders(p.s_a, p.s_r, p.d);
    if (p.lambda < 0.0)
        throw ValidationError("predicted_gamma: lambda must be nonnegative");
    const double gamma_noreg = std::min(p.lambda, static_cast<double>(p.s_a)) / p.d;
    RateBound reg;
    if (p.lambda <= lambda_max(p.s_a, p.s_r, p.d)) {
        reg.value = (2.0 * p.lambda + p.d) / (2.0 * p.s_r + p.d) * p.s_r / p.d;
        reg.lower_bound_only = false;
    } else {
        reg.value = static_cast<double>(p.s_a) / p.d;
        reg.lower_bound_only = true;
    }
    return {gamma_noreg, reg};
}

Strategy recommend_strategy(const RegimeParams& p)
{
    require_positive_orders(p.s_a, p.s_r, p.d);
    if (p.s_a <= p.s_r)
        return p.lambda < p.s_a ? Strategy::Regularise : Strategy::EitherRegularisePreferred;
    if (p.lambda < p.s_r)
        return Strategy::Regularise;
    if (p.lambda == static_cast<double>(p.s_r))
        return Strategy::EitherRegularisePreferred; // rates coincide on the boundary
    if (p.lambda < lambda_max(p.s_a, p.s_r, p.d))
        return Strategy::DontRegularise;
    return Strategy::EitherRegularisePreferred;
}

double damped_sine_target(double x)
{
    const double s = std::sin(4.0 * x);
    const double w = 1.0 - x;
    return w * w * s * s;
}

double analytic_noreg_error(const std::function<double(double)>& f, const FEBasis& basis,
                            double sigma, const GridSpec& grid)
{
    const double norm_sq_sum = basis_l2_norms(basis).squaredNorm();
    const NodalVector z = sample(f, basis.design());
    const double bias =
        l2_distance([&](double x) { return reconstruct(basis, z, x); }, f, grid);
    return std::sqrt(sigma * sigma * norm_sq_sum + bias * bias);
}

namespace {

// Node-relative shape classes of the estimator basis: the plain Lagrange
// functions when beta = 0, the mollified ones otherwise.
struct EffectiveClasses {
    std::vector<PiecewisePoly> polys;
    const FEBasis* basis = nullptr;

    int class_of(int i) const { return basis->class_of(i); }
};

EffectiveClasses effective_classes(const FEBasis& basis, const Kernel* kernel, double beta)
{
    EffectiveClasses ec;
    ec.basis = &basis;
    if (kernel != nullptr && beta > 0.0) {
        auto mb = mollified_basis_cache(basis, *kernel, beta);
        for (int c = 0; c < mb->num_classes(); ++c)
            ec.polys.push_back(mb->class_poly(c));
    } else {
        for (int c = 0; c < basis.num_classes(); ++c)
            ec.polys.push_back(basis.class_poly(c));
    }
    return ec;
}

ErrorEstimate summarise(const std::vector<double>& sq_errors)
{
    ErrorEstimate est;
    est.draws = static_cast<long>(sq_errors.size());
    double mean = 0.0;
    for (double v : sq_errors)
        mean += v;
    mean /= static_cast<double>(est.draws);
    est.mean_sq = std::max(0.0, mean);
    if (est.draws > 1) {
        double ss = 0.0;
        for (double v : sq_errors)
            ss += (v - mean) * (v - mean);
        const double sample_sd = std::sqrt(ss / static_cast<double>(est.draws - 1));
        est.std_error = sample_sd / std::sqrt(static_cast<double>(est.draws));
    }
    return est;
}

// Simpson weight of grid index g (times 3/h_S).
inline double simpson_pattern(long g, long m)
{
    if (g == 0 || g == m)
        return 1.0;
    return (g % 2 == 1) ? 4.0 : 2.0;
}

// sum over g in [g0, g1] of pattern(g) * A[g - baseA] * B[g - baseB],
// split into the odd (weight 4) and even (weight 2) strides, with the two
// endpoint weights fixed up afterwards.
double pattern_dot(const Eigen::ArrayXd& A, long baseA, const Eigen::ArrayXd& B, long baseB,
                   long g0, long g1, long m)
{
    if (g1 < g0)
        return 0.0;
    using Strided = Eigen::Map<const Eigen::ArrayXd, 0, Eigen::InnerStride<2>>;
    double total = 0.0;
    for (int parity = 0; parity < 2; ++parity) {
        const long start = g0 + ((g0 % 2 + 2) % 2 == parity ? 0 : 1);
        if (start > g1)
            continue;
        const long count = (g1 - start) / 2 + 1;
        Strided a(A.data() + (start - baseA), count);
        Strided b(B.data() + (start - baseB), count);
        const double w = (parity == 1) ? 4.0 : 2.0;
        total += w * (a * b).sum();
    }
    if (g0 <= 0 && 0 <= g1)
        total -= A[-baseA] * B[-baseB];
    if (g0 <= m && m <= g1)
        total -= A[m - baseA] * B[m - baseB];
    return total;
}

struct GridStencils {
    long m = 0;
    double h_s = 0.0;
    long step = 0; // grid indices per node spacing
    struct ClassStencil {
        long k_lo = 0; // first grid offset relative to the node
        Eigen::ArrayXd values;
    };
    std::vector<ClassStencil> stencils;

    long base(int i, int cls) const { return static_cast<long>(i) * step + stencils[static_cast<std::size_t>(cls)].k_lo; }
    long last(int i, int cls) const
    {
        return base(i, cls) + stencils[static_cast<std::size_t>(cls)].values.size() - 1;
    }
};

bool grid_aligned(const FEBasis& basis, const GridSpec& grid, long& step)
{
    if (grid.a != 0.0 || grid.b != 1.0)
        return false;
    const double ratio = basis.node_spacing() * static_cast<double>(grid.m);
    step = std::lround(ratio);
    return step >= 1 && std::abs(ratio - static_cast<double>(step)) < 1e-9;
}

GridStencils build_stencils(const EffectiveClasses& ec, const GridSpec& grid, long step)
{
    GridStencils gs;
    gs.m = grid.m;
    gs.h_s = (grid.b - grid.a) / static_cast<double>(grid.m);
    gs.step = step;
    for (const auto& pp : ec.polys) {
        GridStencils::ClassStencil st;
        st.k_lo = static_cast<long>(std::floor(pp.support_lo() / gs.h_s)) - 1;
        const long k_hi = static_cast<long>(std::ceil(pp.support_hi() / gs.h_s)) + 1;
        st.values.resize(k_hi - st.k_lo + 1);
        for (long k = st.k_lo; k <= k_hi; ++k)
            st.values[k - st.k_lo] = pp(static_cast<double>(k) * gs.h_s);
        gs.stencils.push_back(std::move(st));
    }
    return gs;
}

// Banded Simpson Gram matrix G(delta, i) = <psi_i, psi_{i+delta}>.
struct GramBand {
    Eigen::MatrixXd band; // (bw + 1) x n
    long bw = 0;
};

GramBand build_gram(const EffectiveClasses& ec, const GridStencils& gs, int n)
{
    long widest = 0;
    long k_lo_min = 0, k_hi_max = 0;
    for (const auto& st : gs.stencils) {
        k_lo_min = std::min(k_lo_min, st.k_lo);
        k_hi_max = std::max(k_hi_max, st.k_lo + st.values.size() - 1);
    }
    widest = (k_hi_max - k_lo_min) / gs.step + 1;

    GramBand gram;
    gram.bw = std::min<long>(widest, n - 1);
    gram.band = Eigen::MatrixXd::Zero(gram.bw + 1, n);
    const double scale = gs.h_s / 3.0;
    for (int i = 0; i < n; ++i) {
        const int ci = ec.class_of(i);
        const auto& si = gs.stencils[static_cast<std::size_t>(ci)];
        for (long delta = 0; delta <= gram.bw && i + delta < n; ++delta) {
            const int j = i + static_cast<int>(delta);
            const int cj = ec.class_of(j);
            const auto& sj = gs.stencils[static_cast<std::size_t>(cj)];
            const long g0 = std::max({gs.base(i, ci), gs.base(j, cj), 0L});
            const long g1 = std::min({gs.last(i, ci), gs.last(j, cj), gs.m});
            if (g1 < g0)
                continue;
            gram.band(delta, i) = scale * pattern_dot(si.values, gs.base(i, ci), sj.values,
                                                      gs.base(j, cj), g0, g1, gs.m);
        }
    }
    return gram;
}

double quadratic_form(const GramBand& gram, const Eigen::VectorXd& xi)
{
    const long n = xi.size();
    double q = 0.0;
    for (long delta = 0; delta <= gram.bw; ++delta) {
        const long len = n - delta;
        if (len <= 0)
            break;
        const double s = (xi.head(len).array() * xi.tail(len).array() *
                          gram.band.row(delta).head(len).transpose().array())
                             .sum();
        q += (delta == 0) ? s : 2.0 * s;
    }
    return q;
}

std::vector<double> squared_errors_fast(const std::function<double(double)>& f,
                                        const FEBasis& basis, const EffectiveClasses& ec,
                                        const NoiseModel& model, long draws, const GridSpec& grid,
                                        long step)
{
    const int n = basis.size();
    const GridStencils gs = build_stencils(ec, grid, step);
    const GramBand gram = build_gram(ec, gs, n);

    // Noise-free estimator minus target on the grid.
    const NodalVector z0 = sample(f, basis.design());
    Eigen::ArrayXd b = Eigen::ArrayXd::Zero(gs.m + 1);
    for (int i = 0; i < n; ++i) {
        const int c = ec.class_of(i);
        const auto& st = gs.stencils[static_cast<std::size_t>(c)];
        const long g0 = std::max(gs.base(i, c), 0L);
        const long g1 = std::min(gs.last(i, c), gs.m);
        if (g1 < g0)
            continue;
        b.segment(g0, g1 - g0 + 1) += z0[i] * st.values.segment(g0 - gs.base(i, c), g1 - g0 + 1);
    }
    for (long g = 0; g <= gs.m; ++g)
        b[g] -= f(static_cast<double>(g) * gs.h_s);

    const double scale = gs.h_s / 3.0;
    double bias_sq = 0.0;
    for (long g = 0; g <= gs.m; ++g)
        bias_sq += simpson_pattern(g, gs.m) * b[g] * b[g];
    bias_sq *= scale;

    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) {
        const int c = ec.class_of(i);
        const auto& st = gs.stencils[static_cast<std::size_t>(c)];
        const long g0 = std::max(gs.base(i, c), 0L);
        const long g1 = std::min(gs.last(i, c), gs.m);
        u[i] = (g1 < g0) ? 0.0
                         : scale * pattern_dot(b, 0, st.values, gs.base(i, c), g0, g1, gs.m);
    }

    // || b + sigma N ||^2 expanded on the quadrature grid: the grid norm of the
    // per-draw error equals bias + 2 sigma <b, N> + sigma^2 <N, N> exactly.
    std::vector<double> sq(static_cast<std::size_t>(draws));
    const double sigma = model.sigma;
    for (long d = 0; d < draws; ++d) {
        const Eigen::VectorXd xi = gaussian_vector(model, n, static_cast<std::uint64_t>(d));
        const double cross = xi.dot(u);
        const double quad = quadratic_form(gram, xi);
        sq[static_cast<std::size_t>(d)] =
            std::max(0.0, bias_sq + 2.0 * sigma * cross + sigma * sigma * quad);
    }
    return sq;
}

std::vector<double> squared_errors_direct(const std::function<double(double)>& f,
                                          const FEBasis& basis, const EffectiveClasses& ec,
                                          const NoiseModel& model, long draws,
                                          const GridSpec& grid)
{
    const int n = basis.size();
    const long m = grid.m;
    const double h_s = (grid.b - grid.a) / static_cast<double>(m);

    Eigen::ArrayXd f_vals(m + 1);
    for (long g = 0; g <= m; ++g)
        f_vals[g] = f(grid.a + static_cast<double>(g) * h_s);

    const NodalVector z0 = sample(f, basis.design());
    std::vector<double> sq(static_cast<std::size_t>(draws));
    for (long d = 0; d < draws; ++d) {
        const Eigen::VectorXd xi = gaussian_vector(model, n, static_cast<std::uint64_t>(d));
        const NodalVector z = z0 + model.sigma * xi;
        Eigen::ArrayXd est = Eigen::ArrayXd::Zero(m + 1);
        for (int i = 0; i < n; ++i) {
            const auto& pp = ec.polys[static_cast<std::size_t>(ec.class_of(i))];
            const double xi_node = basis.design().nodes[i];
            const long g0 = std::max<long>(
                0, static_cast<long>(std::ceil((xi_node + pp.support_lo() - grid.a) / h_s)));
            const long g1 = std::min<long>(
                m, static_cast<long>(std::floor((xi_node + pp.support_hi() - grid.a) / h_s)));
            for (long g = g0; g <= g1; ++g)
                est[g] += z[i] * pp(grid.a + static_cast<double>(g) * h_s - xi_node);
        }
        double total = 0.0;
        for (long g = 0; g <= m; ++g) {
            const double e = est[g] - f_vals[g];
            total += simpson_pattern(g, m) * e * e;
        }
        sq[static_cast<std::size_t>(d)] = total * h_s / 3.0;
    }
    return sq;
}

void check_mc_arguments(const Kernel* kernel, double beta, long draws, const GridSpec& grid)
{
    validate(grid);
    if (draws < 1)
        throw ValidationError("mc_error: need at least one draw");
    if (beta < 0.0)
        throw ValidationError("mc_error: beta must be nonnegative");
    if (kernel == nullptr && beta > 0.0)
        throw ValidationError("mc_error: beta > 0 requires a kernel");
}

} // namespace

ErrorEstimate mc_error(const std::function<double(double)>& f, const FEBasis& basis,
                       const Kernel* kernel, double beta, const NoiseModel& model, long draws,
                       const GridSpec& grid)
{
    check_mc_arguments(kernel, beta, draws, grid);
    const EffectiveClasses ec = effective_classes(basis, kernel, beta);
    long step = 0;
    if (grid_aligned(basis, grid, step))
        return summarise(squared_errors_fast(f, basis, ec, model, draws, grid, step));
    return summarise(squared_errors_direct(f, basis, ec, model, draws, grid));
}

namespace detail {

ErrorEstimate mc_error_direct(const std::function<double(double)>& f, const FEBasis& basis,
                              const Kernel* kernel, double beta, const NoiseModel& model,
                              long draws, const GridSpec& grid)
{
    check_mc_arguments(kernel, beta, draws, grid);
    const EffectiveClasses ec = effective_classes(basis, kernel, beta);
    return summarise(squared_errors_direct(f, basis, ec, model, draws, grid));
}

} // namespace detail

} // namespace mollifem

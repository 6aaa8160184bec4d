#include "mollifem/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>

namespace mollifem {

namespace poly {

double eval(const Eigen::VectorXd& c, double t)
{
    double v = 0.0;
    for (Eigen::Index k = c.size() - 1; k >= 0; --k)
        v = v * t + c[k];
    return v;
}

Eigen::VectorXd multiply(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size() + b.size() - 1);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

Eigen::VectorXd add(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(std::max(a.size(), b.size()));
    out.head(a.size()) = a;
    out.head(b.size()) += b;
    return out;
}

Eigen::VectorXd antiderivative(const Eigen::VectorXd& c)
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(c.size() + 1);
    for (Eigen::Index k = 0; k < c.size(); ++k)
        out[k + 1] = c[k] / static_cast<double>(k + 1);
    return out;
}

Eigen::VectorXd recentre(const Eigen::VectorXd& c, double delta)
{
    // p(t + delta) via the binomial theorem; degrees here are single digit.
    Eigen::VectorXd out = Eigen::VectorXd::Zero(c.size());
    for (Eigen::Index j = 0; j < c.size(); ++j) {
        double binom = 1.0; // C(j, k) * delta^(j-k), built from k = j downwards
        double pow_delta = 1.0;
        for (Eigen::Index k = j; k >= 0; --k) {
            out[k] += c[j] * binom * pow_delta;
            if (k > 0) {
                binom = binom * static_cast<double>(k) / static_cast<double>(j - k + 1);
                pow_delta *= delta;
            }
        }
    }
    return out;
}

} // namespace poly

namespace {

double binomial(int n, int k)
{
    double v = 1.0;
    for (int i = 1; i <= k; ++i)
        v = v * static_cast<double>(n - k + i) / static_cast<double>(i);
    return v;
}

Eigen::VectorXd normalised_coeffs(Eigen::VectorXd c)
{
    if (c.size() == 0) {
        c.resize(1);
        c[0] = 0.0;
    }
    return c;
}

} // namespace

PiecewisePoly::PiecewisePoly(std::vector<double> breakpoints, std::vector<Eigen::VectorXd> pieces)
    : breaks_(std::move(breakpoints)), pieces_(std::move(pieces))
{
    if (breaks_.size() < 2)
        throw ValidationError("PiecewisePoly: need at least two breakpoints");
    if (pieces_.size() + 1 != breaks_.size())
        throw ValidationError("PiecewisePoly: piece count must be breakpoint count - 1");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (!(breaks_[i] < breaks_[i + 1]))
            throw ValidationError("PiecewisePoly: breakpoints must be strictly increasing");
    for (auto& c : pieces_)
        c = normalised_coeffs(std::move(c));
}

PiecewisePoly PiecewisePoly::constant(double a, double b, double value)
{
    Eigen::VectorXd c(1);
    c[0] = value;
    return PiecewisePoly({a, b}, {c});
}

int PiecewisePoly::max_degree() const
{
    Eigen::Index d = 0;
    for (const auto& c : pieces_)
        d = std::max(d, c.size() - 1);
    return static_cast<int>(d);
}

std::size_t PiecewisePoly::piece_index(double x) const
{
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - breaks_.begin());
    if (i == 0)
        return 0;
    return std::min(i - 1, pieces_.size() - 1);
}

double PiecewisePoly::operator()(double x) const
{
    if (x < breaks_.front() || x > breaks_.back())
        return 0.0;
    const std::size_t i = piece_index(x);
    return poly::eval(pieces_[i], x - breaks_[i]);
}

double PiecewisePoly::integral() const
{
    return integral(breaks_.front(), breaks_.back());
}

double PiecewisePoly::integral(double a, double b) const
{
    double total = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double lo = std::max(a, breaks_[i]);
        const double hi = std::min(b, breaks_[i + 1]);
        if (hi <= lo)
            continue;
        const Eigen::VectorXd F = poly::antiderivative(pieces_[i]);
        total += poly::eval(F, hi - breaks_[i]) - poly::eval(F, lo - breaks_[i]);
    }
    return total;
}

double PiecewisePoly::moment(int r) const
{
    if (r < 0)
        throw ValidationError("moment: order must be nonnegative");
    double total = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double t0 = breaks_[i];
        const double w = breaks_[i + 1] - breaks_[i];
        const Eigen::VectorXd& c = pieces_[i];
        // integral over the piece of (t0 + u)^r p(u) du
        for (int j = 0; j <= r; ++j) {
            const double factor = binomial(r, j) * std::pow(t0, r - j);
            if (factor == 0.0)
                continue;
            double inner = 0.0;
            for (Eigen::Index k = 0; k < c.size(); ++k)
                inner += c[k] * std::pow(w, static_cast<double>(k + j + 1)) /
                         static_cast<double>(k + j + 1);
            total += factor * inner;
        }
    }
    return total;
}

double PiecewisePoly::squared_l2() const
{
    return squared_l2(breaks_.front(), breaks_.back());
}

double PiecewisePoly::squared_l2(double a, double b) const
{
    double total = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double lo = std::max(a, breaks_[i]);
        const double hi = std::min(b, breaks_[i + 1]);
        if (hi <= lo)
            continue;
        const Eigen::VectorXd F = poly::antiderivative(poly::multiply(pieces_[i], pieces_[i]));
        total += poly::eval(F, hi - breaks_[i]) - poly::eval(F, lo - breaks_[i]);
    }
    return total;
}

PiecewisePoly PiecewisePoly::shifted(double dx) const
{
    std::vector<double> breaks = breaks_;
    for (double& t : breaks)
        t += dx;
    return PiecewisePoly(std::move(breaks), pieces_);
}

PiecewisePoly PiecewisePoly::scaled(double arg_scale, double value_scale) const
{
    if (!(arg_scale > 0.0))
        throw ValidationError("scaled: argument scale must be positive");
    std::vector<double> breaks = breaks_;
    for (double& t : breaks)
        t *= arg_scale;
    std::vector<Eigen::VectorXd> pieces = pieces_;
    for (auto& c : pieces) {
        double inv_pow = value_scale;
        for (Eigen::Index k = 0; k < c.size(); ++k) {
            c[k] *= inv_pow;
            inv_pow /= arg_scale;
        }
    }
    return PiecewisePoly(std::move(breaks), std::move(pieces));
}

namespace {

// Bivariate polynomial in (s, u), stored as s-coefficient vectors per u power.
using Bivariate = std::vector<Eigen::VectorXd>;

Eigen::VectorXd subst_const(const Bivariate& A, double c)
{
    Eigen::VectorXd out(1);
    out[0] = 0.0;
    double pow_c = 1.0;
    for (const auto& row : A) {
        out = poly::add(out, row * pow_c);
        pow_c *= c;
    }
    return out;
}

Eigen::VectorXd subst_s(const Bivariate& A)
{
    Eigen::VectorXd out(1);
    out[0] = 0.0;
    for (std::size_t ku = 0; ku < A.size(); ++ku) {
        Eigen::VectorXd lifted = Eigen::VectorXd::Zero(A[ku].size() + static_cast<Eigen::Index>(ku));
        lifted.tail(A[ku].size()) = A[ku];
        out = poly::add(out, lifted);
    }
    return out;
}

Eigen::VectorXd subst_s_minus(const Bivariate& A, double w)
{
    Eigen::VectorXd out(1);
    out[0] = 0.0;
    Eigen::VectorXd pow_poly(1); // (s - w)^ku, built iteratively
    pow_poly[0] = 1.0;
    Eigen::VectorXd base(2);
    base[0] = -w;
    base[1] = 1.0;
    for (std::size_t ku = 0; ku < A.size(); ++ku) {
        if (ku > 0)
            pow_poly = poly::multiply(pow_poly, base);
        out = poly::add(out, poly::multiply(A[ku], pow_poly));
    }
    return out;
}

// Antiderivative in u of p(u) q(s - u), as a bivariate polynomial.
Bivariate pair_antiderivative(const Eigen::VectorXd& p, const Eigen::VectorXd& q)
{
    const Eigen::Index dp = p.size() - 1;
    const Eigen::Index dq = q.size() - 1;

    // B(s, u) = p(u) q(s - u)
    Bivariate B(static_cast<std::size_t>(dp + dq + 1),
                Eigen::VectorXd::Zero(dq + 1));
    for (Eigen::Index m = 0; m <= dq; ++m) {
        if (q[m] == 0.0)
            continue;
        for (Eigen::Index r = 0; r <= m; ++r) {
            const Eigen::Index ku = m - r;
            const double sign = (ku % 2 == 0) ? 1.0 : -1.0;
            const double term = q[m] * binomial(static_cast<int>(m), static_cast<int>(r)) * sign;
            for (Eigen::Index i = 0; i <= dp; ++i)
                B[static_cast<std::size_t>(ku + i)][r] += term * p[i];
        }
    }

    Bivariate A(B.size() + 1, Eigen::VectorXd::Zero(dq + 1));
    for (std::size_t ku = 0; ku < B.size(); ++ku)
        A[ku + 1] = B[ku] / static_cast<double>(ku + 1);
    return A;
}

std::vector<double> merged_sum_grid(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> sums;
    sums.reserve(a.size() * b.size());
    for (double x : a)
        for (double y : b)
            sums.push_back(x + y);
    std::sort(sums.begin(), sums.end());
    std::vector<double> grid;
    for (double t : sums) {
        if (grid.empty() || t - grid.back() > 1e-13 * std::max(1.0, std::abs(t)))
            grid.push_back(t);
    }
    return grid;
}

} // namespace

PiecewisePoly convolve(const PiecewisePoly& f, const PiecewisePoly& g)
{
    const std::vector<double> grid = merged_sum_grid(f.breakpoints(), g.breakpoints());
    if (grid.size() < 2)
        throw ValidationError("convolve: degenerate support (inputs too narrow to resolve)");

    std::vector<Eigen::VectorXd> cells(grid.size() - 1, Eigen::VectorXd::Zero(1));

    // Adds one segment of a pair convolution, expressed in s = x - pair_origin
    // on [seg_lo, seg_hi], onto every output cell it covers.
    auto deposit = [&](double pair_origin, double seg_lo, double seg_hi,
                       const Eigen::VectorXd& coeffs_in_s) {
        if (!(seg_hi - seg_lo > 1e-13 * std::max(1.0, std::abs(seg_hi))))
            return;
        auto it = std::upper_bound(grid.begin(), grid.end(), seg_lo);
        std::size_t l = (it == grid.begin()) ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
        for (; l + 1 < grid.size(); ++l) {
            const double mid = 0.5 * (grid[l] + grid[l + 1]);
            if (mid >= seg_hi)
                break;
            if (mid <= seg_lo)
                continue;
            cells[l] = poly::add(cells[l], poly::recentre(coeffs_in_s, grid[l] - pair_origin));
        }
    };

    const auto& fb = f.breakpoints();
    const auto& gb = g.breakpoints();
    for (std::size_t j = 0; j < f.pieces().size(); ++j) {
        const double wp = fb[j + 1] - fb[j];
        for (std::size_t k = 0; k < g.pieces().size(); ++k) {
            const double wq = gb[k + 1] - gb[k];
            const Bivariate A = pair_antiderivative(f.pieces()[j], g.pieces()[k]);

            const double p0 = fb[j] + gb[k];
            const double p1 = std::min(fb[j + 1] + gb[k], fb[j] + gb[k + 1]);
            const double p2 = std::max(fb[j + 1] + gb[k], fb[j] + gb[k + 1]);
            const double p3 = fb[j + 1] + gb[k + 1];

            // Integration limits in u are max(0, s - wq) and min(wp, s); on each
            // segment below both limits are either constant or affine in s, so
            // the segment value is a plain polynomial in s.
            const Eigen::VectorXd at_zero = subst_const(A, 0.0);
            const Eigen::VectorXd at_wp = subst_const(A, wp);
            const Eigen::VectorXd at_s = subst_s(A);
            const Eigen::VectorXd at_s_wq = subst_s_minus(A, wq);

            deposit(p0, p0, p1, poly::add(at_s, -at_zero));
            if (wp <= wq)
                deposit(p0, p1, p2, poly::add(at_wp, -at_zero));
            else
                deposit(p0, p1, p2, poly::add(at_s, -at_s_wq));
            deposit(p0, p2, p3, poly::add(at_wp, -at_s_wq));
        }
    }

    return PiecewisePoly(grid, std::move(cells));
}

} // namespace mollifem

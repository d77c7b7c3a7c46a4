#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavcov {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        abs_ += std::abs(x);
    }
    CompensatedSum& operator+=(double x)
    {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }
    double magnitude() const { return abs_; }  // sum of |terms|, for cancellation checks

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    double abs_ = 0.0;
};

struct QuadOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_intervals = 4000;
    // Length scale of the map x = a + scale * t / (1 - t) for an infinite upper limit.
    double scale = 1.0;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    int evaluations = 0;
    bool converged = true;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double partial, double error)
        : NumericalError(what), partial_(partial), error_(error)
    {
    }
    double partial() const { return partial_; }
    double error() const { return error_; }

private:
    double partial_;
    double error_;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (abscissae descending, last is 0).
inline constexpr std::array<double, 11> gk21_x{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> gk21_wk{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600567897965, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for gk21_x[1], [3], [5], [7], [9].
inline constexpr std::array<double, 5> g10_w{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b;
    double value, error;
};

template <class G>
Panel gk21(const G& g, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = g(center);
    double resk = fc * gk21_wk[10];
    double resg = 0.0;
    double resabs = std::abs(resk);
    std::array<double, 10> f1{}, f2{};
    for (int i = 0; i < 10; ++i) {
        const double dx = half * gk21_x[i];
        f1[i] = g(center - dx);
        f2[i] = g(center + dx);
        const double s = f1[i] + f2[i];
        resk += gk21_wk[i] * s;
        resabs += gk21_wk[i] * (std::abs(f1[i]) + std::abs(f2[i]));
        if (i % 2 == 1) resg += g10_w[i / 2] * s;
    }
    const double mean = 0.5 * resk;
    double resasc = gk21_wk[10] * std::abs(fc - mean);
    for (int i = 0; i < 10; ++i) resasc += gk21_wk[i] * (std::abs(f1[i] - mean) + std::abs(f2[i] - mean));
    const double ah = std::abs(half);
    double err = std::abs((resk - resg) * half);
    resasc *= ah;
    resabs *= ah;
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, resk * half, err};
}

}  // namespace detail

// 10-point Gauss-Legendre on [a,b]; exact for polynomials up to degree 19.
template <class F>
double gauss_legendre10(const F& f, double a, double b)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double dx = h * detail::gk21_x[2 * i + 1];
        s += detail::g10_w[i] * (f(c - dx) + f(c + dx));
    }
    return s * h;
}

// Globally adaptive Gauss-Kronrod over [points.front(), points.back()], with the
// interior points as forced breakpoints. The last point may be +infinity.
template <class F>
QuadResult integrate(const F& f, std::vector<double> points, const QuadOptions& opt = {})
{
    if (points.size() < 2) throw std::invalid_argument("integrate: need at least two points");
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i] <= points[i + 1]) || std::isinf(points[i]))
            throw std::invalid_argument("integrate: limits must be increasing");
    }
    points.erase(std::unique(points.begin(), points.end()), points.end());
    QuadResult res;
    if (points.size() < 2) return res;

    const bool infinite = std::isinf(points.back());
    const double origin = infinite ? points[points.size() - 2] : 0.0;
    const double scale = opt.scale;
    int evals = 0;

    // Panels on [origin, inf) are integrated in t-space, x = origin + scale*t/(1-t).
    auto eval = [&](double x) {
        ++evals;
        const double v = f(x);
        if (!std::isfinite(v)) throw QuadratureError("integrate: integrand not finite at x=" + std::to_string(x), 0.0, 0.0);
        return v;
    };
    auto mapped = [&](double t) {
        const double u = 1.0 - t;
        if (u <= 0.0) return 0.0;
        const double x = origin + scale * t / u;
        if (!std::isfinite(x)) return 0.0;
        const double v = eval(x);
        return v == 0.0 ? 0.0 : v * scale / (u * u);
    };
    struct Item {
        detail::Panel p;
        bool in_t;
    };
    auto run = [&](double a, double b, bool in_t) {
        return Item{in_t ? detail::gk21(mapped, a, b) : detail::gk21(eval, a, b), in_t};
    };
    auto less = [](const Item& x, const Item& y) { return x.p.error < y.p.error; };

    std::vector<Item> heap;
    const std::size_t finite_end = infinite ? points.size() - 2 : points.size() - 1;
    for (std::size_t i = 0; i < finite_end; ++i) heap.push_back(run(points[i], points[i + 1], false));
    if (infinite) heap.push_back(run(0.0, 1.0, true));
    std::make_heap(heap.begin(), heap.end(), less);

    auto totals = [&]() {
        CompensatedSum v, e;
        for (const auto& it : heap) {
            v += it.p.value;
            e += it.p.error;
        }
        res.value = v.value();
        res.error = e.value();
    };
    totals();
    int iter = 0;
    while (res.error > std::max(opt.abs_tol, opt.rel_tol * std::abs(res.value))) {
        if (static_cast<int>(heap.size()) >= opt.max_intervals) {
            res.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end(), less);
        Item worst = heap.back();
        heap.pop_back();
        const double a = worst.p.a, b = worst.p.b, m = 0.5 * (a + b);
        if (!(m > a && m < b) || (b - a) <= 1e-14 * std::max(std::abs(a), std::abs(b))) {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), less);
            res.converged = false;
            break;
        }
        Item l = run(a, m, worst.in_t), r = run(m, b, worst.in_t);
        res.value += l.p.value + r.p.value - worst.p.value;
        res.error += l.p.error + r.p.error - worst.p.error;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end(), less);
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end(), less);
        if (++iter % 64 == 0) totals();
    }
    totals();
    if (res.error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(res.value))) res.converged = true;
    res.intervals = static_cast<int>(heap.size());
    res.evaluations = evals;
    return res;
}

template <class F>
QuadResult integrate(const F& f, double a, double b, const QuadOptions& opt = {})
{
    if (!(a < b)) {
        if (a == b) return {};
        throw std::invalid_argument("integrate: need a < b");
    }
    return integrate(f, std::vector<double>{a, b}, opt);
}

// Throws QuadratureError carrying the partial value when the tolerance is not met.
template <class F>
double integrate_value(const F& f, std::vector<double> points, const QuadOptions& opt = {})
{
    auto r = integrate(f, std::move(points), opt);
    if (!r.converged)
        throw QuadratureError("integrate: no convergence (value " + std::to_string(r.value) + ", error " +
                                  std::to_string(r.error) + ")",
                              r.value, r.error);
    return r.value;
}

template <class F>
double integrate_value(const F& f, double a, double b, const QuadOptions& opt = {})
{
    if (a == b) return 0.0;
    return integrate_value(f, std::vector<double>{a, b}, opt);
}

// Iterated integral of f(w, v) over w in [a,b] and v in [inner_lo(w), inner_hi(w)].
template <class F, class Lo, class Hi>
double integrate_2d_nested(const F& f, double a, double b, const Lo& inner_lo, const Hi& inner_hi,
                           const QuadOptions& outer = {1e-6, 1e-12}, const QuadOptions& inner = {1e-9, 1e-14})
{
    auto slice = [&](double w) {
        const double lo = inner_lo(w), hi = inner_hi(w);
        if (!(lo < hi)) return 0.0;
        return integrate_value([&](double v) { return f(w, v); }, lo, hi, inner);
    };
    return integrate_value(slice, a, b, outer);
}

// e^{-x} I0(x) for x >= 0.
inline double bessel_i0e(double x)
{
    x = std::abs(x);
    if (x <= 20.0) {
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sum * std::exp(-x);
    }
    // Hankel asymptotic series; terms shrink until k ~ 2x, far past double precision here.
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd / (8.0 * k * x);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

inline double bessel_i0(double x)
{
    x = std::abs(x);
    if (x <= 20.0) {
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sum;
    }
    return std::exp(x) * bessel_i0e(x);
}

}  // namespace uavcov

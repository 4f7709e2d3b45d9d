#pragma once

// One-dimensional sampled functions with piecewise-linear interpolation.
//
// SampledFunction is continuous (strictly increasing abscissae).
// PiecewiseFunction additionally allows a jump at an abscissa that appears
// twice in a row; the first copy holds the left limit, the second the right.
// MonotoneMap is a SampledFunction with strictly increasing values and an
// exact inverse on each linear segment.

#include <cstddef>
#include <span>
#include <vector>

namespace debond {

enum class Side { left, right };

namespace detail {

struct Polyline {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> cumulative;  // integral from xs.front() to xs[i]

    void build_cumulative();
    double clamp_to_domain(double x) const;
    double evaluate(double x, Side side) const;
    double primitive(double x) const;  // integral from xs.front() to x
    double lower() const { return xs.front(); }
    double upper() const { return xs.back(); }
};

}  // namespace detail

class SampledFunction {
public:
    SampledFunction() = default;
    SampledFunction(std::vector<double> abscissae, std::vector<double> values);

    static SampledFunction constant(double value, double lower, double upper);

    /// Samples `fn` at `count` equispaced points of [lower, upper].
    template <class F>
    static SampledFunction sample(F&& fn, double lower, double upper, std::size_t count) {
        std::vector<double> xs(count), ys(count);
        for (std::size_t i = 0; i < count; ++i) {
            xs[i] = i + 1 == count
                        ? upper
                        : lower + (upper - lower) * static_cast<double>(i) / static_cast<double>(count - 1);
            ys[i] = fn(xs[i]);
        }
        return SampledFunction(std::move(xs), std::move(ys));
    }

    double operator()(double x) const { return line_.evaluate(x, Side::right); }

    /// Trapezoid integral of the interpolant; integral(a, b) == -integral(b, a).
    double integral(double a, double b) const;

    /// Segment slopes placed at segment midpoints, end slopes held constant.
    SampledFunction derivative() const;

    double lower() const { return line_.lower(); }
    double upper() const { return line_.upper(); }
    bool empty() const { return line_.xs.empty(); }
    std::size_t size() const { return line_.xs.size(); }
    std::span<const double> abscissae() const { return line_.xs; }
    std::span<const double> values() const { return line_.ys; }
    double max_spacing() const;

private:
    detail::Polyline line_;
};

class PiecewiseFunction {
public:
    PiecewiseFunction() = default;
    /// `abscissae` nondecreasing; a repeated abscissa marks a jump.
    PiecewiseFunction(std::vector<double> abscissae, std::vector<double> values);
    PiecewiseFunction(const SampledFunction& continuous);

    double operator()(double x, Side side = Side::right) const { return line_.evaluate(x, side); }
    double integral(double a, double b) const;

    /// Locations of jumps (repeated abscissae).
    std::vector<double> breakpoints() const;
    /// Largest |right limit - left limit| over all jumps, 0 if none.
    double max_jump() const;

    double lower() const { return line_.lower(); }
    double upper() const { return line_.upper(); }
    bool empty() const { return line_.xs.empty(); }
    std::size_t size() const { return line_.xs.size(); }
    std::span<const double> abscissae() const { return line_.xs; }
    std::span<const double> values() const { return line_.ys; }

private:
    detail::Polyline line_;
};

class MonotoneMap {
public:
    MonotoneMap() = default;
    explicit MonotoneMap(SampledFunction fn);

    double operator()(double t) const { return fn_(t); }
    /// Returns t with fn(t) == s up to rounding; RangeError outside the range.
    double invert(double s) const;

    double range_lower() const { return fn_.values().front(); }
    double range_upper() const { return fn_.values().back(); }
    const SampledFunction& function() const { return fn_; }

private:
    SampledFunction fn_;
};

// Free-function spellings of the basic operations.
inline double evaluate(const SampledFunction& fn, double x) { return fn(x); }
inline double definite_integral(const SampledFunction& fn, double a, double b) { return fn.integral(a, b); }
inline double invert(const MonotoneMap& map, double s) { return map.invert(s); }
inline SampledFunction derivative(const SampledFunction& fn) { return fn.derivative(); }

}  // namespace debond

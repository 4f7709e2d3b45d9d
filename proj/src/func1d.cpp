#include "debond/func1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "debond/errors.hpp"

namespace debond {

namespace {

// Queries this close outside the domain are clamped rather than rejected;
// inverted coordinates routinely overshoot by a few ulps.
double domain_slack(double lower, double upper) {
    return 1e-9 * std::max(1.0, upper - lower);
}

std::string describe(double x, double lower, double upper) {
    std::ostringstream os;
    os.precision(17);
    os << "x = " << x << " outside [" << lower << ", " << upper << "]";
    return os.str();
}

void check_sizes(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        fail(ErrorKind::invalid_argument, "abscissae and values differ in length");
    }
    if (xs.size() < 2) {
        fail(ErrorKind::invalid_argument, "a sampled function needs at least two samples");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
            fail(ErrorKind::invalid_argument, "non-finite sample");
        }
    }
}

}  // namespace

namespace detail {

void Polyline::build_cumulative() {
    cumulative.assign(xs.size(), 0.0);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        cumulative[i] = cumulative[i - 1] + 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
    }
}

double Polyline::clamp_to_domain(double x) const {
    if (xs.empty()) {
        fail(ErrorKind::domain, "evaluation of an empty function");
    }
    const double lo = xs.front();
    const double hi = xs.back();
    const double slack = domain_slack(lo, hi);
    if (!(x >= lo - slack && x <= hi + slack)) {
        fail(ErrorKind::domain, describe(x, lo, hi));
    }
    return std::clamp(x, lo, hi);
}

double Polyline::evaluate(double x, Side side) const {
    x = clamp_to_domain(x);
    const std::size_t n = xs.size();
    if (side == Side::right) {
        // last index with xs[i] <= x
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
        if (i + 1 >= n) {
            return ys.back();
        }
        if (x == xs[i]) {
            return ys[i];
        }
        const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
        return ys[i] + w * (ys[i + 1] - ys[i]);
    }
    // first index with xs[j] >= x
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    std::size_t j = static_cast<std::size_t>(it - xs.begin());
    if (j == 0) {
        return ys.front();
    }
    if (x == xs[j]) {
        return ys[j];
    }
    const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

double Polyline::primitive(double x) const {
    x = clamp_to_domain(x);
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    if (i + 1 >= xs.size()) {
        return cumulative.back();
    }
    const double dx = x - xs[i];
    const double slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    return cumulative[i] + dx * (ys[i] + 0.5 * slope * dx);
}

}  // namespace detail

SampledFunction::SampledFunction(std::vector<double> abscissae, std::vector<double> values) {
    check_sizes(abscissae, values);
    const double span = abscissae.back() - abscissae.front();
    if (!(span > 0.0)) {
        fail(ErrorKind::invalid_argument, "empty domain");
    }
    const double min_gap = 1e-12 * span;
    for (std::size_t i = 1; i < abscissae.size(); ++i) {
        if (!(abscissae[i] - abscissae[i - 1] >= min_gap)) {
            fail(ErrorKind::invalid_argument, "abscissae must be strictly increasing");
        }
    }
    line_.xs = std::move(abscissae);
    line_.ys = std::move(values);
    line_.build_cumulative();
}

SampledFunction SampledFunction::constant(double value, double lower, double upper) {
    return SampledFunction({lower, upper}, {value, value});
}

double SampledFunction::integral(double a, double b) const {
    return line_.primitive(b) - line_.primitive(a);
}

SampledFunction SampledFunction::derivative() const {
    const auto& xs = line_.xs;
    const auto& ys = line_.ys;
    const std::size_t n = xs.size();
    std::vector<double> dx, dy;
    dx.reserve(n + 1);
    dy.reserve(n + 1);
    dx.push_back(xs.front());
    dy.push_back((ys[1] - ys[0]) / (xs[1] - xs[0]));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        dx.push_back(0.5 * (xs[i] + xs[i + 1]));
        dy.push_back((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
    }
    dx.push_back(xs.back());
    dy.push_back(dy.back());
    return SampledFunction(std::move(dx), std::move(dy));
}

double SampledFunction::max_spacing() const {
    double gap = 0.0;
    for (std::size_t i = 1; i < line_.xs.size(); ++i) {
        gap = std::max(gap, line_.xs[i] - line_.xs[i - 1]);
    }
    return gap;
}

PiecewiseFunction::PiecewiseFunction(std::vector<double> abscissae, std::vector<double> values) {
    check_sizes(abscissae, values);
    if (!(abscissae.back() > abscissae.front())) {
        fail(ErrorKind::invalid_argument, "empty domain");
    }
    for (std::size_t i = 1; i < abscissae.size(); ++i) {
        if (abscissae[i] < abscissae[i - 1]) {
            fail(ErrorKind::invalid_argument, "abscissae must be nondecreasing");
        }
        if (i >= 2 && abscissae[i] == abscissae[i - 1] && abscissae[i - 1] == abscissae[i - 2]) {
            fail(ErrorKind::invalid_argument, "an abscissa may repeat at most once");
        }
    }
    if (abscissae[0] == abscissae[1] || abscissae[abscissae.size() - 1] == abscissae[abscissae.size() - 2]) {
        fail(ErrorKind::invalid_argument, "jumps are only allowed at interior abscissae");
    }
    line_.xs = std::move(abscissae);
    line_.ys = std::move(values);
    line_.build_cumulative();
}

PiecewiseFunction::PiecewiseFunction(const SampledFunction& continuous)
    : PiecewiseFunction(std::vector<double>(continuous.abscissae().begin(), continuous.abscissae().end()),
                        std::vector<double>(continuous.values().begin(), continuous.values().end())) {}

double PiecewiseFunction::integral(double a, double b) const {
    return line_.primitive(b) - line_.primitive(a);
}

std::vector<double> PiecewiseFunction::breakpoints() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < line_.xs.size(); ++i) {
        if (line_.xs[i] == line_.xs[i - 1]) {
            out.push_back(line_.xs[i]);
        }
    }
    return out;
}

double PiecewiseFunction::max_jump() const {
    double jump = 0.0;
    for (std::size_t i = 1; i < line_.xs.size(); ++i) {
        if (line_.xs[i] == line_.xs[i - 1]) {
            jump = std::max(jump, std::abs(line_.ys[i] - line_.ys[i - 1]));
        }
    }
    return jump;
}

MonotoneMap::MonotoneMap(SampledFunction fn) : fn_(std::move(fn)) {
    const auto v = fn_.values();
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) {
            fail(ErrorKind::invalid_argument, "monotone map values must be strictly increasing");
        }
    }
}

double MonotoneMap::invert(double s) const {
    const auto xs = fn_.abscissae();
    const auto vs = fn_.values();
    const double lo = vs.front();
    const double hi = vs.back();
    const double slack = domain_slack(lo, hi);
    if (!(s >= lo - slack && s <= hi + slack)) {
        fail(ErrorKind::range, describe(s, lo, hi));
    }
    s = std::clamp(s, lo, hi);
    auto it = std::upper_bound(vs.begin(), vs.end(), s);
    std::size_t i = static_cast<std::size_t>(it - vs.begin()) - 1;
    if (i + 1 >= vs.size()) {
        return xs.back();
    }
    const double w = (s - vs[i]) / (vs[i + 1] - vs[i]);
    return xs[i] + w * (xs[i + 1] - xs[i]);
}

}  // namespace debond

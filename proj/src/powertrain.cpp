#include "landair/powertrain.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "landair/errors.hpp"
#include "landair/io.hpp"

namespace landair::powertrain {

namespace {

/// Least-squares fit of an ascending-power polynomial by Householder QR on
/// the Vandermonde matrix. The abscissa is scaled to [-1, 1] magnitude first;
/// normal equations on raw N^3 columns would lose most of the mantissa.
struct PolySolution {
    std::vector<double> coefficients;  // raw (unscaled) powers
    double residual_rms = 0.0;
};

PolySolution least_squares_poly(std::span<const Point> points, int degree) {
    const size_t n = points.size();
    const size_t m = static_cast<size_t>(degree) + 1;

    double scale = 0.0;
    for (const auto& [x, y] : points) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) scale = 1.0;

    // Column-major Vandermonde in the scaled variable u = x / scale.
    std::vector<double> a(n * m);
    std::vector<double> b(n);
    for (size_t i = 0; i < n; ++i) {
        const double u = points[i].first / scale;
        double p = 1.0;
        for (size_t j = 0; j < m; ++j) {
            a[j * n + i] = p;
            p *= u;
        }
        b[i] = points[i].second;
    }

    // Householder QR, applying the reflections to b as we go.
    for (size_t k = 0; k < m; ++k) {
        double norm = 0.0;
        for (size_t i = k; i < n; ++i) norm = std::hypot(norm, a[k * n + i]);
        if (norm < 1e-12) throw DomainError("polynomial fit is rank-deficient");
        double alpha = a[k * n + k] > 0 ? -norm : norm;
        std::vector<double> v(n, 0.0);
        v[k] = a[k * n + k] - alpha;
        for (size_t i = k + 1; i < n; ++i) v[i] = a[k * n + i];
        double vtv = 0.0;
        for (size_t i = k; i < n; ++i) vtv += v[i] * v[i];
        if (vtv == 0.0) throw DomainError("polynomial fit is rank-deficient");

        for (size_t j = k; j < m; ++j) {
            double dot = 0.0;
            for (size_t i = k; i < n; ++i) dot += v[i] * a[j * n + i];
            const double f = 2.0 * dot / vtv;
            for (size_t i = k; i < n; ++i) a[j * n + i] -= f * v[i];
        }
        double dot = 0.0;
        for (size_t i = k; i < n; ++i) dot += v[i] * b[i];
        const double f = 2.0 * dot / vtv;
        for (size_t i = k; i < n; ++i) b[i] -= f * v[i];
    }

    // Back substitution on the m x m upper triangle.
    std::vector<double> c(m, 0.0);
    for (size_t k = m; k-- > 0;) {
        double s = b[k];
        for (size_t j = k + 1; j < m; ++j) s -= a[j * n + k] * c[j];
        const double diag = a[k * n + k];
        if (std::abs(diag) < 1e-12) throw DomainError("polynomial fit is rank-deficient");
        c[k] = s / diag;
    }

    // Residual in the original coordinates.
    double ss = 0.0;
    for (const auto& [x, y] : points) {
        const double u = x / scale;
        double acc = 0.0;
        for (size_t j = m; j-- > 0;) acc = acc * u + c[j];
        const double r = acc - y;
        ss += r * r;
    }

    PolySolution out;
    out.coefficients.resize(m);
    double s = 1.0;
    for (size_t j = 0; j < m; ++j) {
        out.coefficients[j] = c[j] / s;
        s *= scale;
    }
    out.residual_rms = std::sqrt(ss / static_cast<double>(n));
    return out;
}

double eval_poly(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (size_t j = coeffs.size(); j-- > 0;) acc = acc * x + coeffs[j];
    return acc;
}

/// Minimum of the curve's derivative over [lo, hi]; the derivative of a
/// cubic is quadratic, so endpoints plus the single interior critical point
/// cover every case.
double min_derivative(const std::vector<double>& coeffs, double lo, double hi) {
    std::vector<double> d;
    for (size_t j = 1; j < coeffs.size(); ++j) d.push_back(coeffs[j] * static_cast<double>(j));
    if (d.empty()) return 0.0;

    double m = std::min(eval_poly(d, lo), eval_poly(d, hi));
    if (d.size() == 3 && d[2] != 0.0) {
        const double t = -d[1] / (2.0 * d[2]);
        if (t > lo && t < hi) m = std::min(m, eval_poly(d, t));
    }
    return m;
}

size_t count_distinct_x(std::span<const Point> points) {
    std::set<double> xs;
    for (const auto& [x, y] : points) xs.insert(x);
    return xs.size();
}

}  // namespace

LinearFit fit_linear(std::span<const Point> points) {
    if (points.size() < 2) throw DomainError("battery fit needs at least 2 points");
    if (count_distinct_x(points) < 2)
        throw DomainError("battery fit needs at least 2 distinct masses");

    const auto sol = least_squares_poly(points, 1);
    LinearFit fit;
    fit.model.intercept_wh = sol.coefficients[0];
    fit.model.slope_wh_per_kg = sol.coefficients[1];
    fit.model.energy_density_wh_per_kg = sol.coefficients[1];
    fit.residual_rms = sol.residual_rms;
    if (fit.model.slope_wh_per_kg <= 0.0)
        throw DomainError("battery fit produced a non-positive energy density");
    return fit;
}

PolyFit fit_poly(std::span<const Point> points, int degree, CurveKind kind) {
    if (degree < 1 || degree > 3) throw DomainError("polynomial degree must be 1..3");
    if (points.size() < static_cast<size_t>(degree) + 1)
        throw DomainError("polynomial fit of degree " + std::to_string(degree) + " needs at least " +
                          std::to_string(degree + 1) + " points");
    if (count_distinct_x(points) < static_cast<size_t>(degree) + 1)
        throw DomainError("polynomial fit is rank-deficient: too few distinct thrust values");

    const auto sol = least_squares_poly(points, degree);

    PolyFit fit;
    fit.curve.kind = kind;
    fit.curve.coefficients = sol.coefficients;
    auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                        [](const Point& a, const Point& b) { return a.first < b.first; });
    fit.curve.thrust_min_n = lo->first;
    fit.curve.thrust_max_n = hi->first;
    fit.curve.max_thrust_n = hi->first;
    fit.residual_rms = sol.residual_rms;
    fit.monotone_non_decreasing =
        min_derivative(fit.curve.coefficients, fit.curve.thrust_min_n, fit.curve.thrust_max_n) >= -1e-9;
    return fit;
}

double eval_curve(const ThrustCurve& curve, double thrust_n) {
    if (thrust_n < curve.thrust_min_n || thrust_n > curve.thrust_max_n)
        throw DomainError("thrust " + io::format_number(thrust_n) + " N outside fitted range [" +
                          io::format_number(curve.thrust_min_n) + ", " +
                          io::format_number(curve.thrust_max_n) + "] N");
    return eval_poly(curve.coefficients, thrust_n);
}

Selection select_powertrain(std::span<const PowerTrainModel> candidates,
                            double required_hover_thrust_n, double margin) {
    if (candidates.empty()) throw DomainError("no powertrain candidates given");
    if (margin < 1.0) throw DomainError("thrust margin must be >= 1");

    Selection sel;
    for (const auto& cand : candidates) {
        if (cand.max_thrust_n() < margin * required_hover_thrust_n) {
            sel.infeasible.push_back(
                {cand, "max thrust " + io::format_number(cand.max_thrust_n()) + " N below " +
                           io::format_number(margin * required_hover_thrust_n) + " N required"});
            continue;
        }
        double eff;
        try {
            eff = eval_curve(cand.efficiency_curve, required_hover_thrust_n);
        } catch (const DomainError&) {
            sel.infeasible.push_back({cand, "hover thrust outside the tabulated efficiency range"});
            continue;
        }
        sel.feasible.push_back({cand, eff});
    }
    std::stable_sort(sel.feasible.begin(), sel.feasible.end(),
                     [](const RankedCandidate& a, const RankedCandidate& b) {
                         return a.efficiency_at_hover > b.efficiency_at_hover;
                     });
    return sel;
}

MotorTable load_motor_csv(const std::filesystem::path& path) {
    const auto table = io::read_csv(path);
    const int t = table.column("thrust_n");
    const int c = table.column("current_a");
    const int e = table.column("efficiency_g_per_w");
    if (t < 0 || c < 0 || e < 0)
        throw ParseError(path.string() +
                         ": motor CSV needs header thrust_n,current_a,efficiency_g_per_w");

    MotorTable out;
    for (const auto& row : table.rows) {
        out.current_points.emplace_back(row[t], row[c]);
        out.efficiency_points.emplace_back(row[t], row[e]);
    }
    return out;
}

std::vector<Point> load_battery_csv(const std::filesystem::path& path) {
    const auto table = io::read_csv(path);
    const int m = table.column("mass_kg");
    const int c = table.column("capacity_wh");
    if (m < 0 || c < 0)
        throw ParseError(path.string() + ": battery CSV needs header mass_kg,capacity_wh");

    std::vector<Point> out;
    for (const auto& row : table.rows) out.emplace_back(row[m], row[c]);
    return out;
}

}  // namespace landair::powertrain

#include "slideocam/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slideocam/error.hpp"

namespace slideocam {

namespace {

constexpr std::size_t kRootScanIntervals = 1024;
constexpr double kRootTolerance = 1e-12;
constexpr std::size_t kMinimumScanPoints = 2048;
constexpr double kGoldenTolerance = 1e-13;
constexpr double kBlockingRelTolerance = 1e-8;

void check_eta(double eta) {
    if (std::abs(kTwoPi * eta - 1.0) < kEtaSingularTolerance) {
        throw Error(ErrorKind::EtaSingular,
                    "eta = " + std::to_string(eta) + " hits the forbidden value 1/(2*pi)");
    }
}

double profile_ordinate(double psi, const TransmissionSpec& spec) {
    return cam_profile_point(psi, spec).v;
}

// Golden-section minimisation of f on [a, b].
template <typename F>
double golden_section(F&& f, double a, double b) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > kGoldenTolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Grid minimum of f over [lo, hi] refined inside the neighbouring cells.
template <typename F>
double refined_argmin(F&& f, double lo, double hi, std::size_t points,
                      double extra_candidate = std::numeric_limits<double>::quiet_NaN()) {
    const double step = (hi - lo) / static_cast<double>(points - 1);
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points; ++i) {
        const double psi = (i + 1 == points) ? hi : lo + step * static_cast<double>(i);
        const double value = f(psi);
        if (value < best_value) {
            best_value = value;
            best = i;
        }
    }
    double best_psi = (best + 1 == points) ? hi : lo + step * static_cast<double>(best);
    if (!std::isnan(extra_candidate) && extra_candidate >= lo && extra_candidate <= hi &&
        f(extra_candidate) < best_value) {
        best_psi = extra_candidate;
        best_value = f(extra_candidate);
    }
    const double a = std::max(lo, best_psi - step);
    const double b = std::min(hi, best_psi + step);
    const double refined = golden_section(f, a, b);
    return f(refined) < best_value ? refined : best_psi;
}

}  // namespace

void TransmissionSpec::validate() const {
    if (!(pitch > 0.0)) throw Error(ErrorKind::InvalidArgument, "pitch must be positive");
    if (!(roller_radius > 0.0))
        throw Error(ErrorKind::InvalidArgument, "roller radius must be positive");
    if (!(contact_width > 0.0))
        throw Error(ErrorKind::InvalidArgument, "contact width must be positive");
    if (lobes < 1) throw Error(ErrorKind::InvalidArgument, "lobe count must be >= 1");
    if (cams < 1) throw Error(ErrorKind::InvalidArgument, "cam count must be >= 1");
    if (!std::isfinite(eta)) throw Error(ErrorKind::InvalidArgument, "eta must be finite");
    check_eta(eta);
    if (!(eccentricity() > roller_radius)) {
        throw Error(ErrorKind::InvalidArgument,
                    "camshaft diameter 2(e - r) must be positive (e = " +
                        std::to_string(eccentricity()) + " mm, r = " +
                        std::to_string(roller_radius) + " mm)");
    }
}

TransmissionSpec TransmissionSpec::from_design(double pitch, double camshaft_diameter,
                                               double roller_radius, double contact_width,
                                               int cams, int lobes) {
    TransmissionSpec spec;
    spec.pitch = pitch;
    spec.roller_radius = roller_radius;
    spec.eta = (roller_radius + 0.5 * camshaft_diameter) / pitch;
    spec.contact_width = contact_width;
    spec.cams = cams;
    spec.lobes = lobes;
    return spec;
}

double follower_displacement(double psi, double pitch) {
    return pitch / kTwoPi * psi - pitch / 2.0;
}

ProfileCoefficients profile_coefficients(double psi, double pitch, double eta) {
    check_eta(eta);
    const double a = kTwoPi * eta - 1.0;
    const double offset = psi - kPi;
    ProfileCoefficients c;
    c.b1 = pitch / kTwoPi;
    c.b2 = c.b1 * std::sqrt(a * a + offset * offset);
    // Principal branch of the single-argument arctangent.
    c.delta_angle = std::atan(offset / a);
    return c;
}

Point2 cam_profile_point(double psi, const TransmissionSpec& spec) {
    const auto c = profile_coefficients(psi, spec.pitch, spec.eta);
    const double arm = c.b2 - spec.roller_radius;
    return {c.b1 * std::cos(psi) + arm * std::cos(c.delta_angle - psi),
            -c.b1 * std::sin(psi) + arm * std::sin(c.delta_angle - psi)};
}

Point2 pitch_curve_point(double psi, const TransmissionSpec& spec) {
    const double e = spec.eccentricity();
    const double s = follower_displacement(psi, spec.pitch);
    return {e * std::cos(psi) + s * std::sin(psi), -e * std::sin(psi) + s * std::cos(psi)};
}

double pitch_curvature(double psi, double pitch, double eta) {
    check_eta(eta);
    const double a = kTwoPi * eta - 1.0;
    const double x = (psi - kPi) * (psi - kPi);
    const double numerator = x + 2.0 * a * (kPi * eta - 1.0);
    const double denominator = std::pow(x + a * a, 1.5);
    return kTwoPi / pitch * numerator / denominator;
}

double cam_curvature(double kappa_p, double roller_radius) {
    const double denom = 1.0 - roller_radius * kappa_p;
    if (std::abs(denom) < 1e-12) {
        throw Error(ErrorKind::RollerBlocksCam,
                    "1 - r*kappa_p vanishes: the roller blocks the cam");
    }
    return kappa_p / denom;
}

double profile_radius(double psi, const TransmissionSpec& spec) {
    const double kappa_p = pitch_curvature(psi, spec.pitch, spec.eta);
    if (kappa_p == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / kappa_p - spec.roller_radius;
}

double extended_angle(const TransmissionSpec& spec) {
    spec.validate();
    const double step = kPi / static_cast<double>(kRootScanIntervals);
    double hi = 0.0;
    double f_hi = profile_ordinate(hi, spec);
    // Walk from zero towards -pi so the first bracket is the root nearest zero.
    for (std::size_t k = kRootScanIntervals; k-- > 0;) {
        const double lo = -kPi + step * static_cast<double>(k);
        const double f_lo = profile_ordinate(lo, spec);
        const bool bracket = (f_lo == 0.0) || (f_lo < 0.0) != (f_hi < 0.0);
        if (bracket && !(f_hi == 0.0 && hi == 0.0)) {
            if (f_lo == 0.0) return lo;
            double a = lo;
            double b = hi;
            double fa = f_lo;
            while (b - a > kRootTolerance) {
                const double mid = 0.5 * (a + b);
                const double fm = profile_ordinate(mid, spec);
                if (fm == 0.0) return mid;
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            const double root = 0.5 * (a + b);
            if (root >= 0.0) break;
            return root;
        }
        hi = lo;
        f_hi = f_lo;
    }
    throw Error(ErrorKind::NoRootFound,
                "v_c has no sign change on [-pi, 0) for p = " + std::to_string(spec.pitch) +
                    ", eta = " + std::to_string(spec.eta) +
                    ", r = " + std::to_string(spec.roller_radius));
}

AngleRange driving_range(const TransmissionSpec& spec, double delta) {
    const int m = std::max(spec.cams, 2);
    const double n = static_cast<double>(spec.lobes);
    const double end = kTwoPi / n - delta;
    return {end - kTwoPi / (n * m), end};
}

ProfileMinimum min_profile_radius(const TransmissionSpec& spec) {
    const double delta = extended_angle(spec);
    const auto range = driving_range(spec, delta);
    auto rho = [&](double psi) { return profile_radius(psi, spec); };
    const double psi = refined_argmin(rho, range.start, range.end, kMinimumScanPoints);
    return {psi, rho(psi)};
}

double min_cam_curvature(const TransmissionSpec& spec) {
    const double delta = extended_angle(spec);
    auto kappa_c = [&](double psi) {
        const double kappa_p = pitch_curvature(psi, spec.pitch, spec.eta);
        return kappa_p / (1.0 - spec.roller_radius * kappa_p);
    };
    // The pitch-curvature numerator is smallest at psi = pi; seed it explicitly.
    const double psi = refined_argmin(kappa_c, delta, kTwoPi - delta, 2 * kMinimumScanPoints, kPi);
    return kappa_c(psi);
}

FeasibilityReport feasibility_check(const TransmissionSpec& spec) {
    FeasibilityReport report;
    const double a = kTwoPi * spec.eta - 1.0;
    report.eta_valid = std::isfinite(spec.eta) && a >= kEtaSingularTolerance;
    report.fully_convex = report.eta_valid && spec.eta > 1.0 / kPi;
    if (!report.eta_valid) {
        report.message = "eta must exceed 1/(2*pi) ~ 0.159155 (eta = 1/(2*pi) is singular)";
        return report;
    }
    try {
        spec.validate();
        report.delta = extended_angle(spec);
        report.minimum = min_profile_radius(spec);
    } catch (const Error& e) {
        report.fully_convex = false;
        report.message = e.what();
        return report;
    }
    const double tol = kBlockingRelTolerance * spec.pitch;
    report.blocking = std::abs(report.minimum.rho_c) <= tol;
    report.profile_feasible = report.minimum.rho_c > tol;
    if (report.blocking) {
        report.message = "rho_c reaches zero on the driving range: the roller blocks the cam";
    } else if (!report.profile_feasible) {
        report.message = "rho_c becomes negative on the driving range: profile not feasible";
    }
    return report;
}

CamProfile sample_profile(const TransmissionSpec& spec, std::size_t resolution) {
    if (resolution < kMinProfileResolution) {
        throw Error(ErrorKind::InvalidArgument,
                    "profile resolution must be >= " + std::to_string(kMinProfileResolution));
    }
    const double delta = extended_angle(spec);
    const double end = kTwoPi - delta;
    const double step = (end - delta) / static_cast<double>(resolution - 1);
    std::vector<ProfileSample> samples(resolution);
    for (std::size_t i = 0; i < resolution; ++i) {
        auto& s = samples[i];
        s.psi = (i + 1 == resolution) ? end : delta + step * static_cast<double>(i);
        const auto c = cam_profile_point(s.psi, spec);
        const auto p = pitch_curve_point(s.psi, spec);
        s.u_c = c.u;
        s.v_c = c.v;
        s.u_p = p.u;
        s.v_p = p.v;
        s.kappa_p = pitch_curvature(s.psi, spec.pitch, spec.eta);
        s.rho_c = profile_radius(s.psi, spec);
    }
    return CamProfile(delta, std::move(samples));
}

}  // namespace slideocam

#include "slideocam/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>

#include "slideocam/error.hpp"

namespace slideocam {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

auto objective_key(const DesignCandidate& c) {
    return std::make_tuple(c.objectives.pressure_angle, c.objectives.pressure, c.objectives.size,
                           c.x.camshaft_diameter, c.x.roller_radius, c.x.contact_width,
                           c.x.cams);
}

// Area of the union of boxes [x, rx] x [y, ry]; points must lie inside.
double area_2d(std::vector<std::pair<double, double>> pts, double rx, double ry) {
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double lowest = ry;
    for (const auto& [x, y] : pts) {
        if (y < lowest) {
            area += (rx - x) * (lowest - y);
            lowest = y;
        }
    }
    return area;
}

}  // namespace

std::vector<double> linspace(Interval range, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {range.lo};
    std::vector<double> out(count);
    const double step = (range.hi - range.lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = range.lo + step * static_cast<double>(i);
    out.back() = range.hi;
    return out;
}

void DesignSpace::validate() const {
    auto check = [](bool ok, const std::string& msg) {
        if (!ok) throw Error(ErrorKind::InvalidArgument, msg);
    };
    check(camshaft_diameter.lo >= 0.0 && camshaft_diameter.hi > camshaft_diameter.lo,
          "d_cs bounds must satisfy 0 <= lo < hi");
    check(roller_radius.lo > 0.0 && roller_radius.hi > roller_radius.lo,
          "r bounds must satisfy 0 < lo < hi");
    check(min_width > 0.0, "minimum contact width must be positive");
    check(!cam_counts.empty(), "at least one cam count is required");
    for (int m : cam_counts) {
        check(m >= 2, "cam counts must be >= 2");
        check(caps.size / m > min_width, "S_cap / m must exceed the minimum contact width");
    }
    check(resolution >= 2, "resolution must be >= 2");
    check(pitch > 0.0, "pitch must be positive");
    check(lobes >= 1, "lobe count must be >= 1");
    check(caps.pressure_angle > 0.0 && caps.pressure > 0.0 && caps.size > 0.0,
          "constraint caps must be positive");
    load.validate();
    cam.validate();
    roller.validate();
}

std::string describe_violations(std::uint8_t mask) {
    std::string out;
    auto add = [&](Violation v, const char* name) {
        if (mask & v) {
            if (!out.empty()) out += ';';
            out += name;
        }
    };
    add(kGeometry, "geometry");
    add(kPressureAngle, "pressure_angle");
    add(kHertzPressure, "hertz_pressure");
    add(kSize, "size");
    add(kBounds, "bounds");
    return out;
}

CamEvaluation evaluate_cam(double camshaft_diameter, double roller_radius, int cams,
                           const DesignSpace& space) {
    CamEvaluation out;
    auto spec = TransmissionSpec::from_design(space.pitch, camshaft_diameter, roller_radius, 1.0,
                                              cams, space.lobes);
    out.eta = spec.eta;
    const auto report = feasibility_check(spec);
    out.convex_profile = report.fully_convex;
    if (!report.eta_valid || !report.profile_feasible || cams < 2) return out;
    try {
        const auto mu = max_pressure_angle(spec);
        const auto p = max_hertz_pressure(spec, space.load, space.cam, space.roller);
        out.mu_max = mu.value;
        out.psi_mu = mu.psi;
        out.unit_pressure = p.value;
        out.psi_pressure = p.psi;
        out.geometry_ok = true;
    } catch (const Error&) {
        out.geometry_ok = false;
    }
    return out;
}

DesignCandidate finish_candidate(const DesignVector& x, const CamEvaluation& cam,
                                 const DesignSpace& space) {
    DesignCandidate c;
    c.x = x;
    c.eta = cam.eta;
    c.convex_profile = cam.convex_profile;
    std::uint8_t v = kNoViolation;

    const bool cams_known =
        std::find(space.cam_counts.begin(), space.cam_counts.end(), x.cams) != space.cam_counts.end();
    if (!space.camshaft_diameter.contains(x.camshaft_diameter) ||
        !space.roller_radius.contains(x.roller_radius) || !cams_known || x.cams < 2 ||
        !(x.contact_width >= space.min_width) || !(x.contact_width <= space.caps.size / x.cams)) {
        v |= kBounds;
    }

    c.objectives.size = x.cams * x.contact_width;
    if (c.objectives.size > space.caps.size) v |= kSize;

    if (cam.geometry_ok && x.contact_width > 0.0) {
        c.objectives.pressure_angle = cam.mu_max;
        c.objectives.pressure = cam.unit_pressure / std::sqrt(x.contact_width);
        c.psi_mu = cam.psi_mu;
        c.psi_pressure = cam.psi_pressure;
        if (c.objectives.pressure_angle > space.caps.pressure_angle) v |= kPressureAngle;
        if (c.objectives.pressure > space.caps.pressure) v |= kHertzPressure;
    } else {
        c.objectives.pressure_angle = kNaN;
        c.objectives.pressure = kNaN;
        v |= kGeometry;
    }
    c.violations = v;
    c.feasible = v == kNoViolation;
    return c;
}

DesignCandidate evaluate_candidate(const DesignVector& x, const DesignSpace& space) {
    return finish_candidate(x, evaluate_cam(x.camshaft_diameter, x.roller_radius, x.cams, space),
                            space);
}

bool dominates(const Objectives& a, const Objectives& b) {
    const bool no_worse = a.pressure_angle <= b.pressure_angle && a.pressure <= b.pressure &&
                          a.size <= b.size;
    const bool better =
        a.pressure_angle < b.pressure_angle || a.pressure < b.pressure || a.size < b.size;
    return no_worse && better;
}

bool dominates(const DesignCandidate& a, const DesignCandidate& b) {
    return dominates(a.objectives, b.objectives);
}

bool lexicographic_less(const DesignCandidate& a, const DesignCandidate& b) {
    return objective_key(a) < objective_key(b);
}

std::vector<DesignCandidate> pareto_front(const std::vector<DesignCandidate>& candidates) {
    std::vector<DesignCandidate> sorted;
    sorted.reserve(candidates.size());
    for (const auto& c : candidates) {
        if (c.feasible) sorted.push_back(c);
    }
    std::sort(sorted.begin(), sorted.end(), lexicographic_less);
    // A dominator always precedes what it dominates in lexicographic order, and
    // front members are never displaced, so comparing against the front suffices.
    std::vector<DesignCandidate> front;
    for (const auto& c : sorted) {
        const bool dominated = std::any_of(front.begin(), front.end(),
                                           [&](const DesignCandidate& f) { return dominates(f, c); });
        if (!dominated) front.push_back(c);
    }
    return front;
}

SweepResult sweep(const DesignSpace& space, unsigned threads) {
    space.validate();
    if (space.resolution < 16) {
        throw Error(ErrorKind::InvalidArgument, "sweep resolution must be >= 16 per axis");
    }
    const auto d_values = linspace(space.camshaft_diameter, space.resolution);
    const auto r_values = linspace(space.roller_radius, space.resolution);
    const std::size_t res = space.resolution;
    const std::size_t cells_per_m = res * res;
    const std::size_t cells = cells_per_m * space.cam_counts.size();

    std::vector<CamEvaluation> evaluations(cells);
    parallel_for(cells, threads, [&](std::size_t k) {
        const int m = space.cam_counts[k / cells_per_m];
        const std::size_t cell = k % cells_per_m;
        evaluations[k] = evaluate_cam(d_values[cell / res], r_values[cell % res], m, space);
    });

    SweepResult result;
    result.candidates.reserve(cells * res);
    for (std::size_t mi = 0; mi < space.cam_counts.size(); ++mi) {
        const int m = space.cam_counts[mi];
        const auto widths = linspace(space.width_range(m), res);
        std::vector<DesignCandidate> per_m;
        per_m.reserve(cells_per_m * res);
        for (std::size_t cell = 0; cell < cells_per_m; ++cell) {
            const auto& eval = evaluations[mi * cells_per_m + cell];
            for (double width : widths) {
                per_m.push_back(finish_candidate(
                    {d_values[cell / res], r_values[cell % res], width, m}, eval, space));
            }
        }
        result.per_cam_fronts[m] = pareto_front(per_m);
        result.candidates.insert(result.candidates.end(), per_m.begin(), per_m.end());
    }
    std::vector<DesignCandidate> union_of_fronts;
    for (const auto& [m, front] : result.per_cam_fronts) {
        union_of_fronts.insert(union_of_fronts.end(), front.begin(), front.end());
    }
    result.front = pareto_front(union_of_fronts);
    return result;
}

Objectives caps_as_reference(const ConstraintCaps& caps) {
    return {caps.pressure_angle, caps.pressure, caps.size};
}

double hypervolume(const std::vector<DesignCandidate>& front, const Objectives& reference) {
    const double rx = reference.pressure_angle / kDegree;
    const double ry = reference.pressure;
    const double rz = reference.size;
    struct P3 {
        double x, y, z;
    };
    std::vector<P3> pts;
    for (const auto& c : front) {
        const P3 p{c.objectives.pressure_angle / kDegree, c.objectives.pressure, c.objectives.size};
        if (p.x < rx && p.y < ry && p.z < rz) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end(), [](const P3& a, const P3& b) { return a.z < b.z; });
    double volume = 0.0;
    std::vector<std::pair<double, double>> slab;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        slab.emplace_back(pts[i].x, pts[i].y);
        const double z_next = (i + 1 < pts.size()) ? pts[i + 1].z : rz;
        if (z_next > pts[i].z) volume += area_2d(slab, rx, ry) * (z_next - pts[i].z);
    }
    return volume;
}

std::vector<Segment2> marching_squares(const ScalarGrid& grid, double level) {
    std::vector<Segment2> out;
    const std::size_t nx = grid.xs.size();
    const std::size_t ny = grid.ys.size();
    if (nx < 2 || ny < 2) return out;
    for (std::size_t i = 0; i + 1 < nx; ++i) {
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            // Corners counter-clockwise: (i,j) (i+1,j) (i+1,j+1) (i,j+1).
            const double v[4] = {grid.at(i, j), grid.at(i + 1, j), grid.at(i + 1, j + 1),
                                 grid.at(i, j + 1)};
            if (std::any_of(std::begin(v), std::end(v), [](double x) { return std::isnan(x); }))
                continue;
            const double x[4] = {grid.xs[i], grid.xs[i + 1], grid.xs[i + 1], grid.xs[i]};
            const double y[4] = {grid.ys[j], grid.ys[j], grid.ys[j + 1], grid.ys[j + 1]};
            int code = 0;
            for (int k = 0; k < 4; ++k) {
                if (v[k] >= level) code |= 1 << k;
            }
            if (code == 0 || code == 15) continue;
            auto edge_point = [&](int e) {
                const int a = e;
                const int b = (e + 1) % 4;
                const double t = (level - v[a]) / (v[b] - v[a]);
                return std::pair{x[a] + t * (x[b] - x[a]), y[a] + t * (y[b] - y[a])};
            };
            // Edges crossed: edge k joins corner k and k+1.
            std::vector<int> crossed;
            for (int e = 0; e < 4; ++e) {
                const bool a = code & (1 << e);
                const bool b = code & (1 << ((e + 1) % 4));
                if (a != b) crossed.push_back(e);
            }
            auto emit = [&](int e0, int e1) {
                const auto p = edge_point(e0);
                const auto q = edge_point(e1);
                out.push_back({p.first, p.second, q.first, q.second});
            };
            if (crossed.size() == 2) {
                emit(crossed[0], crossed[1]);
            } else if (crossed.size() == 4) {
                const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                const bool corner0_high = code & 1;
                // Pair edges so the centre is on the side it belongs to.
                if ((centre >= level) == corner0_high) {
                    emit(0, 1);
                    emit(2, 3);
                } else {
                    emit(3, 0);
                    emit(1, 2);
                }
            }
        }
    }
    return out;
}

std::vector<DesignCandidate> pareto_front_2d(const std::vector<DesignCandidate>& candidates) {
    std::vector<DesignCandidate> sorted;
    for (const auto& c : candidates) {
        if (c.feasible) sorted.push_back(c);
    }
    std::sort(sorted.begin(), sorted.end(), lexicographic_less);
    std::vector<DesignCandidate> front;
    for (const auto& c : sorted) {
        const bool dominated = std::any_of(front.begin(), front.end(), [&](const auto& f) {
            return f.objectives.pressure_angle <= c.objectives.pressure_angle &&
                   f.objectives.pressure <= c.objectives.pressure &&
                   (f.objectives.pressure_angle < c.objectives.pressure_angle ||
                    f.objectives.pressure < c.objectives.pressure);
        });
        if (!dominated) front.push_back(c);
    }
    return front;
}

ContourSlice contour_slice(const ContourRequest& request, const DesignSpace& space,
                           unsigned threads) {
    space.validate();
    if (request.cams < 2) {
        throw Error(ErrorKind::InfeasibleCamCount, "contour slice needs m >= 2");
    }
    if (request.resolution < 2) {
        throw Error(ErrorKind::InvalidArgument, "contour resolution must be >= 2");
    }
    ContourSlice slice;
    slice.contact_width = request.size / request.cams;
    const auto widths = space.width_range(request.cams);
    if (!widths.contains(slice.contact_width)) {
        throw Error(ErrorKind::InvalidArgument,
                    "L = S_M / m = " + std::to_string(slice.contact_width) +
                        " mm lies outside the contact-width bounds");
    }
    const auto d_range = request.camshaft_diameter.value_or(space.camshaft_diameter);
    const auto r_range = request.roller_radius.value_or(space.roller_radius);
    const auto xs = linspace(d_range, request.resolution);
    const auto ys = linspace(r_range, request.resolution);
    slice.mu_max.xs = slice.pressure.xs = xs;
    slice.mu_max.ys = slice.pressure.ys = ys;
    const std::size_t cells = xs.size() * ys.size();
    slice.cells.resize(cells);
    slice.mu_max.values.assign(cells, kNaN);
    slice.pressure.values.assign(cells, kNaN);

    // The slice window may extend past the sweep bounds; judge it against itself.
    DesignSpace local = space;
    local.camshaft_diameter = {std::min(d_range.lo, space.camshaft_diameter.lo),
                               std::max(d_range.hi, space.camshaft_diameter.hi)};
    local.roller_radius = {std::min(r_range.lo, space.roller_radius.lo),
                           std::max(r_range.hi, space.roller_radius.hi)};
    if (std::find(local.cam_counts.begin(), local.cam_counts.end(), request.cams) ==
        local.cam_counts.end()) {
        local.cam_counts.push_back(request.cams);
    }
    parallel_for(cells, threads, [&](std::size_t k) {
        const DesignVector x{xs[k / ys.size()], ys[k % ys.size()], slice.contact_width,
                             request.cams};
        auto c = evaluate_candidate(x, local);
        if (!c.violates(kGeometry)) {
            slice.mu_max.values[k] = c.objectives.pressure_angle;
            slice.pressure.values[k] = c.objectives.pressure;
        }
        slice.cells[k] = std::move(c);
    });
    for (double level : request.mu_levels) {
        slice.mu_isolines.push_back({level, marching_squares(slice.mu_max, level)});
    }
    for (double level : request.pressure_levels) {
        slice.pressure_isolines.push_back({level, marching_squares(slice.pressure, level)});
    }
    slice.locus = pareto_front_2d(slice.cells);
    return slice;
}

}  // namespace slideocam

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <cstring>
#include <set>

#include "oracles.hpp"
#include "slideocam/error.hpp"
#include "slideocam/optimizer.hpp"

using namespace slideocam;

namespace {

DesignCandidate make(double mu, double p, double s, int tag = 0) {
    DesignCandidate c;
    c.objectives = {mu, p, s};
    c.x = {static_cast<double>(tag), 4.0, s / 2, 2};
    c.feasible = true;
    return c;
}

std::vector<DesignCandidate> random_set(std::mt19937_64& rng, std::size_t n, int levels) {
    std::uniform_int_distribution<int> grid(0, levels);
    std::bernoulli_distribution infeasible(0.1);
    std::vector<DesignCandidate> out;
    for (std::size_t i = 0; i < n; ++i) {
        auto c = make(grid(rng) * 0.01, 400.0 + grid(rng), 10.0 + grid(rng), static_cast<int>(i));
        c.feasible = !infeasible(rng);
        out.push_back(c);
    }
    return out;
}

oracle::Triple triple(const DesignCandidate& c) {
    return {c.objectives.pressure_angle, c.objectives.pressure, c.objectives.size};
}

std::set<double> front_tags(const std::vector<DesignCandidate>& front) {
    std::set<double> tags;
    for (const auto& c : front) tags.insert(c.x.camshaft_diameter);
    return tags;
}

std::set<double> brute_force_tags(const std::vector<DesignCandidate>& all) {
    std::vector<DesignCandidate> feasible;
    for (const auto& c : all)
        if (c.feasible) feasible.push_back(c);
    std::vector<oracle::Triple> pts;
    for (const auto& c : feasible) pts.push_back(triple(c));
    std::set<double> tags;
    for (auto i : oracle::brute_force_front(pts)) tags.insert(feasible[i].x.camshaft_diameter);
    return tags;
}

DesignSpace small_space(std::size_t resolution) {
    DesignSpace space;
    space.resolution = resolution;
    return space;
}

bool same_candidates(const std::vector<DesignCandidate>& a, const std::vector<DesignCandidate>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a[i];
        const auto& y = b[i];
        if (x.x.camshaft_diameter != y.x.camshaft_diameter || x.x.roller_radius != y.x.roller_radius ||
            x.x.contact_width != y.x.contact_width || x.x.cams != y.x.cams)
            return false;
        if (std::memcmp(&x.objectives, &y.objectives, sizeof(Objectives)) != 0) return false;
        if (x.feasible != y.feasible || x.violations != y.violations) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("linspace") {
    const auto v = linspace({0.0, 30.0}, 64);
    REQUIRE(v.size() == 64);
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 30.0);
    const auto fine = linspace({0.0, 30.0}, 127);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(fine[2 * i] == doctest::Approx(v[i]).epsilon(1e-15));
}

TEST_CASE("dominance") {
    CHECK_FALSE(dominates(Objectives{0.05, 650, 60}, Objectives{0.05, 650, 60}));
    CHECK(dominates(Objectives{3 * kDegree, 650, 60}, Objectives{3 * kDegree, 660, 60}));
    CHECK_FALSE(dominates(Objectives{3 * kDegree, 660, 60}, Objectives{3 * kDegree, 650, 60}));
    std::mt19937_64 rng(1);
    const auto set = random_set(rng, 400, 5);
    for (std::size_t i = 0; i + 1 < set.size(); ++i)
        CHECK_FALSE((dominates(set[i], set[i + 1]) && dominates(set[i + 1], set[i])));
}

TEST_CASE("Pareto front edge cases") {
    CHECK(pareto_front({}).empty());
    CHECK(pareto_front({make(0.1, 500, 60)}).size() == 1);
    auto bad = make(0.1, 500, 60);
    bad.feasible = false;
    CHECK(pareto_front({bad}).empty());
    // Equal objective triples with different x are all kept.
    CHECK(pareto_front({make(0.1, 500, 60, 1), make(0.1, 500, 60, 2), make(0.2, 600, 70, 3)}).size() == 2);
}

TEST_CASE("property: Pareto front equals brute-force filter") {
    std::mt19937_64 rng(2024);
    for (std::size_t n : {500, 1000}) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto set = random_set(rng, n, trial == 0 ? 3 : 40);
            const auto front = pareto_front(set);
            CHECK(front_tags(front) == brute_force_tags(set));
            CHECK(std::is_sorted(front.begin(), front.end(), lexicographic_less));
        }
    }
}

TEST_CASE("candidate evaluation") {
    DesignSpace space;
    auto c = evaluate_candidate({2.6, 4.24, 30.0, 2}, space);
    CHECK(c.objectives.size == 60.0);
    CHECK(c.eta == doctest::Approx((4.24 + 1.3) / 20.0));
    CHECK(std::isfinite(c.objectives.pressure));

    auto big = evaluate_candidate({2.6, 4.24, 40.0, 3}, space);
    CHECK_FALSE(big.feasible);
    CHECK(big.violates(kSize));
    CHECK(describe_violations(big.violations).find("size") != std::string::npos);

    // e <= r: geometry violation, kept as data.
    DesignSpace loose = space;
    loose.camshaft_diameter = {0.0, 30.0};
    auto broken = evaluate_candidate({0.0, 10.0, 10.0, 2}, loose);
    CHECK_FALSE(broken.feasible);
    CHECK(broken.violates(kGeometry));

    // Width-independent part reproduces the full evaluation.
    const auto cam = evaluate_cam(2.6, 4.24, 2, space);
    const auto viaCam = finish_candidate({2.6, 4.24, 30.0, 2}, cam, space);
    CHECK(viaCam.objectives.pressure == doctest::Approx(c.objectives.pressure).epsilon(1e-12));
    CHECK(viaCam.objectives.pressure_angle == c.objectives.pressure_angle);
}

TEST_CASE("sweep soundness and determinism") {
    const auto space = small_space(20);
    const auto one = sweep(space, 1);
    const auto many = sweep(space, 4);
    CHECK(same_candidates(one.candidates, many.candidates));
    CHECK(same_candidates(one.front, many.front));

    CHECK(one.candidates.size() == 20 * 20 * 20 * 2);
    CHECK(front_tags(one.front).size() <= one.front.size());
    // Front equals the brute-force filter over every feasible evaluation.
    std::vector<DesignCandidate> feasible;
    for (const auto& c : one.candidates)
        if (c.feasible) feasible.push_back(c);
    std::vector<oracle::Triple> pts;
    for (const auto& c : feasible) pts.push_back(triple(c));
    const auto idx = oracle::brute_force_front(pts);
    CHECK(idx.size() == one.front.size());
    for (const auto& c : one.front) {
        CHECK(c.objectives.pressure_angle <= space.caps.pressure_angle);
        CHECK(c.objectives.pressure <= space.caps.pressure);
        CHECK(c.objectives.size <= space.caps.size);
        CHECK(c.objectives.size == c.x.cams * c.x.contact_width);
    }
    // Merged front is a subset of the union of the per-m fronts.
    std::size_t in_union = 0;
    for (const auto& c : one.front)
        for (const auto& [m, f] : one.per_cam_fronts)
            for (const auto& d : f)
                if (!lexicographic_less(c, d) && !lexicographic_less(d, c)) ++in_union;
    CHECK(in_union == one.front.size());

    DesignSpace bad = space;
    bad.resolution = 8;
    CHECK_THROWS_AS(sweep(bad), Error);
}

TEST_CASE("hypervolume") {
    const Objectives ref{1.0 * kDegree, 10.0, 10.0};
    CHECK(hypervolume({}, ref) == 0.0);
    // Single box, mu in degrees.
    auto single = make(0.5 * kDegree, 5.0, 5.0);
    CHECK(hypervolume({single}, ref) == doctest::Approx(0.5 * 5 * 5));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<DesignCandidate> pts;
        std::vector<oracle::Triple> raw;
        for (int i = 0; i < 15; ++i) {
            const double a = 30.0 * u(rng), b = 800.0 * u(rng), c = 90.0 * u(rng);
            pts.push_back(make(a * kDegree, b, c, i));
            raw.push_back({a, b, c});
        }
        const double expect = oracle::hypervolume(raw, {30.0, 800.0, 90.0});
        CHECK(hypervolume(pareto_front(pts), caps_as_reference(ConstraintCaps{})) ==
              doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("hypervolume refinement monotonicity") {
    const auto coarse = sweep(small_space(16));
    const auto fine = sweep(small_space(31));  // nested grid
    const auto ref = caps_as_reference(ConstraintCaps{});
    CHECK(hypervolume(fine.front, ref) >= hypervolume(coarse.front, ref) * (1 - 1e-12));
}

TEST_CASE("marching squares") {
    ScalarGrid g;
    g.xs = linspace({0.0, 1.0}, 11);
    g.ys = linspace({0.0, 1.0}, 11);
    for (double x : g.xs)
        for (double y : g.ys) g.values.push_back(x + y);
    const auto segs = marching_squares(g, 1.0);
    CHECK_FALSE(segs.empty());
    for (const auto& s : segs) {
        CHECK(s.x0 + s.y0 == doctest::Approx(1.0));
        CHECK(s.x1 + s.y1 == doctest::Approx(1.0));
    }
    CHECK(marching_squares(g, 5.0).empty());

    // NaN corners are skipped.
    g.values[0] = NAN;
    for (const auto& s : marching_squares(g, 0.05)) CHECK(std::isfinite(s.x0));

    // Saddle cell: both diagonals above, centre decides.
    ScalarGrid saddle;
    saddle.xs = {0.0, 1.0};
    saddle.ys = {0.0, 1.0};
    saddle.values = {1.0, 0.0, 0.0, 1.0};
    CHECK(marching_squares(saddle, 0.5).size() == 2);
}

TEST_CASE("contour slice") {
    DesignSpace space;
    ContourRequest req;
    req.cams = 2;
    req.size = 60.0;
    req.resolution = 24;
    req.camshaft_diameter = Interval{0.0, 6.0};
    req.mu_levels = {10 * kDegree, 20 * kDegree};
    req.pressure_levels = {600.0, 700.0};
    const auto slice = contour_slice(req, space, 1);
    CHECK(slice.contact_width == 30.0);
    CHECK(slice.cells.size() == 24 * 24);
    CHECK(slice.mu_isolines.size() == 2);
    CHECK(slice.pressure_isolines.size() == 2);
    REQUIRE_FALSE(slice.locus.empty());
    for (const auto& c : slice.locus) {
        CHECK(c.feasible);
        CHECK(c.objectives.size == 60.0);
    }
    // No feasible cell dominates a locus point in (mu_max, P_max).
    for (const auto& l : slice.locus)
        for (const auto& c : slice.cells) {
            if (!c.feasible) continue;
            const bool better = c.objectives.pressure_angle <= l.objectives.pressure_angle &&
                                c.objectives.pressure <= l.objectives.pressure &&
                                (c.objectives.pressure_angle < l.objectives.pressure_angle ||
                                 c.objectives.pressure < l.objectives.pressure);
            CHECK_FALSE(better);
        }
    const auto again = contour_slice(req, space, 3);
    CHECK(same_candidates(slice.cells, again.cells));

    req.size = 200.0;  // L = 100 exceeds the width bound
    CHECK_THROWS_AS(contour_slice(req, space), Error);
    req.size = 60.0;
    req.cams = 1;
    CHECK_THROWS_AS(contour_slice(req, space), Error);
}

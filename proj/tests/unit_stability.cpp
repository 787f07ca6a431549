#include <doctest.h>

#include <cmath>
#include <random>

#include "acckit/stability.hpp"

using namespace acckit;

namespace {

struct MarginCase {
    CthpParams params;
    double l2;
    double linf;
};

// Margins computed independently to full precision and frozen here.
const MarginCase kMargins[] = {
    {{0.1987, 0.1294, 1.1639}, -0.2840637256043751, -0.6647193656043751},
    {{0.1454, 0.1809, 1.1223}, -0.2051320982469436, -0.46320728824694357},
    {{0.2134, 0.1849, 1.1305}, -0.27938529548831, -0.67199728548831},
    {{0.0062, -0.1143, 1.2801}, -0.014151321394975599, -0.0134868313949756},
    {{0.0042, 0.0969, 1.275}, -0.007333524975, -0.006343914975},
    {{0.0125, 0.0819, 1.2946}, -0.022087433193750002, -0.040379823193750004},
    {{0.1, 0.2, 1.2}, -0.1376, -0.29760000000000003},
};

} // namespace

TEST_SUITE("stability") {

TEST_CASE("frozen margins for the reported parameter triples") {
    for (const MarginCase& c : kMargins) {
        const StabilityReport rep = stability_report(c.params);
        CHECK(rep.l2_margin == doctest::Approx(c.l2).epsilon(1e-13));
        CHECK(rep.linf_margin == doctest::Approx(c.linf).epsilon(1e-13));
        CHECK_FALSE(rep.l2_stable);
        CHECK_FALSE(rep.linf_stable);
    }
}

TEST_CASE("margin identity: linf - l2 = beta^2 - 2 alpha") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.0, 0.6), ub(-0.5, 0.8), ut(0.3, 3.0);
    for (int i = 0; i < 200; ++i) {
        const CthpParams th{ua(rng), ub(rng), ut(rng)};
        const StabilityReport rep = stability_report(th);
        const double lhs = rep.linf_margin - rep.l2_margin;
        const double rhs = th.beta * th.beta - 2.0 * th.alpha;
        CHECK(std::abs(lhs - rhs) <= 1e-10);
        CHECK(rep.beta_sq_minus_2alpha == doctest::Approx(rhs).epsilon(1e-14));
    }
}

TEST_CASE("frequency response magnitude: frozen point checks") {
    // |H(j 0.5)| for the first reported triple exceeds 1 (amplifying band).
    const double g = freq_response_magnitude(CthpParams{0.1987, 0.1294, 1.1639}, 0.5);
    CHECK(g == doctest::Approx(1.114567749232666).epsilon(1e-12));
    CHECK(g > 1.0);

    // High frequencies roll off for all reported triples.
    for (const MarginCase& c : kMargins)
        CHECK(freq_response_magnitude(c.params, 100.0) < 0.05);
}

TEST_CASE("frequency response limits") {
    const CthpParams th{0.1, 0.2, 1.2};
    CHECK(freq_response_magnitude(th, 1e-9) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(freq_response_magnitude(th, 1e6) < 1e-5);
    CHECK(freq_response_magnitude(th, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("a stable tuning passes both conditions and never amplifies") {
    const StabilityReport rep = stability_report(CthpParams{0.1, 0.5, 2.0});
    CHECK(rep.l2_margin == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(rep.l2_stable);
    CHECK(rep.linf_stable);
    CHECK(rep.peak_gain <= 1.0 + 1e-9);
}

TEST_CASE("zero margin counts as stable") {
    // alpha = 0 makes the L2 margin exactly zero.
    const StabilityReport rep = stability_report(CthpParams{0.0, 2.0, 1.0});
    CHECK(rep.l2_margin == 0.0);
    CHECK(rep.l2_stable);
    CHECK(rep.linf_margin == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(rep.linf_stable);
}

TEST_CASE("grid scan peak agrees with a dense reference scan") {
    const CthpParams th{0.1987, 0.1294, 1.1639};
    const StabilityReport rep = stability_report(th);
    double peak = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double w = std::exp(std::log(1e-3) + (std::log(1e3) - std::log(1e-3)) * i / 19999.0);
        peak = std::max(peak, freq_response_magnitude(th, w));
    }
    CHECK(rep.peak_gain == doctest::Approx(peak).epsilon(1e-4));
}

TEST_CASE("an exactly singular frequency is reported") {
    // alpha = omega^2 and alpha tau + beta = 0 zero the denominator.
    CHECK_THROWS_AS(freq_response_magnitude(CthpParams{1.0, -1.0, 1.0}, 1.0),
                    singular_frequency_error);
}

TEST_CASE("invalid scan grids and frequencies are rejected") {
    CHECK_THROWS_AS(freq_response_magnitude(CthpParams{0.1, 0.2, 1.2}, -1.0),
                    invalid_argument_error);
    OmegaGrid bad;
    bad.omega_min = -1.0;
    CHECK_THROWS_AS(stability_report(CthpParams{0.1, 0.2, 1.2}, bad), invalid_argument_error);
    bad.omega_min = 10.0;
    bad.omega_max = 1.0;
    CHECK_THROWS_AS(stability_report(CthpParams{0.1, 0.2, 1.2}, bad), invalid_argument_error);
}

} // TEST_SUITE

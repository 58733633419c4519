#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pxqama/geometry.hpp"
#include "pxqama/hqam.hpp"
#include "pxqama/mode.hpp"

using namespace pxqama;

namespace {

constexpr double kPi = 3.14159265358979323846;

ChannelPair random_channels(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double l1 = 0.2 + 2.0 * u(rng);
    const double l2 = 0.2 + 2.0 * u(rng);
    const double rabs = 0.95 * u(rng);
    const double rph = 2.0 * kPi * u(rng) - kPi;
    return make_channels(l1, l2, std::polar(rabs, rph));
}

}  // namespace

TEST_CASE("make_channels basics") {
    const ChannelPair orth = make_channels(1.0, 1.0, 0.0);
    CHECK(orth.theta == doctest::Approx(kPi / 2));
    CHECK(std::abs(cdot(orth.unit_h1(), orth.unit_h2())) == doctest::Approx(0.0));

    const ChannelPair c = make_channels(1.0, 2.0, 0.6);
    CHECK(c.theta == doctest::Approx(0.9272952180016122));
    CHECK(std::sin(c.theta) == doctest::Approx(0.8));
    CHECK(std::abs(cdot(c.unit_h1(), c.unit_h2()) - cplx(0.6, 0.0)) < 1e-14);

    const ChannelPair g = make_channels(1.0, 1.0, 0.0, 0.1);
    CHECK(10.0 * std::log10(g.gamma1) == doctest::Approx(10.0));  // lambda=1, sigma2=0.1

    CHECK(vec_norm(c.unit_h1()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vec_norm(c.unit_h2()) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_channels(1.0, 1.0, 0.9999999999), std::domain_error);
    CHECK_THROWS_AS(make_channels(0.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("gram_schmidt_basis") {
    SUBCASE("rho = 0 keeps h2") {
        const ChannelPair c = make_channels(1.0, 3.0, 0.0);
        const auto [q1, q2] = gram_schmidt_basis(c);
        for (std::size_t i = 0; i < q2.size(); ++i)
            CHECK(std::abs(q2[i] - c.unit_h2()[i]) < 1e-15);
    }
    SUBCASE("real rho = 0.6 gives q2 = e1") {
        const ChannelPair c = make_channels(1.0, 1.0, 0.6);
        const auto [q1, q2] = gram_schmidt_basis(c);
        CHECK(std::abs(q2[0]) < 1e-15);
        CHECK(std::abs(q2[1] - cplx(1.0, 0.0)) < 1e-14);
    }
    SUBCASE("random complex rho: orthonormal pair") {
        std::mt19937_64 rng(17);
        for (int t = 0; t < 50; ++t) {
            const ChannelPair c = random_channels(rng);
            const auto [q1, q2] = gram_schmidt_basis(c);
            CHECK(vec_norm(q1) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(vec_norm(q2) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::abs(cdot(q1, q2)) < 1e-12);
        }
    }
}

TEST_CASE("shared_precoder_direction endpoints and gains") {
    SUBCASE("theta0 = 0 matches user 1") {
        const ChannelPair c = make_channels(1.0, 1.0, cplx(0.3, 0.4));
        const cvec p0 = shared_precoder_direction(c, 0.0);
        for (std::size_t i = 0; i < p0.size(); ++i)
            CHECK(std::abs(p0[i] - c.unit_h1()[i]) < 1e-14);
    }
    SUBCASE("theta0 = Theta maximizes user 2 gain") {
        const ChannelPair c = make_channels(1.0, 1.0, cplx(0.3, 0.4));
        const cvec p0 = shared_precoder_direction(c, c.theta);
        CHECK(std::abs(cdot(c.unit_h2(), p0)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("rho = 0, theta0 = pi/4 gives the balanced beam") {
        const ChannelPair c = make_channels(1.0, 1.0, 0.0);
        const cvec p0 = shared_precoder_direction(c, kPi / 4);
        const double s2 = std::sqrt(2.0);
        CHECK(std::abs(p0[0] - cplx(1.0 / s2, 0.0)) < 1e-14);
        CHECK(std::abs(p0[1] - cplx(1.0 / s2, 0.0)) < 1e-14);
    }
    SUBCASE("gain trade-off identity over the theta0 range") {
        std::mt19937_64 rng(23);
        for (int t = 0; t < 20; ++t) {
            const ChannelPair c = random_channels(rng);
            for (int i = 0; i <= 8; ++i) {
                const double theta0 = c.theta * i / 8.0;
                const cvec p0 = shared_precoder_direction(c, theta0);
                const cplx g1 = cdot(c.unit_h1(), p0);
                const cplx g2 = cdot(c.unit_h2(), p0);
                CHECK(std::abs(g1 - cplx(std::cos(theta0), 0.0)) < 1e-10);
                const cplx expected2 =
                    std::cos(c.theta - theta0) * std::polar(1.0, -std::arg(c.rho));
                CHECK(std::abs(g2 - expected2) < 1e-10);
            }
        }
    }
    SUBCASE("theta0 outside [0, Theta] rejected") {
        const ChannelPair c = make_channels(1.0, 1.0, 0.6);
        CHECK_THROWS_AS(shared_precoder_direction(c, -0.1), std::invalid_argument);
        CHECK_THROWS_AS(shared_precoder_direction(c, c.theta + 0.1), std::invalid_argument);
    }
}

TEST_CASE("private_precoder_directions") {
    SUBCASE("real rho = 0.6 closed form") {
        const ChannelPair c = make_channels(1.0, 1.0, 0.6);
        const auto [p1, p2] = private_precoder_directions(c);
        CHECK(std::abs(p1[0] - cplx(0.8, 0.0)) < 1e-14);
        CHECK(std::abs(p1[1] - cplx(-0.6, 0.0)) < 1e-14);
        CHECK(cdot(c.unit_h1(), p1).real() == doctest::Approx(0.8));  // sin(Theta)
    }
    SUBCASE("rho = 0 reduces to matched beams") {
        const ChannelPair c = make_channels(1.0, 1.0, 0.0);
        const auto [p1, p2] = private_precoder_directions(c);
        for (std::size_t i = 0; i < p1.size(); ++i) {
            CHECK(std::abs(p1[i] - c.unit_h1()[i]) < 1e-14);
            CHECK(std::abs(p2[i] - c.unit_h2()[i]) < 1e-14);
        }
    }
    SUBCASE("orthogonality and phase alignment for random complex rho") {
        std::mt19937_64 rng(29);
        for (int t = 0; t < 50; ++t) {
            const ChannelPair c = random_channels(rng);
            const auto [p1, p2] = private_precoder_directions(c);
            CHECK(std::abs(cdot(c.h2, p1)) < 1e-12);
            CHECK(std::abs(cdot(c.h1, p2)) < 1e-12);
            CHECK(vec_norm(p1) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(vec_norm(p2) == doctest::Approx(1.0).epsilon(1e-12));
            // phases equal those of the shared beam at each user
            CHECK(std::abs(std::arg(cdot(c.unit_h1(), p1))) < 1e-10);
            const double want = -std::arg(c.rho);
            double got = std::arg(cdot(c.unit_h2(), p2));
            double diff = std::remainder(got - want, 2.0 * kPi);
            CHECK(std::abs(diff) < 1e-10);
        }
    }
}

TEST_CASE("equivalent_channels: special cases and closed form") {
    SUBCASE("single-beam mode has beta_shared = 1") {
        const ModeConfig mode = make_uniform_mode(1, 1, 0, 0, 0.3, 1.0, 0.0, 0.0);
        const ChannelPair c = make_channels(1.0, 1.0, 0.6);
        const PrecoderSet pre = assemble_precoders(c, 0.3, 1.0, 0.0, 0.0);
        const auto eqs = equivalent_channels(c, pre, mode);
        CHECK(eqs[0].beta_shared == doctest::Approx(1.0));
        CHECK(eqs[0].beta_private == doctest::Approx(0.0));
        CHECK(eqs[0].gain == doctest::Approx(std::cos(0.3)));
        // composite equals the shared constellation
        for (int k = 0; k < 1; ++k)
            CHECK(eqs[0].composite.i_distances[0] == doctest::Approx(mode.d0.i_distances[0]));
    }
    SUBCASE("private-only mode has beta_private = 1") {
        const ModeConfig mode = make_uniform_mode(0, 0, 1, 1, 0.0, 0.0, std::sqrt(0.5),
                                                  std::sqrt(0.5));
        const ChannelPair c = make_channels(1.0, 1.0, 0.6);
        const PrecoderSet pre = assemble_precoders(c, 0.0, 0.0, std::sqrt(0.5), std::sqrt(0.5));
        const auto eqs = equivalent_channels(c, pre, mode);
        for (int u = 0; u < 2; ++u) {
            CHECK(eqs[u].beta_shared == doctest::Approx(0.0));
            CHECK(eqs[u].beta_private == doctest::Approx(1.0));
            CHECK(eqs[u].gain == doctest::Approx(std::sqrt(0.5) * 0.8));  // a_u sin(Theta)
        }
    }
    SUBCASE("worked example: lambda1=1, theta0=0, Theta=pi/2, a0=a1=1/sqrt(2)") {
        const ChannelPair c = make_channels(1.0, 1.0, 0.0);
        const EquivGains g = closed_form_gains(c, 0.0, std::sqrt(0.5), std::sqrt(0.5), 0.0);
        CHECK(g.g1 == doctest::Approx(1.0));
        CHECK(g.beta10 == doctest::Approx(std::sqrt(0.5)));
        CHECK(g.beta11 == doctest::Approx(std::sqrt(0.5)));
        // same numbers from the raw inner products (the gain definitions)
        const PrecoderSet pre = assemble_precoders(c, 0.0, std::sqrt(0.5), std::sqrt(0.5), 0.0);
        const double t10 = std::abs(cdot(c.h1, pre.p0)) * pre.alpha0;
        const double t11 = std::abs(cdot(c.h1, pre.p1)) * pre.alpha1;
        CHECK(std::hypot(t10, t11) == doctest::Approx(1.0));
        CHECK(t10 == doctest::Approx(std::sqrt(0.5)));
        CHECK(t11 == doctest::Approx(std::sqrt(0.5)));
    }
    SUBCASE("inner-product path equals the closed form") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int t = 0; t < 50; ++t) {
            const ChannelPair c = random_channels(rng);
            const double theta0 = c.theta * u(rng);
            double a0 = 0.3 + u(rng), a1 = 0.1 + u(rng), a2 = 0.1 + u(rng);
            const double norm = std::sqrt(a0 * a0 + a1 * a1 + a2 * a2);
            a0 /= norm;
            a1 /= norm;
            a2 /= norm;
            const ModeConfig mode = make_uniform_mode(1, 0, 1, 0, theta0, a0, a1, a2);
            const PrecoderSet pre = assemble_precoders(c, theta0, a0, a1, a2);
            const EquivGains g = closed_form_gains(c, theta0, a0, a1, a2);
            std::array<EquivalentChannel, 2> eqs{};
            bool valid = true;
            try {
                eqs = equivalent_channels(c, pre, mode);
            } catch (const std::domain_error&) {
                valid = false;  // seam rejection depends on beta
            }
            if (!valid) continue;
            CHECK(eqs[0].gain == doctest::Approx(g.g1).epsilon(1e-10));
            CHECK(eqs[1].gain == doctest::Approx(g.g2).epsilon(1e-10));
            CHECK(eqs[0].beta_shared == doctest::Approx(g.beta10).epsilon(1e-10));
            CHECK(eqs[0].beta_private == doctest::Approx(g.beta11).epsilon(1e-10));
            CHECK(eqs[1].beta_shared == doctest::Approx(g.beta20).epsilon(1e-10));
            CHECK(eqs[1].beta_private == doctest::Approx(g.beta22).epsilon(1e-10));
            CHECK(std::abs(std::remainder(eqs[0].phase - g.phi1, 2.0 * kPi)) < 1e-10);
            CHECK(std::abs(std::remainder(eqs[1].phase - g.phi2, 2.0 * kPi)) < 1e-10);
        }
    }
}

TEST_CASE("total transmit power is normalized") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const ChannelPair c = random_channels(rng);
        double a0 = u(rng), a1 = u(rng), a2 = u(rng);
        const double norm = std::sqrt(a0 * a0 + a1 * a1 + a2 * a2);
        a0 /= norm;
        a1 /= norm;
        a2 /= norm;
        const PrecoderSet pre = assemble_precoders(c, c.theta * u(rng), a0, a1, a2);
        const double total = a0 * a0 * vec_norm(pre.p0) * vec_norm(pre.p0) +
                             a1 * a1 * vec_norm(pre.p1) * vec_norm(pre.p1) +
                             a2 * a2 * vec_norm(pre.p2) * vec_norm(pre.p2);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("scaling sigma and both lambdas leaves beta and noise_var unchanged") {
    const ModeConfig mode = make_uniform_mode(1, 1, 1, 1, 0.4, std::sqrt(0.8),
                                              std::sqrt(0.1), std::sqrt(0.1));
    const ChannelPair a = make_channels(1.0, 2.0, 0.5, 1.0);
    const ChannelPair b = make_channels(3.0, 6.0, 0.5, 9.0);
    const PrecoderSet pa = assemble_precoders(a, 0.4, mode.alpha0, mode.alpha1, mode.alpha2);
    const PrecoderSet pb = assemble_precoders(b, 0.4, mode.alpha0, mode.alpha1, mode.alpha2);
    const auto ea = equivalent_channels(a, pa, mode);
    const auto eb = equivalent_channels(b, pb, mode);
    for (int u = 0; u < 2; ++u) {
        CHECK(ea[u].beta_shared == doctest::Approx(eb[u].beta_shared).epsilon(1e-13));
        CHECK(ea[u].beta_private == doctest::Approx(eb[u].beta_private).epsilon(1e-13));
        CHECK(ea[u].noise_var == doctest::Approx(eb[u].noise_var).epsilon(1e-13));
        for (std::size_t k = 0; k < ea[u].composite.i_distances.size(); ++k)
            CHECK(ea[u].composite.i_distances[k] ==
                  doctest::Approx(eb[u].composite.i_distances[k]).epsilon(1e-13));
    }
}

TEST_CASE("parallax identity: physical and equivalent receive models agree") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    while (checked < 2000) {
        const ChannelPair c = random_channels(rng);
        const double theta0 = c.theta * u(rng);
        double a0 = 0.4 + u(rng), a1 = 0.05 + 0.3 * u(rng), a2 = 0.05 + 0.3 * u(rng);
        const double norm = std::sqrt(a0 * a0 + a1 * a1 + a2 * a2);
        a0 /= norm;
        a1 /= norm;
        a2 /= norm;
        const ModeConfig mode = make_uniform_mode(1, 1, 1, 1, theta0, a0, a1, a2);
        const PrecoderSet pre = assemble_precoders(c, theta0, a0, a1, a2);
        std::array<EquivalentChannel, 2> eqs{};
        try {
            eqs = equivalent_channels(c, pre, mode);
        } catch (const std::domain_error&) {
            continue;
        }
        // random bit word through the two mappings
        BitWord w[2];
        for (int user = 0; user < 2; ++user) {
            w[user].shared_i = {static_cast<std::uint8_t>(rng() & 1u)};
            w[user].shared_q = {static_cast<std::uint8_t>(rng() & 1u)};
            w[user].private_i = {static_cast<std::uint8_t>(rng() & 1u)};
            w[user].private_q = {static_cast<std::uint8_t>(rng() & 1u)};
        }
        w[1].shared_i = w[0].shared_i;  // one shared word feeds both users
        w[1].shared_q = w[0].shared_q;
        const cplx s0 = map_shared(w[0], mode.d0);
        const cplx s1 = map_private(w[0], mode.d1);
        const cplx s2 = map_private(w[1], mode.d2);
        const cvec x = superimpose(pre, s0, s1, s2);
        for (int user = 1; user <= 2; ++user) {
            const EquivalentChannel& eq = eqs[static_cast<std::size_t>(user - 1)];
            const cplx y_phys = cdot(user == 1 ? c.h1 : c.h2, x);
            const cplx su = user == 1 ? s1 : s2;
            const cplx comp = eq.beta_shared * s0 + eq.beta_private * su;
            const cplx y_eq = std::polar(eq.gain, eq.phase) * comp;
            CHECK(std::abs(y_phys - y_eq) < 1e-10);
            ++checked;
        }
    }
}

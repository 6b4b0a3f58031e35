#include <catch2/catch_amalgamated.hpp>

#include "stq/dynamics.hpp"
#include "stq/st_effective.hpp"
#include "testutil.hpp"

using namespace stq;

TEST_CASE("anisotropy identity 2|gamma_perp| + gamma_par = 1") {
    for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j) {
            const double phi = 2.0 * pi * i / 99.0;
            const double th = pi * j / 99.0;
            CHECK(std::abs(2.0 * std::abs(gamma_perp(phi, th)) + gamma_parallel(phi, th) - 1.0) <
                  1e-13);
        }
}

TEST_CASE("sweet spot: gamma_perp vanishes, gamma_par is maximal") {
    CHECK(std::abs(gamma_perp(pi, pi / 2.0)) < 1e-30);
    CHECK_THAT(gamma_parallel(pi, pi / 2.0), Catch::Matchers::WithinAbs(1.0, 1e-14));
    CHECK_THAT(gamma_parallel(0.0, 1.234), Catch::Matchers::WithinAbs(-1.0, 1e-14));
}

TEST_CASE("phase-tunable exchange switches off at phi = pi") {
    CHECK_THAT(j_of_phi(0.4, 0.0), Catch::Matchers::WithinRel(1.6, 1e-14));
    CHECK(std::abs(j_of_phi(0.4, pi)) < 1e-16);
    CHECK_THAT(j_of_phi(0.4, pi / 2.0), Catch::Matchers::WithinRel(0.8, 1e-13));
}

TEST_CASE("projected two-qubit block equals the exact projection") {
    for (int trial = 0; trial < 200; ++trial) {
        const SpinParams p = testutil::random_aligned_params();
        const Matrix h = build_h_spin(p);
        const double scale = std::max(1.0, h.max_abs());

        const auto [hst, st] = build_h_st(p);
        const Matrix proj4 = h.restrict_to(computational_indices);
        CHECK((hst.traceless() - proj4.traceless()).max_abs() < 1e-12 * scale);

        const auto [h6, spec] = build_h_szero(p);
        const Matrix proj6 = h.restrict_to(testutil::sz_zero_sector());
        CHECK((h6.traceless() - proj6.traceless()).max_abs() < 1e-12 * scale);
    }
}

TEST_CASE("leakage coupling equals jsc gamma_perp / 2") {
    const SpinParams p = testutil::random_aligned_params();
    const auto [h6, spec] = build_h_szero(p);
    const cplx expect = 0.5 * p.jsc * gamma_perp(p.rotsc.angle, p.rotsc.theta());
    CHECK(std::abs(spec.coupling - expect) < 1e-15);
    CHECK(std::abs(h6(0, 4) - expect) < 1e-15);
    CHECK(std::abs(h6(5, 3) - expect) < 1e-15);
}

TEST_CASE("effective builders require aligned Zeeman fields") {
    SpinParams p = testutil::random_aligned_params();
    p.h[1] = Vec3{1.0, 0.0, 20.0};
    CHECK_THROWS_AS(st_params(p), UnalignedZeeman);
    CHECK_THROWS_AS(second_order_corrections(p), UnalignedZeeman);
}

TEST_CASE("second-order leakage elements match the numerical reduction") {
    for (int trial = 0; trial < 5; ++trial) {
        const SpinParams p = testutil::random_aligned_params();
        const Matrix h2 = testutil::spin_sw2(p, testutil::sz_zero_sector());
        const CorrectionTerms c = second_order_corrections(p);
        for (int k = 0; k < 4; ++k)
            CHECK(std::abs(c.leak2[size_t(k)] - h2(k, 4)) < 1e-14);
        // second leakage column is tied to the first by conjugation symmetry
        CHECK(std::abs(h2(3, 5) + std::conj(h2(0, 4))) < 1e-14);
    }
}

TEST_CASE("second-order non-Ising couplings match the numerical reduction") {
    for (int trial = 0; trial < 5; ++trial) {
        const SpinParams p = testutil::random_aligned_params();
        const Matrix h2 = testutil::spin_sw2(p, testutil::sz_zero_sector());
        Matrix comp(4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) comp(i, j) = h2(i, j);
        const auto pauli_weight = [&](int a, int b) {
            return (kron(pauli(a), pauli(b)).dagger() * comp).trace().real();
        };
        const CorrectionTerms c = second_order_corrections(p);
        CHECK(std::abs(pauli_weight(0, 2) - c.j_xz) < 1e-13);
        CHECK(std::abs(pauli_weight(1, 2) - c.j_yz) < 1e-13);
        CHECK(std::abs(pauli_weight(2, 0) - c.j_zx) < 1e-13);
        CHECK(std::abs(pauli_weight(2, 1) - c.j_zy) < 1e-13);
    }
}

TEST_CASE("second-order terms vanish at their respective nulls") {
    // in-plane axis and Phi = pi kill the non-Ising couplings
    SpinParams p = testutil::random_aligned_params();
    const Vec3 nxy{std::cos(0.7), std::sin(0.7), 0.0};
    p.rotsc = Rotation3(nxy, pi);
    const CorrectionTerms c = second_order_corrections(p);
    CHECK(std::abs(c.j_xz) < 1e-14);
    CHECK(std::abs(c.j_yz) < 1e-14);
    CHECK(std::abs(c.j_zx) < 1e-14);
    CHECK(std::abs(c.j_zy) < 1e-14);

    // vanishing intra-qubit spin-flip angles kill the leakage elements
    SpinParams q = testutil::random_aligned_params();
    q.rot1 = Rotation3(q.rot1.axis, 0.0);
    q.rot2 = Rotation3(q.rot2.axis, 0.0);
    const CorrectionTerms cq = second_order_corrections(q);
    for (const cplx& v : cq.leak2) CHECK(std::abs(v) < 1e-14);
}

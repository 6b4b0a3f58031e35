#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "stq/eig.hpp"
#include "stq/spin_model.hpp"
#include "testutil.hpp"

using namespace stq;

TEST_CASE("uniform parameter bundle reproduces the detuning conventions") {
    const SpinParams p = make_uniform_spin_params(20.0, 2.0, 1.0, 0.5, 0.1, 0.2, 0.4, 1.1, 1.3);
    CHECK_THAT(p.h_bar(), Catch::Matchers::WithinRel(20.0, 1e-14));
    CHECK_THAT(p.dh(), Catch::Matchers::WithinRel(2.0, 1e-13));
    CHECK_THAT(p.dh1(), Catch::Matchers::WithinRel(1.0, 1e-13));
    CHECK_THAT(p.dh2(), Catch::Matchers::WithinRel(0.5, 1e-13));
    CHECK(p.zeeman_aligned());
    CHECK_THAT(p.rotsc.angle, Catch::Matchers::WithinRel(2.2, 1e-14));
    CHECK_THAT(p.rot1.theta(), Catch::Matchers::WithinAbs(1.3, 1e-13));
}

TEST_CASE("build_h_spin is Hermitian and reduces to Zeeman when couplings vanish") {
    SpinParams p = testutil::random_aligned_params();
    CHECK(build_h_spin(p).is_hermitian());

    p.j1 = p.j2 = p.jsc = 0.0;
    const Matrix h = build_h_spin(p);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            if (i != j) CHECK(h(i, j) == cplx(0.0));
    // |uuuu> (index 0) has energy (h1+h2+h3+h4)/2
    const double e0 = (p.h_mag(0) + p.h_mag(1) + p.h_mag(2) + p.h_mag(3)) / 2.0;
    CHECK_THAT(h(0, 0).real(), Catch::Matchers::WithinRel(e0, 1e-13));
}

TEST_CASE("exchange term structure: isotropic bond gives Heisenberg coupling") {
    SpinParams p;
    for (auto& v : p.h) v = Vec3{0, 0, 0};
    p.jsc = 0.8; // identity rotation on bond 2-3
    Matrix expect = Matrix::zero(16);
    for (int a = 0; a < 3; ++a)
        expect += cplx(0.2, 0.0) * (four_spin_op(pauli(a), 1) * four_spin_op(pauli(a), 2));
    CHECK((build_h_spin(p) - expect).max_abs() < 1e-14);
}

TEST_CASE("gauge_align_zeeman preserves the spectrum") {
    for (int trial = 0; trial < 3; ++trial) {
        std::array<Vec3, 4> h_raw;
        for (auto& v : h_raw) {
            const Vec3 dir = testutil::random_axis();
            const double mag = testutil::uniform(15.0, 25.0);
            v = Vec3{mag * dir[0], mag * dir[1], mag * dir[2]};
        }
        const Rotation3 r1 = testutil::random_rotation();
        const Rotation3 rsc = testutil::random_rotation();
        const Rotation3 r2 = testutil::random_rotation();
        const double j1 = 0.2, j2 = 0.15, jsc = 0.3;

        SpinParams raw;
        raw.h = h_raw;
        raw.j1 = j1;
        raw.j2 = j2;
        raw.jsc = jsc;
        raw.rot1 = r1;
        raw.rotsc = rsc;
        raw.rot2 = r2;

        const SpinParams aligned = gauge_align_zeeman(h_raw, r1, rsc, r2, j1, j2, jsc);
        CHECK(aligned.zeeman_aligned());
        const EigenDecomposition ea = eigh(build_h_spin(raw));
        const EigenDecomposition eb = eigh(build_h_spin(aligned));
        for (int i = 0; i < 16; ++i)
            CHECK_THAT(eb.values[size_t(i)], Catch::Matchers::WithinAbs(ea.values[size_t(i)], 1e-9));
    }
}

TEST_CASE("gauge_align_zeeman rejects a vanishing field") {
    std::array<Vec3, 4> h_raw{Vec3{0, 0, 20}, Vec3{0, 0, 0}, Vec3{0, 0, 20}, Vec3{0, 0, 20}};
    CHECK_THROWS_AS(gauge_align_zeeman(h_raw, Rotation3(), Rotation3(), Rotation3(), 0.1, 0.1, 0.1),
                    ZeroZeemanField);
}

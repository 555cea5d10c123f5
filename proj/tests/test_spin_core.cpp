// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>
#include <set>

#include "nvthermo/errors.hpp"
#include "nvthermo/spin_core.hpp"
#include "test_util.hpp"

using namespace nvthermo;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

SpinSystem electron_only(double bz) {
    SpinSystem s;
    s.B = {0.0, 0.0, bz};
    return s;
}

}  // namespace

TEST_CASE("spin operators: defining representations") {
    const SpinOperators half = build_spin_operators(2);
    CHECK(half.sz(0, 0).real() == 0.5);
    CHECK(half.sz(1, 1).real() == -0.5);
    const SpinOperators one = build_spin_operators(3);
    CHECK(one.sz(0, 0).real() == 1.0);
    CHECK(one.sz(1, 1).real() == 0.0);
    CHECK(one.sz(2, 2).real() == -1.0);
    CHECK_THROWS_AS(build_spin_operators(4), DomainError);
    CHECK_THROWS_AS(build_spin_operators(1), DomainError);
}

TEST_CASE("spin operators: algebra identities") {
    for (int mult : {2, 3}) {
        const SpinOperators op = build_spin_operators(mult);
        const std::complex<double> i(0, 1);
        CHECK(max_abs(op.sx * op.sy - op.sy * op.sx - i * op.sz) < 1e-14);
        CHECK(max_abs(op.sy * op.sz - op.sz * op.sy - i * op.sx) < 1e-14);
        CHECK(max_abs(op.sz * op.sx - op.sx * op.sz - i * op.sy) < 1e-14);
        const double s = (mult - 1) / 2.0;
        const ComplexMatrix casimir = op.sx * op.sx + op.sy * op.sy + op.sz * op.sz;
        CHECK(max_abs(casimir - s * (s + 1) * ComplexMatrix::Identity(mult, mult)) < 1e-14);
        for (const ComplexMatrix* m : {&op.sx, &op.sy, &op.sz}) CHECK(max_abs(*m - m->adjoint()) == 0.0);
    }
}

TEST_CASE("hamiltonian: electron-only spectra") {
    SUBCASE("zero field") {
        const auto e = eigendecompose(build_hamiltonian(electron_only(0.0)));
        CHECK(e.eigenvalues(0) == 0.0);
        CHECK(e.eigenvalues(1) == 2.87e9);
        CHECK(e.eigenvalues(2) == 2.87e9);
    }
    SUBCASE("axial field") {
        const SpinSystem s = electron_only(100.0);
        const auto e = eigendecompose(build_hamiltonian(s));
        CHECK(e.eigenvalues(0) == 0.0);
        CHECK(e.eigenvalues(1) == doctest::Approx(s.D - s.gammaE * 100.0).epsilon(1e-15));
        CHECK(e.eigenvalues(2) == doctest::Approx(s.D + s.gammaE * 100.0).epsilon(1e-15));
    }
}

TEST_CASE("hamiltonian: dimension and validation") {
    SpinSystem s = testutil::carbon_system(20.0, true);
    CHECK(s.dimension() == 18);
    CHECK(build_hamiltonian(s).rows() == 18);
    s.includeN = false;
    CHECK(s.dimension() == 6);
    s.includeN = true;
    for (int k = 0; k < 3; ++k) s.carbons.push_back({"C" + std::to_string(k), Tensor3::Zero()});
    CHECK(s.dimension() == 3 * 3 * 16);
    s.carbons.push_back({"C9", Tensor3::Zero()});
    CHECK_THROWS_AS(s.validate(), CapacityError);
    CHECK_THROWS_AS(build_hamiltonian(s), CapacityError);

    SpinSystem bad = testutil::carbon_system(20.0, false);
    bad.carbons[0].A(0, 2) += 1.0;
    CHECK_THROWS_AS(build_hamiltonian(bad), ValidationError);

    SpinSystem dup = testutil::carbon_system(20.0, false);
    dup.carbons.push_back(dup.carbons[0]);
    CHECK_THROWS_AS(dup.validate(), ValidationError);

    SpinSystem reserved = testutil::carbon_system(20.0, false);
    reserved.carbons[0].label = "N14";
    CHECK_THROWS_AS(reserved.validate(), ValidationError);
    CHECK_THROWS_AS(testutil::carbon_system(20.0, false).carbon_index("C13-9"), LookupError);
}

TEST_CASE("hamiltonian: element-wise oracle, 18-dim at 510 G") {
    const SpinSystem s = testutil::carbon_system(510.0, true);
    const ComplexMatrix H = build_hamiltonian(s);
    const oracle::CMat ref = oracle::assemble(testutil::to_oracle(s));
    REQUIRE(ref.n == 18);
    double worst = 0.0;
    for (std::size_t i = 0; i < 18; ++i)
        for (std::size_t j = 0; j < 18; ++j)
            worst = std::max(worst, static_cast<double>(std::abs(ref(i, j) - oracle::cld(H(i, j).real(), H(i, j).imag()))));
    CHECK(worst < 1e-6);

    const auto ev = oracle::hermitian_eigenvalues(ref);
    const auto e = eigendecompose(H);
    double evWorst = 0.0;
    for (std::size_t k = 0; k < 18; ++k) {
        evWorst = std::max(evWorst, static_cast<double>(std::fabs(ev[k] - e.eigenvalues(static_cast<Eigen::Index>(k)))));
    }
    MESSAGE("max eigenvalue deviation from long-double oracle: " << evWorst << " Hz");
    CHECK(evWorst < 1e-6);
}

TEST_CASE("eigendecompose: small exact cases") {
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = 3;
    d(1, 1) = 1;
    d(2, 2) = 2;
    const auto e = eigendecompose(d);
    CHECK(e.eigenvalues(0) == 1.0);
    CHECK(e.eigenvalues(1) == 2.0);
    CHECK(e.eigenvalues(2) == 3.0);

    ComplexMatrix px(2, 2);
    px << 0, 1, 1, 0;
    const auto p = eigendecompose(px);
    CHECK(p.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(p.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("eigendecompose: reconstruction, orthonormality and trace") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix H = testutil::random_hermitian(rng, 18, 1e6);
        const auto e = eigendecompose(H);
        const ComplexMatrix& V = e.eigenvectors;
        const ComplexMatrix R = V * e.eigenvalues.cast<std::complex<double>>().asDiagonal() * V.adjoint();
        CHECK((R - H).norm() / H.norm() < 1e-12);
        CHECK(max_abs(V.adjoint() * V - ComplexMatrix::Identity(18, 18)) < 1e-12);
        CHECK(std::abs(e.eigenvalues.sum() - H.trace().real()) <= 1e-12 * H.norm());
        for (Eigen::Index k = 1; k < 18; ++k) CHECK(e.eigenvalues(k) >= e.eigenvalues(k - 1));
    }
}

TEST_CASE("eigendecompose: rejects non-Hermitian input") {
    ComplexMatrix m(2, 2);
    m << 1, 2, 3, 4;
    CHECK_THROWS_AS(eigendecompose(m), ValidationError);
    ComplexMatrix r(2, 3);
    CHECK_THROWS_AS(eigendecompose(r), ValidationError);
}

TEST_CASE("labels: electron only at 100 G") {
    const auto e = solve(electron_only(100.0));
    REQUIRE(e.labeled());
    CHECK(e.labels[0].mS == 0);
    CHECK(e.labels[1].mS == -1);
    CHECK(e.labels[2].mS == 1);
    for (const auto& l : e.labels) CHECK(l.overlap == 1.0);
}

TEST_CASE("labels: 18-dim at 510 G have overlap >= 0.9 and form a bijection") {
    const SpinSystem s = testutil::carbon_system(510.0, true);
    const auto e = solve(s);
    std::set<std::size_t> seen;
    for (const auto& l : e.labels) {
        CHECK(l.overlap >= 0.9);
        seen.insert(basis_index(s, l));
    }
    CHECK(seen.size() == 18);
}

TEST_CASE("labels: degenerate zero-field spectrum is labeled deterministically") {
    const SpinSystem s = electron_only(0.0);
    const auto a = solve(s), b = solve(s);
    for (std::size_t k = 0; k < 3; ++k) CHECK(a.labels[k].same_state(b.labels[k]));
    CHECK(a.labels[0].mS == 0);
}

TEST_CASE("labels: ground-state anticrossing raises an ambiguity error") {
    SpinSystem s = testutil::carbon_system(1000.0, true);
    double worstOverlap = 1.0;
    bool raised = false;
    for (double bz = 1015.0; bz <= 1035.0; bz += 0.02) {
        s.B.z() = bz;
        try {
            solve(s);
        } catch (const AmbiguityError& err) {
            raised = true;
            CHECK(std::string(err.what()).find("overlap") != std::string::npos);
            break;
        }
        const auto e = label_eigenstates(eigendecompose(build_hamiltonian(s)), s, 0.0);
        for (const auto& l : e.labels) worstOverlap = std::min(worstOverlap, l.overlap);
    }
    CHECK(raised);
}

TEST_CASE("transition frequencies: analytic cases") {
    SUBCASE("zero-field splitting") {
        const SpinSystem s = electron_only(0.0);
        const auto e = solve(s);
        StateLabel g, p, m;
        p.mS = 1;
        m.mS = -1;
        CHECK(transition_frequency(e, g, p) == 2.87e9);
        CHECK(transition_frequency(e, g, m) == 2.87e9);
    }
    SUBCASE("bare carbon Zeeman") {
        SpinSystem s = testutil::carbon_system(20.0, false);
        s.carbons[0].A.setZero();
        const auto e = solve(s);
        StateLabel up, down;
        up.mI_C = {0.5};
        down.mI_C = {-0.5};
        CHECK(transition_frequency(e, up, down) == doctest::Approx(s.gammaC13 * 20.0).epsilon(1e-9));
    }
    SUBCASE("missing label") {
        const auto e = solve(electron_only(0.0));
        StateLabel bogus;
        bogus.mI_C = {0.5};
        CHECK_THROWS_AS(e.energy_of(bogus), LookupError);
    }
}

TEST_CASE("transition frequencies: secular estimate within second-order bounds") {
    const SpinSystem s = testutil::carbon_system(20.0, false);
    const auto e = solve(s);
    StateLabel up, down;
    up.mS = down.mS = 1;
    up.mI_C = {0.5};
    down.mI_C = {-0.5};
    const double f = transition_frequency(e, up, down);
    const Tensor3& A = s.carbons[0].A;
    const double secular = std::abs(A(2, 2) - s.gammaC13 * 20.0);
    // Pseudo-secular term (A_zx, A_zy) and electron admixture through the
    // transverse rows of A, both second order.
    const double transverse = A(2, 0) * A(2, 0) + A(2, 1) * A(2, 1);
    const double bound = transverse / secular + 2.0 * A.squaredNorm() / (s.D - s.gammaE * 20.0);
    MESSAGE("f = " << f << " Hz, secular " << secular << " Hz, bound " << bound << " Hz");
    CHECK(std::abs(f - secular) <= bound);
}

TEST_CASE("rotate_about_z keeps the z-row norm and symmetry") {
    const Tensor3 A = testutil::carbon_tensor();
    const Tensor3 R = rotate_about_z(A, 0.523);
    CHECK(R.row(2).norm() == doctest::Approx(A.row(2).norm()).epsilon(1e-15));
    CHECK((R - R.transpose()).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(R(2, 2) == A(2, 2));
}

TEST_CASE("state labels print and compare") {
    StateLabel l;
    l.mS = 1;
    l.mI_N = 0;
    l.mI_C = {0.5, -0.5};
    CHECK(l.to_string() == "|mS=+1,mN=0,mC=+1/2;-1/2>");
    StateLabel m = l;
    m.overlap = 0.3;
    CHECK(l.same_state(m));
    m.mI_C[1] = 0.5;
    CHECK_FALSE(l.same_state(m));
}

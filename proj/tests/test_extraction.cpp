// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <vector>

#include "nvthermo/errors.hpp"
#include "nvthermo/extraction.hpp"
#include "test_util.hpp"

using namespace nvthermo;

namespace {

// Manifold frequencies from the long-double oracle spectrum, at the level
// positions the library's labels pick out.
ManifoldFrequencies oracle_frequencies(const SpinSystem& s, const std::string& nucleus) {
    const auto ev = oracle::hermitian_eigenvalues(oracle::assemble(testutil::to_oracle(s)));
    const auto e = solve(s);
    ManifoldFrequencies f;
    for (int mS : {1, -1}) {
        const auto [up, down] = nuclear_transition_labels(s, nucleus, mS);
        const double w = static_cast<double>(std::fabs(ev[e.index_of(up)] - ev[e.index_of(down)]));
        (mS == 1 ? f.omegaPlus : f.omegaMinus) = w;
    }
    return f;
}

}  // namespace

TEST_CASE("manifold frequencies: pure Zeeman") {
    SpinSystem s = testutil::carbon_system(20.0, true);
    s.carbons[0].A.setZero();
    const auto f = manifold_frequencies(s, "C13-2");
    CHECK(f.omegaPlus == doctest::Approx(s.gammaC13 * 20.0).epsilon(1e-9));
    CHECK(f.omegaMinus == doctest::Approx(s.gammaC13 * 20.0).epsilon(1e-9));
}

TEST_CASE("manifold frequencies: axial-only coupling is secular") {
    SpinSystem s = testutil::carbon_system(20.0, false);
    s.carbons[0].A = Tensor3::Zero();
    s.carbons[0].A(2, 2) = 13.7e6;
    const auto f = manifold_frequencies(s, "C13-2");
    const double z = s.gammaC13 * 20.0;
    CHECK(std::abs(f.omegaPlus - std::abs(13.7e6 - z)) < 1e-6);
    CHECK(std::abs(f.omegaMinus - std::abs(13.7e6 + z)) < 1e-6);
}

TEST_CASE("manifold frequencies: full tensor against the dense oracle") {
    for (bool withN : {false, true}) {
        const SpinSystem s = testutil::carbon_system(20.0, withN);
        const auto f = manifold_frequencies(s, "C13-2");
        const auto ref = oracle_frequencies(s, "C13-2");
        CHECK(std::abs(f.omegaPlus - ref.omegaPlus) < 1e-6);
        CHECK(std::abs(f.omegaMinus - ref.omegaMinus) < 1e-6);
        CHECK(f.omegaPlus > 0);
        CHECK(f.omegaMinus > 0);
    }
}

TEST_CASE("manifold frequencies: errors") {
    const SpinSystem s = testutil::carbon_system(20.0, true);
    CHECK_THROWS_AS(manifold_frequencies(s, "C13-7"), LookupError);
    CHECK_THROWS_AS(manifold_frequencies(s, "N14"), DomainError);
    CHECK_THROWS_AS(nuclear_transition_labels(s, "C13-2", 0), DomainError);
}

TEST_CASE("mean coupling: arithmetic and identities") {
    ManifoldFrequencies f{14.0e6, 13.4e6, "C13-2"};
    Tensor3 A = Tensor3::Zero();
    A(2, 2) = 13.0e6;
    const auto r = mean_coupling(f, A);
    CHECK(r.mean == 13.7e6);
    CHECK(r.couplingNorm == 13.0e6);
    CHECK(r.mean == r.couplingNorm + r.remainder);

    ManifoldFrequencies same{13.7e6, 13.7e6, "C13-2"};
    const auto s = mean_coupling(same, testutil::carbon_tensor());
    CHECK(s.mean == 13.7e6);
    CHECK(s.remainder == 13.7e6 - s.couplingNorm);

    ManifoldFrequencies swapped{13.4e6, 14.0e6, "C13-2"};
    CHECK(mean_coupling(swapped, A).mean == r.mean);
    ManifoldFrequencies bad{-1.0, 1.0, "C13-2"};
    CHECK_THROWS_AS(mean_coupling(bad, A), ValidationError);
}

TEST_CASE("mean coupling: operating point sits just above 13685 kHz") {
    const auto r = extract(testutil::carbon_system(20.0, true), "C13-2");
    MESSAGE("mean = " << r.mean << " Hz, R = " << r.remainder << " Hz");
    CHECK(r.mean - 13685e3 > 0.0);
    CHECK(r.mean - 13685e3 < 5e3);
    CHECK(r.mean == r.couplingNorm + r.remainder);
}

TEST_CASE("remainder stability: repeated tensors give zero spread") {
    const SpinSystem s = testutil::carbon_system(20.0, true);
    const std::vector<Tensor3> tensors(4, testutil::carbon_tensor());
    const auto rep = remainder_stability(s, "C13-2", tensors);
    CHECK(rep.results.size() == 4);
    CHECK(rep.spread == 0.0);
}

TEST_CASE("remainder stability: rotation of the transverse z-row about the axis") {
    const SpinSystem s = testutil::carbon_system(20.0, true);
    const Tensor3 A = testutil::carbon_tensor();
    // Rotating the whole tensor about z keeps ‖A_z‖ and the axial field.
    const std::vector<Tensor3> tensors{A, rotate_about_z(A, std::numbers::pi / 6)};
    const auto rep = remainder_stability(s, "C13-2", tensors);
    CHECK(rep.spread < 1e-3);
    CHECK(std::abs(rep.results[0].mean - rep.results[1].mean) < 1e-3);
}

TEST_CASE("remainder stability: A_zz sweep of +-1 kHz at 20 G") {
    const SpinSystem s = testutil::carbon_system(20.0, true);
    std::vector<Tensor3> tensors;
    for (double d = -1000.0; d <= 1000.0; d += 250.0) tensors.push_back(testutil::carbon_tensor(13.6755e6 + d));
    const auto rep = remainder_stability(s, "C13-2", tensors);
    MESSAGE("R spread over the sweep: " << rep.spread << " Hz");
    CHECK(rep.spread < 1.0);
    for (std::size_t i = 1; i < tensors.size(); ++i) {
        const double dMean = rep.results[i].mean - rep.results[0].mean;
        const double dNorm = rep.results[i].couplingNorm - rep.results[0].couplingNorm;
        CHECK(std::abs(dMean - dNorm) < 1.0);
    }
}

TEST_CASE("remainder stability: changing field is a contract violation") {
    SpinSystem a = testutil::carbon_system(20.0, true), b = a;
    b.B.z() = 20.5;
    const std::vector<SpinSystem> systems{a, b};
    CHECK_THROWS_AS(remainder_stability(systems, "C13-2"), ContractError);
}

TEST_CASE("rf_to_absolute") {
    CHECK(rf_to_absolute(13683400.0, 1203.5) == 13684603.5);
    CHECK(rf_to_absolute(13683400.0, 0.0) == 13683400.0);
    CHECK(rf_to_absolute(13683400.0, -400.0) == 13683000.0);
}

TEST_CASE("temperature sweep tracks the coupling norm") {
    const SpinSystem s = testutil::carbon_system(20.0, true);
    const Tensor3 A = testutil::carbon_tensor();
    Tensor3 slope = Tensor3::Zero();
    slope(2, 2) = 110.9 * A.row(2).norm() / A(2, 2);
    const std::vector<double> temps{295, 300, 305, 310, 315, 320};
    const auto rows = temperature_sweep(s, "C13-2", slope, 300.0, temps);
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double dMean = rows[i].result.mean - rows[i - 1].result.mean;
        CHECK(std::abs(dMean - 110.9 * 5) < 0.2);
        CHECK(std::abs(rows[i].result.remainder - rows[0].result.remainder) < 1.0);
    }
}

TEST_CASE("scaling the whole tensor moves R at second order") {
    // R is dominated by transverse admixture ∝ A²/D, so a uniform relative
    // change ε of the tensor shifts R by about 2εR.
    const SpinSystem s = testutil::carbon_system(20.0, true);
    const Tensor3 A = testutil::carbon_tensor();
    const double eps = 4e-5;
    const std::vector<Tensor3> tensors{A, A * (1 + eps)};
    const auto rep = remainder_stability(s, "C13-2", tensors);
    const double R = rep.results[0].remainder;
    const double dR = rep.results[1].remainder - R;
    CHECK(dR == doctest::Approx(2 * eps * R).epsilon(0.05));
}

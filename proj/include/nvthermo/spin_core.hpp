// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spin_core.hpp
 * @brief NV⁻ ground-state spin Hamiltonian: operators, assembly, dense
 *        diagonalization and product-basis labeling of eigenstates.
 *
 * Hilbert space ordering is electron ⊗ 14N ⊗ 13C(1) ⊗ 13C(2) ⊗ ..., each
 * factor in the |m⟩ basis with m descending (+1, 0, −1 or +½, −½). The 14N
 * factor is present only when SpinSystem::includeN is set.
 *
 * All couplings are frequencies (Hz); the field is in gauss with z along the
 * NV axis. H = D·Sz² + γe·B·S
 *            + P·Iz² − γN·B·I + S·A_N·I
 *            + Σ_k (−γC·B·I_k + S·A_k·I_k).
 */

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nvthermo/constants.hpp"

namespace nvthermo {

using ComplexMatrix = Eigen::MatrixXcd;
using Tensor3 = Eigen::Matrix3d;

inline constexpr std::size_t kMaxCarbons = 4;
inline constexpr double kDefaultLabelThreshold = 0.6;

struct SpinOperators {
    int multiplicity = 0;
    ComplexMatrix sx, sy, sz;
};

/// Angular-momentum matrices for spin 1/2 (multiplicity 2) or spin 1 (3).
SpinOperators build_spin_operators(int multiplicity);

struct CarbonSite {
    std::string label;  // e.g. "C13-2"
    Tensor3 A = Tensor3::Zero();
};

struct SpinSystem {
    double D = 2.87e9;
    double P = -5.01e6;
    double gammaE = PhysicalConstants{}.gammaE_HzPerG;
    double gammaN14 = PhysicalConstants{}.gammaN14_HzPerG;
    double gammaC13 = PhysicalConstants{}.gammaC13_HzPerG;
    Eigen::Vector3d B = Eigen::Vector3d::Zero();
    Tensor3 AN = Tensor3::Zero();
    std::vector<CarbonSite> carbons;
    bool includeN = false;

    /// C3v-symmetric tensor diag(transverse, transverse, axial).
    static Tensor3 axial_tensor(double axial, double transverse);

    /// System with gyromagnetic ratios taken from @p constants.
    static SpinSystem with_constants(const PhysicalConstants& constants);

    std::size_t dimension() const;
    std::size_t nuclear_dimension() const;

    /// Throws ValidationError / CapacityError when an invariant is broken.
    void validate() const;

    /// Index of the carbon with @p label; throws LookupError.
    std::size_t carbon_index(const std::string& label) const;
};

/// Product-basis label. mI_C holds ±0.5 per carbon in system order.
struct StateLabel {
    int mS = 0;
    std::optional<int> mI_N;
    std::vector<double> mI_C;
    double overlap = 1.0;

    std::string to_string() const;

    // Equality ignores the overlap.
    bool same_state(const StateLabel& other) const;
};

struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;  // Hz, ascending
    ComplexMatrix eigenvectors;   // orthonormal columns
    std::vector<StateLabel> labels;  // empty until labeled; labels[j] belongs to column j
    // Same spectrum in extended precision. Nuclear transitions are kHz-MHz
    // differences of GHz levels, below the resolution of a double.
    std::vector<long double> precise;

    std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
    bool labeled() const { return !labels.empty(); }

    /// Index of the eigenstate carrying @p label; throws LookupError.
    std::size_t index_of(const StateLabel& label) const;
    double energy_of(const StateLabel& label) const;
};

/// Product-basis label for each basis index of @p system.
std::vector<StateLabel> product_basis_labels(const SpinSystem& system);

/// Basis index of a product state; throws LookupError for labels foreign to @p system.
std::size_t basis_index(const SpinSystem& system, const StateLabel& label);

ComplexMatrix build_hamiltonian(const SpinSystem& system);

using ComplexMatrixLD = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

/// The same Hamiltonian assembled in extended precision.
ComplexMatrixLD build_hamiltonian_extended(const SpinSystem& system);

/// Dense Hermitian eigensolver. Rejects inputs whose anti-Hermitian part
/// exceeds 1e-10 of the largest entry.
EigenDecomposition eigendecompose(const ComplexMatrix& H);

/// Assigns every eigenstate the product-basis label of maximal squared
/// overlap as a perfect matching. Greedy assignment by descending overlap is
/// used unless it leaves some state off its best label, in which case the
/// maximum-total-overlap matching is computed instead. Exact overlap ties are
/// broken by basis order. Throws AmbiguityError when any assigned overlap is
/// below @p threshold.
EigenDecomposition label_eigenstates(EigenDecomposition decomposition, const SpinSystem& system,
                                     double threshold = kDefaultLabelThreshold);

/// Re-evaluates every eigenvalue as the Rayleigh quotient of its eigenvector
/// against @p H and re-sorts.
void refine_eigenvalues(EigenDecomposition& decomposition, const ComplexMatrixLD& H);

/// Convenience: build, diagonalize and label. Eigenvalues are refined against
/// the extended-precision Hamiltonian.
EigenDecomposition solve(const SpinSystem& system, double threshold = kDefaultLabelThreshold);

/// |E(a) − E(b)| in Hz.
double transition_frequency(const EigenDecomposition& decomposition, const StateLabel& a,
                            const StateLabel& b);

/// Rotation of a tensor about the NV axis: R·A·Rᵀ.
Tensor3 rotate_about_z(const Tensor3& tensor, double angle_rad);

}  // namespace nvthermo

// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/spin_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "nvthermo/assignment.hpp"
#include "nvthermo/errors.hpp"

namespace nvthermo {

namespace {

using cd = std::complex<double>;

template <class Matrix>
Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Product operator with factor `ops[k]` on slot k (identity where null).
template <class Matrix>
Matrix lift(const std::vector<const Matrix*>& ops, const std::vector<int>& dims) {
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t k = 0; k < dims.size(); ++k) {
        out = kron(out, ops[k] ? *ops[k] : Matrix::Identity(dims[k], dims[k]));
    }
    return out;
}

template <class Matrix>
Matrix lift(const Matrix& op, std::size_t slot, const std::vector<int>& dims) {
    std::vector<const Matrix*> ops(dims.size(), nullptr);
    ops[slot] = &op;
    return lift(ops, dims);
}

std::vector<int> factor_dims(const SpinSystem& system) {
    std::vector<int> dims{3};
    if (system.includeN) dims.push_back(3);
    for (std::size_t k = 0; k < system.carbons.size(); ++k) dims.push_back(2);
    return dims;
}

void check_symmetric(const Tensor3& A, const std::string& what) {
    if (!A.allFinite()) throw ValidationError(what + ": hyperfine tensor has non-finite entries");
    const double scale = A.cwiseAbs().maxCoeff();
    const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        std::ostringstream msg;
        msg << what << ": hyperfine tensor is not symmetric (max |A - A^T| = " << asym << " Hz)";
        throw ValidationError(msg.str());
    }
}

// S·A·I for the electron on slot 0 and a nucleus on `slot`.
template <class Matrix>
Matrix coupling(const Tensor3& A, const Matrix* S[3], const Matrix* I[3], std::size_t slot,
                const std::vector<int>& dims) {
    using Scalar = typename Matrix::Scalar::value_type;
    const Eigen::Index n = std::accumulate(dims.begin(), dims.end(), Eigen::Index{1}, std::multiplies<>());
    Matrix out = Matrix::Zero(n, n);
    std::vector<const Matrix*> ops(dims.size(), nullptr);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            if (A(a, b) == 0.0) continue;
            ops[0] = S[a];
            ops[slot] = I[b];
            out += static_cast<Scalar>(A(a, b)) * lift(ops, dims);
        }
    }
    return out;
}

template <class Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> assemble(const SpinSystem& system) {
    using Matrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
    system.validate();
    const std::vector<int> dims = factor_dims(system);
    const SpinOperators o1 = build_spin_operators(3), o12 = build_spin_operators(2);
    const Matrix sx = o1.sx.cast<std::complex<Scalar>>(), sy = o1.sy.cast<std::complex<Scalar>>(),
                 sz = o1.sz.cast<std::complex<Scalar>>();
    const Matrix hx = o12.sx.cast<std::complex<Scalar>>(), hy = o12.sy.cast<std::complex<Scalar>>(),
                 hz = o12.sz.cast<std::complex<Scalar>>();
    const Matrix* S[3] = {&sx, &sy, &sz};
    const Scalar bx = system.B.x(), by = system.B.y(), bz = system.B.z();
    auto zeeman = [&](const Matrix& x, const Matrix& y, const Matrix& z) -> Matrix {
        return bx * x + by * y + bz * z;
    };

    const Matrix sz2 = sz * sz;
    Matrix H = static_cast<Scalar>(system.D) * lift(sz2, 0, dims) +
               static_cast<Scalar>(system.gammaE) * lift<Matrix>(zeeman(sx, sy, sz), 0, dims);

    std::size_t slot = 1;
    if (system.includeN) {
        const Matrix* I[3] = {&sx, &sy, &sz};
        H += static_cast<Scalar>(system.P) * lift(sz2, slot, dims);
        H -= static_cast<Scalar>(system.gammaN14) * lift<Matrix>(zeeman(sx, sy, sz), slot, dims);
        H += coupling(system.AN, S, I, slot, dims);
        ++slot;
    }
    for (const auto& carbon : system.carbons) {
        const Matrix* I[3] = {&hx, &hy, &hz};
        H -= static_cast<Scalar>(system.gammaC13) * lift<Matrix>(zeeman(hx, hy, hz), slot, dims);
        H += coupling(carbon.A, S, I, slot, dims);
        ++slot;
    }
    return H;
}

std::string format_half(double m) { return m > 0 ? "+1/2" : "-1/2"; }

std::string format_int(int m) {
    if (m > 0) return "+" + std::to_string(m);
    return std::to_string(m);
}

}  // namespace

SpinOperators build_spin_operators(int multiplicity) {
    if (multiplicity != 2 && multiplicity != 3) {
        throw DomainError("build_spin_operators: multiplicity must be 2 or 3, got " +
                          std::to_string(multiplicity));
    }
    const double s = (multiplicity - 1) / 2.0;
    const int n = multiplicity;
    SpinOperators ops;
    ops.multiplicity = multiplicity;
    ops.sz = ComplexMatrix::Zero(n, n);
    ComplexMatrix splus = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double m = s - i;
        ops.sz(i, i) = m;
        // S+|m⟩ = sqrt(s(s+1) - m(m+1)) |m+1⟩; |m+1⟩ sits one row above.
        if (i > 0) splus(i - 1, i) = std::sqrt(s * (s + 1) - m * (m + 1));
    }
    const ComplexMatrix sminus = splus.adjoint();
    ops.sx = 0.5 * (splus + sminus);
    ops.sy = cd(0.0, -0.5) * (splus - sminus);
    return ops;
}

Tensor3 SpinSystem::axial_tensor(double axial, double transverse) {
    Tensor3 A = Tensor3::Zero();
    A(0, 0) = transverse;
    A(1, 1) = transverse;
    A(2, 2) = axial;
    return A;
}

SpinSystem SpinSystem::with_constants(const PhysicalConstants& constants) {
    SpinSystem system;
    system.gammaE = constants.gammaE_HzPerG;
    system.gammaN14 = constants.gammaN14_HzPerG;
    system.gammaC13 = constants.gammaC13_HzPerG;
    return system;
}

std::size_t SpinSystem::nuclear_dimension() const {
    return (includeN ? 3u : 1u) * (std::size_t{1} << carbons.size());
}

std::size_t SpinSystem::dimension() const { return 3 * nuclear_dimension(); }

void SpinSystem::validate() const {
    if (carbons.size() > kMaxCarbons) {
        throw CapacityError("spin system: " + std::to_string(carbons.size()) +
                            " carbon sites requested, at most " + std::to_string(kMaxCarbons) +
                            " are supported (dimension <= 144)");
    }
    const double scalars[] = {D, P, gammaE, gammaN14, gammaC13};
    for (double v : scalars) {
        if (!std::isfinite(v)) throw ValidationError("spin system: non-finite scalar parameter");
    }
    if (!B.allFinite()) throw ValidationError("spin system: non-finite field");
    if (includeN) check_symmetric(AN, "14N");
    std::set<std::string> seen;
    for (const auto& c : carbons) {
        if (c.label.empty()) throw ValidationError("spin system: carbon site without a label");
        if (c.label == "N14") throw ValidationError("spin system: carbon label 'N14' is reserved");
        if (!seen.insert(c.label).second) {
            throw ValidationError("spin system: duplicate carbon label '" + c.label + "'");
        }
        check_symmetric(c.A, c.label);
    }
}

std::size_t SpinSystem::carbon_index(const std::string& label) const {
    for (std::size_t k = 0; k < carbons.size(); ++k) {
        if (carbons[k].label == label) return k;
    }
    throw LookupError("spin system has no nucleus labelled '" + label + "'");
}

std::string StateLabel::to_string() const {
    std::string out = "|mS=" + format_int(mS);
    if (mI_N) out += ",mN=" + format_int(*mI_N);
    if (!mI_C.empty()) {
        out += ",mC=";
        for (std::size_t k = 0; k < mI_C.size(); ++k) {
            if (k) out += ";";
            out += format_half(mI_C[k]);
        }
    }
    return out + ">";
}

bool StateLabel::same_state(const StateLabel& other) const {
    return mS == other.mS && mI_N == other.mI_N && mI_C == other.mI_C;
}

std::size_t EigenDecomposition::index_of(const StateLabel& label) const {
    if (!labeled()) throw LookupError("eigendecomposition has not been labeled");
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j].same_state(label)) return j;
    }
    throw LookupError("no eigenstate labelled " + label.to_string());
}

double EigenDecomposition::energy_of(const StateLabel& label) const {
    return eigenvalues(static_cast<Eigen::Index>(index_of(label)));
}

std::vector<StateLabel> product_basis_labels(const SpinSystem& system) {
    const std::size_t nc = system.carbons.size();
    std::vector<StateLabel> labels;
    labels.reserve(system.dimension());
    for (int mS : {1, 0, -1}) {
        const std::vector<int> nitrogen = system.includeN ? std::vector<int>{1, 0, -1} : std::vector<int>{0};
        for (int mN : nitrogen) {
            for (std::size_t bits = 0; bits < (std::size_t{1} << nc); ++bits) {
                StateLabel label;
                label.mS = mS;
                if (system.includeN) label.mI_N = mN;
                label.mI_C.resize(nc);
                // Most significant bit is the first carbon; bit set means -1/2.
                for (std::size_t k = 0; k < nc; ++k) {
                    const bool down = (bits >> (nc - 1 - k)) & 1u;
                    label.mI_C[k] = down ? -0.5 : 0.5;
                }
                labels.push_back(std::move(label));
            }
        }
    }
    return labels;
}

std::size_t basis_index(const SpinSystem& system, const StateLabel& label) {
    const std::size_t nc = system.carbons.size();
    if (label.mS < -1 || label.mS > 1) throw LookupError("label " + label.to_string() + ": mS out of range");
    if (label.mI_N.has_value() != system.includeN) {
        throw LookupError("label " + label.to_string() + ": 14N projection does not match the system");
    }
    if (label.mI_C.size() != nc) {
        throw LookupError("label " + label.to_string() + ": wrong number of carbon projections");
    }
    std::size_t index = static_cast<std::size_t>(1 - label.mS);
    if (system.includeN) {
        if (*label.mI_N < -1 || *label.mI_N > 1) throw LookupError("label " + label.to_string() + ": mN out of range");
        index = index * 3 + static_cast<std::size_t>(1 - *label.mI_N);
    }
    for (double m : label.mI_C) {
        if (m != 0.5 && m != -0.5) throw LookupError("label " + label.to_string() + ": carbon projection must be ±1/2");
        index = index * 2 + (m < 0 ? 1u : 0u);
    }
    return index;
}

ComplexMatrixLD build_hamiltonian_extended(const SpinSystem& system) { return assemble<long double>(system); }

ComplexMatrix build_hamiltonian(const SpinSystem& system) { return assemble<long double>(system).cast<cd>(); }

void refine_eigenvalues(EigenDecomposition& decomposition, const ComplexMatrixLD& H) {
    using ld = long double;
    const Eigen::Index n = static_cast<Eigen::Index>(decomposition.size());
    if (H.rows() != n || H.cols() != n || decomposition.eigenvectors.rows() != n) {
        throw ValidationError("refine_eigenvalues: matrix and decomposition sizes differ");
    }
    // λ = λ0 + v†(H − λ0)v / v†v with λ0 the current estimate, so the
    // accumulated terms are small corrections.
    std::vector<std::pair<ld, Eigen::Index>> refined(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const ld lambda0 = decomposition.precise.empty() ? ld(decomposition.eigenvalues(k))
                                                         : decomposition.precise[static_cast<std::size_t>(k)];
        const Eigen::Matrix<std::complex<ld>, Eigen::Dynamic, 1> v =
            decomposition.eigenvectors.col(k).cast<std::complex<ld>>();
        ld acc = 0.0L, norm = 0.0L;
        for (Eigen::Index j = 0; j < n; ++j) {
            norm += std::norm(v(j));
            std::complex<ld> hv = -lambda0 * v(j);
            for (Eigen::Index i = 0; i < n; ++i) hv += H(j, i) * v(i);
            acc += (std::conj(v(j)) * hv).real();
        }
        refined[static_cast<std::size_t>(k)] = {lambda0 + acc / norm, k};
    }
    std::stable_sort(refined.begin(), refined.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const ComplexMatrix V = decomposition.eigenvectors;
    const std::vector<StateLabel> labels = decomposition.labels;
    decomposition.precise.resize(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto& [value, from] = refined[static_cast<std::size_t>(k)];
        decomposition.precise[static_cast<std::size_t>(k)] = value;
        decomposition.eigenvalues(k) = static_cast<double>(value);
        decomposition.eigenvectors.col(k) = V.col(from);
        if (!labels.empty()) decomposition.labels[static_cast<std::size_t>(k)] = labels[static_cast<std::size_t>(from)];
    }
}

EigenDecomposition eigendecompose(const ComplexMatrix& H) {
    if (H.rows() != H.cols() || H.rows() == 0) {
        throw ValidationError("eigendecompose: matrix must be square and non-empty");
    }
    if (!H.allFinite()) throw ValidationError("eigendecompose: matrix has non-finite entries");
    const double scale = H.cwiseAbs().maxCoeff();
    const double asym = (H - H.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale) {
        std::ostringstream msg;
        msg << "eigendecompose: matrix is not Hermitian (max |H - H^dagger| = " << asym
            << ", max |H| = " << scale << ")";
        throw ValidationError(msg.str());
    }

    // Exactly diagonal input: the spectrum is the diagonal itself.
    const Eigen::Index n = H.rows();
    bool diagonal = true;
    for (Eigen::Index j = 0; j < n && diagonal; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i != j && H(i, j) != std::complex<double>(0.0, 0.0)) {
                diagonal = false;
                break;
            }
        }
    }
    if (diagonal) {
        std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return H(a, a).real() < H(b, b).real(); });
        EigenDecomposition out;
        out.eigenvalues.resize(n);
        out.eigenvectors = ComplexMatrix::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            out.eigenvalues(k) = H(order[k], order[k]).real();
            out.eigenvectors(order[k], k) = 1.0;
        }
        out.precise.assign(out.eigenvalues.data(), out.eigenvalues.data() + n);
        return out;
    }

    // Solve on the traceless part.
    const double shift = H.diagonal().real().mean();
    ComplexMatrix work = 0.5 * (H + H.adjoint());
    work.diagonal().array() -= shift;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(work);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "eigendecompose: QR iteration did not converge for dimension " << H.rows()
            << " (iteration limit " << Eigen::SelfAdjointEigenSolver<ComplexMatrix>::m_maxIterations
            << " sweeps per eigenvalue)";
        throw NumericError(msg.str());
    }
    EigenDecomposition out;
    out.eigenvalues = solver.eigenvalues().array() + shift;
    out.eigenvectors = solver.eigenvectors();
    refine_eigenvalues(out, H.cast<std::complex<long double>>());
    return out;
}

EigenDecomposition label_eigenstates(EigenDecomposition decomposition, const SpinSystem& system,
                                     double threshold) {
    const std::size_t n = decomposition.size();
    if (n != system.dimension() || static_cast<std::size_t>(decomposition.eigenvectors.rows()) != n) {
        throw ValidationError("label_eigenstates: decomposition dimension does not match the spin system");
    }
    const std::vector<StateLabel> basis = product_basis_labels(system);
    // overlap(i, j) = |⟨basis i | eigenstate j⟩|²
    const Eigen::MatrixXd overlap = decomposition.eigenvectors.cwiseAbs2();

    // Greedy pass: descending overlap, ties by basis index then eigen index.
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    pairs.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) pairs.emplace_back(overlap(i, j), i, j);
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
        return std::get<2>(a) < std::get<2>(b);
    });
    std::vector<int> basis_of_state(n, -1);
    std::vector<bool> basis_taken(n, false);
    std::size_t assigned = 0;
    for (const auto& [w, i, j] : pairs) {
        if (assigned == n) break;
        if (basis_taken[i] || basis_of_state[j] >= 0) continue;
        basis_taken[i] = true;
        basis_of_state[j] = static_cast<int>(i);
        ++assigned;
    }

    bool conflict = false;
    for (std::size_t j = 0; j < n && !conflict; ++j) {
        Eigen::Index best = 0;
        overlap.col(static_cast<Eigen::Index>(j)).maxCoeff(&best);
        conflict = overlap(best, static_cast<Eigen::Index>(j)) >
                   overlap(basis_of_state[j], static_cast<Eigen::Index>(j));
    }
    if (conflict) {
        const std::vector<int> match = max_weight_assignment(overlap.transpose());
        for (std::size_t j = 0; j < n; ++j) basis_of_state[j] = match[j];
    }

    decomposition.labels.assign(n, StateLabel{});
    std::vector<std::size_t> offending;
    for (std::size_t j = 0; j < n; ++j) {
        StateLabel label = basis[static_cast<std::size_t>(basis_of_state[j])];
        label.overlap = overlap(basis_of_state[j], static_cast<Eigen::Index>(j));
        if (label.overlap < threshold) offending.push_back(j);
        decomposition.labels[j] = std::move(label);
    }
    if (!offending.empty()) {
        std::ostringstream msg;
        msg << "label_eigenstates: " << offending.size()
            << " eigenstate(s) below overlap threshold " << threshold
            << " (level anticrossing?):";
        for (std::size_t j : offending) {
            msg << " [state " << j << ", E=" << decomposition.eigenvalues(static_cast<Eigen::Index>(j))
                << " Hz, nearest " << decomposition.labels[j].to_string()
                << " overlap=" << decomposition.labels[j].overlap << "]";
        }
        throw AmbiguityError(msg.str());
    }
    return decomposition;
}

EigenDecomposition solve(const SpinSystem& system, double threshold) {
    const ComplexMatrixLD H = build_hamiltonian_extended(system);
    EigenDecomposition decomposition = eigendecompose(H.cast<cd>());
    refine_eigenvalues(decomposition, H);
    return label_eigenstates(std::move(decomposition), system, threshold);
}

double transition_frequency(const EigenDecomposition& decomposition, const StateLabel& a,
                            const StateLabel& b) {
    if (decomposition.precise.empty()) return std::abs(decomposition.energy_of(a) - decomposition.energy_of(b));
    const long double ea = decomposition.precise[decomposition.index_of(a)];
    const long double eb = decomposition.precise[decomposition.index_of(b)];
    return static_cast<double>(ea > eb ? ea - eb : eb - ea);
}

Tensor3 rotate_about_z(const Tensor3& tensor, double angle_rad) {
    const Eigen::Matrix3d R = Eigen::AngleAxisd(angle_rad, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    return R * tensor * R.transpose();
}

}  // namespace nvthermo

#pragma once

// Central numeric tolerances. Library code and tests cite these constants so
// the contract checked is the contract implemented.

namespace mgdm::tol {

// Symmetric eigensolver (cyclic Jacobi).
inline constexpr double kEigenOffdiagStop = 1e-13;  // off-diag Frobenius, relative
inline constexpr int kEigenMaxSweeps = 100;
inline constexpr double kEigenReconstruct = 1e-10;  // ||S - V L V^T||_F bound
inline constexpr double kEigenOrthonormal = 1e-10;  // ||V^T V - I||_F bound
inline constexpr double kSymmetryRel = 1e-12;       // admissible input asymmetry

// Linear solves (LU with partial pivoting).
inline constexpr double kSingularPivot = 1e-12;   // scaled by ||A||_F
inline constexpr double kSolveResidual = 1e-9;    // scaled by max(1, ||b||)

// Structured-matrix identities (Z, J, Omega decomposition).
inline constexpr double kExactIdentity = 1e-12;

// Stable-solution machinery.
inline constexpr double kStableResidual = 1e-8;   // scaled by max(1, ||alpha Sxy*||)

// Optimizer divergence guard.
inline constexpr double kDivergenceNorm = 1e12;

// d_gamma closed form: the literal formulas cancel terms of size gamma^-(M-1),
// so they are used only while that factor stays below this cap (gamma > 1 is
// always safe); beyond it the telescoped recurrence evaluates the same
// coefficients with O(1) terms, which also covers the gamma^-M overflow range.
inline constexpr double kDGammaLiteralCancelCap = 1e3;

}  // namespace mgdm::tol

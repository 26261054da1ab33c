#pragma once

namespace qwork::tol {

inline constexpr double kHermiticity = 1e-10;
inline constexpr double kUnitarity = 1e-10;
inline constexpr double kDensityTrace = 1e-10;
inline constexpr double kDensityMinEigenvalue = -1e-10;

// 0·log 0 cutoff in entropies.
inline constexpr double kEigFloor = 1e-14;
// Eigenvalues closer than this are treated as one eigenspace.
inline constexpr double kDegeneracyGap = 1e-9;

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiOffDiagonal = 1e-12;

// Work values closer than this are one atom.
inline constexpr double kWorkMerge = 1e-9;
inline constexpr double kNormalization = 1e-9;
inline constexpr double kClassicalNegativity = -1e-12;

inline constexpr double kAuditSatisfied = 1e-7;
inline constexpr double kAuditViolationFloor = 1e-3;

inline constexpr double kFcsImaginaryResidue = 1e-10;
inline constexpr double kPovmPositivity = -1e-8;
inline constexpr double kPovmCompleteness = 1e-8;
inline constexpr double kPovmReproduction = 1e-8;
inline constexpr double kPovmNotLinear = 1e-6;
inline constexpr double kCollectivePositivity = -1e-10;
inline constexpr double kLambdaBisection = 1e-6;

inline constexpr double kBetaMin = 1e-6;
inline constexpr double kBetaMax = 1e6;

// Pointer regimes, in units of g·ΔE/s.
inline constexpr double kPointerStrong = 20.0;
inline constexpr double kPointerWeak = 50.0;
inline constexpr double kPointerLimitTolerance = 1e-3;

// Trajectory cap for consistent histories: d^(K+1) <= 2^20.
inline constexpr unsigned long long kTrajectoryCap = 1ull << 20;

}  // namespace qwork::tol

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "idsq/analyzer.hpp"

namespace idsq {

/// Largest c² keeping every cutoff coefficient nonnegative at one t: the minimum of -P/Q over
/// cells with Q < 0 (the positive prefactor cancels). nullopt when no cell has Q < 0.
struct Feasibility {
    Rational t;
    std::optional<Rational> c_star_sq;
    std::uint64_t argmin_j = 0, argmin_k = 0;
    std::uint64_t cells = 0;
    std::uint64_t exact_recomputations = 0;
};

/// Exact in both modes: float mode only shortlists cells whose ratio may be minimal and then
/// recomputes the shortlist in rationals. Ties go to the lexicographically smallest (j, k).
Feasibility max_feasible_csq(const CanonicalProblem& canon, const Rational& t, const Rational& B,
                             const ScanOptions& opt = {});

enum class CriticalStatus { CriticalPoint, IDForAllAlpha, Degenerate };

std::string_view to_string(CriticalStatus s);

struct CriticalPointReport {
    CriticalStatus status = CriticalStatus::CriticalPoint;
    CanonicalProblem canon;
    std::vector<Feasibility> per_t;
    /// α range [lo, hi] (user units, α = c/κ) over the top three rungs; hi may be +inf.
    double bracket_lo = 0.0, bracket_hi = 0.0;
    /// Relative spread (hi - lo)/hi of that bracket.
    double drift = 0.0;
    bool converged = false;
    /// Small-c reference for the p = 0 term, in canonical c²: d/(2ζ), d/(2ζ̃) or d/(2b) by case;
    /// nullopt when that term stays positive for every c. Not a bound on the critical point.
    std::optional<Rational> small_c_threshold;
};

CriticalPointReport estimate_critical_point(const GaussianProblem& problem, const std::vector<Rational>& t_ladder,
                                            const Rational& B, double drift_tol = 0.05,
                                            const ScanOptions& opt = {});

}  // namespace idsq

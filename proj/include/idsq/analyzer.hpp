#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "idsq/coefficients.hpp"
#include "idsq/model.hpp"
#include "idsq/parallel.hpp"

namespace idsq {

/// Index set {j, k >= 1 : √(jk) <= B t ln t} plus the boundary rows (j, 0), (0, k) for j, k <= ⌈B t ln t⌉.
struct CutoffSpec {
    Rational t, B;
    double radius = 0.0;            ///< B t ln t
    std::uint64_t max_product = 0;  ///< ⌊radius²⌋, interior test j·k <= max_product
    std::uint64_t boundary_max = 0; ///< ⌈radius⌉

    bool contains(std::uint64_t j, std::uint64_t k) const;
    /// Number of indices, boundary rows included.
    std::uint64_t size() const;
};

/// radius is evaluated with MPFR at `precision_bits`, so floor/ceil are exact for all practical inputs.
CutoffSpec cutoff_set(const Rational& t, const Rational& B, long precision_bits = kDefaultPrecisionBits);

/// Knobs shared by the sweeps. None of them changes a verdict except mode's cost and the list cap.
struct ScanOptions {
    GridMode mode = GridMode::Float;
    Parallelism par{};
    long precision_bits = kDefaultPrecisionBits;  ///< for the cutoff radius
    std::uint64_t max_violations = UINT64_MAX;
};

struct Violation {
    std::uint64_t j = 0, k = 0;
    double scaled = 0.0;      ///< R / (α^{j-1}β^{k-1}), or the boundary analogue
    double normalized = 0.0;  ///< t̄² · scaled
};

struct ScanVerdict {
    bool all_nonnegative = true;
    /// Strict violations in lexicographic (j, k) order, at most max_violations of them.
    std::vector<Violation> violations;
    std::uint64_t violation_count = 0;
    std::uint64_t cells_checked = 0;
    std::uint64_t exact_confirmations = 0;
    /// Every boundary coefficient, including rows past the truncation, is >= 0 at this c².
    bool boundary_rows_certified = false;
};

/// Sign of every scaled R_{j,k} over the cutoff at shift c² (only c² matters).
/// Float mode recomputes doubtful cells in exact arithmetic, so both modes return the same verdict.
ScanVerdict scan_positivity(const CanonicalProblem& canon, const Rational& c_sq, const Rational& t, const Rational& B,
                            const ScanOptions& opt = {});

/// Sign of a single scaled R_{j,k}, confirmed exactly when the float value is doubtful.
struct CellSign {
    int sign = 0;
    double scaled = 0.0;
    bool confirmed_exactly = false;
};
CellSign scaled_r_sign(const ScaledEvaluator& ev, const Rational& c_sq, std::uint64_t j, std::uint64_t k);

/// Σ |R_{j,k}| (unscaled) over interior indices in cutoff(B_ext) \ cutoff(B), carried as a logarithm
/// since α^{j-1}β^{k-1} underflows long before the sum is negligible. The envelope Σ (P + c²|Q|)
/// bounds the mass and is monotone in c².
struct TailMass {
    double log_mass = -INFINITY, log_envelope = -INFINITY;
    std::uint64_t cells = 0;

    double mass() const;
    double envelope() const;
};

TailMass tail_mass(const CanonicalProblem& canon, const Rational& c_sq, const Rational& t, const Rational& B,
                   const Rational& B_ext, const ScanOptions& opt = {});

enum class VerdictKind { IDForAllAlpha, IDCertifiedUpToHorizon, NotIDWitness, Inconclusive, Degenerate };

std::string_view to_string(VerdictKind v);

struct RungResult {
    Rational t;
    bool all_nonnegative = true;
    std::uint64_t violation_count = 0;
    std::uint64_t cells_checked = 0;
};

struct IdVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    CanonicalProblem canon;
    Rational c_sq;
    std::vector<RungResult> rungs;
    /// Violations at the top rung (capped).
    std::vector<Violation> violations;
    /// First top-rung violation in (j, k) order, tracked over the top three rungs.
    struct Witness {
        std::uint64_t j = 0, k = 0;
        Rational t;
        std::vector<double> normalized;  ///< top three rungs, increasing t
    };
    std::optional<Witness> witness;
};

/// Scans every rung; reports NotIDWitness only if the top-rung witness is negative at each of the
/// top three rungs with nondecreasing normalized magnitude, Inconclusive if the top rung fails otherwise.
IdVerdict id_verdict(const GaussianProblem& problem, const Rational& alpha, const std::vector<Rational>& t_ladder,
                     const Rational& B, const ScanOptions& opt = {});

/// Throws InvalidInput unless the ladder is nonempty, strictly increasing and every rung is >= 3.
void validate_ladder(const std::vector<Rational>& t_ladder);

}  // namespace idsq

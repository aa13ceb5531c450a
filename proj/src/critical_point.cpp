#include "idsq/critical_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace idsq {

namespace {

struct Candidate {
    std::uint64_t j, k;
    Rational ratio;
};

// Keeps the smaller ratio, ties to the smaller index.
void consider(std::optional<Candidate>& best, std::uint64_t j, std::uint64_t k, const Rational& ratio) {
    if (!best || ratio < best->ratio ||
        (ratio == best->ratio && std::tie(j, k) < std::tie(best->j, best->k)))
        best = Candidate{j, k, ratio};
}

struct FloatRatio {
    std::uint64_t j, k;
    double lo, hi;
};

}  // namespace

Feasibility max_feasible_csq(const CanonicalProblem& canon, const Rational& t, const Rational& B,
                             const ScanOptions& opt) {
    if (canon.degenerate) throw InvalidInput("degenerate covariance: no critical point");
    const CutoffSpec cut = cutoff_set(t, B, opt.precision_bits);
    const ScaledEvaluator ev(canon, t);
    Feasibility out;
    out.t = t;
    out.cells = cut.size();

    std::optional<Candidate> best;
    // Boundary rows are exact and cheap.
    for (std::uint64_t i = 1; i <= cut.boundary_max; ++i)
        for (auto [j, k] : {std::pair{std::uint64_t{0}, i}, std::pair{i, std::uint64_t{0}}}) {
            auto s = ev.exact(j, k);
            if (s.q < 0) consider(best, j, k, -s.p / s.q);
        }

    if (opt.mode == GridMode::Exact) {
        for_each_exact_interior(ev, cut.max_product, [&](std::uint64_t j, std::uint64_t k, const ScaledPQ& cell) {
            if (cell.q < 0) consider(best, j, k, -cell.p / cell.q);
        });
    } else {
        // Per row: float ratio intervals, plus exact ratios for cells whose Q sign needed confirming.
        struct Row {
            std::vector<FloatRatio> ratios;
            std::optional<Candidate> exact_best;
            std::uint64_t recomputed = 0;
        };
        std::vector<Row> rows(cut.max_product + 1);
        parallel_for(cut.max_product, opt.par, [&](std::size_t i) {
            const std::uint64_t j = i + 1;
            Row& row = rows[j];
            const std::uint64_t kmax = cut.max_product / j;
            for (std::uint64_t k = 1; k <= kmax; ++k) {
                FloatCell f = ev.evaluate(j, k);
                if (!std::isfinite(f.q) || std::abs(f.q) < 1e-12 * f.q_mag) {
                    auto s = ev.exact(j, k);
                    ++row.recomputed;
                    if (s.q < 0) consider(row.exact_best, j, k, -s.p / s.q);
                    continue;
                }
                if (f.q > 0) continue;
                const double ratio = -f.p / f.q;
                // Relative error of p is ~terms·eps; of q at most ~terms·eps·q_mag/|q|.
                const double err = ratio * 1e-12 * (1.0 + f.q_mag / std::abs(f.q));
                row.ratios.push_back({j, k, ratio - err, ratio + err});
            }
        });
        double cap = std::numeric_limits<double>::infinity();
        if (best) cap = best->ratio.get_d() * (1 + 1e-12);
        for (auto& row : rows) {
            out.exact_recomputations += row.recomputed;
            if (row.exact_best) {
                consider(best, row.exact_best->j, row.exact_best->k, row.exact_best->ratio);
                cap = std::min(cap, row.exact_best->ratio.get_d() * (1 + 1e-12));
            }
            for (const auto& r : row.ratios) cap = std::min(cap, r.hi);
        }
        for (auto& row : rows)
            for (const auto& r : row.ratios) {
                if (r.lo > cap) continue;
                auto s = ev.exact(r.j, r.k);
                ++out.exact_recomputations;
                if (s.q < 0) consider(best, r.j, r.k, -s.p / s.q);
            }
    }
    if (best) {
        out.c_star_sq = best->ratio;
        out.argmin_j = best->j;
        out.argmin_k = best->k;
    }
    return out;
}

std::string_view to_string(CriticalStatus s) {
    switch (s) {
        case CriticalStatus::CriticalPoint: return "CriticalPoint";
        case CriticalStatus::IDForAllAlpha: return "IDForAllAlpha";
        case CriticalStatus::Degenerate: return "Degenerate";
    }
    return "?";
}

CriticalPointReport estimate_critical_point(const GaussianProblem& problem, const std::vector<Rational>& t_ladder,
                                            const Rational& B, double drift_tol, const ScanOptions& opt) {
    validate_ladder(t_ladder);
    if (t_ladder.size() < 3) throw InvalidInput("critical-point estimation needs at least 3 ladder rungs");
    if (!(drift_tol >= 0)) throw InvalidInput("drift tolerance must be nonnegative");
    CriticalPointReport report;
    report.canon = normalize(problem);
    const auto& canon = report.canon;
    if (canon.degenerate) {
        report.status = CriticalStatus::Degenerate;
        return report;
    }
    if (all_alpha_condition(canon)) {
        report.status = CriticalStatus::IDForAllAlpha;
        return report;
    }

    const CaseConstants k = case_constants(canon);
    const Rational& lead = canon.shift_case == ShiftCase::EqualShift      ? k.zeta
                           : canon.shift_case == ShiftCase::OppositeShift ? k.zeta_tilde
                                                                          : canon.b;
    if (lead > 0) report.small_c_threshold = canon.d / (2 * lead);

    for (const auto& t : t_ladder) report.per_t.push_back(max_feasible_csq(canon, t, B, opt));

    const double inf = std::numeric_limits<double>::infinity();
    double lo = inf, hi = 0.0;
    for (std::size_t i = report.per_t.size() - 3; i < report.per_t.size(); ++i) {
        const auto& c = report.per_t[i].c_star_sq;
        const double alpha = c ? std::sqrt(Rational(*c / canon.kappa_sq).get_d()) : inf;
        lo = std::min(lo, alpha);
        hi = std::max(hi, alpha);
    }
    report.bracket_lo = lo;
    report.bracket_hi = hi;
    report.drift = hi == inf ? (lo == inf ? 0.0 : inf) : (hi > 0 ? (hi - lo) / hi : 0.0);
    report.converged = report.drift <= drift_tol;
    return report;
}

}  // namespace idsq

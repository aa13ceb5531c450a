#include "idsq/analyzer.hpp"

#include <algorithm>
#include <tuple>
#include <cmath>

namespace idsq {

namespace {

std::uint64_t to_u64(mpfr_srcptr x) {
    if (mpfr_cmp_d(x, 1.8e19) >= 0) throw InvalidInput("cutoff radius too large");
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), x, MPFR_RNDN);
    return z.get_ui();
}

double log_add(double a, double b) {
    if (a == -INFINITY) return b;
    if (b == -INFINITY) return a;
    double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// Float-mode cells with |r| below this fraction of the summed absolute terms are recomputed exactly.
constexpr double kConfirmRatio = 1e-12;

struct RowOutcome {
    std::vector<Violation> violations;
    std::uint64_t count = 0, cells = 0, confirmations = 0;
};

void record(RowOutcome& out, std::uint64_t j, std::uint64_t k, double scaled, double tbar_sq) {
    out.violations.push_back({j, k, scaled, scaled * tbar_sq});
}

}  // namespace

bool CutoffSpec::contains(std::uint64_t j, std::uint64_t k) const {
    if (j == 0 && k == 0) return false;
    if (j == 0) return k <= boundary_max;
    if (k == 0) return j <= boundary_max;
    return j <= max_product / k;
}

std::uint64_t CutoffSpec::size() const {
    std::uint64_t n = 2 * boundary_max;
    for (std::uint64_t j = 1; j <= max_product; ++j) n += max_product / j;
    return n;
}

CutoffSpec cutoff_set(const Rational& t, const Rational& B, long precision_bits) {
    if (t < 3) throw InvalidInput("cutoff needs t >= 3");
    if (B <= 0) throw InvalidInput("cutoff needs B > 0");
    BigFloat bt(t, precision_bits), radius(B, precision_bits), sq(precision_bits);
    mpfr_log(sq.get(), bt.get(), MPFR_RNDN);
    mpfr_mul(radius.get(), radius.get(), bt.get(), MPFR_RNDN);
    mpfr_mul(radius.get(), radius.get(), sq.get(), MPFR_RNDN);
    mpfr_sqr(sq.get(), radius.get(), MPFR_RNDN);
    CutoffSpec spec;
    spec.t = t;
    spec.B = B;
    spec.radius = radius.to_double();
    BigFloat f(precision_bits);
    mpfr_floor(f.get(), sq.get());
    spec.max_product = to_u64(f.get());
    mpfr_ceil(f.get(), radius.get());
    spec.boundary_max = to_u64(f.get());
    return spec;
}

CellSign scaled_r_sign(const ScaledEvaluator& ev, const Rational& c_sq, std::uint64_t j, std::uint64_t k) {
    const double c = c_sq.get_d();
    FloatCell f = ev.evaluate(j, k);
    CellSign out;
    out.scaled = f.r(c);
    if (std::isfinite(out.scaled) && std::abs(out.scaled) >= kConfirmRatio * f.r_mag(c)) {
        out.sign = out.scaled > 0 ? 1 : -1;
        return out;
    }
    auto s = ev.exact(j, k);
    Rational r = s.p + c_sq * s.q;
    out.sign = sign(r);
    out.scaled = r.get_d();
    out.confirmed_exactly = true;
    return out;
}

ScanVerdict scan_positivity(const CanonicalProblem& canon, const Rational& c_sq, const Rational& t, const Rational& B,
                            const ScanOptions& opt) {
    if (canon.degenerate) throw InvalidInput("degenerate covariance: nothing to scan");
    const CutoffSpec cut = cutoff_set(t, B, opt.precision_bits);
    const ScaledEvaluator ev(canon, t);
    const double tbar_sq = ev.tbar_sq();
    const std::uint64_t rows = std::max(cut.max_product, cut.boundary_max);

    // Boundary rows: α/j + c² q_row (and the column analogue) are exact rationals.
    auto boundary_cell = [&](RowOutcome& out, std::uint64_t j, std::uint64_t k) {
        auto s = ev.exact(j, k);
        Rational r = s.p + c_sq * s.q;
        ++out.cells;
        if (r < 0) {
            ++out.count;
            record(out, j, k, r.get_d(), tbar_sq);
        }
    };

    std::vector<RowOutcome> per_row(rows + 1);
    if (opt.mode == GridMode::Exact) {
        RowOutcome& all = per_row[0];
        for (std::uint64_t k = 1; k <= cut.boundary_max; ++k) boundary_cell(all, 0, k);
        for (std::uint64_t j = 1; j <= cut.boundary_max; ++j) boundary_cell(all, j, 0);
        Rational r;
        for_each_exact_interior(ev, cut.max_product, [&](std::uint64_t j, std::uint64_t k, const ScaledPQ& cell) {
            r = cell.p + c_sq * cell.q;
            ++all.cells;
            if (r < 0) {
                ++all.count;
                record(all, j, k, r.get_d(), tbar_sq);
            }
        });
    } else {
        parallel_for(rows + 1, opt.par, [&](std::size_t row) {
            RowOutcome& out = per_row[row];
            const std::uint64_t j = row;
            if (j == 0) {
                for (std::uint64_t k = 1; k <= cut.boundary_max; ++k) boundary_cell(out, 0, k);
                return;
            }
            if (j <= cut.boundary_max) boundary_cell(out, j, 0);
            const std::uint64_t kmax = cut.max_product / j;
            for (std::uint64_t k = 1; k <= kmax; ++k) {
                CellSign s = scaled_r_sign(ev, c_sq, j, k);
                ++out.cells;
                out.confirmations += s.confirmed_exactly;
                if (s.sign < 0) {
                    ++out.count;
                    record(out, j, k, s.scaled, tbar_sq);
                }
            }
        });
    }

    ScanVerdict verdict;
    for (auto& row : per_row) {
        verdict.violation_count += row.count;
        verdict.cells_checked += row.cells;
        verdict.exact_confirmations += row.confirmations;
        verdict.violations.insert(verdict.violations.end(), row.violations.begin(), row.violations.end());
    }
    std::sort(verdict.violations.begin(), verdict.violations.end(),
              [](const Violation& x, const Violation& y) { return std::tie(x.j, x.k) < std::tie(y.j, y.k); });
    if (verdict.violations.size() > opt.max_violations) verdict.violations.resize(opt.max_violations);
    verdict.all_nonnegative = verdict.violation_count == 0;

    // Past the truncation the boundary values α^{j-1}(α/j + c² q_row) keep the sign of q_row eventually.
    const auto row = ev.exact(1, 0), col = ev.exact(0, 1);
    verdict.boundary_rows_certified = (c_sq == 0 || (row.q >= 0 && col.q >= 0)) &&
                                      std::none_of(verdict.violations.begin(), verdict.violations.end(),
                                                   [](const Violation& v) { return v.j == 0 || v.k == 0; });
    return verdict;
}

double TailMass::mass() const { return std::exp(log_mass); }
double TailMass::envelope() const { return std::exp(log_envelope); }

TailMass tail_mass(const CanonicalProblem& canon, const Rational& c_sq, const Rational& t, const Rational& B,
                   const Rational& B_ext, const ScanOptions& opt) {
    if (B_ext <= B) throw InvalidInput("B_ext must exceed B");
    if (canon.degenerate) throw InvalidInput("degenerate covariance: no tail");
    const CutoffSpec inner = cutoff_set(t, B, opt.precision_bits), outer = cutoff_set(t, B_ext, opt.precision_bits);
    const ScaledEvaluator ev(canon, t);
    const double c = c_sq.get_d();
    const double la = ev.log_alpha(), lb = ev.log_beta();

    struct Partial {
        double log_mass = -INFINITY, log_env = -INFINITY;
        std::uint64_t cells = 0;
    };
    std::vector<Partial> per_row(outer.max_product + 1);
    parallel_for(outer.max_product, opt.par, [&](std::size_t i) {
        const std::uint64_t j = i + 1;
        Partial& out = per_row[j];
        const std::uint64_t k0 = inner.max_product / j + 1, k1 = outer.max_product / j;
        for (std::uint64_t k = k0; k <= k1; ++k) {
            FloatCell f = ev.evaluate(j, k);
            const double log_scale = static_cast<double>(j - 1) * la + static_cast<double>(k - 1) * lb;
            const double r = std::abs(f.r(c));
            if (r > 0) out.log_mass = log_add(out.log_mass, std::log(r) + log_scale);
            out.log_env = log_add(out.log_env, std::log(f.p + c * std::abs(f.q)) + log_scale);
            ++out.cells;
        }
    });
    TailMass tail;
    for (const auto& p : per_row) {
        tail.log_mass = log_add(tail.log_mass, p.log_mass);
        tail.log_envelope = log_add(tail.log_envelope, p.log_env);
        tail.cells += p.cells;
    }
    return tail;
}

std::string_view to_string(VerdictKind v) {
    switch (v) {
        case VerdictKind::IDForAllAlpha: return "IDForAllAlpha";
        case VerdictKind::IDCertifiedUpToHorizon: return "IDCertifiedUpToHorizon";
        case VerdictKind::NotIDWitness: return "NotIDWitness";
        case VerdictKind::Inconclusive: return "Inconclusive";
        case VerdictKind::Degenerate: return "Degenerate";
    }
    return "?";
}

void validate_ladder(const std::vector<Rational>& t_ladder) {
    if (t_ladder.empty()) throw InvalidInput("t ladder is empty");
    for (std::size_t i = 0; i < t_ladder.size(); ++i) {
        if (t_ladder[i] < 3) throw InvalidInput("every ladder rung must be >= 3");
        if (i > 0 && t_ladder[i] <= t_ladder[i - 1]) throw InvalidInput("t ladder must be strictly increasing");
    }
}

IdVerdict id_verdict(const GaussianProblem& problem, const Rational& alpha, const std::vector<Rational>& t_ladder,
                     const Rational& B, const ScanOptions& opt) {
    validate_ladder(t_ladder);
    IdVerdict out;
    out.canon = normalize(problem);
    out.c_sq = out.canon.c_sq_for_alpha(alpha);
    if (out.canon.degenerate) {
        out.kind = VerdictKind::Degenerate;
        return out;
    }
    if (all_alpha_condition(out.canon)) {
        out.kind = VerdictKind::IDForAllAlpha;
        return out;
    }
    ScanVerdict top;
    for (const auto& t : t_ladder) {
        ScanOptions full = opt;
        full.max_violations = UINT64_MAX;
        top = scan_positivity(out.canon, out.c_sq, t, B, full);
        out.rungs.push_back({t, top.all_nonnegative, top.violation_count, top.cells_checked});
    }
    if (top.all_nonnegative) {
        out.kind = VerdictKind::IDCertifiedUpToHorizon;
        return out;
    }
    // The first violation in (j, k) order is a fixed low index; far-out violations move with the cutoff.
    const Violation& first = top.violations.front();
    IdVerdict::Witness w{first.j, first.k, t_ladder.back(), {}};
    top.violations.resize(std::min<std::uint64_t>(top.violations.size(), opt.max_violations));
    out.violations = std::move(top.violations);

    bool persistent = t_ladder.size() >= 3;
    if (persistent) {
        for (std::size_t i = t_ladder.size() - 3; i < t_ladder.size(); ++i) {
            const ScaledEvaluator ev(out.canon, t_ladder[i]);
            CellSign s = scaled_r_sign(ev, out.c_sq, w.j, w.k);
            const double normalized = s.scaled * ev.tbar_sq();
            if (s.sign >= 0 || (!w.normalized.empty() && std::abs(normalized) < std::abs(w.normalized.back())))
                persistent = false;
            w.normalized.push_back(normalized);
        }
    }
    out.witness = std::move(w);
    out.kind = persistent ? VerdictKind::NotIDWitness : VerdictKind::Inconclusive;
    return out;
}

}  // namespace idsq

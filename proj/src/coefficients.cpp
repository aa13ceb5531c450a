#include "idsq/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace idsq {

namespace {

Rational ui(std::uint64_t n) { return Rational(static_cast<unsigned long>(n)); }

/// Folded p-th bracket E_p; Q_{j,k} = -(α^{j-1}β^{k-1}/t̄²) Σ_p w^p C(j,p)C(k,p) E_p.
/// Uses n00 = -(n10 + n01 + n11): the numerator vanishes at s1 = s2 = 1.
Rational folded_bracket(const SeriesParams& sp, const NumeratorCoeffs& nc, std::uint64_t j, std::uint64_t k,
                        std::uint64_t p) {
    const Rational u = 1 - sp.alpha, v = 1 - sp.beta;
    const Rational e10 = -nc.n10 - nc.n11, e01 = -nc.n01 - nc.n11;
    const Rational pj = ui(p) / ui(j), pk = ui(p) / ui(k);
    const Rational fj = ui(j - p) / ui(j), fk = ui(k - p) / ui(k);
    return nc.n11 * (u * v - v * pj - u * pk + sp.one_minus_theta * fj * fk) + e10 * sp.beta * (pj - u) +
           e01 * sp.alpha * (pk - v);
}

void require_not_origin(std::uint64_t j, std::uint64_t k) {
    if (j == 0 && k == 0) throw InvalidInput("the constant term (0,0) is excluded");
}

}  // namespace

SeriesParams params(const CanonicalProblem& canon, const Rational& t) {
    if (t <= 0) throw InvalidInput("t must be positive");
    if (canon.d <= 0) throw InvalidInput("series parameters need d > 0");
    const Rational& a = canon.a;
    const Rational& b = canon.b;
    const Rational& d = canon.d;
    SeriesParams sp;
    sp.t = t;
    sp.tbar_sq = 1 + a * t + b * t + d * t * t;
    sp.alpha = (a * t + d * t * t) / sp.tbar_sq;
    sp.beta = (b * t + d * t * t) / sp.tbar_sq;
    sp.p_param = d * t * t / sp.tbar_sq;
    sp.theta = sp.p_param / (sp.alpha * sp.beta);
    sp.one_minus_theta = 1 - sp.theta;
    return sp;
}

NumeratorCoeffs numerator_coeffs(const CanonicalProblem& canon, const Rational& t) {
    const Rational t2 = t * t;
    switch (canon.shift_case) {
        case ShiftCase::EqualShift:
        case ShiftCase::OppositeShift: {
            Rational g = canon.a + canon.b + (canon.shift_case == ShiftCase::EqualShift ? -2 : 2);
            return {g * t2 + 2 * t, -(g * t2 + t), -(g * t2 + t), g * t2};
        }
        case ShiftCase::SingleShift:
            return {canon.b * t2 + t, -(canon.b * t2 + t), -(canon.b * t2), canon.b * t2};
    }
    throw InvalidInput("unknown shift case");
}

Rational D_jk(const Rational& one_minus_theta, std::uint64_t j, std::uint64_t k) {
    const std::uint64_t m = std::min(j, k);
    Rational term(1), sum(1);
    for (std::uint64_t p = 0; p < m; ++p) {
        term *= one_minus_theta * ui(j - p) * ui(k - p) / (ui(p + 1) * ui(p + 1));
        sum += term;
    }
    return sum;
}

Rational C_jk(const Rational& one_minus_theta, std::uint64_t j, std::uint64_t k) {
    require_not_origin(j, k);
    if (k == 0) return Rational(1) / ui(j);
    if (j == 0) return Rational(1) / ui(k);
    // Σ_{p=0}^{m-1} (1-θ)^{p+1}/(p+1) C(j-1,p) C(k-1,p)
    const std::uint64_t m = std::min(j, k);
    Rational term = one_minus_theta, sum = one_minus_theta;
    for (std::uint64_t p = 0; p + 1 < m; ++p) {
        term *= one_minus_theta * ui(j - 1 - p) * ui(k - 1 - p) / (ui(p + 1) * ui(p + 1));
        sum += term / ui(p + 2);
    }
    return sum;
}

Rational P_jk(const SeriesParams& sp, std::uint64_t j, std::uint64_t k) {
    return pow(sp.alpha, j) * pow(sp.beta, k) * C_jk(sp.one_minus_theta, j, k);
}

Rational Q_jk(const SeriesParams& sp, const NumeratorCoeffs& nc, std::uint64_t j, std::uint64_t k) {
    require_not_origin(j, k);
    const Rational& w = sp.one_minus_theta;
    Rational acc = nc.n00 * D_jk(w, j, k) * pow(sp.alpha, j) * pow(sp.beta, k);
    if (j >= 1) acc += nc.n10 * D_jk(w, j - 1, k) * pow(sp.alpha, j - 1) * pow(sp.beta, k);
    if (k >= 1) acc += nc.n01 * D_jk(w, j, k - 1) * pow(sp.alpha, j) * pow(sp.beta, k - 1);
    if (j >= 1 && k >= 1) acc += nc.n11 * D_jk(w, j - 1, k - 1) * pow(sp.alpha, j - 1) * pow(sp.beta, k - 1);
    return -acc / sp.tbar_sq;
}

Rational R_jk(const SeriesParams& sp, const NumeratorCoeffs& nc, const Rational& c_sq, std::uint64_t j,
              std::uint64_t k) {
    return P_jk(sp, j, k) + c_sq * Q_jk(sp, nc, j, k);
}

Rational Q_jk_folded(const SeriesParams& sp, const NumeratorCoeffs& nc, std::uint64_t j, std::uint64_t k) {
    if (j == 0 || k == 0) throw InvalidInput("folded form is defined for interior indices");
    const std::uint64_t m = std::min(j, k);
    Rational weight(1), sum;
    for (std::uint64_t p = 0; p <= m; ++p) {
        sum += weight * folded_bracket(sp, nc, j, k, p);
        if (p < m) weight *= sp.one_minus_theta * ui(j - p) * ui(k - p) / (ui(p + 1) * ui(p + 1));
    }
    return -scale_factor(sp, j, k) * sum / sp.tbar_sq;
}

Rational Q_row_closed_form(const CanonicalProblem& canon, const SeriesParams& sp, std::uint64_t j) {
    if (j == 0) throw InvalidInput("row index must be positive");
    const Rational& t = sp.t;
    const Rational& alpha = sp.alpha;
    Rational lead;
    switch (canon.shift_case) {
        case ShiftCase::EqualShift:
        case ShiftCase::OppositeShift: {
            Rational g = canon.a + canon.b + (canon.shift_case == ShiftCase::EqualShift ? -2 : 2);
            lead = -(g * t * t * (alpha - 1) + t * (2 * alpha - 1));
            break;
        }
        case ShiftCase::SingleShift:
            lead = (canon.b * t * t + t) * (1 - alpha);
            break;
    }
    return lead / sp.tbar_sq * pow(alpha, j - 1);
}

Rational Q_column_closed_form(const CanonicalProblem& canon, const SeriesParams& sp, std::uint64_t k) {
    if (k == 0) throw InvalidInput("column index must be positive");
    const Rational& t = sp.t;
    const Rational& beta = sp.beta;
    Rational lead;
    switch (canon.shift_case) {
        case ShiftCase::EqualShift:
        case ShiftCase::OppositeShift: {
            Rational g = canon.a + canon.b + (canon.shift_case == ShiftCase::EqualShift ? -2 : 2);
            lead = -(g * t * t * (beta - 1) + t * (2 * beta - 1));
            break;
        }
        case ShiftCase::SingleShift:
            // Expanding the generating function gives -βt here.
            lead = canon.b * t * t * (1 - beta) - beta * t;
            break;
    }
    return lead / sp.tbar_sq * pow(beta, k - 1);
}

std::vector<Rational> decompose_R(const SeriesParams& sp, const NumeratorCoeffs& nc, const Rational& c_sq,
                                  std::uint64_t j, std::uint64_t k) {
    if (j == 0 || k == 0) throw InvalidInput("decomposition is defined for interior indices");
    const std::uint64_t m = std::min(j, k);
    const Rational scale = scale_factor(sp, j, k);
    const Rational& w = sp.one_minus_theta;
    const Rational alpha_beta = sp.alpha * sp.beta;
    std::vector<Rational> terms;
    terms.reserve(m + 1);
    Rational weight(1);
    for (std::uint64_t p = 0; p <= m; ++p) {
        Rational f = alpha_beta * w / ui(p + 1) * ui(j - p) * ui(k - p) / (ui(j) * ui(k));
        Rational term = weight * (f - c_sq * folded_bracket(sp, nc, j, k, p) / sp.tbar_sq);
        terms.push_back(scale * term);
        if (p < m) weight *= w * ui(j - p) * ui(k - p) / (ui(p + 1) * ui(p + 1));
    }
    return terms;
}

Rational scale_factor(const SeriesParams& sp, std::uint64_t j, std::uint64_t k) {
    require_not_origin(j, k);
    if (k == 0) return pow(sp.alpha, j - 1);
    if (j == 0) return pow(sp.beta, k - 1);
    return pow(sp.alpha, j - 1) * pow(sp.beta, k - 1);
}

ScaledPQ scaled_pq_exact(const SeriesParams& sp, const NumeratorCoeffs& nc, std::uint64_t j, std::uint64_t k) {
    require_not_origin(j, k);
    if (k == 0) return {sp.alpha / ui(j), -(nc.n00 * sp.alpha + nc.n10) / sp.tbar_sq};
    if (j == 0) return {sp.beta / ui(k), -(nc.n00 * sp.beta + nc.n01) / sp.tbar_sq};
    const Rational& w = sp.one_minus_theta;
    const Rational alpha_beta = sp.alpha * sp.beta;
    ScaledPQ out;
    out.p = alpha_beta * C_jk(w, j, k);
    out.q = -(nc.n00 * alpha_beta * D_jk(w, j, k) + nc.n10 * sp.beta * D_jk(w, j - 1, k) +
              nc.n01 * sp.alpha * D_jk(w, j, k - 1) + nc.n11 * D_jk(w, j - 1, k - 1)) /
            sp.tbar_sq;
    return out;
}

ScaledEvaluator::ScaledEvaluator(const CanonicalProblem& canon, const Rational& t)
    : sp_(params(canon, t)), nc_(numerator_coeffs(canon, t)) {
    alpha_ = sp_.alpha.get_d();
    beta_ = sp_.beta.get_d();
    u_ = Rational(1 - sp_.alpha).get_d();
    v_ = Rational(1 - sp_.beta).get_d();
    w_ = sp_.one_minus_theta.get_d();
    tbar_sq_ = sp_.tbar_sq.get_d();
    n11_ = nc_.n11.get_d();
    e10_ = Rational(-nc_.n10 - nc_.n11).get_d();
    e01_ = Rational(-nc_.n01 - nc_.n11).get_d();
    row_q_ = Rational(-(nc_.n00 * sp_.alpha + nc_.n10) / sp_.tbar_sq).get_d();
    col_q_ = Rational(-(nc_.n00 * sp_.beta + nc_.n01) / sp_.tbar_sq).get_d();
    log_alpha_ = std::log(alpha_);
    log_beta_ = std::log(beta_);
}

FloatCell ScaledEvaluator::evaluate(std::uint64_t j, std::uint64_t k) const {
    require_not_origin(j, k);
    FloatCell cell;
    if (k == 0 || j == 0) {
        cell.p = (k == 0 ? alpha_ : beta_) / static_cast<double>(k == 0 ? j : k);
        cell.q = k == 0 ? row_q_ : col_q_;
        cell.p_mag = cell.p;
        cell.q_mag = std::abs(cell.q);
        return cell;
    }
    const double jd = static_cast<double>(j), kd = static_cast<double>(k);
    const std::uint64_t m = std::min(j, k);
    const double uv = u_ * v_;
    const double p_bound = alpha_ * beta_ * w_;
    const double e_bound = std::abs(n11_) * (uv + u_ + v_ + w_) + std::abs(e10_) * beta_ * (1.0 + u_) +
                           std::abs(e01_) * alpha_ * (1.0 + v_);
    double weight = 1.0, psum = 0.0, qsum = 0.0, qmag = 0.0;
    for (std::uint64_t p = 0; p <= m; ++p) {
        const double pd = static_cast<double>(p);
        const double fj = static_cast<double>(j - p) / jd, fk = static_cast<double>(k - p) / kd;
        const double pj = pd / jd, pk = pd / kd;
        const double p_term = p_bound * fj * fk / (pd + 1.0);
        const double e_term =
            n11_ * (uv - v_ * pj - u_ * pk + w_ * fj * fk) + e10_ * beta_ * (pj - u_) + e01_ * alpha_ * (pk - v_);
        const double e_mag = std::abs(n11_) * (uv + v_ * pj + u_ * pk + w_ * fj * fk) +
                             std::abs(e10_) * beta_ * (pj + u_) + std::abs(e01_) * alpha_ * (pk + v_);
        psum += weight * p_term;
        qsum -= weight * e_term;
        qmag += weight * e_mag;
        const double ratio = w_ * static_cast<double>(j - p) * static_cast<double>(k - p) / ((pd + 1.0) * (pd + 1.0));
        weight *= ratio;
        // Once the ratio is below 1/2 the remaining terms sum to at most 2·weight·bound.
        if (ratio < 0.5 && 2.0 * weight * p_bound < 1e-20 * psum && 2.0 * weight * e_bound < 1e-20 * qmag) break;
    }
    cell.p = psum;
    cell.p_mag = psum;
    cell.q = qsum / tbar_sq_;
    cell.q_mag = qmag / tbar_sq_;
    return cell;
}

std::string_view to_string(GridMode m) { return m == GridMode::Exact ? "exact" : "float"; }

std::string CoefficientGrid::to_csv() const {
    std::ostringstream out;
    out << "j,k,P,Q,R,mode\n";
    for (const auto& c : cells) {
        out << c.j << ',' << c.k << ',';
        if (mode == GridMode::Exact)
            out << to_string(c.p_exact) << ',' << to_string(c.q_exact) << ',' << to_string(c.r_exact);
        else
            out << shortest_decimal(c.p) << ',' << shortest_decimal(c.q) << ',' << shortest_decimal(c.r);
        out << ',' << to_string(mode) << '\n';
    }
    return out.str();
}

CoefficientGrid coefficient_grid(const CanonicalProblem& canon, const Rational& t, const Rational& c_sq,
                                 const std::vector<std::pair<std::uint64_t, std::uint64_t>>& indices, GridMode mode) {
    ScaledEvaluator ev(canon, t);
    const double c_sq_d = c_sq.get_d();
    CoefficientGrid grid;
    grid.mode = mode;
    grid.cells.reserve(indices.size());
    for (auto [j, k] : indices) {
        GridCell cell;
        cell.j = j;
        cell.k = k;
        if (mode == GridMode::Exact) {
            auto s = ev.exact(j, k);
            Rational scale = scale_factor(ev.series_params(), j, k);
            cell.p_exact = s.p * scale;
            cell.q_exact = s.q * scale;
            cell.r_exact = cell.p_exact + c_sq * cell.q_exact;
        } else {
            const double log_scale = (j == 0 ? 0.0 : static_cast<double>(j - 1) * ev.log_alpha()) +
                                     (k == 0 ? 0.0 : static_cast<double>(k - 1) * ev.log_beta());
            const double scale = std::exp(log_scale);
            FloatCell f = ev.evaluate(j, k);
            double r = f.r(c_sq_d), q = f.q;
            const bool r_unsure = !(std::abs(r) >= 1e-12 * f.r_mag(c_sq_d));
            const bool q_unsure = !(std::abs(q) >= 1e-12 * f.q_mag);
            if (r_unsure || q_unsure) {
                auto s = ev.exact(j, k);
                if (q_unsure) q = s.q.get_d();
                if (r_unsure) r = Rational(s.p + c_sq * s.q).get_d();
            }
            cell.p = f.p * scale;
            cell.q = q * scale;
            cell.r = r * scale;
        }
        grid.cells.push_back(std::move(cell));
    }
    return grid;
}

bool AsymptoticDiagnostics::identities_hold() const {
    return zeta_identity && a_gamma_identity && b_gamma_identity && zeta_tilde_identity && a_rho_identity &&
           b_rho_identity && factorization && theta_product;
}

AsymptoticDiagnostics asymptotic_check(const CanonicalProblem& canon, const Rational& t) {
    const SeriesParams sp = params(canon, t);
    const CaseConstants k = case_constants(canon);
    const Rational& a = canon.a;
    const Rational& b = canon.b;
    const Rational& d = canon.d;
    const Rational dt = d * t;
    const Rational dt2 = dt * dt, dt3 = dt2 * dt;
    const Rational u = 1 - sp.alpha, v = 1 - sp.beta;

    AsymptoticDiagnostics diag;
    diag.residual_one_minus_alpha = u - (b / dt - (1 + b * b) / dt2);
    diag.residual_one_minus_beta = v - (a / dt - (1 + a * a) / dt2);
    diag.residual_product = u * v - ((d + 1) / dt2 - (a * (1 + b * b) + b * (1 + a * a)) / dt3);
    diag.residual_one_minus_theta = sp.one_minus_theta - (1 / dt2 - (a + b) / dt3);
    diag.zeta_identity = -(d + 2) * k.gamma_const + d * (a + b) == -2 * k.zeta;
    diag.a_gamma_identity = a * k.gamma_const - d == (a - 1) * (a - 1);
    diag.b_gamma_identity = b * k.gamma_const - d == (b - 1) * (b - 1);
    diag.zeta_tilde_identity = -3 * k.rho_const + a + b == -2 * k.zeta_tilde;
    diag.a_rho_identity = a * k.rho_const - d == (a + 1) * (a + 1);
    diag.b_rho_identity = b * k.rho_const - d == (b + 1) * (b + 1);
    diag.factorization = k.factorization_holds;
    diag.theta_product = sp.alpha * sp.beta * sp.theta == sp.p_param;
    return diag;
}

}  // namespace idsq

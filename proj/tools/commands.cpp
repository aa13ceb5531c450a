#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "idsq/matrix_criteria.hpp"
#include "idsq/series.hpp"
#include "json_io.hpp"

namespace idsq::cli {

namespace {

using io::Json;

struct Config {
    std::string input, cov, shift;
    std::string ladder = "16,32,64,128";
    std::string B = "1/2", B_ext = "1";
    std::string mode = "float";
    std::string format = "json";
    std::string out;
    std::string alpha = "1";
    std::string t;
    long precision = default_precision_bits();
    double drift_tol = 0.05;
    std::uint64_t seed = 1;
    unsigned threads = Parallelism::from_environment().threads;
    std::uint64_t max_violations = 100;
    unsigned order = 16;
    unsigned count = 100;
};

bool has_problem(const Config& c) { return !c.input.empty() || !c.cov.empty() || !c.shift.empty(); }

GaussianProblem problem_of(const Config& c) {
    if (!c.input.empty()) {
        if (!c.cov.empty() || !c.shift.empty()) throw InvalidInput("give either --input or --cov/--shift");
        return io::load_problem(c.input);
    }
    if (c.cov.empty() || c.shift.empty()) throw InvalidInput("a problem is required: --input, or --cov with --shift");
    return io::problem_from_flags(c.cov, c.shift);
}

ScanOptions options_of(const Config& c) {
    ScanOptions opt;
    if (c.mode == "exact")
        opt.mode = GridMode::Exact;
    else if (c.mode == "float")
        opt.mode = GridMode::Float;
    else
        throw InvalidInput("--mode must be exact or float");
    if (c.precision < kMinPrecisionBits)
        throw InvalidInput("--precision must be at least " + std::to_string(kMinPrecisionBits));
    opt.precision_bits = c.precision;
    opt.par.threads = std::max(1u, c.threads);
    opt.max_violations = c.max_violations;
    return opt;
}

Rational positive(const std::string& text, const char* name) {
    Rational q = parse_rational(text);
    if (q <= 0) throw InvalidInput(std::string(name) + " must be positive");
    return q;
}

void require_format(const Config& c, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed)
        if (c.format == f) return;
    throw InvalidInput("unsupported --format '" + c.format + "' for this command");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---- classify ----

std::string cmd_classify(const Config& c) {
    require_format(c, {"json", "csv"});
    GaussianProblem p = problem_of(c);
    CanonicalProblem canon = normalize(p);
    Json out;
    out["input"] = io::problem_to_json(p);
    out["canonical"] = io::canonical_to_json(canon);
    if (canon.degenerate) {
        out["constants"] = nullptr;
        out["bapat"] = nullptr;
        out["ek_criterion"] = nullptr;
        out["all_alpha"] = true;
        out["regime"] = "degenerate";
    } else {
        CaseConstants k = case_constants(canon);
        out["constants"] = {{"gamma", to_string(k.gamma_const)},
                            {"rho", to_string(k.rho_const)},
                            {"zeta", to_string(k.zeta)},
                            {"zeta_tilde", to_string(k.zeta_tilde)},
                            {"factorization_holds", k.factorization_holds}};
        auto gamma = SquareMatrix::from_rows({{p.gamma11, p.gamma12}, {p.gamma12, p.gamma22}});
        auto bapat = bapat_id_criterion(gamma);
        out["bapat"] = {{"verdict", bapat.verdict}, {"witness", bapat.witness ? Json(*bapat.witness) : Json(nullptr)}};
        std::vector<Rational> shift{p.c1, p.c2};
        out["ek_criterion"] = ek_criterion(gamma, shift);
        bool all = all_alpha_condition(canon);
        out["all_alpha"] = all;
        out["zeta"] = to_string(k.zeta);
        out["regime"] = all ? "all-alpha" : "critical-point";
    }
    if (c.format == "json") return dump(out);
    std::ostringstream csv;
    csv << "field,value\n";
    std::function<void(const std::string&, const Json&)> flat = [&](const std::string& prefix, const Json& j) {
        if (j.is_object()) {
            for (auto it = j.begin(); it != j.end(); ++it) flat(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value());
        } else if (j.is_array()) {
            for (std::size_t i = 0; i < j.size(); ++i) flat(prefix + "." + std::to_string(i), j[i]);
        } else {
            csv << prefix << ',' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
        }
    };
    flat("", out);
    return csv.str();
}

// ---- coeffs ----

std::string cmd_coeffs(const Config& c) {
    require_format(c, {"json", "csv", "heatmap"});
    CanonicalProblem canon = normalize(problem_of(c));
    if (canon.degenerate) throw InvalidInput("degenerate covariance: coefficients are not defined");
    const Rational t = positive(c.t.empty() ? "10" : c.t, "--t");
    const Rational alpha = parse_rational(c.alpha);
    const Rational c_sq = canon.c_sq_for_alpha(alpha);
    const ScanOptions opt = options_of(c);

    std::vector<std::pair<std::uint64_t, std::uint64_t>> idx;
    Json index_set;
    if (t >= 3) {
        CutoffSpec cut = cutoff_set(t, positive(c.B, "--B"), opt.precision_bits);
        for (std::uint64_t k = 1; k <= cut.boundary_max; ++k) idx.emplace_back(0, k);
        for (std::uint64_t j = 1; j <= cut.max_product; ++j) {
            if (j <= cut.boundary_max) idx.emplace_back(j, 0);
            for (std::uint64_t k = 1; k <= cut.max_product / j; ++k) idx.emplace_back(j, k);
        }
        index_set = {{"kind", "cutoff"}, {"B", io::decimal_label(cut.B)}, {"max_product", cut.max_product},
                     {"boundary_max", cut.boundary_max}};
    } else {
        // Below t = 3 the cutoff is undefined; dump the triangle j + k <= order instead.
        for (std::uint64_t j = 0; j <= c.order; ++j)
            for (std::uint64_t k = 0; j + k <= c.order; ++k)
                if (j + k > 0) idx.emplace_back(j, k);
        index_set = {{"kind", "triangle"}, {"order", c.order}};
    }
    CoefficientGrid grid = coefficient_grid(canon, t, c_sq, idx, opt.mode);

    if (c.format == "csv") return grid.to_csv();
    if (c.format == "heatmap") {
        std::ostringstream out;
        out << "j,k,sign\n";
        for (const auto& cell : grid.cells) {
            int s = opt.mode == GridMode::Exact ? sign(cell.r_exact) : (cell.r > 0) - (cell.r < 0);
            out << cell.j << ',' << cell.k << ',' << s << '\n';
        }
        return out.str();
    }
    Json cells = Json::array();
    for (const auto& cell : grid.cells) {
        if (opt.mode == GridMode::Exact)
            cells.push_back({{"j", cell.j}, {"k", cell.k}, {"P", to_string(cell.p_exact)},
                             {"Q", to_string(cell.q_exact)}, {"R", to_string(cell.r_exact)}});
        else
            cells.push_back({{"j", cell.j}, {"k", cell.k}, {"P", shortest_decimal(cell.p)},
                             {"Q", shortest_decimal(cell.q)}, {"R", shortest_decimal(cell.r)}});
    }
    return dump({{"canonical", io::canonical_to_json(canon)},
                 {"t", to_string(t)},
                 {"alpha", to_string(alpha)},
                 {"c_sq", to_string(c_sq)},
                 {"mode", std::string(to_string(opt.mode))},
                 {"index_set", index_set},
                 {"cells", cells}});
}

// ---- scan ----

std::string violations_csv(const std::vector<Violation>& v) {
    std::ostringstream out;
    out << "j,k,scaled,normalized\n";
    for (const auto& x : v)
        out << x.j << ',' << x.k << ',' << shortest_decimal(x.scaled) << ',' << shortest_decimal(x.normalized) << '\n';
    return out.str();
}

std::string cmd_scan(const Config& c) {
    require_format(c, {"json", "csv"});
    GaussianProblem p = problem_of(c);
    const Rational B = positive(c.B, "--B"), B_ext = positive(c.B_ext, "--B-ext");
    if (B_ext <= B) throw InvalidInput("--B-ext must exceed --B");
    const Rational alpha = parse_rational(c.alpha);
    const ScanOptions opt = options_of(c);

    if (!c.t.empty()) {
        const Rational t = parse_rational(c.t);
        CanonicalProblem canon = normalize(p);
        if (canon.degenerate) throw InvalidInput("degenerate covariance: nothing to scan");
        const Rational c_sq = canon.c_sq_for_alpha(alpha);
        ScanVerdict v = scan_positivity(canon, c_sq, t, B, opt);
        if (c.format == "csv") return violations_csv(v.violations);
        Json out{{"t", io::rational_number(t)}, {"B", io::decimal_label(B)}, {"alpha", to_string(alpha)},
                 {"c_sq", to_string(c_sq)}, {"mode", std::string(to_string(opt.mode))},
                 {"canonical", io::canonical_to_json(canon)}};
        const Json body = io::scan_to_json(v);
        for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
        out["tail"] = io::tail_to_json(B_ext, tail_mass(canon, c_sq, t, B, B_ext, opt));
        return dump(out);
    }

    const std::vector<Rational> ladder = io::parse_rational_list(c.ladder);
    IdVerdict v = id_verdict(p, alpha, ladder, B, opt);
    if (c.format == "csv") return violations_csv(v.violations);
    Json out = io::verdict_to_json(v, ladder, B, alpha);
    out["mode"] = std::string(to_string(opt.mode));
    if (v.kind != VerdictKind::Degenerate)
        out["tail"] = io::tail_to_json(B_ext, tail_mass(v.canon, v.c_sq, ladder.back(), B, B_ext, opt));
    else
        out["tail"] = nullptr;
    return dump(out);
}

// ---- critical ----

std::string cmd_critical(const Config& c) {
    require_format(c, {"json", "csv"});
    GaussianProblem p = problem_of(c);
    const Rational B = positive(c.B, "--B");
    const std::vector<Rational> ladder = io::parse_rational_list(c.ladder);
    CriticalPointReport r = estimate_critical_point(p, ladder, B, c.drift_tol, options_of(c));
    if (c.format == "csv") {
        std::ostringstream out;
        out << "t,c_star_sq\n";
        for (const auto& f : r.per_t)
            out << to_string(f.t) << ',' << (f.c_star_sq ? shortest_decimal(f.c_star_sq->get_d()) : "inf") << '\n';
        return out.str();
    }
    return dump(io::critical_to_json(r, ladder, B, c.drift_tol));
}

// ---- oracle-check ----

std::string cmd_oracle_check(const Config& c) {
    require_format(c, {"json"});
    const Rational t = positive(c.t.empty() ? "10" : c.t, "--t");
    std::vector<CanonicalProblem> instances;
    if (has_problem(c)) {
        CanonicalProblem canon = normalize(problem_of(c));
        if (canon.degenerate) throw InvalidInput("degenerate covariance: coefficients are not defined");
        instances.push_back(canon);
    } else {
        for (auto sc : {ShiftCase::EqualShift, ShiftCase::OppositeShift, ShiftCase::SingleShift})
            for (auto [a, b] : {std::pair{"4", "1/2"}, std::pair{"2", "2"}, std::pair{"6/5", "5"}})
                instances.push_back(CanonicalProblem::from_ab(parse_rational(a), parse_rational(b), sc));
    }
    const std::uint64_t n = c.order;
    bool all_equal = true;
    std::uint64_t total = 0;
    Json rows = Json::array(), mismatches = Json::array();
    for (const auto& canon : instances) {
        OraclePQ o = oracle_pq(canon, t, n, n);
        SeriesParams sp = params(canon, t);
        NumeratorCoeffs nc = numerator_coeffs(canon, t);
        std::uint64_t cells = 0;
        bool equal = true;
        for (std::uint64_t j = 0; j <= n; ++j)
            for (std::uint64_t k = 0; j + k <= n; ++k) {
                if (j + k == 0) continue;
                ++cells;
                bool ok_p = P_jk(sp, j, k) == o.p(j, k), ok_q = Q_jk(sp, nc, j, k) == o.q(j, k);
                if (!ok_p || !ok_q) {
                    equal = false;
                    if (mismatches.size() < 20)
                        mismatches.push_back({{"a", to_string(canon.a)}, {"b", to_string(canon.b)},
                                              {"case", std::string(to_string(canon.shift_case))}, {"j", j}, {"k", k},
                                              {"P", ok_p}, {"Q", ok_q}});
                }
            }
        total += cells;
        all_equal = all_equal && equal;
        rows.push_back({{"a", to_string(canon.a)}, {"b", to_string(canon.b)},
                        {"case", std::string(to_string(canon.shift_case))}, {"cells", cells}, {"equal", equal}});
    }
    return dump({{"equal", all_equal}, {"order", n}, {"t", to_string(t)}, {"cells", total},
                 {"instances", rows}, {"mismatches", mismatches}});
}

// ---- identities ----

std::string cmd_identities(const Config& c) {
    require_format(c, {"json"});
    std::mt19937_64 rng(c.seed);
    std::uniform_int_distribution<long> num(1, 60), den(1, 12);
    auto draw = [&] { return Rational(num(rng), den(rng)); };
    bool all = true;
    Json failures = Json::array();
    for (unsigned i = 0; i < c.count; ++i) {
        Rational a, b;
        do {
            a = draw();
            b = draw();
            a.canonicalize();
            b.canonicalize();
        } while (a * b <= 1);
        Rational t = draw();
        t.canonicalize();
        auto diag = asymptotic_check(CanonicalProblem::from_ab(a, b, ShiftCase::EqualShift), t);
        if (!diag.identities_hold()) {
            all = false;
            failures.push_back({{"a", to_string(a)}, {"b", to_string(b)}, {"t", to_string(t)}});
        }
    }
    return dump({{"all_hold", all}, {"count", c.count}, {"seed", c.seed}, {"failures", failures}});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Infinite divisibility of squared shifted Gaussian pairs"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub, bool problem) {
        if (problem) {
            sub->add_option("--input", cfg.input, "problem JSON, inline or a file path");
            sub->add_option("--cov", cfg.cov, "covariance: g11,g12,g22 or g11,g12;g21,g22");
            sub->add_option("--shift", cfg.shift, "shift direction c1,c2");
        }
        sub->add_option("--format", cfg.format, "json or csv");
        sub->add_option("--out", cfg.out, "write the report here instead of stdout");
        sub->add_option("--threads", cfg.threads, "worker threads (default IDSQ_THREADS or all cores)");
        sub->add_option("--precision", cfg.precision, "MPFR working precision in bits (default IDSQ_PRECISION_BITS or 128)");
    };
    auto add_scan = [&](CLI::App* sub) {
        sub->add_option("--B", cfg.B, "cutoff constant B (rational)");
        sub->add_option("--mode", cfg.mode, "float (with exact sign confirmation) or exact");
    };

    auto* classify = app.add_subcommand("classify", "normalization, case constants and matrix criteria");
    add_common(classify, true);

    auto* coeffs = app.add_subcommand("coeffs", "P, Q, R over the cutoff at one t");
    add_common(coeffs, true);
    add_scan(coeffs);
    coeffs->add_option("--t", cfg.t, "evaluation t (default 10); below 3 a triangle j+k <= --order is dumped");
    coeffs->add_option("--alpha", cfg.alpha, "shift multiplier alpha");
    coeffs->add_option("--order", cfg.order, "triangle order when t < 3");

    auto* scan = app.add_subcommand("scan", "positivity scan and verdict over a t ladder");
    add_common(scan, true);
    add_scan(scan);
    scan->add_option("--alpha", cfg.alpha, "shift multiplier alpha");
    scan->add_option("--t-ladder", cfg.ladder, "increasing t values, each >= 3");
    scan->add_option("--t", cfg.t, "scan a single t instead of the ladder");
    scan->add_option("--B-ext", cfg.B_ext, "outer cutoff constant for the tail diagnostic");
    scan->add_option("--max-violations", cfg.max_violations, "cap on listed violations");

    auto* critical = app.add_subcommand("critical", "per-t feasibility maxima and critical-point bracket");
    add_common(critical, true);
    add_scan(critical);
    critical->add_option("--t-ladder", cfg.ladder, "increasing t values, each >= 3 (at least 3 rungs)");
    critical->add_option("--drift-tol", cfg.drift_tol, "relative spread accepted as converged");

    auto* oracle = app.add_subcommand("oracle-check", "closed forms against the brute-force series expansion");
    add_common(oracle, true);
    oracle->add_option("--order", cfg.order, "check every j + k <= order");
    oracle->add_option("--t", cfg.t, "evaluation t (default 10)");

    auto* identities = app.add_subcommand("identities", "exact algebraic identity suite on random (a, b, t)");
    add_common(identities, false);
    identities->add_option("--count", cfg.count, "number of random instances");
    identities->add_option("--seed", cfg.seed, "random seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }

    try {
        std::string report;
        if (classify->parsed())
            report = cmd_classify(cfg);
        else if (coeffs->parsed())
            report = cmd_coeffs(cfg);
        else if (scan->parsed())
            report = cmd_scan(cfg);
        else if (critical->parsed())
            report = cmd_critical(cfg);
        else if (oracle->parsed())
            report = cmd_oracle_check(cfg);
        else
            report = cmd_identities(cfg);
        if (cfg.out.empty()) {
            out << report;
        } else {
            std::ofstream file(cfg.out, std::ios::binary);
            if (!file) throw InvalidInput("cannot write '" + cfg.out + "'");
            file << report;
        }
        return kOk;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

}  // namespace idsq::cli

// Thin pybind11 layer. Rationals cross the boundary as "p/q" strings, reports as JSON text;
// the Python package decodes them.

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "commands.hpp"
#include "idsq/coefficients.hpp"
#include "idsq/matrix_criteria.hpp"
#include "json_io.hpp"

namespace py = pybind11;
using namespace idsq;
using io::Json;

namespace {

GaussianProblem problem(const std::string& text) { return io::problem_from_json(Json::parse(text)); }

std::vector<Rational> rationals(const std::vector<std::string>& xs) {
    std::vector<Rational> out;
    for (const auto& x : xs) out.push_back(parse_rational(x));
    return out;
}

SquareMatrix matrix(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::vector<Rational>> r;
    for (const auto& row : rows) r.push_back(rationals(row));
    return SquareMatrix::from_rows(r);
}

ScanOptions options(const std::string& mode, unsigned threads) {
    ScanOptions opt;
    opt.mode = mode == "exact" ? GridMode::Exact : GridMode::Float;
    if (mode != "exact" && mode != "float") throw InvalidInput("mode must be 'exact' or 'float'");
    opt.par = threads ? Parallelism{threads} : Parallelism::from_environment();
    return opt;
}

std::string classify(const std::string& p) {
    CanonicalProblem canon = normalize(problem(p));
    Json j = io::canonical_to_json(canon);
    j["all_alpha"] = all_alpha_condition(canon);
    return j.dump();
}

std::pair<std::string, std::string> coefficient(const std::string& a, const std::string& b, const std::string& shift,
                                                const std::string& t, std::uint64_t j, std::uint64_t k) {
    auto canon = CanonicalProblem::from_ab(parse_rational(a), parse_rational(b), parse_shift_case(shift));
    SeriesParams sp = params(canon, parse_rational(t));
    return {to_string(P_jk(sp, j, k)), to_string(Q_jk(sp, numerator_coeffs(canon, parse_rational(t)), j, k))};
}

std::string scan(const std::string& p, const std::string& alpha, const std::string& t, const std::string& B,
                 const std::string& mode, unsigned threads) {
    CanonicalProblem canon = normalize(problem(p));
    return io::scan_to_json(scan_positivity(canon, canon.c_sq_for_alpha(parse_rational(alpha)), parse_rational(t),
                                            parse_rational(B), options(mode, threads)))
        .dump();
}

std::string verdict(const std::string& p, const std::string& alpha, const std::vector<std::string>& ladder,
                    const std::string& B, const std::string& mode, unsigned threads) {
    auto rungs = rationals(ladder);
    Rational a = parse_rational(alpha), b = parse_rational(B);
    return io::verdict_to_json(id_verdict(problem(p), a, rungs, b, options(mode, threads)), rungs, b, a).dump();
}

std::string critical(const std::string& p, const std::vector<std::string>& ladder, const std::string& B,
                     double drift_tol, const std::string& mode, unsigned threads) {
    auto rungs = rationals(ladder);
    Rational b = parse_rational(B);
    return io::critical_to_json(estimate_critical_point(problem(p), rungs, b, drift_tol, options(mode, threads)), rungs,
                                b, drift_tol)
        .dump();
}

std::tuple<int, std::string, std::string> run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

PYBIND11_MODULE(_idsq, m) {
    m.def("classify", &classify);
    m.def("coefficient", &coefficient);
    m.def("scan", &scan, py::call_guard<py::gil_scoped_release>());
    m.def("verdict", &verdict, py::call_guard<py::gil_scoped_release>());
    m.def("critical", &critical, py::call_guard<py::gil_scoped_release>());
    m.def("ek_criterion", [](const std::vector<std::vector<std::string>>& gamma, const std::vector<std::string>& c) {
        return ek_criterion(matrix(gamma), rationals(c));
    });
    m.def("bapat", [](const std::vector<std::vector<std::string>>& gamma) {
        BapatResult r = bapat_id_criterion(matrix(gamma));
        return std::pair{r.verdict, r.witness};
    });
    m.def("run_cli", &run_cli, py::call_guard<py::gil_scoped_release>());
}

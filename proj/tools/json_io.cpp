#include "json_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace idsq::io {

namespace {

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    return parts;
}

Json finite_or_label(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return decimal_label(x);
}

}  // namespace

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(mpz_class(j.dump()));
    throw InvalidInput("expected a rational as a \"p/q\" string or an integer, got " + j.dump());
}

GaussianProblem problem_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("cov") || !j.contains("shift"))
        throw InvalidInput("problem JSON needs \"cov\" and \"shift\"");
    const Json& cov = j.at("cov");
    const Json& shift = j.at("shift");
    if (!cov.is_array() || cov.size() != 2 || !cov[0].is_array() || !cov[1].is_array() || cov[0].size() != 2 ||
        cov[1].size() != 2)
        throw InvalidInput("\"cov\" must be a 2x2 array");
    if (!shift.is_array() || shift.size() != 2) throw InvalidInput("\"shift\" must have two entries");
    GaussianProblem p{rational_from_json(cov[0][0]), rational_from_json(cov[0][1]), rational_from_json(cov[1][1]),
                      rational_from_json(shift[0]), rational_from_json(shift[1])};
    if (rational_from_json(cov[1][0]) != p.gamma12) throw InvalidInput("covariance must be symmetric");
    p.validate();
    return p;
}

Json problem_to_json(const GaussianProblem& p) {
    Json cov = Json::array({Json::array({to_string(p.gamma11), to_string(p.gamma12)}),
                            Json::array({to_string(p.gamma12), to_string(p.gamma22)})});
    return {{"cov", cov}, {"shift", Json::array({to_string(p.c1), to_string(p.c2)})}};
}

GaussianProblem load_problem(const std::string& input) {
    std::string text = trim(input);
    if (text.empty() || text.front() != '{') {
        std::ifstream file(input);
        if (!file) throw InvalidInput("cannot read problem file '" + input + "'");
        std::stringstream buf;
        buf << file.rdbuf();
        text = buf.str();
    }
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InvalidInput(std::string("malformed problem JSON: ") + e.what());
    }
    return problem_from_json(j);
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    for (const auto& part : split(text, ',')) {
        if (part.empty()) throw InvalidInput("empty entry in list '" + text + "'");
        out.push_back(parse_rational(part));
    }
    return out;
}

GaussianProblem problem_from_flags(const std::string& cov, const std::string& shift) {
    std::vector<Rational> g;
    if (cov.find(';') != std::string::npos) {
        auto rows = split(cov, ';');
        if (rows.size() != 2) throw InvalidInput("--cov needs two rows");
        auto r0 = parse_rational_list(rows[0]), r1 = parse_rational_list(rows[1]);
        if (r0.size() != 2 || r1.size() != 2) throw InvalidInput("--cov rows need two entries");
        if (r0[1] != r1[0]) throw InvalidInput("covariance must be symmetric");
        g = {r0[0], r0[1], r1[1]};
    } else {
        g = parse_rational_list(cov);
        if (g.size() != 3) throw InvalidInput("--cov takes g11,g12,g22 or g11,g12;g21,g22");
    }
    auto c = parse_rational_list(shift);
    if (c.size() != 2) throw InvalidInput("--shift takes c1,c2");
    GaussianProblem p{g[0], g[1], g[2], c[0], c[1]};
    p.validate();
    return p;
}

std::string decimal_label(double x) {
    std::string s = shortest_decimal(x);
    if (s.find_first_of(".en") == std::string::npos) s += ".0";
    return s;
}

std::string decimal_label(const Rational& q) { return decimal_label(q.get_d()); }

Json rational_number(const Rational& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return to_string(q);
}

Json canonical_to_json(const CanonicalProblem& c) {
    return {{"a", to_string(c.a)},
            {"b", to_string(c.b)},
            {"d", to_string(c.d)},
            {"case", std::string(to_string(c.shift_case))},
            {"kappa_sq", to_string(c.kappa_sq)},
            {"kappa", decimal_label(c.kappa())},
            {"degenerate", c.degenerate}};
}

Json violations_to_json(const std::vector<Violation>& v) {
    Json out = Json::array();
    for (const auto& x : v)
        out.push_back({{"j", x.j}, {"k", x.k}, {"scaled", decimal_label(x.scaled)},
                       {"normalized", decimal_label(x.normalized)}});
    return out;
}

Json tail_to_json(const Rational& B_ext, const TailMass& tail) {
    return {{"B_ext", decimal_label(B_ext)},
            {"mass", decimal_label(tail.mass())},
            {"log_mass", finite_or_label(tail.log_mass)},
            {"envelope", decimal_label(tail.envelope())},
            {"cells", tail.cells}};
}

Json scan_to_json(const ScanVerdict& v) {
    return {{"all_nonnegative", v.all_nonnegative},
            {"violation_count", v.violation_count},
            {"cells_checked", v.cells_checked},
            {"exact_confirmations", v.exact_confirmations},
            {"boundary_rows_certified", v.boundary_rows_certified},
            {"violations", violations_to_json(v.violations)}};
}

Json verdict_to_json(const IdVerdict& v, const std::vector<Rational>& ladder, const Rational& B, const Rational& alpha) {
    Json out;
    out["verdict"] = std::string(to_string(v.kind));
    out["ladder"] = Json::array();
    for (const auto& t : ladder) out["ladder"].push_back(rational_number(t));
    out["B"] = decimal_label(B);
    out["alpha"] = to_string(alpha);
    out["c_sq"] = to_string(v.c_sq);
    out["canonical"] = canonical_to_json(v.canon);
    Json rungs = Json::array();
    for (const auto& r : v.rungs)
        rungs.push_back({{"t", rational_number(r.t)},
                         {"all_nonnegative", r.all_nonnegative},
                         {"violation_count", r.violation_count},
                         {"cells_checked", r.cells_checked}});
    out["rungs"] = rungs;
    out["violations"] = violations_to_json(v.violations);
    if (v.witness) {
        Json norm = Json::array();
        for (double x : v.witness->normalized) norm.push_back(decimal_label(x));
        out["witness"] = {{"j", v.witness->j}, {"k", v.witness->k}, {"t", rational_number(v.witness->t)},
                          {"normalized", norm}};
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

Json critical_to_json(const CriticalPointReport& r, const std::vector<Rational>& ladder, const Rational& B,
                      double drift_tol) {
    Json out;
    out["status"] = std::string(to_string(r.status));
    out["canonical"] = canonical_to_json(r.canon);
    out["ladder"] = Json::array();
    for (const auto& t : ladder) out["ladder"].push_back(rational_number(t));
    out["B"] = decimal_label(B);
    out["drift_tol"] = decimal_label(drift_tol);
    Json per_t = Json::array();
    for (const auto& f : r.per_t) {
        Json row{{"t", rational_number(f.t)}};
        if (f.c_star_sq) {
            row["c_star_sq"] = to_string(*f.c_star_sq);
            row["c_star_sq_decimal"] = decimal_label(*f.c_star_sq);
            row["alpha_star"] = decimal_label(std::sqrt(Rational(*f.c_star_sq / r.canon.kappa_sq).get_d()));
            row["argmin"] = Json::array({f.argmin_j, f.argmin_k});
        } else {
            row["c_star_sq"] = "inf";
            row["c_star_sq_decimal"] = "inf";
            row["alpha_star"] = "inf";
            row["argmin"] = nullptr;
        }
        row["cells"] = f.cells;
        per_t.push_back(row);
    }
    out["per_t"] = per_t;
    if (r.status == CriticalStatus::CriticalPoint) {
        out["bracket"] = {{"lo", finite_or_label(r.bracket_lo)}, {"hi", finite_or_label(r.bracket_hi)}};
        out["drift"] = finite_or_label(r.drift);
        out["converged"] = r.converged;
    } else {
        out["bracket"] = nullptr;
        out["drift"] = nullptr;
        out["converged"] = nullptr;
    }
    out["remark51_lower"] = r.small_c_threshold ? Json(to_string(*r.small_c_threshold)) : Json("inf");
    return out;
}

}  // namespace idsq::io

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "idsq/analyzer.hpp"
#include "idsq/critical_point.hpp"
#include "idsq/model.hpp"

namespace idsq::io {

using Json = nlohmann::ordered_json;

/// A rational given as a "p/q" (or decimal) string or a JSON integer.
Rational rational_from_json(const Json& j);

/// {"cov":[["4","1"],["1","1/2"]],"shift":["1","1"]}
GaussianProblem problem_from_json(const Json& j);
Json problem_to_json(const GaussianProblem& p);

/// Inline JSON (leading '{') or a path to a JSON file.
GaussianProblem load_problem(const std::string& input);

/// "4,1,1/2" (Γ11, Γ12, Γ22) or "4,1;1,1/2" (rows) plus "1,-1".
GaussianProblem problem_from_flags(const std::string& cov, const std::string& shift);

std::vector<Rational> parse_rational_list(const std::string& text);

/// Shortest round-trip decimal that always reads as a real: 0.5 -> "0.5", 1 -> "1.0".
std::string decimal_label(double x);
std::string decimal_label(const Rational& q);

/// Integral rationals as JSON numbers, others as "p/q".
Json rational_number(const Rational& q);

Json canonical_to_json(const CanonicalProblem& c);
Json violations_to_json(const std::vector<Violation>& v);
Json tail_to_json(const Rational& B_ext, const TailMass& tail);
Json scan_to_json(const ScanVerdict& v);
Json verdict_to_json(const IdVerdict& v, const std::vector<Rational>& ladder, const Rational& B, const Rational& alpha);
Json critical_to_json(const CriticalPointReport& r, const std::vector<Rational>& ladder, const Rational& B,
                      double drift_tol);

}  // namespace idsq::io

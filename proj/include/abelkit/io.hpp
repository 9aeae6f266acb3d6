#ifndef ABELKIT_IO_HPP
#define ABELKIT_IO_HPP

#include <stdexcept>
#include <string>

#include <json.hpp>

#include <abelkit/abel.hpp>
#include <abelkit/darboux.hpp>
#include <abelkit/hierarchy.hpp>
#include <abelkit/lagrangian.hpp>
#include <abelkit/lie.hpp>

namespace abelkit::io
{

using json = nlohmann::json;

// Input that parses as JSON but does not have the expected shape.
class format_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Two-space indentation, keys sorted, floats at 17 significant digits,
// non-finite floats as null.
std::string dump(const json &);

json to_json(const rational &);
json to_json(const expression &);
json to_json(const poly_xy &);
json to_json(const jet_poly &);
json to_json(const vf1d &);
json to_json(const abel_first_kind &);
json to_json(const planar_vf &);
json to_json(const darboux_pair &);
json to_json(const multiplier_product &);
json to_json(const power_form &);
json to_json(const gauge &);
json to_json(const ext_real &);

// Rationals: "p/q", decimal strings or JSON integers.
rational rational_from_json(const json &);
// Expression text in the given variables, or a JSON number.
expression expression_from_json(const json &, std::initializer_list<variable> vars = {variable::t});
// Polynomial text in x and v, or {"monomials": [{"powers": [i, j], "coeff": "p/q"}]}.
poly_xy poly_from_json(const json &);

// {"kind": "abel1" | "riccati", "coeffs": {"A0": ..., ...}, "interval": [lo, hi]}.
abel_first_kind abel_from_json(const json &);
// {"kind": "abel2", "coeffs": {"f": ..., "B0": ..., ...}, "interval": [lo, hi]}.
abel_second_kind second_kind_from_json(const json &);
// {"vf": {"P": ..., "Q": ...}} or {"P": ..., "Q": ...}.
planar_vf vf_from_json(const json &);
// {"basis": [["c0", "c1", ...], ...]}: coefficients of x^k d/dx.
vspan span_from_json(const json &);

} // namespace abelkit::io

#endif

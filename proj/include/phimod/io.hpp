#pragma once
// JSON encoding of modules, pairing matrices and t_D reports. Scalars are
// written as "num/den"; integers are accepted on input.

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "phimod/extcalc.hpp"
#include "phimod/filphi.hpp"

namespace phimod {

// Carries a location: "line L, column C" for syntax errors, a JSON pointer for
// semantic ones.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json scalar_to_json(const Scalar& x);
nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json module_to_json(const FilteredPhiModule& m);
nlohmann::json pairing_to_json(const PairingMatrices& a);

FilteredPhiModule module_from_json(const nlohmann::json& j);
PairingMatrices pairing_from_json(const nlohmann::json& j);

nlohmann::json parse_json_text(const std::string& text, const std::string& source);
std::string read_file(const std::string& path);
FilteredPhiModule load_module(const std::string& path);
PairingMatrices load_pairing(const std::string& path);

// {n, d_K, dims: {aut, gal, ker}, relations_checked, kernel_basis, sweep}
nlohmann::json td_report(const TDModel& td);
nlohmann::json recovery_report(const RecoveryReport& r, int n, int d_K);

}  // namespace phimod

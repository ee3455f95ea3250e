#include "phimod/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace phimod {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const json::json_pointer& at, const std::string& what) {
  throw InputError("field " + (at.empty() ? std::string("/") : at.to_string()) + ": " + what);
}

const json& member(const json& j, const json::json_pointer& at, const char* key) {
  if (!j.is_object()) fail(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(at / key, "missing");
  return *it;
}

long as_integer(const json& j, const json::json_pointer& at) {
  if (!j.is_number_integer()) fail(at, "expected an integer");
  return j.get<long>();
}

Scalar as_scalar(const json& j, const json::json_pointer& at) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (j.is_string()) {
    try {
      return parse_scalar(j.get<std::string>());
    } catch (const std::exception& e) {
      fail(at, e.what());
    }
  }
  fail(at, "expected an exact scalar (\"num/den\" or an integer)");
}

const json& as_array(const json& j, const json::json_pointer& at, std::size_t size = std::string::npos) {
  if (!j.is_array()) fail(at, "expected an array");
  if (size != std::string::npos && j.size() != size) fail(at, "expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
  return j;
}

Matrix as_matrix(const json& j, const json::json_pointer& at, std::size_t cols) {
  as_array(j, at);
  std::vector<Vec> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    as_array(j[r], at / r, cols);
    Vec row;
    for (std::size_t c = 0; c < cols; ++c) row.push_back(as_scalar(j[r][c], at / r / c));
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(rows, cols);
}

}  // namespace

json scalar_to_json(const Scalar& x) { return to_string(x); }

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json module_to_json(const FilteredPhiModule& m) {
  json j;
  j["n"] = m.n;
  j["d_K"] = m.d_K;
  j["p"] = m.p;
  j["alphas"] = json::array();
  for (const auto& a : m.alphas) j["alphas"].push_back(to_string(a));
  j["weights"] = m.weights;
  j["filtration"] = json::array();
  for (const auto& f : m.fil) {
    json steps = json::array();
    for (const auto& [jump, s] : f.steps()) steps.push_back({{"jump", jump}, {"basis", matrix_to_json(s.basis())}});
    j["filtration"].push_back(std::move(steps));
  }
  return j;
}

FilteredPhiModule module_from_json(const json& j) {
  const json::json_pointer root;
  const long n = as_integer(member(j, root, "n"), root / "n");
  const long d = as_integer(member(j, root, "d_K"), root / "d_K");
  if (n < 1 || n > 8) fail(root / "n", "rank must be between 1 and 8");
  if (d < 1 || d > 8) fail(root / "d_K", "degree must be between 1 and 8");
  long p = 5;
  if (j.contains("p")) p = as_integer(j["p"], root / "p");
  const auto& ja = as_array(member(j, root, "alphas"), root / "alphas", static_cast<std::size_t>(n));
  Vec alphas;
  for (std::size_t i = 0; i < ja.size(); ++i) alphas.push_back(as_scalar(ja[i], root / "alphas" / i));
  const auto& jf = as_array(member(j, root, "filtration"), root / "filtration", static_cast<std::size_t>(d));
  std::vector<Filtration> fil;
  for (std::size_t s = 0; s < jf.size(); ++s) {
    const auto at = root / "filtration" / s;
    as_array(jf[s], at);
    std::vector<std::pair<int, Subspace>> steps;
    for (std::size_t t = 0; t < jf[s].size(); ++t) {
      const auto& st = jf[s][t];
      const int jump = static_cast<int>(as_integer(member(st, at / t, "jump"), at / t / "jump"));
      Matrix b = as_matrix(member(st, at / t, "basis"), at / t / "basis", static_cast<std::size_t>(n));
      steps.emplace_back(jump, Subspace::span_rows(b));
    }
    std::sort(steps.begin(), steps.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    try {
      fil.emplace_back(static_cast<std::size_t>(n), std::move(steps));
    } catch (const InvariantViolation& e) {
      fail(at, e.what());
    }
  }
  FilteredPhiModule m;
  try {
    m = FilteredPhiModule::make(static_cast<int>(n), static_cast<int>(d), p, alphas, std::move(fil));
  } catch (const InvariantViolation& e) {
    fail(root, e.what());
  }
  if (j.contains("weights")) {
    const auto at = root / "weights";
    const auto& jw = as_array(j["weights"], at, static_cast<std::size_t>(d));
    for (std::size_t s = 0; s < jw.size(); ++s) {
      as_array(jw[s], at / s, static_cast<std::size_t>(n));
      std::vector<int> w;
      for (std::size_t i = 0; i < jw[s].size(); ++i) w.push_back(static_cast<int>(as_integer(jw[s][i], at / s / i)));
      if (w != m.weights[s]) fail(at / s, "weights do not match the filtration jumps (jump -h for weight h)");
    }
  }
  return m;
}

json pairing_to_json(const PairingMatrices& a) {
  return {{"a1_minus", matrix_to_json(a.a1_minus)},
          {"a2_minus", matrix_to_json(a.a2_minus)},
          {"a1_plus", matrix_to_json(a.a1_plus)},
          {"a2_plus", matrix_to_json(a.a2_plus)}};
}

PairingMatrices pairing_from_json(const json& j) {
  const json::json_pointer root;
  PairingMatrices a;
  Matrix* slots[] = {&a.a1_minus, &a.a2_minus, &a.a1_plus, &a.a2_plus};
  const char* keys[] = {"a1_minus", "a2_minus", "a1_plus", "a2_plus"};
  for (int k = 0; k < 4; ++k) {
    *slots[k] = as_matrix(member(j, root, keys[k]), root / keys[k], 4);
    if (slots[k]->rows() != 5) fail(root / keys[k], "expected 5 rows");
  }
  return a;
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(source + ": line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FilteredPhiModule load_module(const std::string& path) {
  json j = parse_json_text(read_file(path), path);
  try {
    return module_from_json(j);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

PairingMatrices load_pairing(const std::string& path) {
  json j = parse_json_text(read_file(path), path);
  try {
    return pairing_from_json(j);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

json td_report(const TDModel& td) {
  json j;
  j["n"] = td.aut.n;
  j["d_K"] = td.aut.d_K;
  j["dims"] = {{"aut", td.aut.target_dim}, {"gal", td.gal.target_dim}, {"ker", td.ker.dim()}};
  j["relations_checked"] = td.relations_checked;
  j["kernel_basis"] = matrix_to_json(td.ker.basis());
  j["kernel_canonical_hash"] = hash_hex(fnv1a64(kernel_canonical_text(td)));
  j["sweep"] = json::array();
  return j;
}

json recovery_report(const RecoveryReport& r, int n, int d_K) {
  json j;
  j["n"] = n;
  j["d_K"] = d_K;
  j["injective"] = r.injective;
  j["sweep"] = json::array();
  for (const auto& e : r.entries)
    j["sweep"].push_back({{"a", to_string(e.a)}, {"ker_dim", e.ker_dim}, {"kernel_canonical_hash", hash_hex(e.hash)}});
  j["collisions"] = json::array();
  for (const auto& [a, b] : r.collisions) j["collisions"].push_back({to_string(a), to_string(b)});
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace phimod

#pragma once

// JSON forms of states and reports.
//
// State file:
//   { "dA": int, "dB": int, "kind": "density" | "pure",
//     "data": [[re, im], ...] }
// "pure" holds dA*dB amplitudes in flat-index order (|ij> at i*dB + j);
// "density" holds the (dA*dB)^2 matrix entries row-major.

#include <qconc/qconcurrence.hpp>
#include <qconc/separability.hpp>
#include <qconc/state.hpp>

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace qconc {

using json = nlohmann::json;

struct StateFile {
  DensityMatrix rho;
  /// Present when the file held a state vector.
  std::optional<PureState> pure;
};

namespace detail {

inline json complex_array(const std::complex<double>* data, Eigen::Index count) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < count; ++i) arr.push_back({data[i].real(), data[i].imag()});
  return arr;
}

inline std::complex<double> parse_complex(const json& entry) {
  if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
    throw error(errc::parse_error, "each data entry must be [re, im]");
  return {entry[0].get<double>(), entry[1].get<double>()};
}

}  // namespace detail

inline json state_to_json(const PureState& psi) {
  return {{"dA", psi.dims().dA},
          {"dB", psi.dims().dB},
          {"kind", "pure"},
          {"data", detail::complex_array(psi.amplitudes().data(), psi.amplitudes().size())}};
}

inline json state_to_json(const DensityMatrix& rho) {
  // Eigen is column-major; the file is row-major.
  const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = rho.matrix();
  return {{"dA", rho.dims().dA},
          {"dB", rho.dims().dB},
          {"kind", "density"},
          {"data", detail::complex_array(rm.data(), rm.size())}};
}

inline StateFile state_from_json(const json& j) {
  if (!j.is_object()) throw error(errc::parse_error, "state file must be a JSON object");
  for (const char* key : {"dA", "dB", "kind", "data"})
    if (!j.contains(key)) throw error(errc::parse_error, std::string("missing field '") + key + "'");
  if (!j["dA"].is_number_integer() || !j["dB"].is_number_integer())
    throw error(errc::parse_error, "dA and dB must be integers");
  if (!j["data"].is_array()) throw error(errc::parse_error, "data must be an array");

  const BipartiteDims dims(j["dA"].get<int>(), j["dB"].get<int>());
  const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  const json& data = j["data"];
  const auto n = static_cast<std::size_t>(dims.total());

  if (kind == "pure") {
    if (data.size() != n)
      throw error(errc::dimension_mismatch, "pure state needs " + std::to_string(n) + " amplitudes");
    ComplexVector v(dims.total());
    for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = detail::parse_complex(data[i]);
    PureState psi(dims, std::move(v));
    return {projector(psi), psi};
  }
  if (kind == "density") {
    if (data.size() != n * n)
      throw error(errc::dimension_mismatch, "density matrix needs " + std::to_string(n * n) + " entries");
    ComplexMatrix m(dims.total(), dims.total());
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = detail::parse_complex(data[r * n + c]);
    return {validate_density(m, dims), std::nullopt};
  }
  throw error(errc::parse_error, "kind must be \"density\" or \"pure\"");
}

inline StateFile read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::parse_error, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw error(errc::parse_error, "'" + path + "': " + e.what());
  }
  return state_from_json(j);
}

inline json to_json(const Verdict& v) {
  return {{"criterion", to_string(v.criterion)}, {"status", to_string(v.status)}, {"witness", v.witness}};
}

namespace detail {

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<double> number_or_null(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

inline BoundRegime parse_regime(const std::string& s) {
  for (BoundRegime r :
       {BoundRegime::GeneralD, BoundRegime::Qubit3Plus, BoundRegime::QubitSRange, BoundRegime::QubitGap})
    if (s == to_string(r)) return r;
  throw error(errc::parse_error, "unknown regime '" + s + "'");
}

}  // namespace detail

inline json to_json(const BoundReport& r) {
  return {{"q", r.q},
          {"dA", r.dims.dA},
          {"dB", r.dims.dB},
          {"d", r.dims.d()},
          {"ppt_norm", r.ppt_norm},
          {"realign_norm", r.realign_norm},
          {"regime", to_string(r.regime)},
          {"theorem1_bound", detail::optional_number(r.theorem1_bound)},
          {"prior_bound", r.prior_bound},
          {"best_lower", r.best_lower},
          {"upper_estimate", detail::optional_number(r.upper_estimate)}};
}

inline BoundReport bound_report_from_json(const json& j) {
  try {
    BoundReport r;
    r.q = j.at("q").get<double>();
    r.dims = BipartiteDims(j.at("dA").get<int>(), j.at("dB").get<int>());
    r.ppt_norm = j.at("ppt_norm").get<double>();
    r.realign_norm = j.at("realign_norm").get<double>();
    r.regime = detail::parse_regime(j.at("regime").get<std::string>());
    r.theorem1_bound = detail::number_or_null(j.at("theorem1_bound"));
    r.prior_bound = j.at("prior_bound").get<double>();
    r.best_lower = j.at("best_lower").get<double>();
    r.upper_estimate = detail::number_or_null(j.at("upper_estimate"));
    return r;
  } catch (const json::exception& e) {
    throw error(errc::parse_error, std::string("bound report: ") + e.what());
  }
}

}  // namespace qconc

#pragma once

// JSON encodings of states, bases and curves. Complex numbers are [re, im].
//
//   {"kind":"pure","dim":d,"amplitudes":[[re,im],...]}
//   {"kind":"mixed","dim":d,"matrix":[[[re,im],...],...]}
//   {"kind":"bloch","r":[rx,ry,rz]}
//   {"kind":"basis","dim":d,"matrix":[[[re,im],...],...]}   columns are the basis vectors
//   {"kind":"samples","T":T,"times":[...],"states":[state,...]}
//   {"kind":"generator","T":T,"samples":K,"generator":{"type":"unitary"|"diagonal"|"interp",...}}

#include <optional>
#include <string>

#include "json.hpp"

#include "prepcost/curve.hpp"
#include "prepcost/prep_cost.hpp"

namespace prepcost {

using Json = nlohmann::json;

enum class StateKind { Pure, Mixed, Bloch };

struct StateFile {
  StateKind kind = StateKind::Mixed;
  DensityMatrix state;
  std::optional<PureState> pure;
  std::optional<Eigen::Vector3d> bloch;
};

struct CurveFile {
  CurveGenerator generator = SampleList{};
  double horizon = 1.0;
  int samples = 1000;
};

// Malformed documents raise ParseError; well-formed but invalid states raise
// the matching validation error.
StateFile parse_state(const Json& j);
ReferenceBasis parse_basis(const Json& j);
CurveFile parse_curve(const Json& j);

Json to_json(const PureState& psi);
Json to_json(const DensityMatrix& rho);
Json bloch_to_json(const Eigen::Vector3d& r);
Json to_json(const StateFile& file);
Json to_json(const ReferenceBasis& basis);
Json to_json(const CurveFile& file);

Json complex_to_json(Complex z);
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const char* what);

// Whole file, or standard input for "-".
std::string read_text(const std::string& path);
Json read_json(const std::string& path);

}  // namespace prepcost

#include "prepcost/state_io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace prepcost {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) parse_fail("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_fail(std::string(what) + " must be finite");
  return v;
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) parse_fail(std::string(what) + " must be an integer");
  return j.get<int>();
}

Complex complex_from_json(const Json& j, const char* what) {
  if (j.is_number()) return {number(j, what), 0.0};
  if (!j.is_array() || j.size() != 2) parse_fail(std::string(what) + " entries must be [re, im] pairs");
  return {number(j[0], what), number(j[1], what)};
}

RealVector real_vector(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) parse_fail(std::string(what) + " must be a non-empty array");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

std::string kind_of(const Json& j) {
  const Json& k = field(j, "kind");
  if (!k.is_string()) parse_fail("\"kind\" must be a string");
  return k.get<std::string>();
}

void check_dim(const Json& j, Eigen::Index actual) {
  if (j.contains("dim") && integer(j["dim"], "dim") != actual) parse_fail("\"dim\" disagrees with the data");
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(i, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) parse_fail(std::string(what) + " must be a non-empty array of rows");
  const std::size_t n = j.size();
  ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) parse_fail(std::string(what) + " must be square");
    for (std::size_t c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c], what);
  }
  return m;
}

StateFile parse_state(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind == "pure") {
    const Json& amps = field(j, "amplitudes");
    if (!amps.is_array() || amps.empty()) parse_fail("\"amplitudes\" must be a non-empty array");
    ComplexVector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(amps[i], "amplitudes");
    check_dim(j, v.size());
    // hand-written files carry a few digits; accept them and renormalize
    if (std::abs(v.squaredNorm() - 1.0) > 1e-6) throw Error(ErrorKind::InvalidNorm, "pure state amplitudes are not normalized");
    PureState psi = PureState::normalized(v);
    return StateFile{StateKind::Pure, DensityMatrix(psi), psi, std::nullopt};
  }
  if (kind == "mixed") {
    const ComplexMatrix m = matrix_from_json(field(j, "matrix"), "matrix");
    check_dim(j, m.rows());
    return StateFile{StateKind::Mixed, DensityMatrix(m), std::nullopt, std::nullopt};
  }
  if (kind == "bloch") {
    const RealVector r = real_vector(field(j, "r"), "r");
    if (r.size() != 3) parse_fail("\"r\" must have three components");
    const Eigen::Vector3d v(r(0), r(1), r(2));
    return StateFile{StateKind::Bloch, bloch_state(v), std::nullopt, v};
  }
  parse_fail("unknown state kind \"" + kind + "\"");
}

ReferenceBasis parse_basis(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind != "basis") parse_fail("expected a basis document");
  const ComplexMatrix m = matrix_from_json(field(j, "matrix"), "matrix");
  check_dim(j, m.rows());
  return ReferenceBasis(m);
}

namespace {

Schedule parse_schedule(const Json& g) {
  if (!g.contains("schedule")) return Schedule::Linear;
  const Json& s = g["schedule"];
  if (s == "linear") return Schedule::Linear;
  if (s == "sine") return Schedule::Sine;
  parse_fail("\"schedule\" must be \"linear\" or \"sine\"");
}

}  // namespace

CurveFile parse_curve(const Json& j) {
  const std::string kind = kind_of(j);
  CurveFile out;
  if (kind == "samples") {
    const Json& times = field(j, "times");
    const Json& states = field(j, "states");
    if (!times.is_array() || !states.is_array()) parse_fail("\"times\" and \"states\" must be arrays");
    SampleList list;
    for (const auto& t : times) list.times.push_back(number(t, "times"));
    for (const auto& s : states) list.states.push_back(parse_state(s).state);
    if (list.times.empty()) parse_fail("\"times\" is empty");
    out.horizon = list.times.back();
    if (j.contains("T") && std::abs(number(j["T"], "T") - out.horizon) > 1e-12 * std::max(1.0, out.horizon)) {
      parse_fail("\"T\" disagrees with the last sample time");
    }
    out.samples = static_cast<int>(list.times.size()) - 1;
    out.generator = std::move(list);
    return out;
  }
  if (kind != "generator") parse_fail("unknown curve kind \"" + kind + "\"");

  out.horizon = j.contains("T") ? number(j["T"], "T") : 1.0;
  out.samples = j.contains("samples") ? integer(j["samples"], "samples") : 1000;
  const Json& g = field(j, "generator");
  const Json& type = field(g, "type");
  if (type == "unitary") {
    out.generator = UnitaryGenerator{matrix_from_json(field(g, "hamiltonian"), "hamiltonian"),
                                     parse_state(field(g, "initial")).state, out.horizon};
  } else if (type == "diagonal") {
    DiagonalGenerator d{real_vector(field(g, "from"), "from"), real_vector(field(g, "to"), "to"), parse_schedule(g),
                        std::nullopt, out.horizon};
    if (g.contains("basis")) d.basis = matrix_from_json(g["basis"], "basis");
    out.generator = std::move(d);
  } else if (type == "interp") {
    out.generator = InterpolationGenerator{matrix_from_json(field(g, "unitary"), "unitary"),
                                           parse_state(field(g, "initial")).state, out.horizon};
  } else {
    parse_fail("generator type must be \"unitary\", \"diagonal\" or \"interp\"");
  }
  return out;
}

Json to_json(const PureState& psi) {
  Json amps = Json::array();
  for (Eigen::Index i = 0; i < psi.dim(); ++i) amps.push_back(complex_to_json(psi.amplitudes()(i)));
  return Json{{"kind", "pure"}, {"dim", psi.dim()}, {"amplitudes", amps}};
}

Json to_json(const DensityMatrix& rho) {
  return Json{{"kind", "mixed"}, {"dim", rho.dim()}, {"matrix", matrix_to_json(rho.matrix())}};
}

Json bloch_to_json(const Eigen::Vector3d& r) { return Json{{"kind", "bloch"}, {"r", {r.x(), r.y(), r.z()}}}; }

Json to_json(const StateFile& file) {
  switch (file.kind) {
    case StateKind::Pure: return to_json(*file.pure);
    case StateKind::Bloch: return bloch_to_json(*file.bloch);
    case StateKind::Mixed: break;
  }
  return to_json(file.state);
}

Json to_json(const ReferenceBasis& basis) {
  return Json{{"kind", "basis"}, {"dim", basis.dim()}, {"matrix", matrix_to_json(basis.matrix())}};
}

namespace {

Json real_array(const RealVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

struct GeneratorJson {
  Json operator()(const UnitaryGenerator& g) const {
    return Json{{"type", "unitary"}, {"hamiltonian", matrix_to_json(g.hamiltonian)}, {"initial", to_json(g.initial)}};
  }
  Json operator()(const DiagonalGenerator& g) const {
    Json out{{"type", "diagonal"},
             {"from", real_array(g.from)},
             {"to", real_array(g.to)},
             {"schedule", g.schedule == Schedule::Sine ? "sine" : "linear"}};
    if (g.basis) out["basis"] = matrix_to_json(*g.basis);
    return out;
  }
  Json operator()(const InterpolationGenerator& g) const {
    return Json{{"type", "interp"}, {"unitary", matrix_to_json(g.unitary)}, {"initial", to_json(g.initial)}};
  }
  Json operator()(const SampleList&) const { return nullptr; }
};

}  // namespace

Json to_json(const CurveFile& file) {
  if (const auto* list = std::get_if<SampleList>(&file.generator)) {
    Json states = Json::array();
    for (const auto& s : list->states) states.push_back(to_json(s));
    return Json{{"kind", "samples"}, {"T", file.horizon}, {"times", list->times}, {"states", states}};
  }
  return Json{{"kind", "generator"},
              {"T", file.horizon},
              {"samples", file.samples},
              {"generator", std::visit(GeneratorJson{}, file.generator)}};
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_fail("\"" + path + "\" is not valid JSON: " + e.what());
  }
}

}  // namespace prepcost

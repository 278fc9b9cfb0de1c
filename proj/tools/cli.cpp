#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"

#include "prepcost/curve.hpp"
#include "prepcost/prep_cost.hpp"
#include "prepcost/resources.hpp"
#include "prepcost/state_io.hpp"

namespace prepcost {

namespace {

constexpr std::uint64_t kDefaultSeed = 0x5eedULL;

struct Common {
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  bool deterministic = false;
  std::string out;
  int restarts = -1;
};

struct Inputs {
  std::string curve, target, basis, from, to, csv, dims;
  double time = 1.0;
  int samples = 1000;
  int k = 1;
  bool asymmetric = false;
  double q_over_t = 0.0;
  double h = 1.0;
};

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write \"" + path + "\"");
    f << text;
    f.flush();
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write \"" + path + "\"");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::InvalidArgument, "cannot write \"" + path + "\"");
  }
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int d = std::stoi(item, &used);
      if (used != item.size() || d < 1) throw std::invalid_argument(item);
      dims.push_back(d);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "--dims expects positive integers separated by commas");
    }
  }
  if (dims.empty()) throw Error(ErrorKind::ParseError, "--dims is empty");
  return dims;
}

Json tolerances_json() {
  const ToleranceConfig& t = default_tolerances();
  return Json{{"hermiticity", t.hermiticity}, {"trace", t.trace},         {"positivity", t.positivity},
              {"norm", t.norm},               {"unitarity", t.unitarity}, {"degeneracy", t.degeneracy},
              {"support", t.support}};
}

Json real_array(const RealVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json report_json(const ResourceReport& r) {
  Json blocks = Json::array();
  for (const auto& b : r.basis_blocks) blocks.push_back(matrix_to_json(b));
  return Json{{"value", r.value},
              {"fidelity", r.fidelity},
              {"partition", r.partition},
              {"basis_blocks", blocks},
              {"populations", real_array(r.populations)},
              {"convergence", {{"restarts_used", r.restarts_used}, {"converged", r.converged}, {"evaluations", r.evaluations}}}};
}

ReferenceBasis basis_for(const Inputs& in, Eigen::Index dim) {
  if (in.basis.empty()) return ReferenceBasis::computational(dim);
  ReferenceBasis b = parse_basis(read_json(in.basis));
  if (b.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "basis and target dimensions differ");
  return b;
}

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "--time must be positive");
}

// ---------------------------------------------------------------- commands

Json cmd_energy(const Inputs& in) {
  const CurveFile file = parse_curve(read_json(in.curve));
  const StateCurve curve = make_curve(file.generator, file.samples);
  const EnergyReport e = integrate_energy(curve);
  if (!in.csv.empty()) {
    std::string csv = "t,speed_sq,classical,quantum\n";
    for (std::size_t k = 0; k < e.times.size(); ++k) {
      const TangentSplit& s = e.speeds[k];
      csv += fmt17(e.times[k]) + "," + fmt17(s.total()) + "," + fmt17(s.classical_speed_sq) + "," +
             fmt17(s.quantum_speed_sq) + "\n";
    }
    write_atomic(in.csv, csv);
  }
  const double t = curve.horizon();
  return Json{{"T", t},
              {"samples", e.grid_size},
              {"curve", curve.label()},
              {"dim", curve.dim()},
              {"energy", {{"total", e.total_energy}, {"classical", e.classical_energy}, {"quantum", e.quantum_energy}}},
              {"energy_times_T",
               {{"total", e.total_energy * t}, {"classical", e.classical_energy * t}, {"quantum", e.quantum_energy * t}}}};
}

Json cmd_prepcost(const Inputs& in) {
  check_time(in.time);
  const StateFile target = parse_state(read_json(in.target));
  const ReferenceBasis basis = basis_for(in, target.state.dim());
  const CostBracket b = qu_cost_bracket(target.state, basis, in.time, in.samples);
  Json values{{"lower", b.lower},
              {"upper", b.upper},
              {"exact", b.exact ? Json(*b.exact) : Json(nullptr)},
              {"upper_sampled", b.upper_sampled},
              {"lower_QT", b.lower * in.time},
              {"upper_QT", b.upper * in.time},
              {"exact_QT", b.exact ? Json(*b.exact * in.time) : Json(nullptr)},
              {"free_states_scanned", b.free_states},
              {"lower_free_state", to_json(b.lower_free_state)},
              {"upper_free_state", to_json(b.upper_free_state)},
              {"upper_unitary", matrix_to_json(b.upper_unitary)}};
  if (b.qubit_closed_form) {
    const Eigen::Vector3d r = bloch_vector(target.state);
    double oracle = std::numeric_limits<double>::infinity();
    for (double sign : {1.0, -1.0}) {
      const double a = bures_angle(bloch_state(Eigen::Vector3d(0.0, 0.0, sign * r.norm())), target.state);
      oracle = std::min(oracle, a * a / in.time);
    }
    values["qubit"] = Json{{"r", {r.x(), r.y(), r.z()}},
                           {"closed_form", *b.qubit_closed_form},
                           {"closed_form_as_printed", qubit_closed_form_as_printed(r, in.time)},
                           {"oracle", oracle}};
  }
  return Json{{"T", in.time}, {"samples", in.samples}, {"dim", target.state.dim()}, {"values", values}};
}

PureState require_pure(const StateFile& f, const char* which) {
  if (f.pure) return *f.pure;
  const SpectralDecomposition sd = eigendecompose(f.state.matrix());
  if (sd.eigenvalues(0) >= 1.0 - 1e-10) return PureState::normalized(sd.eigenvectors.col(0));
  throw Error(ErrorKind::InvalidArgument, std::string(which) + " must be a pure state");
}

Json cmd_geodesic(const Inputs& in, std::ostream& err) {
  check_time(in.time);
  const PureState from = require_pure(parse_state(read_json(in.from)), "--from");
  const PureState to = require_pure(parse_state(read_json(in.to)), "--to");
  const StateCurve curve = pure_geodesic(from, to, in.time, in.samples);
  const EnergyReport e = integrate_energy(curve);
  const double d = fubini_study(from, to);
  const DensityMatrix rho_from(from), rho_to(to);

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& s : e.speeds) {
    lo = std::min(lo, s.total());
    hi = std::max(hi, s.total());
  }
  const double variation = hi > 0.0 ? (hi - lo) / hi : 0.0;
  const bool identical = d <= 1e-9;
  if (identical) err << "warning: identical endpoints, the path has zero length\n";

  if (!in.csv.empty()) {
    std::string csv = "k,t,fidelity_from,fidelity_to,speed_sq\n";
    for (std::size_t k = 0; k < curve.times().size(); ++k) {
      const DensityMatrix& s = curve.states()[k];
      csv += std::to_string(k) + "," + fmt17(curve.times()[k]) + "," + fmt17(fidelity(s, rho_from)) + "," +
             fmt17(fidelity(s, rho_to)) + "," + fmt17(e.speeds[k].total()) + "\n";
    }
    write_atomic(in.csv, csv);
  }
  return Json{{"T", in.time},
              {"samples", in.samples},
              {"distance", d},
              {"energy", e.total_energy},
              {"energy_expected", d * d / in.time},
              {"energy_QT", e.total_energy * in.time},
              {"speed_sq_min", lo},
              {"speed_sq_max", hi},
              {"speed_variation", variation},
              {"constant_speed", variation <= 1e-6},
              {"identical_endpoints", identical}};
}

CoherenceOptions coherence_options(const Common& c) {
  CoherenceOptions o;
  o.seed = c.seed;
  if (c.restarts >= 0) o.restarts = c.restarts;
  return o;
}

DiscordOptions discord_options(const Common& c, const Inputs& in) {
  DiscordOptions o;
  o.seed = c.seed;
  o.inner.seed = c.seed;
  o.asymmetric = in.asymmetric;
  if (c.restarts >= 0) o.restarts = c.restarts;
  return o;
}

Json cmd_coherence(const Inputs& in, const Common& c) {
  const StateFile target = parse_state(read_json(in.target));
  const ReferenceBasis basis = basis_for(in, target.state.dim());
  return Json{{"dim", target.state.dim()}, {"coherence", report_json(coherence_bures(target.state, basis, coherence_options(c)))}};
}

Json cmd_discord(const Inputs& in, const Common& c) {
  const StateFile target = parse_state(read_json(in.target));
  const std::vector<int> dims = parse_dims(in.dims);
  const ResourceReport r = discord_bures(target.state, dims, discord_options(c, in));
  return Json{{"dims", dims}, {"asymmetric", in.asymmetric}, {"discord", report_json(r)}};
}

Json cmd_hierarchy(const Inputs& in, const Common& c) {
  const StateFile target = parse_state(read_json(in.target));
  const std::vector<int> dims = parse_dims(in.dims);
  const ResourceReport r = discord_hierarchy(target.state, dims, in.k, discord_options(c, in));
  return Json{{"dims", dims}, {"k", in.k}, {"hierarchy", report_json(r)}};
}

Json cmd_chain(const Inputs& in, const Common& c) {
  check_time(in.time);
  const StateFile target = parse_state(read_json(in.target));
  const ReferenceBasis basis = basis_for(in, target.state.dim());
  const ChainReport r = chain_check(target.state, basis, in.time, in.samples, coherence_options(c));
  auto mark = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  return Json{{"T", in.time},
              {"samples", in.samples},
              {"values",
               {{"upper", r.upper},
                {"purification", r.purification},
                {"coherence", r.coherence},
                {"coherence_sq_over_T", r.coherence_sq},
                {"upper_QT", r.upper * in.time},
                {"purification_QT", r.purification * in.time},
                {"coherence_sq", r.coherence_sq * in.time}}},
              {"inequalities",
               Json::array({{{"relation", "upper >= purification"}, {"slack", r.slack_upper}, {"status", mark(r.upper_pass)}},
                            {{"relation", "purification >= coherence^2/T"},
                             {"slack", r.slack_coherence},
                             {"status", mark(r.coherence_pass)}}})},
              {"status", mark(r.pass())},
              {"tolerance", kChainSlack}};
}

Json cmd_gatebound(const Inputs& in) {
  const long n = gate_count_bound(in.q_over_t, in.h);
  return Json{{"qoverT", in.q_over_t}, {"h", in.h}, {"bound", n}};
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::FrameJump:
    case ErrorKind::SupportCrossing:
    case ErrorKind::SupportMismatch:
      return 3;
    case ErrorKind::DimensionTooLarge:
      return 4;
    default:
      return 2;
  }
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Preparation cost, coherence and discord of quantum states"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  Inputs in;
  std::string seed_text;
  app.add_option("--seed", seed_text, "master seed for randomized restarts (default: $PREPCOST_SEED or 24301)");
  app.add_flag("--deterministic", common.deterministic, "omit the timestamp so reruns are byte-identical");
  app.add_option("--out", common.out, "write the JSON report here instead of standard output");
  app.add_option("--restarts", common.restarts, "number of random restarts")->check(CLI::NonNegativeNumber);

  auto* energy = app.add_subcommand("energy", "energy of a curve and its classical/quantum split");
  energy->add_option("--curve", in.curve, "curve JSON file or -")->required();
  energy->add_option("--csv", in.csv, "per-sample speeds");

  auto* prep = app.add_subcommand("prepcost", "bracket on the classical-then-unitary preparation cost");
  prep->add_option("--target", in.target, "target state JSON")->required();
  prep->add_option("--basis", in.basis, "reference basis JSON (default computational)");
  prep->add_option("--time", in.time, "horizon T");
  prep->add_option("--samples", in.samples, "grid intervals K for the sampled upper path")->check(CLI::Range(2, 1000000));

  auto* geo = app.add_subcommand("geodesic", "constant-speed geodesic between pure states");
  geo->add_option("--from", in.from, "initial pure state JSON")->required();
  geo->add_option("--to", in.to, "final pure state JSON")->required();
  geo->add_option("--time", in.time, "horizon T");
  geo->add_option("--samples", in.samples, "grid intervals K")->check(CLI::Range(2, 1000000));
  geo->add_option("--csv", in.csv, "sampled fidelities and speeds");

  auto* coh = app.add_subcommand("coherence", "Bures coherence in a reference basis");
  coh->add_option("--target", in.target, "target state JSON")->required();
  coh->add_option("--basis", in.basis, "reference basis JSON (default computational)");

  auto* dis = app.add_subcommand("discord", "symmetric Bures discord of a bipartite state");
  dis->add_option("--target", in.target, "target state JSON")->required();
  dis->add_option("--dims", in.dims, "subsystem dimensions, e.g. 2,2")->required();
  dis->add_flag("--asymmetric", in.asymmetric, "optimize the first party only");

  auto* hier = app.add_subcommand("hierarchy", "k-local discord hierarchy");
  hier->add_option("--target", in.target, "target state JSON")->required();
  hier->add_option("--dims", in.dims, "subsystem dimensions, e.g. 2,2,2")->required();
  hier->add_option("--k", in.k, "largest block size")->required()->check(CLI::PositiveNumber);

  auto* chain = app.add_subcommand("chain", "check upper >= Q_purif >= C^2/T");
  chain->add_option("--target", in.target, "target state JSON")->required();
  chain->add_option("--basis", in.basis, "reference basis JSON (default computational)");
  chain->add_option("--time", in.time, "horizon T");
  chain->add_option("--samples", in.samples, "grid intervals K")->check(CLI::Range(2, 1000000));

  auto* gate = app.add_subcommand("gatebound", "lower bound on the number of gates");
  gate->set_help_flag("--help", "print this help message and exit");
  gate->add_option("--qoverT", in.q_over_t, "Q/T")->required();
  gate->add_option("--h", in.h, "gate seminorm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!seed_text.empty() || std::getenv("PREPCOST_SEED")) {
      const std::string text = seed_text.empty() ? std::getenv("PREPCOST_SEED") : seed_text;
      std::size_t used = 0;
      try {
        common.seed = std::stoull(text, &used, 0);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != text.size()) throw Error(ErrorKind::ParseError, "seed must be an unsigned integer");
      common.seed_given = true;
    }

    Json values;
    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "energy") values = cmd_energy(in);
    else if (name == "prepcost") values = cmd_prepcost(in);
    else if (name == "geodesic") values = cmd_geodesic(in, err);
    else if (name == "coherence") values = cmd_coherence(in, common);
    else if (name == "discord") values = cmd_discord(in, common);
    else if (name == "hierarchy") values = cmd_hierarchy(in, common);
    else if (name == "chain") values = cmd_chain(in, common);
    else values = cmd_gatebound(in);

    Json argv_echo = Json::array();
    for (int i = 1; i < argc; ++i) argv_echo.push_back(argv[i]);
    Json report{{"command", name}, {"argv", argv_echo}, {"seed", common.seed}, {"tolerances", tolerances_json()},
                {"result", values}};
    if (!common.deterministic) report["timestamp"] = timestamp();
    const std::string text = report.dump(2) + "\n";
    if (common.out.empty()) {
      out << text;
    } else {
      write_atomic(common.out, text);
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what();
    if (e.time()) err << " (at t=" << fmt17(*e.time()) << ")";
    err << "\n";
    return exit_code(e.kind());
  } catch (const Json::exception& e) {
    err << "error: ParseError: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace prepcost

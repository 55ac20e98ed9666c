// qconc: entanglement detection and q-concurrence bounds from the command line.
//
// Exit codes: 0 ok, 2 bad input, 3 numerical failure, 4 I/O failure.

#include <qconc/io.hpp>
#include <qconc/qconc.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct io_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 12 significant digits, '.' decimal regardless of locale.
std::string fmt_num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

unsigned thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QC_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

/// stdout when path is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw io_failure("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw io_failure("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct AnalyzeRequest {
  std::string input_path;
  double q = 2.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  bool json = false;
};

void print_report_text(std::ostream& os, const qconc::BoundReport& r) {
  os << "q                " << fmt_num(r.q) << '\n'
     << "regime           " << qconc::to_string(r.regime) << '\n'
     << "||rho^Gamma||_1  " << fmt_num(r.ppt_norm) << '\n'
     << "||R(rho)||_1     " << fmt_num(r.realign_norm) << '\n'
     << "theorem1 bound   " << (r.theorem1_bound ? fmt_num(*r.theorem1_bound) : "n/a (no proven bound in this regime)")
     << '\n'
     << "prior bound      " << fmt_num(r.prior_bound) << '\n'
     << "best lower       " << fmt_num(r.best_lower) << '\n';
  if (r.upper_estimate) os << "upper estimate   " << fmt_num(*r.upper_estimate) << '\n';
}

int cmd_analyze(const AnalyzeRequest& req, bool with_verdicts) {
  const qconc::QParam q(req.q);
  if (req.iterations < 0) throw qconc::error(qconc::errc::domain_error, "iterations must be >= 0");
  const qconc::StateFile state = qconc::read_state_file(req.input_path);
  const qconc::DensityMatrix& rho = state.rho;

  qconc::BoundOptions opts;
  opts.upper_iterations = req.iterations;
  opts.seed = req.seed;
  opts.threads = thread_budget();
  const qconc::BoundReport report = qconc::bound_report(rho, q, opts);

  if (!with_verdicts) {
    if (req.json)
      std::cout << qconc::to_json(report).dump(2) << '\n';
    else
      print_report_text(std::cout, report);
    return kExitOk;
  }

  const qconc::Detection det = qconc::detect(rho);
  if (req.json) {
    qconc::json out;
    out["dA"] = rho.dims().dA;
    out["dB"] = rho.dims().dB;
    out["kind"] = state.pure ? "pure" : "density";
    out["entangled"] = det.entangled;
    out["verdicts"] = qconc::json::array();
    for (const auto& v : det.verdicts) out["verdicts"].push_back(qconc::to_json(v));
    out["report"] = qconc::to_json(report);
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "dims             " << rho.dims().dA << "x" << rho.dims().dB << " (d = " << rho.dims().d() << ")\n";
    for (const auto& v : det.verdicts)
      std::cout << "verdict " << qconc::to_string(v.criterion) << (v.criterion == qconc::Criterion::PPT ? "      " : "     ")
                << qconc::to_string(v.status) << " (witness " << fmt_num(v.witness) << ")\n";
    std::cout << "entangled        " << (det.entangled ? "yes" : "not detected") << '\n';
    print_report_text(std::cout, report);
  }
  return kExitOk;
}

struct SweepArgs {
  int d = 3;
  double q = 3.0;
  std::optional<double> f_min;
  std::optional<double> f_max;
  int steps = 200;
  int grid = qconc::kDefaultEnvelopeGrid;
  double step = 1e-5;
  std::string out_path;
};

std::vector<double> fidelity_grid(double lo, double hi, int steps) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi))
    throw qconc::error(qconc::errc::domain_error, "need 0 <= f-min < f-max <= 1");
  if (steps < 2) throw qconc::error(qconc::errc::domain_error, "steps must be >= 2");
  std::vector<double> fs(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) fs[k] = k + 1 == steps ? hi : lo + (hi - lo) * k / (steps - 1);
  return fs;
}

int cmd_isotropic_sweep(const SweepArgs& a) {
  const qconc::QParam q(a.q);
  if (a.d < 2) throw qconc::error(qconc::errc::domain_error, "d must be >= 2");
  if (qconc::bound_regime(q, a.d) == qconc::BoundRegime::QubitGap)
    throw qconc::error(qconc::errc::regime_violation, "no proven lower bound for d = 2 and q < s");
  const auto fs = fidelity_grid(a.f_min.value_or(0.0), a.f_max.value_or(1.0), a.steps);
  const qconc::PiecewiseLinear exact = qconc::exact_isotropic_qc(q, a.d, a.grid);

  Output out(a.out_path);
  std::ostream& os = out.stream();
  os << "F,exact,theorem1,prior\n";
  for (double f : fs) {
    const qconc::DensityMatrix rho = qconc::isotropic_state(qconc::Fidelity(f), a.d);
    const double m = std::max(qconc::ppt_norm(rho), qconc::realign_norm(rho));
    const double t1 = qconc::theorem1_from_norm(m, q, a.d).value.value();
    const double prior = qconc::prior_from_norm(m, q, a.d);
    os << fmt_num(f) << ',' << fmt_num(exact(f)) << ',' << fmt_num(t1) << ',' << fmt_num(prior) << '\n';
  }
  out.finish();
  return kExitOk;
}

int cmd_derivatives(const SweepArgs& a) {
  const qconc::QParam q(a.q);
  if (a.d < 2) throw qconc::error(qconc::errc::domain_error, "d must be >= 2");
  const double lo = a.f_min.value_or(1.0 / a.d + 1e-3);
  const double hi = a.f_max.value_or(1.0 - 1e-3);
  const auto fs = fidelity_grid(lo, hi, a.steps);
  // validates every point before anything is written
  std::vector<qconc::XiDerivatives> rows;
  rows.reserve(fs.size());
  for (double f : fs) rows.push_back(qconc::xi_derivatives(qconc::Fidelity(f), q, a.d, a.step));

  Output out(a.out_path);
  std::ostream& os = out.stream();
  os << "F,dxi_dF,d2xi_dF2\n";
  for (std::size_t k = 0; k < fs.size(); ++k)
    os << fmt_num(fs[k]) << ',' << fmt_num(rows[k].first) << ',' << fmt_num(rows[k].second) << '\n';
  out.finish();
  return kExitOk;
}

int cmd_random(int dA, int dB, int rank, std::uint64_t seed, const std::string& out_path) {
  const qconc::DensityMatrix rho = qconc::random_density(qconc::BipartiteDims(dA, dB), rank, seed);
  Output out(out_path);
  out.stream() << qconc::state_to_json(rho).dump() << '\n';
  out.finish();
  return kExitOk;
}

int cmd_critical_s(bool json) {
  const double s = qconc::critical_s();
  if (json) {
    std::cout << qconc::json{{"s", s}}.dump() << '\n';
  } else {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, s, std::chars_format::fixed, 12);
    std::cout << std::string(buf, res.ptr) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-concurrence bounds and entanglement detection for bipartite states"};
  app.require_subcommand(1);

  AnalyzeRequest analyze_req;
  auto add_analyze_flags = [](CLI::App* sub, AnalyzeRequest& req) {
    sub->add_option("-i,--input", req.input_path, "state file (JSON)")->required();
    sub->add_option("-q,--q", req.q, "q >= 2")->capture_default_str();
    sub->add_option("--iterations", req.iterations, "random decompositions for the upper bound (0 = skip)")
        ->capture_default_str();
    sub->add_option("--seed", req.seed, "seed for the upper-bound search")->capture_default_str();
    sub->add_flag("--json", req.json, "emit JSON");
  };
  auto* analyze = app.add_subcommand("analyze", "detect entanglement and bound C_q for a state file");
  add_analyze_flags(analyze, analyze_req);
  AnalyzeRequest bounds_req;
  auto* bounds = app.add_subcommand("bounds", "bound C_q for a state file");
  add_analyze_flags(bounds, bounds_req);

  SweepArgs sweep;
  auto* iso = app.add_subcommand("isotropic-sweep", "CSV of exact C_q and both lower bounds for isotropic states");
  iso->add_option("--d", sweep.d, "local dimension")->capture_default_str();
  iso->add_option("--q", sweep.q, "q >= 2")->capture_default_str();
  iso->add_option("--f-min", sweep.f_min, "smallest fidelity (default 0)");
  iso->add_option("--f-max", sweep.f_max, "largest fidelity (default 1)");
  iso->add_option("--steps", sweep.steps, "grid points, endpoints included")->capture_default_str();
  iso->add_option("--grid", sweep.grid, "envelope sampling grid")->capture_default_str();
  iso->add_option("-o,--out", sweep.out_path, "output CSV (default stdout)");

  SweepArgs deriv;
  auto* der = app.add_subcommand("derivatives", "CSV of central-difference derivatives of xi(F)");
  der->add_option("--d", deriv.d, "local dimension")->capture_default_str();
  der->add_option("--q", deriv.q, "q >= 2")->capture_default_str();
  der->add_option("--f-min", deriv.f_min, "smallest fidelity (default 1/d + 1e-3)");
  der->add_option("--f-max", deriv.f_max, "largest fidelity (default 1 - 1e-3)");
  der->add_option("--steps", deriv.steps, "grid points, endpoints included")->capture_default_str();
  der->add_option("--step", deriv.step, "finite-difference step")->capture_default_str();
  der->add_option("-o,--out", deriv.out_path, "output CSV (default stdout)");

  int dA = 2, dB = 2, rank = 1;
  std::uint64_t seed = 0;
  std::string random_out;
  auto* rnd = app.add_subcommand("random", "write a seeded random density matrix as a state file");
  rnd->add_option("--dA", dA, "dimension of A")->capture_default_str();
  rnd->add_option("--dB", dB, "dimension of B")->capture_default_str();
  rnd->add_option("--rank", rank, "number of mixed pure states")->capture_default_str();
  rnd->add_option("--seed", seed, "seed")->capture_default_str();
  rnd->add_option("-o,--out", random_out, "output file (default stdout)");

  bool s_json = false;
  auto* crit = app.add_subcommand("critical-s", "print the critical q for two-qubit bounds");
  crit->add_flag("--json", s_json, "emit {\"s\": value}");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_req, true);
    if (*bounds) return cmd_analyze(bounds_req, false);
    if (*iso) return cmd_isotropic_sweep(sweep);
    if (*der) return cmd_derivatives(deriv);
    if (*rnd) return cmd_random(dA, dB, rank, seed, random_out);
    if (*crit) return cmd_critical_s(s_json);
  } catch (const io_failure& e) {
    std::cerr << "qconc: " << e.what() << '\n';
    return kExitIo;
  } catch (const qconc::error& e) {
    std::cerr << "qconc: " << e.what() << '\n';
    return e.is_numeric() ? kExitNumeric : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "qconc: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitInput;
}

// Batch front end: five subcommands over the covariant-measurement library,
// key=value config files with CLI overrides, CSV output.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qhl/covariant_povm.hpp"
#include "qhl/errors.hpp"
#include "qhl/grid.hpp"
#include "qhl/measurement_model.hpp"
#include "qhl/naimark.hpp"
#include "qhl/operators.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitViolation = 4;

class Settings {
 public:
  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qhl::ConfigurationError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw qhl::ConfigurationError("config line " + std::to_string(lineno) +
                                      " is not key=value");
      set_default(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  // CLI overrides win over the file; file wins over built-in defaults.
  void set_override(const std::string& key, const std::string& value) {
    values_[key] = value;
  }
  void set_default(const std::string& key, const std::string& value) {
    values_.emplace(key, value);
  }

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  double num(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw qhl::ConfigurationError("bad numeric value for " + key);
    }
  }
  int integer(const std::string& key, int fallback) const {
    double v = num(key, fallback);
    int i = static_cast<int>(v);
    if (i != v) throw qhl::ConfigurationError(key + " must be an integer");
    return i;
  }
  std::vector<double> list(const std::string& key,
                           const std::string& fallback) const {
    std::vector<double> out;
    std::stringstream ss(str(key, fallback));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw qhl::ConfigurationError("bad list value for " + key);
      }
    }
    if (out.empty()) throw qhl::ConfigurationError(key + " list is empty");
    return out;
  }

 private:
  static std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
  }
  std::map<std::string, std::string> values_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::filesystem::path out_dir(const Settings& cfg) {
  std::string dir = cfg.str("outdir", "out");
  if (const char* env = std::getenv("QHALFLINE_OUTDIR")) dir = env;
  std::filesystem::create_directories(dir);
  return dir;
}

qhl::ModelParams model_from(const Settings& cfg) {
  qhl::ModelParams p;
  p.mass = cfg.num("model.mass", 1.0);
  p.omega = cfg.num("model.omega", 1.0);
  p.coupling = cfg.num("model.coupling", 1.0);
  p.p_true = cfg.num("model.p_true", 3.0);
  p.window.sigma = cfg.num("window.sigma", 0.0);
  std::string kind = cfg.str("window.kind", "gaussian");
  if (kind == "gaussian")
    p.window.kind = qhl::WindowKind::Gaussian;
  else if (kind == "hard")
    p.window.kind = qhl::WindowKind::HardTruncation;
  else
    throw qhl::ConfigurationError("window.kind must be gaussian or hard");
  p.window.width = cfg.num("window.width", 0.0);
  return p;
}

// Smooth random wavepacket, deterministic in the generator state.
qhl::WaveFunction random_packet(const qhl::Grid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double span = grid.length;
  double center = grid.xmin + span * (0.3 + 0.4 * unit(rng));
  double width = span * (0.05 + 0.05 * unit(rng));
  double momentum = grid.nyquist() * (0.5 * unit(rng) - 0.25);
  qhl::VectorXcd amps(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    double x = grid.point(i);
    amps[i] = std::exp(-0.5 * (x - center) * (x - center) / (width * width)) *
              std::polar(1.0, momentum * x);
  }
  return qhl::normalize(qhl::make_state(grid, amps));
}

int cmd_deficiency(const Settings& cfg) {
  double length = cfg.num("deficiency.length", 20.0);
  std::vector<double> gammas = cfg.list("deficiency.gammas", "1");
  std::ofstream csv(out_dir(cfg) / "deficiency.csv");
  csv << "gamma,operator,n_plus,n_minus,classification,note\n";
  bool ok = true;
  for (double gamma : gammas) {
    for (auto kind : {qhl::OperatorKind::HalfLineMomentum,
                      qhl::OperatorKind::NegatedHalfLineMomentum,
                      qhl::OperatorKind::ExtendedMomentum,
                      qhl::OperatorKind::WholeLineMomentum}) {
      qhl::DeficiencyReport rep = qhl::deficiency_indices(kind, gamma, length);
      std::string note;
      if (kind == qhl::OperatorKind::ExtendedMomentum)
        note = "self-adjoint extensions parametrized by U(1)";
      csv << fmt(gamma) << ',' << qhl::to_string(kind) << ',' << rep.n_plus
          << ',' << rep.n_minus << ',' << qhl::to_string(rep.classification)
          << ',' << note << '\n';
      bool expected =
          (kind == qhl::OperatorKind::HalfLineMomentum && rep.n_plus == 1 &&
           rep.n_minus == 0) ||
          (kind == qhl::OperatorKind::NegatedHalfLineMomentum &&
           rep.n_plus == 0 && rep.n_minus == 1) ||
          (kind == qhl::OperatorKind::ExtendedMomentum && rep.n_plus == 1 &&
           rep.n_minus == 1) ||
          (kind == qhl::OperatorKind::WholeLineMomentum && rep.n_plus == 0 &&
           rep.n_minus == 0);
      ok = ok && expected;
    }
  }
  return ok ? kExitOk : kExitViolation;
}

int cmd_distribution(const Settings& cfg) {
  qhl::ModelParams base = model_from(cfg);
  std::vector<double> omegas = cfg.list("sweep.omegas", "1,0.25,0.0625");
  int n = cfg.integer("grid.n", 1024);
  double tol = cfg.num("tolerance.distribution", 1e-2);

  qhl::ConservationReport report =
      qhl::conservation_and_limit_check(base, omegas, n);

  bool ok = true;
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    qhl::ModelParams p = base;
    p.omega = omegas[k];
    const qhl::SweepPoint& pt = report.points[k];
    qhl::Grid grid =
        qhl::make_grid(qhl::Domain::HalfLine, pt.domain_length, n);
    qhl::Grid whole = qhl::whole_line_companion(grid);
    double scale = std::sqrt(p.mass * p.omega);
    double p_max = std::min(whole.nyquist(), std::abs(p.p_true) + 10.0 * scale);
    qhl::MomentumGrid pgrid = qhl::make_momentum_grid(whole, 2048, p_max);
    qhl::WaveFunction ground = qhl::normalize(
        qhl::halfline_ground_state_closed_form(grid, p.mass, p.omega));
    Eigen::VectorXd mu = qhl::measured_distribution(p, ground, pgrid);

    std::ostringstream name;
    name << "distribution_" << k << ".csv";
    std::ofstream csv(out_dir(cfg) / name.str());
    csv << "p,measured_density,analytic_density,abs_error\n";
    int peak_lo = 0, peak_hi = 0;
    for (int j = 0; j < pgrid.n; ++j) {
      double analytic = qhl::analytic_distribution(pgrid.p(j), p);
      csv << fmt(pgrid.p(j)) << ',' << fmt(mu[j]) << ',' << fmt(analytic)
          << ',' << fmt(std::abs(mu[j] - analytic)) << '\n';
      if (pgrid.p(j) < p.p_true && mu[j] > mu[peak_lo]) peak_lo = j;
      if (pgrid.p(j) >= p.p_true &&
          (peak_hi == 0 || mu[j] > mu[peak_hi]))
        peak_hi = j;
    }
    csv << "# omega=" << fmt(p.omega) << " mean=" << fmt(pt.mean)
        << " variance=" << fmt(pt.variance)
        << " peak_minus=" << fmt(pgrid.p(peak_lo))
        << " peak_plus=" << fmt(pgrid.p(peak_hi))
        << " max_abs_error=" << fmt(pt.max_density_error) << '\n';
    ok = ok && pt.max_density_error <= tol;
  }
  return ok ? kExitOk : kExitViolation;
}

int cmd_risk(const Settings& cfg) {
  int n = cfg.integer("grid.n", 256);
  double length = cfg.num("grid.length", 20.0);
  int bins = cfg.integer("momentum.bins", 0);
  double sigma_w = cfg.num("risk.sigma", 1.0);
  int random_kernels = cfg.integer("risk.kernels", 20);
  std::uint64_t seed = static_cast<std::uint64_t>(cfg.num("seed", 12345.0));

  qhl::Grid grid = qhl::make_grid(qhl::Domain::HalfLine, length, n);
  if (bins <= 0) bins = n;
  qhl::MomentumGrid pgrid = qhl::full_band_momentum_grid(grid, bins);
  std::mt19937_64 rng(seed);
  qhl::WaveFunction state = random_packet(grid, rng);
  qhl::DeviationSpec dev = qhl::gaussian_deviation(
      sigma_w, 1.0, grid.dx, std::min(8.0 * sigma_w, (n - 1) * grid.dx));

  std::ofstream csv(out_dir(cfg) / "risk.csv");
  csv << "kernel_id,risk,is_optimal_min\n";
  double optimal =
      qhl::risk(qhl::build_povm(qhl::optimal_kernel(state), pgrid), state, dev);
  double bound = qhl::optimal_risk_bound(state, dev);
  bool ok = true;
  std::vector<std::pair<std::string, double>> rows;
  for (int k = 0; k < random_kernels; ++k) {
    int rank = k % 3 == 0 ? 1 : (k % 3 == 1 ? 2 : 4);
    qhl::Kernel kern = qhl::random_gram_kernel(grid, rank, rng);
    double r = qhl::risk(qhl::build_povm(kern, pgrid), state, dev);
    rows.emplace_back("random_" + std::to_string(k), r);
    ok = ok && r > optimal;
  }
  csv << "optimal," << fmt(optimal) << ',' << (ok ? 1 : 0) << '\n';
  for (const auto& [id, r] : rows) csv << id << ',' << fmt(r) << ",0\n";
  csv << "# lower_bound=" << fmt(bound) << '\n';
  return ok ? kExitOk : kExitViolation;
}

int cmd_povm_check(const Settings& cfg) {
  int n = cfg.integer("grid.n", 256);
  double length = cfg.num("grid.length", 20.0);
  std::string kernel_id = cfg.str("povm.kernel", "all_ones");
  std::string domain = cfg.str("grid.domain", "whole");
  std::uint64_t seed = static_cast<std::uint64_t>(cfg.num("seed", 12345.0));

  qhl::Grid grid = qhl::make_grid(
      domain == "half" ? qhl::Domain::HalfLine : qhl::Domain::WholeLine,
      length, n);
  qhl::MomentumGrid pgrid = qhl::full_band_momentum_grid(grid, n);
  std::mt19937_64 rng(seed);

  qhl::Kernel kern;
  if (kernel_id == "all_ones")
    kern = qhl::all_ones_kernel(grid);
  else if (kernel_id == "identity")
    kern = qhl::identity_kernel(grid);
  else if (kernel_id == "optimal")
    kern = qhl::optimal_kernel(random_packet(grid, rng));
  else if (kernel_id == "random")
    kern = qhl::random_gram_kernel(grid, 2, rng);
  else
    throw qhl::ConfigurationError("unknown povm.kernel: " + kernel_id);

  qhl::CovariantPovm povm = qhl::build_povm(kern, pgrid);

  double hermiticity = 0.0;
  for (int j : {0, pgrid.n / 3, pgrid.n / 2, pgrid.n - 1}) {
    qhl::MatrixXcd m = povm.element(j);
    hermiticity =
        std::max(hermiticity, (m - m.adjoint()).cwiseAbs().maxCoeff());
  }
  double min_eig = kern.min_eigenvalue();
  double completeness = povm.completeness_residual();
  double covariance = 0.0;
  for (int s = 1; s <= 10; ++s)
    covariance = std::max(
        covariance, qhl::covariance_defect(povm, s * pgrid.dp));

  std::ofstream csv(out_dir(cfg) / "povm_check.csv");
  csv << "property,value,threshold,pass\n";
  bool ok = true;
  auto row = [&](const char* name, double value, double threshold, bool lower) {
    bool pass = lower ? value >= threshold : value <= threshold;
    ok = ok && pass;
    csv << name << ',' << fmt(value) << ',' << fmt(threshold) << ','
        << (pass ? 1 : 0) << '\n';
  };
  row("hermiticity_defect", hermiticity, 1e-10, false);
  row("kernel_min_eigenvalue", min_eig, -1e-10, true);
  row("completeness_residual", completeness, 1e-3, false);
  row("covariance_defect", covariance, 1e-10, false);
  return ok ? kExitOk : kExitViolation;
}

int cmd_kraus_equiv(const Settings& cfg) {
  int n = cfg.integer("grid.n", 256);
  double length = cfg.num("grid.length", 20.0);
  qhl::ModelParams params = model_from(cfg);

  qhl::Grid grid = qhl::make_grid(qhl::Domain::HalfLine, length, n);
  qhl::MomentumGrid pgrid = qhl::full_band_momentum_grid(grid, n);
  auto [energy, ground] = qhl::ground_state(
      qhl::harmonic_hamiltonian(grid, params.mass, params.omega));
  qhl::KrausFamily family = qhl::make_kraus_family(params, ground, pgrid);

  double defect = qhl::kraus_equivalence_defect(family);
  double completeness = qhl::kraus_completeness_residual(family);

  std::ofstream csv(out_dir(cfg) / "kraus_equiv.csv");
  csv << "quantity,value\n";
  csv << "ground_energy," << fmt(energy) << '\n';
  csv << "outcome_sign," << family.outcome_sign << '\n';
  csv << "max_element_deviation," << fmt(defect) << '\n';
  csv << "completeness_residual," << fmt(completeness) << '\n';
  return defect <= 1e-10 && completeness <= 1e-8 ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covariant momentum measurement laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<CLI::App*> subs;
  for (const char* name :
       {"deficiency", "distribution", "risk", "povm-check", "kraus-equiv"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key=value config file");
    sub->allow_extras();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }

  try {
    Settings cfg;
    CLI::App* sub = app.get_subcommands().at(0);
    // Remaining tokens are --key value override pairs.
    std::vector<std::string> extras = sub->remaining();
    for (std::size_t i = 0; i < extras.size(); i += 2) {
      if (extras[i].rfind("--", 0) != 0 || i + 1 >= extras.size())
        throw qhl::ConfigurationError("overrides must be --key value pairs");
      cfg.set_override(extras[i].substr(2), extras[i + 1]);
    }
    if (!config_path.empty()) cfg.load_file(config_path);

    const std::string name = sub->get_name();
    if (name == "deficiency") return cmd_deficiency(cfg);
    if (name == "distribution") return cmd_distribution(cfg);
    if (name == "risk") return cmd_risk(cfg);
    if (name == "povm-check") return cmd_povm_check(cfg);
    return cmd_kraus_equiv(cfg);
  } catch (const qhl::InconclusiveClassificationError& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return kExitInconclusive;
  } catch (const qhl::ConfigurationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qhl::InvalidParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qhl::Error& e) {
    std::cerr << "property violation: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

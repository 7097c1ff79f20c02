#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netbound/experiments.hpp"
#include "netbound/pipeline.hpp"

using namespace netbound;

namespace {

struct StageError : std::runtime_error {
  int code;
  StageError(const std::string& stage, const std::string& what, int c)
      : std::runtime_error("error [" + stage + "]: " + what), code(c) {}
};

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    throw StageError(name, e.what(), 2);
  } catch (const ConfigError& e) {
    throw StageError(name, e.what(), 2);
  } catch (const DomainError& e) {
    throw StageError(name, e.what(), 2);
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what(), 3);
  }
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("bad grid '" + spec + "', expected start:stop:step");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw InputError("bad grid '" + spec + "', expected start:stop:step");
  return grid(parts[0], parts[1], parts[2]);
}

int steps_from(double step) {
  if (!(step > 0 && step <= 1)) throw InputError("beta step must be in (0,1]");
  const double n = 1.0 / step;
  if (std::abs(n - std::round(n)) > 1e-9) throw InputError("beta step must be 1/N for an integer N");
  return int(std::round(n));
}

std::string invocation(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

template <class W>
void emit(const std::string& path, W&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  write(f);
}

int cmd_bounds(const std::string& file, const std::string& alpha_grid, double beta_step, const std::string& out,
               const std::vector<std::string>& metrics, bool hull, const std::string& inv) {
  const auto net = stage("parse", [&] { return load_network(file); });
  SearchOptions opt;
  opt.alpha_grid = stage("options", [&] { return parse_grid(alpha_grid); });
  for (double a : opt.alpha_grid)
    if (!(a >= 0 && a <= 1)) throw StageError("options", "alpha values must lie in [0,1]", 2);
  opt.beta_steps = stage("options", [&] { return steps_from(beta_step); });
  opt.metrics = metrics;
  opt.hull = hull;
  const auto res = stage("bounds", [&] { return compute_bounds(net, opt); });
  std::cout << "components: " << res.decomposition.components.size() << "\n";
  for (const auto& m : res.report.metrics) {
    if (std::isnan(m.inner)) continue;
    std::cout << m.name << ": inner " << num(m.inner) << " [" << m.inner_params << "]  outer " << num(m.outer) << " ["
              << m.outer_params << "]  gap " << num(m.outer - m.inner) << "\n";
  }
  std::cout << "note: outer values are cut bounds on the upper network and may exceed its capacity\n";
  if (!res.report.hull.empty()) {
    std::cout << "inner region vertices:";
    for (const auto& p : res.report.hull) std::cout << " (" << num(p[0]) << "," << num(p[1]) << ")";
    std::cout << "\n";
  }
  if (!out.empty())
    emit(out, [&](std::ostream& os) {
      os << "# netbound " << kVersion << "\n# invocation: " << inv << "\n";
      os << "metric,inner,outer,gap,inner_params,outer_params,file,beta_step\n";
      for (const auto& m : res.report.metrics) {
        if (std::isnan(m.inner)) continue;
        os << '"' << m.name << "\"," << num(m.inner) << ',' << num(m.outer) << ',' << num(m.outer - m.inner) << ",\""
           << m.inner_params << "\",\"" << m.outer_params << "\",\"" << file << "\"," << num(beta_step) << '\n';
      }
    });
  return 0;
}

int cmd_decouple(const std::string& file) {
  const auto net = stage("parse", [&] { return load_network(file); });
  const auto dec = stage("decompose", [&] { return decompose(net); });
  for (std::size_t c = 0; c < dec.components.size(); ++c) {
    const auto& comp = dec.components[c];
    std::cout << "[" << c << "] " << to_string(comp.kind) << (comp.coupled ? " (decoupled)" : "") << " group "
              << comp.group << ": " << join(comp.inputs) << " -> " << join(comp.outputs) << "\n";
    for (std::size_t k = 0; k < comp.links.size(); ++k) {
      const auto& l = net.links[comp.links[k]];
      std::cout << "    " << l.from << "->" << l.to << " snr " << num(comp.gammas[k]) << " effective "
                << num(comp.effective[k]);
      if (comp.partner[k] >= 0) std::cout << " shared with [" << comp.partner[k] << "]";
      std::cout << "\n";
    }
  }
  for (const auto& g : dec.groups) {
    if (!g.coupled) continue;
    std::cout << "noise partition for {" << join(g.inputs) << "} -> {" << join(g.outputs) << "}, residual "
              << num(g.partition.residual) << "\n";
    for (std::size_t i = 0; i < g.inputs.size(); ++i)
      for (std::size_t j = 0; j < g.outputs.size(); ++j)
        if (g.gamma[i][j] > 0)
          std::cout << "    " << g.inputs[i] << "->" << g.outputs[j] << " share " << num(g.partition.alphas[i][j]) << "\n";
  }
  return 0;
}

int cmd_validate(const std::string& file) {
  const auto net = stage("parse", [&] { return load_network(file); });
  stage("decompose", [&] { return decompose(net); });
  std::cout << "ok: " << net.nodes.size() << " nodes, " << net.links.size() << " links, " << net.demands.size()
            << " demands\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noiseless bounding networks and capacity bounds for noisy wireless networks"};
  app.require_subcommand(1);
  const std::string inv = invocation(argc, argv);

  std::string file, alpha_grid = "0:1:0.1", out;
  double beta_step = 0.125;
  std::vector<std::string> metrics;
  bool hull = false;
  auto* bounds = app.add_subcommand("bounds", "compute inner and outer bounds for a network file");
  bounds->add_option("file", file, "network file")->required();
  bounds->add_option("--alpha-grid", alpha_grid, "noise share grid start:stop:step");
  bounds->add_option("--beta-step", beta_step, "power split grid step (1/N)");
  bounds->add_option("--out", out, "CSV output path ('-' for stdout)");
  bounds->add_option("--metric", metrics, "metric to evaluate (demand 'S->D', symmetric, sum); repeatable");
  bounds->add_flag("--hull", hull, "report inner region vertices for two demands");

  auto* repro = app.add_subcommand("repro", "reproduce an example sweep");
  repro->require_subcommand(1);
  double sd_db = 0, rd_db = 10, relay_beta = 1.0 / 128;
  std::string sr_grid = "-10:30:1";
  auto* relay = repro->add_subcommand("relay", "Gaussian relay channel sweep over the source-relay SNR");
  relay->add_option("--gamma-sd-db", sd_db);
  relay->add_option("--gamma-rd-db", rd_db);
  relay->add_option("--gamma-sr-db", sr_grid, "grid start:stop:step in dB");
  relay->add_option("--beta-step", relay_beta);
  relay->add_option("--out", out);

  int n = 4;
  std::string gamma_db = "0";
  auto* layered = repro->add_subcommand("layered", "layered multiple-unicast network");
  layered->add_option("--n", n)->check(CLI::Range(2, 64));
  layered->add_option("--gamma-db", gamma_db, "link SNR in dB, or a grid start:stop:step");
  layered->add_option("--alpha-grid", alpha_grid);
  layered->add_option("--out", out);

  MulticastParams mp;
  std::string p_grid = "-5:25:1";
  double mc_beta = 0.125;
  auto* multicast = repro->add_subcommand("multicast", "two-source multicast with a side channel");
  multicast->add_option("--n", mp.n)->check(CLI::Range(2, 64));
  multicast->add_option("--p-db", p_grid, "grid start:stop:step in dB");
  multicast->add_option("--delta-ratio-db", mp.delta_ratio_db);
  multicast->add_option("--q", mp.q);
  multicast->add_option("--xi", mp.xi);
  multicast->add_option("--beta-step", mc_beta);
  multicast->add_option("--out", out);

  auto* dec = app.add_subcommand("decouple", "print the decomposition of a network file");
  dec->add_option("file", file)->required();
  auto* val = app.add_subcommand("validate", "check a network file");
  val->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*bounds) return cmd_bounds(file, alpha_grid, beta_step, out, metrics, hull, inv);
    if (*dec) return cmd_decouple(file);
    if (*val) return cmd_validate(file);
    if (*relay) {
      const auto g = stage("options", [&] { return parse_grid(sr_grid); });
      const int steps = stage("options", [&] { return steps_from(relay_beta); });
      const auto rows = stage("relay", [&] { return relay_sweep(sd_db, rd_db, g, steps); });
      emit(out, [&](std::ostream& os) { write_relay_csv(os, rows, inv); });
      return 0;
    }
    if (*layered) {
      const auto alphas = stage("options", [&] { return parse_grid(alpha_grid); });
      const auto gs = stage("options", [&] { return parse_grid(gamma_db); });
      std::vector<LayeredRow> rows;
      for (double g : gs) {
        auto r = stage("layered", [&] { return layered_rows(n, g, alphas); });
        rows.insert(rows.end(), r.begin(), r.end());
      }
      emit(out, [&](std::ostream& os) { write_layered_csv(os, rows, inv); });
      for (const auto& r : rows)
        if (std::abs(r.outer_sym - r.closed.capacity) > 1e-6 || std::abs(r.inner_sym - r.closed.inner) > 1e-6) {
          std::cerr << "warning: flow bounds differ from the closed forms at n=" << r.n << " gamma_db=" << r.gamma_db
                    << " alpha=" << r.alpha << "\n";
          return 3;
        }
      return 0;
    }
    if (*multicast) {
      const auto g = stage("options", [&] { return parse_grid(p_grid); });
      const int steps = stage("options", [&] { return steps_from(mc_beta); });
      const auto rows = stage("multicast", [&] { return multicast_sweep(mp, g, steps); });
      emit(out, [&](std::ostream& os) { write_multicast_csv(os, rows, inv); });
      std::cerr << "note: C12 = " << num(rows.empty() ? qsc_capacity(mp.q, mp.xi) : rows[0].C12)
                << " bits from the q-ary symmetric formula; the reference value " << kPaperC12 << " differs\n";
      return 0;
    }
  } catch (const StageError& e) {
    std::cerr << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error [output]: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

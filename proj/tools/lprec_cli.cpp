// Command line front end: matrix/signal generation, RIP estimation,
// recovery certificates, decoding, figure experiments, quotient checks.
//
// Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 I/O failure.

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lprec/certify.hpp"
#include "lprec/decode.hpp"
#include "lprec/ensembles.hpp"
#include "lprec/experiments.hpp"
#include "lprec/matrix_io.hpp"
#include "lprec/metrics.hpp"
#include "lprec/pconvex.hpp"
#include "lprec/reports.hpp"
#include "lprec/rip.hpp"
#include "lprec/types.hpp"

namespace {

using lprec::Index;
using lprec::Vector;

// Accepts "a,b,c" lists and "start:step:stop" ranges (stop inclusive
// within a small tolerance).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const auto colon2 = text.find(':', colon + 1);
    if (colon2 == std::string::npos) {
      throw lprec::InvalidArgument("range syntax is start:step:stop: " + text);
    }
    const double start = std::stod(text.substr(0, colon));
    const double step = std::stod(text.substr(colon + 1, colon2 - colon - 1));
    const double stop = std::stod(text.substr(colon2 + 1));
    if (!(step > 0.0)) throw lprec::InvalidArgument("range step must be positive");
    for (double v = start; v <= stop + 1e-12 * std::max(1.0, std::abs(stop));
         v += step) {
      out.push_back(v);
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string tok =
        text.substr(pos, comma == std::string::npos ? std::string::npos
                                                    : comma - pos);
    if (!tok.empty()) out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw lprec::InvalidArgument("empty list: " + text);
  return out;
}

struct SolverFlags {
  lprec::SolveOptions opts;
  double eps0 = 0.0;  // 0 means "use the solver default"

  void attach(CLI::App* cmd) {
    cmd->add_option("--p", opts.p, "quasinorm exponent in (0,1]")
        ->capture_default_str();
    cmd->add_option("--eps0", eps0,
                    "initial smoothing level (default: max|y0| of the "
                    "min-norm start)");
    cmd->add_option("--eps-decay", opts.eps_decay,
                    "smoothing shrink factor per stage")
        ->capture_default_str();
    cmd->add_option("--eps-min", opts.eps_min, "final smoothing level")
        ->capture_default_str();
    cmd->add_option("--max-outer", opts.max_outer, "max smoothing stages")
        ->capture_default_str();
    cmd->add_option("--max-inner", opts.max_inner,
                    "max gradient steps per stage")
        ->capture_default_str();
    cmd->add_option("--grad-tol", opts.grad_tol,
                    "projected-gradient stop tolerance")
        ->capture_default_str();
    cmd->add_option("--step-init", opts.step_init, "initial line-search step")
        ->capture_default_str();
    cmd->add_option("--backtrack", opts.backtrack, "line-search shrink factor")
        ->capture_default_str();
    cmd->add_option("--armijo", opts.armijo, "sufficient-decrease constant")
        ->capture_default_str();
    cmd->add_option("--restarts", opts.restarts,
                    "randomized restarts (1 = deterministic single start)")
        ->capture_default_str();
    cmd->add_option("--solver-seed", opts.seed, "seed for restart noise")
        ->capture_default_str();
  }

  lprec::SolveOptions resolve() const {
    lprec::SolveOptions o = opts;
    if (eps0 > 0.0) o.eps0 = eps0;
    return o;
  }
};

int dispatch(int argc, char** argv) {
  CLI::App app{
      "lprec: sparse recovery with lp quasinorm decoders (0 < p <= 1)"};
  app.require_subcommand(1);

  // ---- gen-matrix ----
  auto* gm = app.add_subcommand("gen-matrix", "Generate a measurement matrix");
  Index gm_M = 0, gm_N = 0;
  std::string gm_ensemble = "gaussian", gm_out, gm_format = "binary";
  std::uint64_t gm_seed = 0;
  gm->add_option("--M", gm_M, "rows (measurements)")->required();
  gm->add_option("--N", gm_N, "columns (signal length)")->required();
  gm->add_option("--ensemble", gm_ensemble, "gaussian | uniform_sphere")
      ->capture_default_str();
  gm->add_option("--seed", gm_seed, "generator seed")->capture_default_str();
  gm->add_option("--out", gm_out, "output path")->required();
  gm->add_option("--format", gm_format, "binary (.lprm) | csv")
      ->capture_default_str();
  gm->callback([&] {
    lprec::MeasurementMatrix m;
    const lprec::Ensemble kind = lprec::ensemble_from_name(gm_ensemble);
    if (kind == lprec::Ensemble::kGaussian) {
      m = lprec::gen_gaussian(gm_M, gm_N, gm_seed);
    } else if (kind == lprec::Ensemble::kUniformSphere) {
      m = lprec::gen_uniform_sphere(gm_M, gm_N, gm_seed);
    } else {
      throw lprec::InvalidArgument("cannot generate the external ensemble");
    }
    if (gm_format == "binary") {
      lprec::save_matrix(m, gm_out);
    } else if (gm_format == "csv") {
      lprec::save_matrix_csv(m.entries, gm_out);
    } else {
      throw lprec::InvalidArgument("unknown format: " + gm_format);
    }
  });

  // ---- gen-signal ----
  auto* gs = app.add_subcommand("gen-signal", "Generate a test signal");
  Index gs_N = 0, gs_S = 0;
  double gs_q = 0.5, gs_lambda = 0.0;
  std::string gs_kind, gs_out;
  std::uint64_t gs_seed = 0;
  gs->add_option("--N", gs_N, "signal length")->required();
  gs->add_option("--kind", gs_kind, "sparse | powerlaw | mixed")->required();
  gs->add_option("--S", gs_S, "sparsity (sparse, mixed)");
  gs->add_option("--q", gs_q, "power-law exponent in (0,1]")
      ->capture_default_str();
  gs->add_option("--lambda", gs_lambda, "tail scale (mixed)")
      ->capture_default_str();
  gs->add_option("--seed", gs_seed, "generator seed")->capture_default_str();
  gs->add_option("--out", gs_out, "output CSV path")->required();
  gs->callback([&] {
    if (gs_kind == "sparse") {
      lprec::save_vector_csv(lprec::gen_sparse_signal(gs_N, gs_S, gs_seed),
                             gs_out);
    } else if (gs_kind == "powerlaw") {
      lprec::save_vector_csv(lprec::gen_powerlaw_signal(gs_N, gs_q), gs_out);
    } else if (gs_kind == "mixed") {
      auto [x, support] =
          lprec::gen_mixed_signal(gs_N, gs_S, gs_lambda, gs_seed);
      lprec::save_vector_csv(x, gs_out);
      nlohmann::ordered_json j;
      j["support"] = support;
      std::cout << j.dump() << "\n";
    } else {
      throw lprec::InvalidArgument("unknown signal kind: " + gs_kind);
    }
  });

  // ---- rip ----
  auto* rp = app.add_subcommand("rip", "Estimate restricted isometry deltas");
  std::string rp_matrix, rp_out;
  Index rp_S = 1;
  std::uint64_t rp_trials = 1000, rp_seed = 0;
  unsigned rp_threads = 0;
  bool rp_exact = false, rp_profile = false;
  rp->add_option("--matrix", rp_matrix, "matrix file (.lprm)")->required();
  rp->add_option("--S", rp_S, "sparsity level (S_max with --profile)")
      ->required();
  rp->add_option("--trials", rp_trials, "Monte-Carlo supports per level")
      ->capture_default_str();
  rp->add_option("--seed", rp_seed, "sampling seed")->capture_default_str();
  rp->add_option("--threads", rp_threads, "0 = all cores")
      ->capture_default_str();
  rp->add_flag("--exact", rp_exact, "exhaustive enumeration instead of MC");
  rp->add_flag("--profile", rp_profile, "estimate S = 1..S_max");
  rp->add_option("--out", rp_out, "also write profile CSV here");
  rp->callback([&] {
    const lprec::MeasurementMatrix A = lprec::load_matrix(rp_matrix);
    if (rp_profile) {
      const auto profile =
          lprec::rip_profile(A, rp_S, rp_trials, rp_seed, rp_threads);
      std::string json = "[";
      std::string csv = "S,delta_lower\n";
      for (std::size_t i = 0; i < profile.size(); ++i) {
        if (i) json += ",";
        json += lprec::to_json(profile[i]);
        csv += std::to_string(profile[i].S) + "," +
               lprec::format_double(profile[i].delta_lower) + "\n";
      }
      json += "]";
      std::cout << json << "\n";
      if (!rp_out.empty()) lprec::write_text_file(rp_out, csv);
      return;
    }
    lprec::RipEstimate e;
    if (rp_exact) {
      e.S = rp_S;
      e.delta_lower = lprec::rip_delta_exact(A, rp_S);
      e.method = lprec::RipMethod::kExhaustive;
      e.seed = 0;
    } else {
      e = lprec::rip_delta_mc(A, rp_S, rp_trials, rp_seed, rp_threads);
    }
    std::cout << lprec::to_json(e) << "\n";
  });

  // ---- certify ----
  auto* cf = app.add_subcommand(
      "certify", "Evaluate the recovery condition and its constants");
  double cf_p = 0.5, cf_k = 0.0, cf_dks = -1.0, cf_dk1s = -1.0;
  std::string cf_profile;
  Index cf_S = 1;
  cf->add_option("--p", cf_p, "quasinorm exponent in (0,1]")->required();
  cf->add_option("--k", cf_k, "support ratio k > 1 (direct mode)");
  cf->add_option("--delta-ks", cf_dks, "delta at sparsity kS (direct mode)");
  cf->add_option("--delta-k1s", cf_dk1s,
                 "delta at sparsity (k+1)S (direct mode)");
  cf->add_option("--profile", cf_profile,
                 "CSV of S,delta rows; searches ratios for --S");
  cf->add_option("--S", cf_S, "target sparsity for profile mode")
      ->capture_default_str();
  cf->callback([&] {
    lprec::Certificate cert;
    if (!cf_profile.empty()) {
      std::vector<std::pair<Index, double>> rows;
      std::ifstream in(cf_profile);
      if (!in) throw lprec::IoError("cannot open " + cf_profile);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || !(std::isdigit(line[0]))) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
          throw lprec::IoError("profile rows must be S,delta");
        }
        rows.emplace_back(static_cast<Index>(std::stoll(line.substr(0, comma))),
                          std::stod(line.substr(comma + 1)));
      }
      cert = lprec::certify_recovery(rows, cf_S, cf_p);
    } else {
      if (!(cf_k > 1.0) || cf_dks < 0.0 || cf_dk1s < 0.0) {
        throw lprec::InvalidArgument(
            "direct mode needs --k, --delta-ks, --delta-k1s "
            "(or use --profile)");
      }
      cert.p = cf_p;
      cert.S = cf_S;
      cert.k = cf_k;
      cert.delta_kS = cf_dks;
      cert.delta_k1S = cf_dk1s;
      cert.satisfied = lprec::check_condition_P(cf_dks, cf_dk1s, cf_k, cf_p);
      if (cert.satisfied) {
        cert.C1 = lprec::constant_c1(cf_p, cf_k, cf_dks, cf_dk1s);
        cert.C2 = lprec::constant_c2(cf_p, cf_k, cf_dks, cf_dk1s);
      }
    }
    std::cout << lprec::to_json(cert) << "\n";
  });

  // ---- decode ----
  auto* dc = app.add_subcommand("decode", "Recover a signal from b = Ax");
  std::string dc_matrix, dc_obs, dc_out, dc_history, dc_algo = "continuation";
  double dc_eps_noise = 0.0, dc_res_tol = 1e-8;
  Index dc_smax = 4;
  SolverFlags dc_flags;
  dc->add_option("--matrix", dc_matrix, "matrix file (.lprm)")->required();
  dc->add_option("--obs", dc_obs, "observation vector CSV")->required();
  dc_flags.attach(dc);
  dc->add_option("--eps-noise", dc_eps_noise,
                 "noise radius (0 = equality constraint)")
      ->capture_default_str();
  dc->add_option("--algorithm", dc_algo, "continuation | irls | l0")
      ->capture_default_str();
  dc->add_option("--S-max", dc_smax, "max support size for l0")
      ->capture_default_str();
  dc->add_option("--res-tol", dc_res_tol, "residual tolerance for l0")
      ->capture_default_str();
  dc->add_option("--out", dc_out, "also write the solution as CSV");
  dc->add_option("--history", dc_history, "write per-stage history CSV");
  dc->callback([&] {
    const lprec::MeasurementMatrix A = lprec::load_matrix(dc_matrix);
    const Vector b = lprec::load_vector_csv(dc_obs);
    lprec::SolveOptions opts = dc_flags.resolve();
    if (!dc_history.empty()) opts.record_history = true;

    if (dc_algo == "l0") {
      bool met = false;
      const Vector x =
          lprec::decode_l0_oracle(A, b, dc_smax, dc_res_tol, &met);
      nlohmann::ordered_json j;
      j["solution"] = std::vector<double>(x.data(), x.data() + x.size());
      j["residual_l2"] = (A.entries * x - b).norm();
      j["support_size"] = (x.array() != 0.0).count();
      j["met_tol"] = met;
      std::cout << j.dump() << "\n";
      if (!dc_out.empty()) lprec::save_vector_csv(x, dc_out);
      return;
    }

    lprec::SolveReport rep;
    if (dc_algo == "irls") {
      if (dc_eps_noise != 0.0) {
        throw lprec::InvalidArgument("irls supports equality mode only");
      }
      rep = lprec::decode_irls(A, b, opts);
    } else if (dc_algo == "continuation") {
      rep = dc_eps_noise > 0.0
                ? lprec::decode_lp_eps(A, b, dc_eps_noise, opts)
                : lprec::decode_lp(A, b, opts);
    } else {
      throw lprec::InvalidArgument("unknown algorithm: " + dc_algo);
    }
    std::cout << lprec::to_json(rep) << "\n";
    if (!dc_out.empty()) lprec::save_vector_csv(rep.solution, dc_out);
    if (!dc_history.empty()) {
      lprec::write_text_file(dc_history, lprec::history_csv(rep));
    }
  });

  // ---- experiment ----
  auto* ex = app.add_subcommand("experiment", "Reproduce a figure data grid");
  std::string ex_figure, ex_preset = "desk", ex_out = ".", ex_p, ex_m;
  std::uint64_t ex_seed = 0;
  unsigned ex_threads = 0;
  ex->add_option("figure", ex_figure, "fig1 | fig2 | fig3 | fig4")->required();
  ex->add_option("--preset", ex_preset, "desk | paper")->capture_default_str();
  ex->add_option("--out", ex_out, "output directory")->capture_default_str();
  ex->add_option("--seed", ex_seed, "master seed")->capture_default_str();
  ex->add_option("--threads", ex_threads, "0 = all cores")
      ->capture_default_str();
  ex->add_option("--p", ex_p, "fig1 only: explicit p grid (list or range)");
  ex->add_option("--m", ex_m, "fig1 only: explicit m grid (list or range)");
  ex->callback([&] {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> files;
    std::string label = ex_preset;
    if (ex_figure == "fig1" && (!ex_p.empty() || !ex_m.empty())) {
      label = "custom";
      const std::vector<double> p_list =
          ex_p.empty() ? parse_grid("0.1:0.1:1.0") : parse_grid(ex_p);
      const std::vector<double> m_grid =
          ex_m.empty() ? parse_grid("2:0.25:16") : parse_grid(ex_m);
      nlohmann::ordered_json cfg;
      cfg["figure"] = "fig1";
      cfg["preset"] = "custom";
      cfg["seed"] = ex_seed;
      cfg["log_base"] = "natural";
      cfg["p_list"] = p_list;
      cfg["m_grid"] = m_grid;
      namespace fs = std::filesystem;
      fs::create_directories(ex_out);
      const std::string csv_path =
          (fs::path(ex_out) / "fig1_conditions.csv").string();
      const std::string cfg_path =
          (fs::path(ex_out) / "fig1_conditions_config.json").string();
      lprec::write_text_file(
          csv_path, lprec::to_csv(lprec::run_condition_curves(p_list, m_grid)));
      lprec::write_text_file(cfg_path, cfg.dump(2) + "\n");
      files = {csv_path, cfg_path};
    } else {
      files = lprec::run_experiment(ex_figure, ex_preset, ex_out, ex_seed,
                                    ex_threads);
    }
    const auto dt = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::size_t cells = 0;
    for (const auto& f : files) {
      if (f.size() < 4 || f.substr(f.size() - 4) != ".csv") continue;
      const std::string body = lprec::read_text_file(f);
      const auto rows = std::count(body.begin(), body.end(), '\n');
      if (rows > 1) cells += static_cast<std::size_t>(rows) - 1;
    }
    std::cerr << ex_figure << " " << label << ": " << cells << " cells in "
              << dt << "s (" << files.size() << " files)\n";
  });

  // ---- lq-check ----
  auto* lq = app.add_subcommand(
      "lq-check", "Empirical image-containment and d1 gap estimates");
  std::string lq_matrix, lq_out;
  Index lq_dirs = 100;
  std::uint64_t lq_seed = 0;
  unsigned lq_threads = 0;
  bool lq_d1 = false;
  double lq_tol = 1e-6;
  SolverFlags lq_flags;
  lq->add_option("--matrix", lq_matrix, "matrix file (.lprm)")->required();
  lq_flags.attach(lq);
  lq->add_option("--directions", lq_dirs, "sampled sphere directions")
      ->capture_default_str();
  lq->add_option("--seed", lq_seed, "direction seed")->capture_default_str();
  lq->add_option("--threads", lq_threads, "0 = all cores")
      ->capture_default_str();
  lq->add_flag("--d1", lq_d1, "run the d1 gap consistency check instead");
  lq->add_option("--tol", lq_tol, "relative slack for the d1 bound")
      ->capture_default_str();
  lq->add_option("--per-direction", lq_out, "write per-direction CSV here");
  lq->callback([&] {
    const lprec::MeasurementMatrix A = lprec::load_matrix(lq_matrix);
    const lprec::SolveOptions opts = lq_flags.resolve();
    if (lq_d1) {
      const lprec::D1GapReport rep = lprec::d1_gap_check(
          A, opts.p, lq_dirs, lq_seed, opts, lq_threads, lq_tol);
      nlohmann::ordered_json j;
      j["d1_conv_hat"] = rep.d1_conv_hat;
      j["d1_p_hat"] = rep.d1_p_hat;
      j["bound"] = rep.bound;
      j["violated"] = rep.violated;
      std::cout << j.dump() << "\n";
      return;
    }
    const lprec::LqEmpirical rep =
        lprec::lq_empirical(A, opts.p, lq_dirs, lq_seed, opts, lq_threads);
    nlohmann::ordered_json j;
    j["alpha_hat"] = rep.alpha_hat;
    j["directions"] = rep.directions;
    j["seed"] = rep.seed;
    std::cout << j.dump() << "\n";
    if (!lq_out.empty()) {
      lprec::write_text_file(lq_out, lprec::per_direction_csv(rep));
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const lprec::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const lprec::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const lprec::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

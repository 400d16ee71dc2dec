#pragma once
// Command-line front end.
//
// Commands:
//   simulate       Monte Carlo BER sweep            -> simulate.csv  (+ .svg)
//   analyze        closed-form ABEP union bound     -> analyze.csv   (+ .svg)
//   capacity       closed-form ergodic capacity     -> capacity.csv  (+ .svg)
//   complexity     per-decision detector flop model -> complexity.csv
//   power-profile  mean received power per antenna  -> power_profile.csv (+ .svg)
//   figure         canned parameter sets figN, N in 3..10 -> figN_*.csv + figN.svg
//
// Options may come from flags or from a flat `key = value` config file
// (--config); flags win on conflict.  SNR grids use the inclusive
// `start:step:stop` syntax (dB) or a comma list.  The default output
// directory is $RISSM_OUT_DIR, falling back to the working directory.
//
// All requested outputs are rendered in memory first and written atomically
// at the end: the exit code is 0 exactly when every output landed, and no
// error path leaves a partial CSV behind.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <rissm/analysis.hpp>
#include <rissm/csv.hpp>
#include <rissm/simulator.hpp>
#include <rissm/svg.hpp>

namespace rissm::cli {

// ---------------------------------------------------------------------------
// Small parsers
// ---------------------------------------------------------------------------

// Trial counts accept scientific notation ("1e6") but must be integral.
inline std::uint64_t parse_trials(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !(v >= 1.0) ||
      v != std::floor(v) || v > 1e15)
    throw std::invalid_argument(
        "trials must be a positive integer (scientific notation allowed): '" +
        s + "'");
  return static_cast<std::uint64_t>(v);
}

// SNR grid: "start:step:stop" (inclusive, ascending) or a comma list of dB
// values; a single number is a one-point grid.
inline std::vector<double> parse_snr_grid(const std::string& s) {
  const auto parse_num = [&](const std::string& t) {
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0')
      throw std::invalid_argument("bad SNR value '" + t + "' in --snr");
    return v;
  };
  std::vector<double> grid;
  if (s.find(':') != std::string::npos) {
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string::npos || s.find(':', c2 + 1) != std::string::npos)
      throw std::invalid_argument("--snr grid must be start:step:stop");
    const double start = parse_num(s.substr(0, c1));
    const double step = parse_num(s.substr(c1 + 1, c2 - c1 - 1));
    const double stop = parse_num(s.substr(c2 + 1));
    if (!(step > 0.0)) throw std::invalid_argument("--snr step must be > 0");
    if (stop < start) throw std::invalid_argument("--snr stop must be >= start");
    if ((stop - start) / step > 100000.0)
      throw std::invalid_argument("--snr grid has too many points");
    // Inclusive endpoints with a half-ulp-ish slack on the last point.
    const double slack = step * 1e-9;
    for (double v = start; v <= stop + slack; v += step)
      grid.push_back(std::min(v, stop));
  } else {
    std::size_t pos = 0;
    while (pos <= s.size()) {
      const auto comma = s.find(',', pos);
      const std::string tok =
          s.substr(pos, comma == std::string::npos ? std::string::npos
                                                   : comma - pos);
      grid.push_back(parse_num(tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (grid.empty()) throw std::invalid_argument("--snr grid is empty");
  return grid;
}

inline std::vector<Detector> parse_detectors(const std::string& s) {
  std::vector<Detector> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string tok =
        s.substr(pos, comma == std::string::npos ? std::string::npos
                                                 : comma - pos);
    out.push_back(detector_from_name(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("--detectors list is empty");
  return out;
}

inline ModKind parse_mod(const std::string& s) {
  if (s == "psk") return ModKind::psk;
  if (s == "qam") return ModKind::qam;
  throw std::invalid_argument("--mod must be psk or qam");
}

// ---------------------------------------------------------------------------
// Output staging: render everything, then write everything.
// ---------------------------------------------------------------------------

struct StagedOutputs {
  std::vector<std::pair<std::filesystem::path, std::string>> files;

  void add(std::filesystem::path path, std::string content) {
    files.emplace_back(std::move(path), std::move(content));
  }
  void write_all() const {
    for (const auto& [path, content] : files) write_file_atomic(path, content);
  }
};

// ---------------------------------------------------------------------------
// CSV renderers (schemas are part of the tool's contract)
// ---------------------------------------------------------------------------

inline std::string ber_records_csv(std::vector<BerRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const BerRecord& a, const BerRecord& b) {
              if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
              return std::string(detector_name(a.detector)) <
                     std::string(detector_name(b.detector));
            });
  std::vector<std::string> rows;
  rows.reserve(records.size());
  for (const auto& r : records)
    rows.push_back(csv_line({format_double(r.snr_db), detector_name(r.detector),
                             format_double(r.ber), std::to_string(r.bit_errors),
                             std::to_string(r.bits_sent),
                             std::to_string(r.trials)}));
  return render_csv("snr_db,detector,ber,bit_errors,bits_sent,trials", rows);
}

inline std::string bound_csv(const std::vector<std::pair<double, double>>& pts) {
  auto sorted = pts;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> rows;
  rows.reserve(sorted.size());
  for (const auto& [snr, bound] : sorted)
    rows.push_back(csv_line({format_double(snr), format_double(bound)}));
  return render_csv("snr_db,abep_bound", rows);
}

inline std::string capacity_csv(const std::vector<EcRecord>& recs) {
  auto sorted = recs;
  std::sort(sorted.begin(), sorted.end(),
            [](const EcRecord& a, const EcRecord& b) { return a.snr_db < b.snr_db; });
  std::vector<std::string> rows;
  rows.reserve(sorted.size());
  for (const auto& r : sorted)
    rows.push_back(csv_line({format_double(r.snr_db), format_double(r.ec_bpcu)}));
  return render_csv("snr_db,ec_bpcu", rows);
}

inline std::string complexity_csv(std::uint64_t L, std::uint64_t nt,
                                  std::uint64_t M) {
  // Alphabetical by detector name, matching the sort rule of the other tables.
  const Detector order[] = {Detector::gd, Detector::ml, Detector::tsml};
  std::vector<std::string> rows;
  for (const Detector d : order) {
    const FlopCount f = detector_flops(d, L, nt, M);
    rows.push_back(csv_line({detector_name(d), std::to_string(L),
                             std::to_string(nt), std::to_string(M),
                             std::to_string(f.mults), std::to_string(f.adds)}));
  }
  return render_csv("detector,L,nt,M,mults,adds", rows);
}

inline std::string power_profile_csv(const std::vector<PowerRecord>& recs) {
  std::vector<std::string> rows;
  rows.reserve(recs.size());
  for (const auto& r : recs)  // antennas are reported 1-based, as on the CLI
    rows.push_back(csv_line({std::to_string(r.antenna + 1),
                             format_double(r.mean_power)}));
  return render_csv("antenna,mean_power", rows);
}

// Renders a plot and reports dropped log-scale zeros on stderr.
inline std::string plot_with_note(const PlotSpec& spec,
                                  const std::vector<PlotSeries>& series) {
  std::size_t dropped = 0;
  std::string svg = render_plot_svg(spec, series, &dropped);
  if (dropped > 0)
    std::cerr << "note: omitted " << dropped
              << " zero/non-positive point(s) from the log-scale plot\n";
  return svg;
}

// ---------------------------------------------------------------------------
// Option bag and figure parameter table
// ---------------------------------------------------------------------------

struct Options {
  std::string command;
  unsigned L = 100;
  unsigned nt = 2;
  unsigned M = 2;
  std::string mod = "psk";
  std::string snr;
  std::string trials = "100000";
  std::uint64_t seed = 1;
  std::string detectors = "ml";
  std::string phase_mode = "aligned";
  double kappa = 0.0;
  unsigned Q = 128;
  unsigned antenna = 1;  // 1-based on the CLI
  std::string out_dir;
  bool plot = false;
  std::string fig_name;
};

inline const char* figure_table_text() {
  return R"(figure parameter sets (fixed; --trials/--seed/--Q/--out remain adjustable):
  fig3   received power per antenna, N_t in {2,4,8}, L=100, RIS aligned to
         antenna 1, 1e5 realizations
  fig4   detector comparison ml/tsml/gd + union bound, N_t=2, M=2 PSK, L=100,
         SNR -30:1:-16 dB
  fig5   modulation orders: (M=2 PSK), (M=4 PSK), (M=16 QAM), each simulated
         (ml) and bounded, N_t=2, L=100, SNR -30:1:-10 dB
  fig6   transmit antennas: N_t in {4,8,16}, M=2 PSK, L=100, simulated (ml)
         and bounded, SNR -30:1:-10 dB
  fig7   CLT fit: L in {10,20,40,80,160}, N_t=2, M=1, simulated (ml) and
         bounded, SNR -36:2:6 dB
  fig8   RIS phase accuracy: aligned, perturbed k=8, perturbed k=4, random,
         ml, N_t=2, M=2 PSK, L=100, SNR -30:1:-14 dB
  fig9   ergodic capacity vs L in {80,100,120}, N_t=2, M=2, SNR -50:2:40 dB
  fig10  ergodic capacity for (N_t,M) in {(2,2),(4,2),(2,4)}, L=100,
         SNR -50:2:40 dB)";
}

// ---------------------------------------------------------------------------
// Command implementations (each stages its outputs; nothing is written yet)
// ---------------------------------------------------------------------------

namespace detail {

inline std::filesystem::path out_path(const Options& opt, const std::string& name) {
  return std::filesystem::path(opt.out_dir) / name;
}

inline SweepConfig sweep_from_options(const Options& opt, bool need_snr) {
  SweepConfig cfg;
  cfg.L = opt.L;
  cfg.nt = opt.nt;
  cfg.c = build_constellation(opt.M, parse_mod(opt.mod));
  if (need_snr) {
    if (opt.snr.empty())
      throw std::invalid_argument("this command requires --snr (e.g. --snr -30:1:-16)");
    cfg.snr_db = parse_snr_grid(opt.snr);
  }
  cfg.trials = parse_trials(opt.trials);
  cfg.master_seed = opt.seed;
  cfg.detectors = parse_detectors(opt.detectors);
  if (opt.phase_mode == "aligned") {
    cfg.phase_mode = PhaseMode::aligned;
  } else if (opt.phase_mode == "random") {
    cfg.phase_mode = PhaseMode::random;
  } else if (opt.phase_mode == "perturbed") {
    if (opt.kappa < 1.0)
      throw std::invalid_argument("perturbed mode requires --kappa >= 1");
    cfg.phase_mode = PhaseMode::perturbed;
    cfg.k = opt.kappa;
  } else {
    throw std::invalid_argument("--phase-mode must be aligned, perturbed, or random");
  }
  return cfg;
}

inline std::vector<PlotSeries> ber_series(const std::vector<BerRecord>& recs) {
  std::map<std::string, PlotSeries> by_det;
  for (const auto& r : recs) {
    auto& s = by_det[detector_name(r.detector)];
    s.label = detector_name(r.detector);
    s.points.emplace_back(r.snr_db, r.ber);
  }
  std::vector<PlotSeries> out;
  for (auto& [_, s] : by_det) {
    std::sort(s.points.begin(), s.points.end());
    out.push_back(std::move(s));
  }
  return out;
}

inline void cmd_simulate(const Options& opt, StagedOutputs& stage) {
  const SweepConfig cfg = sweep_from_options(opt, /*need_snr=*/true);
  const std::vector<BerRecord> recs = run_ber_sweep(cfg);
  stage.add(out_path(opt, "simulate.csv"), ber_records_csv(recs));
  if (opt.plot) {
    const PlotSpec spec{"Monte Carlo BER", "SNR (dB)", "BER", /*log_y=*/true};
    stage.add(out_path(opt, "simulate.svg"), plot_with_note(spec, ber_series(recs)));
  }
}

inline void cmd_analyze(const Options& opt, StagedOutputs& stage) {
  const SweepConfig cfg = sweep_from_options(opt, /*need_snr=*/true);
  const GcqGrid grid = gcq_nodes(opt.Q);
  std::vector<std::pair<double, double>> pts;
  for (const double snr : cfg.snr_db)
    pts.emplace_back(snr, abep_union_bound(std::pow(10.0, snr / 10.0), cfg.L,
                                           cfg.nt, cfg.c, grid));
  stage.add(out_path(opt, "analyze.csv"), bound_csv(pts));
  if (opt.plot) {
    PlotSeries s{"union bound", pts};
    const PlotSpec spec{"ABEP union bound", "SNR (dB)", "ABEP", /*log_y=*/true};
    stage.add(out_path(opt, "analyze.svg"), plot_with_note(spec, {s}));
  }
}

inline void cmd_capacity(const Options& opt, StagedOutputs& stage) {
  const SweepConfig cfg = sweep_from_options(opt, /*need_snr=*/true);
  std::vector<EcRecord> recs;
  for (const double snr : cfg.snr_db)
    recs.push_back({snr, ergodic_capacity(std::pow(10.0, snr / 10.0), cfg.L,
                                          cfg.nt, cfg.c)});
  stage.add(out_path(opt, "capacity.csv"), capacity_csv(recs));
  if (opt.plot) {
    PlotSeries s{"ergodic capacity", {}};
    for (const auto& r : recs) s.points.emplace_back(r.snr_db, r.ec_bpcu);
    const PlotSpec spec{"Ergodic capacity", "SNR (dB)", "EC (bpcu)", false};
    stage.add(out_path(opt, "capacity.svg"), plot_with_note(spec, {s}));
  }
}

inline void cmd_complexity(const Options& opt, StagedOutputs& stage) {
  stage.add(out_path(opt, "complexity.csv"), complexity_csv(opt.L, opt.nt, opt.M));
  if (opt.plot)
    std::cerr << "note: --plot has no effect for the complexity command\n";
}

inline void cmd_power_profile(const Options& opt, StagedOutputs& stage) {
  SweepConfig cfg = sweep_from_options(opt, /*need_snr=*/false);
  if (opt.antenna < 1 || opt.antenna > opt.nt)
    throw std::invalid_argument("--antenna must be in 1..N_t");
  const std::vector<PowerRecord> recs =
      received_power_profile(cfg, opt.antenna - 1);
  stage.add(out_path(opt, "power_profile.csv"), power_profile_csv(recs));
  if (opt.plot) {
    PlotSeries s{"mean power", {}};
    for (const auto& r : recs)
      s.points.emplace_back(static_cast<double>(r.antenna + 1), r.mean_power);
    const PlotSpec spec{"Received power per antenna", "antenna", "mean power",
                        /*log_y=*/true};
    stage.add(out_path(opt, "power_profile.svg"), plot_with_note(spec, {s}));
  }
}

// --- figure command -------------------------------------------------------

inline void fig_power_profiles(const Options& opt, StagedOutputs& stage) {
  std::vector<PlotSeries> series;
  for (const unsigned nt : {2u, 4u, 8u}) {
    SweepConfig cfg;
    cfg.L = 100;
    cfg.nt = nt;
    cfg.c = build_constellation(2, ModKind::psk);
    cfg.trials = parse_trials(opt.trials);
    cfg.master_seed = opt.seed;
    const auto recs = received_power_profile(cfg, 0);
    stage.add(out_path(opt, "fig3_nt" + std::to_string(nt) + ".csv"),
              power_profile_csv(recs));
    PlotSeries s{"N_t=" + std::to_string(nt), {}};
    for (const auto& r : recs)
      s.points.emplace_back(static_cast<double>(r.antenna + 1), r.mean_power);
    series.push_back(std::move(s));
  }
  const PlotSpec spec{"Received power per antenna (RIS aligned to antenna 1)",
                      "antenna", "mean power", /*log_y=*/true};
  stage.add(out_path(opt, "fig3.svg"), plot_with_note(spec, series));
}

struct FigureCurve {
  std::string label;
  std::string csv_stem;
  SweepConfig cfg;        // detectors/mode already set
  bool with_bound = false;
  unsigned bound_Q = 128;
};

// Shared driver: simulate each curve, optionally bound it, emit one SVG.
inline void run_ber_figure(const Options& opt, StagedOutputs& stage,
                           const std::string& fig, std::vector<FigureCurve> curves,
                           const std::string& title) {
  std::vector<PlotSeries> series;
  for (auto& curve : curves) {
    const auto recs = run_ber_sweep(curve.cfg);
    stage.add(out_path(opt, fig + "_" + curve.csv_stem + "_sim.csv"),
              ber_records_csv(recs));
    for (auto& s : ber_series(recs)) {
      s.label = curve.label +
                (curve.cfg.detectors.size() > 1 ? " " + s.label : " sim");
      series.push_back(std::move(s));
    }
    if (curve.with_bound) {
      const GcqGrid grid = gcq_nodes(curve.bound_Q);
      std::vector<std::pair<double, double>> pts;
      for (const double snr : curve.cfg.snr_db)
        pts.emplace_back(snr,
                         abep_union_bound(std::pow(10.0, snr / 10.0),
                                          curve.cfg.L, curve.cfg.nt,
                                          curve.cfg.c, grid));
      stage.add(out_path(opt, fig + "_" + curve.csv_stem + "_bound.csv"),
                bound_csv(pts));
      series.push_back(PlotSeries{curve.label + " bound", pts});
    }
  }
  const PlotSpec spec{title, "SNR (dB)", "BER", /*log_y=*/true};
  stage.add(out_path(opt, fig + ".svg"), plot_with_note(spec, series));
}

inline void cmd_figure(const Options& opt, StagedOutputs& stage) {
  const std::string& fig = opt.fig_name;
  const std::uint64_t trials = parse_trials(opt.trials);
  const auto base_sweep = [&](unsigned L, unsigned nt, unsigned M, ModKind kind,
                              const std::string& snr) {
    SweepConfig cfg;
    cfg.L = L;
    cfg.nt = nt;
    cfg.c = build_constellation(M, kind);
    cfg.snr_db = parse_snr_grid(snr);
    cfg.trials = trials;
    cfg.master_seed = opt.seed;
    cfg.detectors = {Detector::ml};
    return cfg;
  };

  if (fig == "fig3") {
    fig_power_profiles(opt, stage);
  } else if (fig == "fig4") {
    FigureCurve c{"", "nt2m2", base_sweep(100, 2, 2, ModKind::psk, "-30:1:-16"),
                  true, opt.Q};
    c.cfg.detectors = {Detector::ml, Detector::tsml, Detector::gd};
    run_ber_figure(opt, stage, fig, {std::move(c)},
                   "Detector comparison (N_t=2, M=2, L=100)");
  } else if (fig == "fig5") {
    std::vector<FigureCurve> curves;
    curves.push_back({"M=2 PSK", "m2psk",
                      base_sweep(100, 2, 2, ModKind::psk, "-30:1:-10"), true, opt.Q});
    curves.push_back({"M=4 PSK", "m4psk",
                      base_sweep(100, 2, 4, ModKind::psk, "-30:1:-10"), true, opt.Q});
    curves.push_back({"M=16 QAM", "m16qam",
                      base_sweep(100, 2, 16, ModKind::qam, "-30:1:-10"), true, opt.Q});
    run_ber_figure(opt, stage, fig, std::move(curves),
                   "Modulation orders (N_t=2, L=100, ml)");
  } else if (fig == "fig6") {
    std::vector<FigureCurve> curves;
    for (const unsigned nt : {4u, 8u, 16u})
      curves.push_back({"N_t=" + std::to_string(nt), "nt" + std::to_string(nt),
                        base_sweep(100, nt, 2, ModKind::psk, "-30:1:-10"), true,
                        opt.Q});
    run_ber_figure(opt, stage, fig, std::move(curves),
                   "Transmit antennas (M=2, L=100, ml)");
  } else if (fig == "fig7") {
    std::vector<FigureCurve> curves;
    for (const unsigned L : {10u, 20u, 40u, 80u, 160u})
      curves.push_back({"L=" + std::to_string(L), "L" + std::to_string(L),
                        base_sweep(L, 2, 1, ModKind::psk, "-36:2:6"), true, opt.Q});
    run_ber_figure(opt, stage, fig, std::move(curves),
                   "CLT fit (N_t=2, M=1, ml)");
  } else if (fig == "fig8") {
    std::vector<FigureCurve> curves;
    const char* snr = "-30:1:-14";
    curves.push_back({"aligned", "aligned",
                      base_sweep(100, 2, 2, ModKind::psk, snr), false, opt.Q});
    FigureCurve k8{"k=8", "k8", base_sweep(100, 2, 2, ModKind::psk, snr), false,
                   opt.Q};
    k8.cfg.phase_mode = PhaseMode::perturbed;
    k8.cfg.k = 8.0;
    curves.push_back(std::move(k8));
    FigureCurve k4{"k=4", "k4", base_sweep(100, 2, 2, ModKind::psk, snr), false,
                   opt.Q};
    k4.cfg.phase_mode = PhaseMode::perturbed;
    k4.cfg.k = 4.0;
    curves.push_back(std::move(k4));
    FigureCurve rnd{"random", "random", base_sweep(100, 2, 2, ModKind::psk, snr),
                    false, opt.Q};
    rnd.cfg.phase_mode = PhaseMode::random;
    curves.push_back(std::move(rnd));
    run_ber_figure(opt, stage, fig, std::move(curves),
                   "RIS phase accuracy (N_t=2, M=2, L=100, ml)");
  } else if (fig == "fig9" || fig == "fig10") {
    std::vector<PlotSeries> series;
    const std::vector<double> grid = parse_snr_grid("-50:2:40");
    struct Combo {
      std::string label, stem;
      unsigned L, nt, M;
    };
    std::vector<Combo> combos;
    if (fig == "fig9") {
      for (const unsigned L : {80u, 100u, 120u})
        combos.push_back({"L=" + std::to_string(L), "L" + std::to_string(L), L, 2, 2});
    } else {
      combos.push_back({"N_t=2, M=2", "nt2m2", 100, 2, 2});
      combos.push_back({"N_t=4, M=2", "nt4m2", 100, 4, 2});
      combos.push_back({"N_t=2, M=4", "nt2m4", 100, 2, 4});
    }
    for (const auto& combo : combos) {
      const Constellation c = build_constellation(combo.M, ModKind::psk);
      std::vector<EcRecord> recs;
      PlotSeries s{combo.label, {}};
      for (const double snr : grid) {
        const double ec =
            ergodic_capacity(std::pow(10.0, snr / 10.0), combo.L, combo.nt, c);
        recs.push_back({snr, ec});
        s.points.emplace_back(snr, ec);
      }
      stage.add(out_path(opt, fig + "_" + combo.stem + ".csv"), capacity_csv(recs));
      series.push_back(std::move(s));
    }
    const PlotSpec spec{fig == "fig9"
                            ? "Ergodic capacity vs L (N_t=2, M=2)"
                            : "Ergodic capacity vs (N_t, M) (L=100)",
                        "SNR (dB)", "EC (bpcu)", /*log_y=*/false};
    stage.add(out_path(opt, fig + ".svg"), plot_with_note(spec, series));
  } else {
    throw std::invalid_argument("--name must be one of fig3..fig10");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv) {
  Options opt;
  const char* env_out = std::getenv("RISSM_OUT_DIR");
  opt.out_dir = env_out != nullptr ? env_out : ".";

  CLI::App app{
      "RIS-assisted spatial-modulation link simulator and analysis tool"};
  app.footer(std::string(figure_table_text()) +
             "\n\nSNR grids: start:step:stop (inclusive, dB) or a comma list."
             "\nConfig files hold flat `key = value` lines; flags win over the "
             "file.\nDefault output directory: $RISSM_OUT_DIR, else the "
             "working directory.");
  app.set_config("--config", "", "flat key = value option file");

  std::string command;
  app.add_option("command", command,
                 "one of: simulate | analyze | capacity | complexity | "
                 "power-profile | figure")
      ->required()
      ->check(CLI::IsMember({"simulate", "analyze", "capacity", "complexity",
                             "power-profile", "figure"}));
  app.add_option("--L", opt.L, "RIS element count")->check(CLI::PositiveNumber);
  auto* nt_opt =
      app.add_option("--nt", opt.nt, "transmit antenna count (power of two)")
          ->check([](const std::string& s) -> std::string {
            unsigned v = 0;
            try {
              v = static_cast<unsigned>(std::stoul(s));
            } catch (...) {
              return "N_t must be a positive integer";
            }
            if (!is_power_of_two(v)) return "N_t must be a power of two";
            return {};
          });
  auto* m_opt =
      app.add_option("--M", opt.M, "symbol-domain modulation order")
          ->check([](const std::string& s) -> std::string {
            unsigned v = 0;
            try {
              v = static_cast<unsigned>(std::stoul(s));
            } catch (...) {
              return "M must be a power of two";
            }
            if (!is_power_of_two(v)) return "M must be a power of two";
            return {};
          });
  auto* mod_opt = app.add_option("--mod", opt.mod, "modulation kind")
                      ->check(CLI::IsMember({"psk", "qam"}));
  auto* snr_opt = app.add_option(
      "--snr", opt.snr, "SNR grid in dB: start:step:stop or comma list");
  app.add_option("--trials", opt.trials,
                 "Monte Carlo trials per point (scientific notation ok)");
  app.add_option("--seed", opt.seed, "master seed for the substream RNG");
  auto* det_opt = app.add_option("--detectors", opt.detectors,
                                 "comma list from {ml,tsml,gd}");
  auto* pm_opt =
      app.add_option("--phase-mode", opt.phase_mode,
                     "RIS configuration: aligned | perturbed | random")
          ->check(CLI::IsMember({"aligned", "perturbed", "random"}));
  auto* kappa_opt = app.add_option(
      "--kappa", opt.kappa, "phase-error accuracy k for perturbed mode (>= 1)");
  app.add_option("--Q", opt.Q, "Gauss-Chebyshev node count")
      ->check(CLI::PositiveNumber);
  app.add_option("--antenna", opt.antenna,
                 "power-profile: RIS-aligned antenna (1-based)");
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_flag("--plot", opt.plot, "also write an SVG plot");
  auto* name_opt = app.add_option("--name", opt.fig_name,
                                  "figure command: fig3..fig10 (see footer)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    opt.command = command;
    if (command == "figure") {
      if (name_opt->count() == 0)
        throw std::invalid_argument("figure requires --name figN (N in 3..10)");
      // Figure parameter sets are fixed; reject contradictory overrides.
      const std::vector<std::pair<const CLI::Option*, const char*>> fixed = {
          {nt_opt, "--nt"},         {m_opt, "--M"},
          {mod_opt, "--mod"},       {snr_opt, "--snr"},
          {det_opt, "--detectors"}, {pm_opt, "--phase-mode"},
          {kappa_opt, "--kappa"}};
      for (const auto& [o, flag] : fixed)
        if (o->count() > 0)
          throw std::invalid_argument(
              std::string(flag) +
              " cannot be combined with `figure` (its parameter set is "
              "fixed; use the base commands to customize)");
    }

    StagedOutputs stage;
    if (command == "simulate") {
      detail::cmd_simulate(opt, stage);
    } else if (command == "analyze") {
      detail::cmd_analyze(opt, stage);
    } else if (command == "capacity") {
      detail::cmd_capacity(opt, stage);
    } else if (command == "complexity") {
      detail::cmd_complexity(opt, stage);
    } else if (command == "power-profile") {
      detail::cmd_power_profile(opt, stage);
    } else {
      detail::cmd_figure(opt, stage);
    }
    stage.write_all();
    for (const auto& [path, _] : stage.files)
      std::cerr << "wrote " << path.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rissm::cli

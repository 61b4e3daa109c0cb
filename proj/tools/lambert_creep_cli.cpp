#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lambert_creep.h"

namespace {

[[noreturn]] void die(const std::string& msg) {
  std::fprintf(stderr, "lambert-creep: %s\n", msg.c_str());
  std::exit(2);
}

/// Fatal evaluation failure inside a worker; unwinds to the dispatcher.
struct CliError {
  std::string msg;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct GridSpec {
  double min = 0.0;
  double max = 10.0;
  int count = 100;
  bool log_spacing = false;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4) die("grid must be min:max:count:lin|log");
  try {
    std::size_t used = 0;
    g.min = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    g.max = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    g.count = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
  } catch (const std::exception&) {
    die("grid must be min:max:count:lin|log with numeric bounds");
  }
  if (parts[3] == "lin") {
    g.log_spacing = false;
  } else if (parts[3] == "log") {
    g.log_spacing = true;
  } else {
    die("grid spacing must be lin or log");
  }
  if (!(g.min < g.max)) die("grid requires min < max");
  if (g.count < 2) die("grid requires count >= 2");
  if (g.log_spacing && !(g.min > 0.0)) die("log spacing requires min > 0");
  return g;
}

std::vector<double> build_grid(const GridSpec& g) {
  std::vector<double> pts(g.count);
  for (int i = 0; i < g.count; ++i) {
    const double s = static_cast<double>(i) / (g.count - 1);
    pts[i] = g.log_spacing ? g.min * std::pow(g.max / g.min, s)
                           : g.min + (g.max - g.min) * s;
  }
  return pts;
}

/// Options shared by every subcommand; worker threads clone contexts from it.
struct Shared {
  std::string config_path;
  std::string config_json;
  std::string test_model;

  void load() {
    if (config_path.empty()) return;
    std::FILE* f = std::fopen(config_path.c_str(), "rb");
    if (f == nullptr) die("cannot read config file " + config_path);
    std::string text;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) text.append(buf, got);
    std::fclose(f);
    config_json = text;
  }
};

struct Context {
  lc_context* p = nullptr;
  explicit Context(const Shared& sh) : p(lc_context_new()) {
    if (p == nullptr) die("context allocation failed");
    if (!sh.config_json.empty() &&
        lc_config_from_json(p, sh.config_json.c_str()) != LC_OK) {
      const std::string why = lc_last_error(p);
      lc_context_free(p);
      die("invalid config: " + why);
    }
    if (!sh.test_model.empty() &&
        lc_set_test_model(p, sh.test_model.c_str()) != LC_OK) {
      const std::string why = lc_last_error(p);
      lc_context_free(p);
      die("invalid test model: " + why);
    }
  }
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;
  ~Context() { lc_context_free(p); }
  operator lc_context*() const { return p; }
};

int thread_count(int n_items) {
  long k = 0;
  if (const char* env = std::getenv("LAMBERT_CREEP_THREADS")) {
    char* end = nullptr;
    k = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || k < 1) {
      die("LAMBERT_CREEP_THREADS must be a positive integer");
    }
  } else {
    unsigned hc = std::thread::hardware_concurrency();
    k = hc == 0 ? 1 : static_cast<long>(hc);
  }
  if (k > 64) k = 64;
  if (k > n_items) k = n_items;
  return static_cast<int>(k < 1 ? 1 : k);
}

/// Evaluates one row per grid index across a worker pool; rows are
/// assembled in index order so the output is independent of scheduling.
std::vector<std::string> parallel_rows(
    const Shared& sh, int n,
    const std::function<std::string(lc_context*, int)>& row_fn) {
  std::vector<std::string> rows(n);
  const int workers = thread_count(n);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  std::string first_error;

  auto run = [&]() {
    Context ctx(sh);
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        rows[i] = row_fn(ctx, i);
      } catch (const CliError& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!failed.exchange(true)) first_error = e.msg;
        return;
      }
    }
  };

  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) die(first_error);
  return rows;
}

std::string join_csv(const std::string& header,
                     const std::vector<std::string>& rows) {
  std::string out = header;
  out.push_back('\n');
  for (const auto& r : rows) {
    out += r;
    out.push_back('\n');
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (f == nullptr) die("cannot open " + tmp + " for writing");
  const bool ok =
      std::fwrite(content.data(), 1, content.size(), f) == content.size();
  if (std::fclose(f) != 0 || !ok) {
    std::remove(tmp.c_str());
    die("cannot write " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    die("cannot rename " + tmp + " to " + path);
  }
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::fputs(content.c_str(), stdout);
  } else {
    write_file_atomic(out_path, content);
  }
}

using ScalarFn = lc_status (*)(lc_context*, double, double*);

ScalarFn scalar_fn(const std::string& which) {
  if (which == "w0") return &lc_w0;
  if (which == "w0_prime") return &lc_w0_prime;
  if (which == "w0_asym") return &lc_w0_asym;
  if (which == "w0_prime_asym") return &lc_w0_prime_asym;
  if (which == "psi") return &lc_psi;
  if (which == "psi_prime") return &lc_psi_prime;
  die("unknown eval function " + which);
}

std::string scalar_cell(lc_context* ctx, ScalarFn fn, double t, bool strict,
                        const std::string& label) {
  double v = 0.0;
  const lc_status st = fn(ctx, t, &v);
  if (st == LC_OK) return fmt(v);
  if (st == LC_ERR_DOMAIN && !strict) return "";
  throw CliError{label + " at t=" + fmt(t) + ": " + lc_last_error(ctx)};
}

int cmd_eval(const Shared& sh, const std::string& which,
             const std::string& grid_text, const std::string& out_path) {
  const auto grid = build_grid(parse_grid(grid_text));
  const ScalarFn fn = scalar_fn(which);
  const auto rows =
      parallel_rows(sh, static_cast<int>(grid.size()),
                    [&](lc_context* ctx, int i) {
                      return fmt(grid[i]) + "," +
                             scalar_cell(ctx, fn, grid[i], true, which);
                    });
  emit(out_path, join_csv("t [-]," + which + " [-]", rows));
  return 0;
}

using SpectrumFn = lc_status (*)(lc_context*, double, double*, double*);

std::string spectrum_row(lc_context* ctx, SpectrumFn fn, double u,
                         bool zero_below_cut, const std::string& label) {
  if (zero_below_cut && u == 0.0) return fmt(u) + ",0,0";
  double v = 0.0, e = 0.0;
  if (fn(ctx, u, &v, &e) != LC_OK) {
    throw CliError{label + " at " + fmt(u) + ": " + lc_last_error(ctx)};
  }
  return fmt(u) + "," + fmt(v) + "," + fmt(e);
}

int cmd_spectra(const Shared& sh, const std::string& which,
                const std::string& grid_text, const std::string& out_path) {
  const auto grid = build_grid(parse_grid(grid_text));
  SpectrumFn fn = nullptr;
  std::string abscissa = "u";
  bool zero_fill = false;
  if (which == "rho") {
    fn = &lc_spectrum_rho;
    zero_fill = true;
  } else if (which == "rho_over_u") {
    fn = &lc_spectrum_rho_over_u;
    zero_fill = true;
  } else if (which == "K") {
    fn = &lc_spectrum_K;
    abscissa = "r";
  } else if (which == "H") {
    fn = &lc_spectrum_H;
    abscissa = "tau";
  } else {
    die("unknown spectra function " + which);
  }
  const auto rows = parallel_rows(
      sh, static_cast<int>(grid.size()), [&](lc_context* ctx, int i) {
        return spectrum_row(ctx, fn, grid[i], zero_fill, which);
      });
  emit(out_path,
       join_csv(abscissa + " [-]," + which + " [-],est_error [-]", rows));
  return 0;
}

struct RelaxData {
  std::vector<double> times;
  std::vector<double> laplace;
  std::vector<int> unstable;
  std::vector<double> volterra;
};

RelaxData compute_relax(const Shared& sh, bool want_laplace, bool want_volterra,
                        double t_max, int steps) {
  RelaxData d;
  d.times.resize(steps + 1);
  for (int i = 0; i <= steps; ++i) d.times[i] = t_max * i / steps;

  if (want_volterra) {
    Context ctx(sh);
    d.volterra.resize(steps + 1);
    std::vector<double> vt(steps + 1);
    int warn = 0;
    if (lc_phi_volterra(ctx, t_max, steps, vt.data(), d.volterra.data(),
                        &warn) != LC_OK) {
      die(std::string("volterra route: ") + lc_last_error(ctx));
    }
    d.times = vt;
    if (warn != 0) {
      std::fprintf(stderr,
                   "lambert-creep: warning: volterra step refinement did not "
                   "settle below 1e-4\n");
    }
  }

  if (want_laplace) {
    const int n = steps + 1;
    d.laplace.resize(n);
    d.unstable.assign(n, 0);
    const int workers = thread_count(n);
    const int chunk = (n + workers - 1) / workers;
    std::mutex err_mutex;
    std::string first_error;
    std::atomic<bool> failed{false};
    auto run = [&](int lo, int hi) {
      if (lo >= hi) return;
      Context ctx(sh);
      if (lc_phi_laplace(ctx, d.times.data() + lo, hi - lo,
                         d.laplace.data() + lo, d.unstable.data() + lo) !=
          LC_OK) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!failed.exchange(true))
          first_error = std::string("laplace route: ") + lc_last_error(ctx);
      }
    };
    if (workers == 1) {
      run(0, n);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back(run, w * chunk, std::min(n, (w + 1) * chunk));
      }
      for (auto& t : pool) t.join();
    }
    if (failed.load()) die(first_error);
  }
  return d;
}

int cmd_relax(const Shared& sh, const std::string& route, double t_max,
              int steps, const std::string& out_path) {
  if (!(t_max > 0.0)) die("t-max must be positive");
  if (steps < 2) die("steps must be at least 2");
  const bool lap = route != "volterra";
  const bool vol = route != "laplace";
  const RelaxData d = compute_relax(sh, lap, vol, t_max, steps);

  std::string header = "t [-]";
  if (lap) header += ",phi_laplace [-]";
  if (vol) header += ",phi_volterra [-]";
  if (lap && vol) header += ",abs_delta [-]";
  if (lap) header += ",unstable [-]";

  std::vector<std::string> rows(d.times.size());
  for (std::size_t i = 0; i < d.times.size(); ++i) {
    std::string r = fmt(d.times[i]);
    if (lap) r += "," + fmt(d.laplace[i]);
    if (vol) r += "," + fmt(d.volterra[i]);
    if (lap && vol) r += "," + fmt(std::abs(d.laplace[i] - d.volterra[i]));
    if (lap) r += "," + std::to_string(d.unstable[i]);
    rows[i] = r;
  }
  emit(out_path, join_csv(header, rows));
  return 0;
}

int cmd_validate(const Shared& sh, const std::string& format,
                 const std::string& out_path) {
  Context ctx(sh);
  char* report = nullptr;
  int all_pass = 0;
  if (lc_validate(ctx, format == "json" ? 1 : 0, &report, &all_pass) != LC_OK) {
    die(std::string("validation: ") + lc_last_error(ctx));
  }
  std::string text(report);
  lc_string_free(report);
  if (!text.empty() && text.back() != '\n') text.push_back('\n');
  emit(out_path, text);
  return all_pass == 1 ? 0 : 1;
}

const char* kGnuplotPreamble =
    "set datafile separator ','\n"
    "set terminal pngcairo size 900,600\n"
    "set grid\n";

void write_figure_script(const std::string& dir, const std::string& stem,
                         const std::string& body) {
  write_file_atomic(dir + "/" + stem + ".gp",
                    std::string(kGnuplotPreamble) + "set output '" + stem +
                        ".png'\n" + body);
}

int cmd_figures(const Shared& sh, const std::string& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) die("cannot create output directory " + outdir);

  auto pair_csv = [&](const GridSpec& g, ScalarFn f_main, ScalarFn f_asym,
                      const std::string& main_label,
                      const std::string& asym_label) {
    const auto grid = build_grid(g);
    const auto rows = parallel_rows(
        sh, g.count, [&](lc_context* ctx, int i) {
          return fmt(grid[i]) + "," +
                 scalar_cell(ctx, f_main, grid[i], true, main_label) + "," +
                 scalar_cell(ctx, f_asym, grid[i], false, asym_label);
        });
    return join_csv("t [-]," + main_label + " [-]," + asym_label + " [-]",
                    rows);
  };

  write_file_atomic(outdir + "/fig1_left.csv",
                    pair_csv({0.0, 10.0, 100, false}, &lc_w0, &lc_w0_asym,
                             "w0", "w0_asym"));
  write_figure_script(outdir, "fig1_left",
                      "set xlabel 't'\nset ylabel 'W_0'\n"
                      "plot 'fig1_left.csv' using 1:2 with lines title 'W0', "
                      "'fig1_left.csv' using 1:3 with lines title "
                      "'log t - log log t'\n");

  write_file_atomic(outdir + "/fig1_right.csv",
                    pair_csv({1.0, 1000.0, 100, true}, &lc_w0, &lc_w0_asym,
                             "w0", "w0_asym"));
  write_figure_script(outdir, "fig1_right",
                      "set logscale xy\nset xlabel 't'\nset ylabel 'W_0'\n"
                      "plot 'fig1_right.csv' using 1:2 with lines title 'W0', "
                      "'fig1_right.csv' using 1:3 with lines title "
                      "'log t - log log t'\n");

  write_file_atomic(outdir + "/fig2_w0prime.csv",
                    pair_csv({0.0, 10.0, 100, false}, &lc_w0_prime,
                             &lc_w0_prime_asym, "w0_prime", "w0_prime_asym"));
  write_figure_script(outdir, "fig2_w0prime",
                      "set xlabel 't'\nset ylabel 'dW_0/dt'\n"
                      "plot 'fig2_w0prime.csv' using 1:2 with lines title "
                      "'W0 prime', 'fig2_w0prime.csv' using 1:3 with lines "
                      "title 'asymptotic'\n");

  {
    const auto grid = build_grid({0.0, 10.0, 200, false});
    const auto rows = parallel_rows(
        sh, 200, [&](lc_context* ctx, int i) {
          return spectrum_row(ctx, &lc_spectrum_rho, grid[i], true, "rho");
        });
    write_file_atomic(outdir + "/fig3_rho.csv",
                      join_csv("u [-],rho [-],est_error [-]", rows));
    write_figure_script(outdir, "fig3_rho",
                        "set xlabel 'u'\nset ylabel 'rho'\n"
                        "plot 'fig3_rho.csv' using 1:2 with lines title "
                        "'rho(u)'\n");
  }

  {
    const auto grid = build_grid({0.05, 20.0, 200, true});
    const auto rows = parallel_rows(
        sh, 200, [&](lc_context* ctx, int i) {
          const double t = grid[i];
          double direct = 0.0, recon = 0.0, est = 0.0;
          if (lc_psi_prime(ctx, t, &direct) != LC_OK) {
            throw CliError{std::string("psi_prime: ") + lc_last_error(ctx)};
          }
          if (lc_psi_prime_from_rho(ctx, t, &recon, &est) != LC_OK) {
            throw CliError{std::string("psi_prime_from_rho: ") +
                           lc_last_error(ctx)};
          }
          const double rel = std::abs(recon - direct) / std::abs(direct);
          return fmt(t) + "," + fmt(direct) + "," + fmt(recon) + "," + fmt(rel);
        });
    write_file_atomic(
        outdir + "/fig4_roundtrip.csv",
        join_csv("t [-],psi_prime [-],psi_prime_from_rho [-],rel_error [-]",
                 rows));
    write_figure_script(outdir, "fig4_roundtrip",
                        "set logscale x\nset xlabel 't'\nset ylabel "
                        "'psi prime'\n"
                        "plot 'fig4_roundtrip.csv' using 1:2 with lines title "
                        "'direct', 'fig4_roundtrip.csv' using 1:3 with points "
                        "title 'from rho'\n");
  }

  {
    const auto grid = build_grid({0.0, 10.0, 200, false});
    const auto rows = parallel_rows(
        sh, 200, [&](lc_context* ctx, int i) {
          const double u = grid[i];
          if (u == 0.0) return std::string("0,0,0");
          double r1 = 0.0, r2 = 0.0, e = 0.0;
          if (lc_spectrum_rho(ctx, u, &r1, &e) != LC_OK) {
            throw CliError{std::string("rho: ") + lc_last_error(ctx)};
          }
          if (lc_spectrum_rho_over_u(ctx, u, &r2, &e) != LC_OK) {
            throw CliError{std::string("rho_over_u: ") + lc_last_error(ctx)};
          }
          return fmt(u) + "," + fmt(r1) + "," + fmt(r2);
        });
    write_file_atomic(outdir + "/fig5_rho_over_u.csv",
                      join_csv("u [-],rho [-],rho_over_u [-]", rows));
    write_figure_script(outdir, "fig5_rho_over_u",
                        "set xlabel 'u'\nset ylabel 'spectra'\n"
                        "plot 'fig5_rho_over_u.csv' using 1:2 with lines "
                        "title 'rho(u)', 'fig5_rho_over_u.csv' using 1:3 with "
                        "lines title 'rho(u)/u'\n");
  }

  {
    const auto grid = build_grid({0.0, 10.0, 200, false});
    const auto rows = parallel_rows(
        sh, 200, [&](lc_context* ctx, int i) {
          return spectrum_row(ctx, &lc_spectrum_K, grid[i], false, "K");
        });
    write_file_atomic(outdir + "/fig6_K.csv",
                      join_csv("r [-],K [-],est_error [-]", rows));
    write_figure_script(outdir, "fig6_K",
                        "set xlabel 'r'\nset ylabel 'K'\n"
                        "plot 'fig6_K.csv' using 1:2 with lines title "
                        "'K(r)'\n");
  }

  {
    const RelaxData d = compute_relax(sh, true, true, 10.0, 200);
    std::vector<std::string> rows(d.times.size());
    for (std::size_t i = 0; i < d.times.size(); ++i) {
      rows[i] = fmt(d.times[i]) + "," + fmt(d.laplace[i]) + "," +
                fmt(d.volterra[i]) + "," +
                fmt(std::abs(d.laplace[i] - d.volterra[i])) + "," +
                std::to_string(d.unstable[i]);
    }
    write_file_atomic(
        outdir + "/fig7_phi.csv",
        join_csv(
            "t [-],phi_laplace [-],phi_volterra [-],abs_delta [-],unstable [-]",
            rows));
    write_figure_script(outdir, "fig7_phi",
                        "set xlabel 't'\nset ylabel 'phi'\n"
                        "plot 'fig7_phi.csv' using 1:2 with lines title "
                        "'Laplace inversion', 'fig7_phi.csv' using 1:3 with "
                        "points title 'Volterra'\n");
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lambert-W creep model: evaluations, spectra, relaxation, "
               "figure data and validation"};
  app.require_subcommand(1);

  Shared sh;
  std::string which, grid_text, out_path, route = "both", format = "text";
  std::string outdir = "figures";
  double t_max = 10.0;
  int steps = 200;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", sh.config_path,
                    "JSON file overriding quadrature/inversion/tolerances");
    sub->add_option("--out", out_path, "output file (default: stdout)");
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate a scalar function");
  eval->add_option("which", which, "function")
      ->required()
      ->check(CLI::IsMember({"w0", "w0_prime", "w0_asym", "w0_prime_asym",
                             "psi", "psi_prime"}));
  eval->add_option("--grid", grid_text, "min:max:count:lin|log")
      ->default_val("0:10:100:lin");
  add_common(eval);

  CLI::App* spectra = app.add_subcommand("spectra", "spectral functions");
  spectra->add_option("which", which, "function")
      ->required()
      ->check(CLI::IsMember({"rho", "rho_over_u", "K", "H"}));
  spectra->add_option("--grid", grid_text, "min:max:count:lin|log")
      ->default_val("0:10:200:lin");
  add_common(spectra);

  CLI::App* relax = app.add_subcommand("relax", "relaxation function phi");
  relax->add_option("--route", route, "laplace, volterra or both")
      ->check(CLI::IsMember({"laplace", "volterra", "both"}));
  relax->add_option("--t-max", t_max, "grid endpoint")->default_val(10.0);
  relax->add_option("--steps", steps, "grid intervals")->default_val(200);
  relax->add_option("--test-model", sh.test_model,
                    "swap in an analytic model (linear: psi = t)")
      ->check(CLI::IsMember({"lambert", "linear"}));
  add_common(relax);

  CLI::App* figures =
      app.add_subcommand("figures", "emit every figure dataset + plot script");
  figures->add_option("--outdir", outdir, "output directory")
      ->default_val("figures");
  figures->add_option("--config", sh.config_path, "JSON config overrides");

  CLI::App* validate =
      app.add_subcommand("validate", "run the full identity suite");
  validate->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  sh.load();
  if (eval->parsed()) return cmd_eval(sh, which, grid_text, out_path);
  if (spectra->parsed()) return cmd_spectra(sh, which, grid_text, out_path);
  if (relax->parsed()) return cmd_relax(sh, route, t_max, steps, out_path);
  if (figures->parsed()) return cmd_figures(sh, outdir);
  if (validate->parsed()) return cmd_validate(sh, format, out_path);
  return 2;
}

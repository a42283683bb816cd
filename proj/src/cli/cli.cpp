#include "garma/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "garma/arma.hpp"
#include "garma/distribution.hpp"
#include "garma/spectral.hpp"
#include "svg.hpp"
#include "table_io.hpp"

namespace garma::cli {

namespace {

using Json = nlohmann::ordered_json;

// Bad flag values or combinations detected after parsing; exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string ar, ma;
  double mean = 0.0;
  double errorvar = 1.0;

  std::string input = "-";
  std::string output;
  std::string format = "csv";
  std::string plot;

  std::string cond;
  std::string condvals;
  long n = 0;
  long m = 0;

  std::optional<std::uint64_t> seed;
  bool nondeterministic = false;
  std::size_t sims = 1'000'000;
  std::size_t threads = 1;
  double tol = 1e-5;
  std::size_t max_points = 10'000'000;

  bool log = false;
  bool corr = false;
  bool progress = false;
  bool centred = true;
  bool scaled = true;
  bool nyquist = true;
};

struct Output {
  std::string text;
  Warnings warnings;
  std::string svg;
};

void add_model_options(CLI::App* sub, Config& c) {
  sub->add_option("--ar", c.ar, "AR coefficients, comma separated (e.g. 0.8,-0.2)");
  sub->add_option("--ma", c.ma, "MA coefficients, comma separated");
  sub->add_option("--mean", c.mean, "process mean")->capture_default_str();
  sub->add_option("--errorvar", c.errorvar, "innovation variance")->capture_default_str();
}

void add_io_options(CLI::App* sub, Config& c, bool reads_input) {
  if (reads_input) {
    sub->add_option("--input,-i", c.input, "CSV file, one series per row; '-' for stdin")->capture_default_str();
  }
  sub->add_option("--output,-o", c.output, "write results here instead of stdout");
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_seed_options(CLI::App* sub, Config& c) {
  sub->add_option("--seed", c.seed, "random seed (unsigned 64-bit)");
  sub->add_flag("--nondeterministic", c.nondeterministic, "draw a fresh seed when --seed is absent");
}

ArmaSpec model(const Config& c) {
  ArmaSpec spec;
  try {
    spec.ar = parse_number_list(c.ar);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--ar: ") + e.what());
  }
  try {
    spec.ma = parse_number_list(c.ma);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--ma: ") + e.what());
  }
  spec.mean = c.mean;
  spec.error_var = c.errorvar;
  return spec;
}

std::uint64_t resolve_seed(const Config& c, bool required, const char* why, std::ostream& err) {
  if (c.seed) return *c.seed;
  if (c.nondeterministic) {
    std::random_device device;
    const std::uint64_t seed = (std::uint64_t{device()} << 32) ^ device();
    err << "seed: " << seed << '\n';
    return seed;
  }
  if (required) throw UsageError(std::string("--seed is required ") + why + " (or pass --nondeterministic)");
  return mvn::CdfOptions{}.seed;
}

Eigen::MatrixXd read_input(const Config& c, std::istream& in) {
  if (c.input == "-") return read_table(in);
  std::ifstream file(c.input);
  if (!file) throw std::runtime_error("cannot open input file '" + c.input + "'");
  return read_table(file);
}

// Inline "v1,NA,v3" or "@file.csv" (first row of the file).
std::vector<double> read_condvals(const std::string& spec, long m) {
  std::vector<double> values;
  if (!spec.empty() && spec.front() == '@') {
    std::ifstream file(spec.substr(1));
    if (!file) throw std::runtime_error("cannot open condvals file '" + spec.substr(1) + "'");
    const auto table = read_table(file);
    if (table.rows() != 1) throw UsageError("--condvals: file must hold a single row");
    values.assign(table.data(), table.data() + table.size());
  } else {
    try {
      values = parse_number_list(spec, true);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--condvals: ") + e.what());
    }
  }
  if (static_cast<long>(values.size()) != m) {
    throw UsageError("--condvals: expected " + std::to_string(m) + " entries, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (std::isinf(v)) throw UsageError("--condvals: entries must be finite or NA");
  }
  return values;
}

// "--cond 1,12,30" flags columns (values come from the input); "1:-4"
// also overwrites column 1 of every row with -4. Indices are 1-based.
std::vector<bool> apply_cond(const std::string& spec, Eigen::MatrixXd& x) {
  std::vector<bool> flags;
  if (spec.empty()) return flags;
  flags.assign(static_cast<std::size_t>(x.cols()), false);
  std::stringstream items(spec);
  std::string item;
  while (std::getline(items, item, ',')) {
    const auto colon = item.find(':');
    const std::string index_text = item.substr(0, colon);
    long index = 0;
    try {
      std::size_t used = 0;
      index = std::stol(index_text, &used);
      if (used != index_text.size()) throw std::invalid_argument(index_text);
    } catch (const std::exception&) {
      throw UsageError("--cond: '" + item + "' is not an index or index:value pair");
    }
    if (index < 1 || index > x.cols()) {
      throw UsageError("--cond: index " + std::to_string(index) + " is outside 1.." + std::to_string(x.cols()));
    }
    flags[static_cast<std::size_t>(index - 1)] = true;
    if (colon != std::string::npos) {
      double v = 0.0;
      try {
        v = parse_field(item.substr(colon + 1));
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--cond: ") + e.what());
      }
      if (!std::isfinite(v)) throw UsageError("--cond: conditioning values must be finite");
      x.col(index - 1).setConstant(v);
    }
  }
  return flags;
}

Json warnings_json(const Warnings& warnings) {
  Json list = Json::array();
  for (const auto& w : warnings) list.push_back({{"kind", to_string(w.kind)}, {"message", w.message}});
  return list;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string dump(Json doc, const Warnings& warnings) {
  doc["warnings"] = warnings_json(warnings);
  return doc.dump(2) + "\n";
}

std::string csv_column(const std::vector<double>& values) {
  std::ostringstream s;
  for (double v : values) s << format_double(v) << '\n';
  return s.str();
}

Output run_acf(const Config& c) {
  const auto acv = acf_vector(c.n, model(c), c.corr);
  Output out{{}, acv.warnings, {}};
  if (c.format == "json") {
    Json labels = Json::array();
    for (std::size_t l = 0; l < acv.values.size(); ++l) labels.push_back("Lag[" + std::to_string(l) + "]");
    out.text = dump({{"command", "acf"}, {"correlation", acv.is_correlation}, {"labels", labels}, {"values", acv.values}},
                    out.warnings);
  } else {
    std::ostringstream s;
    write_row(s, acv.values);
    out.text = s.str();
  }
  return out;
}

Output run_var(const Config& c) {
  const auto spec = model(c);
  VarianceMatrix v;
  if (c.condvals.empty()) {
    v = variance_matrix(c.n, spec, c.corr);
  } else {
    const auto values = read_condvals(c.condvals, c.n);
    v = variance_matrix(c.n, spec, pattern_from_condvals(values), c.corr);
  }
  Output out{{}, v.warnings, {}};
  if (c.format == "json") {
    std::vector<std::size_t> index;
    for (auto i : v.index_labels) index.push_back(i + 1);
    out.text = dump({{"command", "var"}, {"correlation", c.corr}, {"index", index}, {"matrix", matrix_json(v.entries)}},
                    out.warnings);
  } else {
    std::ostringstream s;
    write_table(s, v.entries);
    out.text = s.str();
  }
  return out;
}

Output run_density(const Config& c, std::istream& in) {
  const auto spec = model(c);
  auto x = read_input(c, in);
  const auto flags = apply_cond(c.cond, x);
  const auto d = dgarma(x, spec, flags, c.log);
  Output out{{}, d.warnings, {}};
  out.text = c.format == "json" ? dump({{"command", "density"}, {"log", c.log}, {"values", d.values}}, out.warnings)
                                : csv_column(d.values);
  return out;
}

Output run_cdf(const Config& c, std::istream& in, std::ostream& err) {
  const auto spec = model(c);
  auto x = read_input(c, in);
  const auto flags = apply_cond(c.cond, x);
  if (!(c.tol > 0.0)) throw UsageError("--tol must be positive");
  std::size_t free = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const bool flagged = !flags.empty() && flags[static_cast<std::size_t>(j)];
    if (!flagged && !std::isnan(x(0, j))) ++free;
  }
  const auto seed = resolve_seed(c, free >= 3, "when three or more values are free", err);
  const auto p = pgarma(x, spec, flags, c.log, {c.tol, seed, c.max_points});
  Output out{{}, p.warnings, {}};
  out.text = c.format == "json" ? dump({{"command", "cdf"}, {"log", c.log}, {"tol", c.tol}, {"seed", seed},
                                        {"values", p.values}},
                                       out.warnings)
                                : csv_column(p.values);
  return out;
}

Output run_sample(const Config& c, std::ostream& err) {
  const auto spec = model(c);
  const auto seed = resolve_seed(c, true, "for sample", err);
  std::vector<double> condvals;
  if (!c.condvals.empty()) condvals = read_condvals(c.condvals, c.m);
  const auto g = rgarma(c.n, c.m, spec, condvals, seed);
  Output out{{}, g.warnings, {}};
  if (c.format == "json") {
    out.text = dump({{"command", "sample"}, {"seed", seed}, {"series", matrix_json(g.series)}}, out.warnings);
  } else {
    std::ostringstream s;
    write_table(s, g.series);
    out.text = s.str();
  }
  if (!c.plot.empty()) out.svg = series_svg(g.series);
  return out;
}

Output run_intensity(const Config& c, std::istream& in) {
  const auto x = read_input(c, in);
  const auto rows = intensity(x, {c.centred, c.scaled, c.nyquist});
  Output out;
  if (c.format == "json") {
    Json labels = Json::array();
    for (std::size_t i = 0; i < rows.front().values.size(); ++i) labels.push_back(rows.front().label(i));
    Json values = Json::array();
    for (const auto& r : rows) values.push_back(r.values);
    out.text = dump({{"command", "intensity"},
                     {"centred", c.centred},
                     {"scaled", c.scaled},
                     {"nyquist_truncated", rows.front().nyquist_truncated},
                     {"dof", rows.front().dof},
                     {"labels", labels},
                     {"values", values}},
                    out.warnings);
  } else {
    std::ostringstream s;
    for (const auto& r : rows) write_row(s, r.values);
    out.text = s.str();
  }
  if (!c.plot.empty()) out.svg = intensity_svg(rows);
  return out;
}

Output run_spectrum_test(const Config& c, std::istream& in, std::ostream& err) {
  const auto x = read_input(c, in);
  if (x.rows() != 1 && x.cols() != 1) throw UsageError("spectrum-test: input must be a single series (one row)");
  if (c.sims < 1) throw UsageError("--sims must be at least 1");
  const auto seed = resolve_seed(c, true, "for spectrum-test", err);
  const std::vector<double> series(x.data(), x.data() + x.size());

  SpectrumTestOptions options;
  options.sims = c.sims;
  options.seed = seed;
  options.threads = c.threads;
  if (c.progress) {
    options.progress = [&err](std::size_t done, std::size_t total) {
      err << "progress: " << done << "/" << total << '\n';
    };
    options.progress_interval = std::max<std::size_t>(1, c.sims / 20);
  }
  const auto r = spectrum_test(series, options);

  Output out;
  if (c.format == "json") {
    out.text = dump({{"command", "spectrum-test"},
                     {"method", "Permutation-spectrum test"},
                     {"statistic", r.statistic},
                     {"statistic_name", "maximum scaled intensity"},
                     {"p_value", r.p_value},
                     {"n", r.series_len},
                     {"sims", r.sims},
                     {"seed", r.seed},
                     {"alternative", "the series is not exchangeable (it contains a periodic signal)"},
                     {"intensity", r.intensity.values}},
                    out.warnings);
  } else {
    out.text = "statistic," + format_double(r.statistic) + "\np_value," + format_double(r.p_value) +
               "\nn," + std::to_string(r.series_len) + "\nsims," + std::to_string(r.sims) + "\nseed," +
               std::to_string(r.seed) + "\n";
  }
  if (!c.plot.empty()) out.svg = spectrum_test_svg(r);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"GARMA distributions, ARMA autocorrelation and the permutation-spectrum test", "garma"};
  app.require_subcommand(1);

  auto* acf = app.add_subcommand("acf", "autocovariance or autocorrelation at lags 0..n-1");
  acf->add_option("--n", c.n, "number of lags")->required()->check(CLI::PositiveNumber);
  acf->add_flag("--corr", c.corr, "autocorrelation instead of autocovariance");
  add_model_options(acf, c);
  add_io_options(acf, c, false);

  auto* var = app.add_subcommand("var", "n x n variance matrix, optionally conditional");
  var->add_option("--n", c.n, "series length")->required()->check(CLI::PositiveNumber);
  var->add_flag("--corr", c.corr, "correlation matrix");
  var->add_option("--condvals", c.condvals, "conditioning values 'v1,NA,v3,...' or @file.csv");
  add_model_options(var, c);
  add_io_options(var, c, false);

  auto* density = app.add_subcommand("density", "GARMA density of each input row");
  density->add_option("--cond", c.cond, "conditioning indices '1,12' or index:value pairs '1:-4,12:0' (1-based)");
  density->add_flag("--log", c.log, "log scale");
  add_model_options(density, c);
  add_io_options(density, c, true);

  auto* cdf = app.add_subcommand("cdf", "GARMA joint CDF of each input row");
  cdf->add_option("--cond", c.cond, "conditioning indices '1,12' or index:value pairs '1:-4,12:0' (1-based)");
  cdf->add_flag("--log", c.log, "log scale");
  cdf->add_option("--tol", c.tol, "absolute error target for three or more free values")->capture_default_str();
  cdf->add_option("--max-points", c.max_points, "QMC point budget")->check(CLI::PositiveNumber)->capture_default_str();
  add_seed_options(cdf, c);
  add_model_options(cdf, c);
  add_io_options(cdf, c, true);

  auto* sample = app.add_subcommand("sample", "generate n series of length m");
  sample->add_option("--n", c.n, "number of series")->required()->check(CLI::PositiveNumber);
  sample->add_option("--m", c.m, "series length")->required()->check(CLI::PositiveNumber);
  sample->add_option("--condvals", c.condvals, "conditioning values 'v1,NA,v3,...' or @file.csv");
  sample->add_option("--plot", c.plot, "write an SVG plot of the series");
  add_seed_options(sample, c);
  add_model_options(sample, c);
  add_io_options(sample, c, false);

  auto* inten = app.add_subcommand("intensity", "Fourier intensity of each input row");
  inten->add_flag("--centred,!--no-centred", c.centred, "subtract the mean first")->capture_default_str();
  inten->add_flag("--scaled,!--no-scaled", c.scaled, "scale so the squares sum to the degrees of freedom")
      ->capture_default_str();
  inten->add_flag("--nyquist,!--no-nyquist", c.nyquist, "keep frequencies 0..n/2 only")->capture_default_str();
  inten->add_option("--plot", c.plot, "write an SVG stem plot");
  add_io_options(inten, c, true);

  auto* test = app.add_subcommand("spectrum-test", "permutation-spectrum test of a single series");
  test->add_option("--sims", c.sims, "number of permutations")->capture_default_str();
  test->add_option("--threads", c.threads, "worker threads, 0 = all cores (results do not depend on it)")
      ->capture_default_str();
  test->add_flag("--progress", c.progress, "report progress on stderr");
  test->add_option("--plot", c.plot, "write a two-panel SVG plot");
  add_seed_options(test, c);
  add_io_options(test, c, true);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    Output result;
    if (acf->parsed()) result = run_acf(c);
    if (var->parsed()) result = run_var(c);
    if (density->parsed()) result = run_density(c, in);
    if (cdf->parsed()) result = run_cdf(c, in, err);
    if (sample->parsed()) result = run_sample(c, err);
    if (inten->parsed()) result = run_intensity(c, in);
    if (test->parsed()) result = run_spectrum_test(c, in, err);

    for (const auto& w : result.warnings) err << "warning: " << w.message << '\n';
    if (c.output.empty()) {
      out << result.text;
    } else {
      write_file(c.output, result.text);
    }
    if (!c.plot.empty()) write_file(c.plot, result.svg);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kExitComputation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
}

}  // namespace garma::cli

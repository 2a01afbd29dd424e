#include "negmnom/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "negmnom/distribution.hpp"
#include "negmnom/divisibility.hpp"
#include "negmnom/domain.hpp"
#include "negmnom/model_io.hpp"
#include "negmnom/series.hpp"

namespace negmnom::cli {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Raised for flag values the library does not see yet (vectors, ranges).
struct UsageError : Error {
  using Error::Error;
};

std::vector<double> parse_vector(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string piece = text.substr(start, comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (piece.empty() || used != piece.size() || !std::isfinite(v))
      throw UsageError(std::string("--") + flag + ": bad number '" + piece + "'");
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

std::string alpha_csv(std::span<const std::uint16_t> alpha) {
  std::string s;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(alpha[i]);
  }
  return s;
}

std::string alpha_header(int n) {
  std::string s;
  for (int i = 1; i <= n; ++i) {
    if (i > 1) s += ',';
    s += "alpha" + std::to_string(i);
  }
  return s;
}

json alpha_json(std::span<const std::uint16_t> alpha) {
  json a = json::array();
  for (auto e : alpha) a.push_back(e);
  return a;
}

// JSON numbers are dumped with full round-trip precision by nlohmann.
std::string dump(const json& j) { return j.dump(); }

struct Options {
  std::string model_path;
  double lambda = 1.0;
  int degree = 8;
  std::optional<int> degree_opt;
  std::string theta;
  std::string a;
  std::string range;
  std::string range2;
  std::string out_path;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  unsigned threads = 1;
  double tol = -1.0;
  bool csv = false;
  bool json_out = false;
};

int cmd_check_id(const Options& o, std::ostream& out, bool print_verdict) {
  const AffineModel model = load_model(o.model_path);
  const double tol = o.tol < 0.0 ? 0.0 : o.tol;
  const BTable table = bt_table(model);
  const auto verdict = is_infinitely_divisible(model, tol);
  if (o.json_out) {
    json b = json::object();
    json order = json::array();
    for (std::uint32_t bits = 1; bits < (1u << model.dimension()); ++bits) {
      b[SubsetId(bits).to_string()] = table[SubsetId(bits)];
      order.push_back(SubsetId(bits).to_string());
    }
    json doc{{"n", model.dimension()}, {"b", b}, {"order", order}};
    if (print_verdict) {
      doc["verdict"] = verdict.accepted ? "accepted" : "rejected";
      if (!verdict.accepted) {
        doc["witness"] = verdict.witness.to_string();
        doc["witness_value"] = verdict.witness_value;
      }
    }
    out << dump(doc) << '\n';
  } else {
    out << "T\tb_T\n";
    for (std::uint32_t bits = 1; bits < (1u << model.dimension()); ++bits)
      out << SubsetId(bits).to_string() << '\t'
          << format_double(table[SubsetId(bits)]) << '\n';
    if (print_verdict) {
      if (verdict.accepted)
        out << "accepted\n";
      else
        out << "rejected witness={" << verdict.witness.to_string()
            << "} b=" << format_double(verdict.witness_value) << '\n';
    }
  }
  if (!print_verdict) return kExitOk;
  return verdict.accepted ? kExitOk : kExitNegative;
}

int cmd_expand(const Options& o, std::ostream& out) {
  const AffineModel model = load_model(o.model_path);
  const TruncatedSeries c = expand_neg_power(model, o.lambda, o.degree);
  const auto& basis = c.basis();
  // Coefficients this small relative to the largest are reported as zero.
  const double zero_tol = 1e-12 * c.max_abs();
  if (o.json_out) {
    json rows = json::array();
    for (std::size_t i = 0; i < c.size(); ++i)
      rows.push_back({{"alpha", alpha_json(basis.exponents(i))},
                      {"c", c[i]},
                      {"zero", std::abs(c[i]) <= zero_tol}});
    out << dump(json{{"lambda", o.lambda}, {"degree", o.degree}, {"coefficients", rows}})
        << '\n';
    return kExitOk;
  }
  if (o.csv) out << alpha_header(model.dimension()) << ",c,zero\n";
  for (std::size_t i = 0; i < c.size(); ++i) {
    const bool zero = std::abs(c[i]) <= zero_tol;
    if (o.csv) {
      out << alpha_csv(basis.exponents(i)) << ',' << format_double(c[i]) << ','
          << (zero ? 1 : 0) << '\n';
    } else {
      out << '(' << alpha_csv(basis.exponents(i)) << ")\t" << format_double(c[i]);
      if (zero) out << "\tzero";
      out << '\n';
    }
  }
  return kExitOk;
}

int cmd_contains(const Options& o, std::ostream& out) {
  const AffineModel model = load_model(o.model_path);
  const auto theta = parse_vector(o.theta, "theta");
  const double tol = o.tol < 0.0 ? kDefaultMarginTol : o.tol;
  const auto v = classify(model, theta, tol);
  if (o.json_out) {
    out << dump(json{{"classification", to_string(v.classification)},
                     {"margin", v.margin},
                     {"log_radius", std::log(v.radius)},
                     {"radius", v.radius},
                     {"theta_bar", v.theta_bar},
                     {"s", v.s}})
        << '\n';
  } else {
    out << to_string(v.classification) << " margin=" << format_double(v.margin)
        << " log_radius=" << format_double(std::log(v.radius))
        << " theta_bar=" << format_double(v.theta_bar) << '\n';
  }
  return v.classification == Classification::kInside ? kExitOk : kExitNegative;
}

int cmd_boundary(const Options& o, std::ostream& out, std::ostream& err) {
  const AffineModel model = load_model(o.model_path);
  const GridRange r1 = GridRange::parse(o.range);
  std::optional<GridRange> r2;
  if (!o.range2.empty()) r2 = GridRange::parse(o.range2);
  const auto rows = boundary_grid(model, r1, r2, o.threads);

  std::ofstream file;
  std::ostream* dst = &out;
  if (!o.out_path.empty()) {
    file.open(o.out_path, std::ios::binary);
    if (!file) throw UsageError("cannot open '" + o.out_path + "' for writing");
    dst = &file;
  }
  const int n = model.dimension();
  *dst << "s1";
  if (n == 3) *dst << ",s2";
  for (int i = 1; i <= n; ++i) *dst << ",theta" << i;
  *dst << ",check_A\n";
  double worst = 0.0;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.params.size(); ++i)
      *dst << (i ? "," : "") << format_double(row.params[i]);
    for (double t : row.theta) *dst << ',' << format_double(t);
    *dst << ',' << format_double(row.residual) << '\n';
    worst = std::max(worst, row.residual);
  }
  if (worst > 1e-10)
    err << "warning: largest boundary residual " << format_double(worst)
        << " exceeds 1e-10\n";
  return kExitOk;
}

DistributionSpec make_spec(const Options& o, const AffineModel& model) {
  const double tol = o.tol < 0.0 ? 0.0 : o.tol;
  return DistributionSpec(model, parse_vector(o.a, "a"), o.lambda, tol);
}

int cmd_pgf(const Options& o, std::ostream& out) {
  const AffineModel model = load_model(o.model_path);
  const auto pgf = normalized_pgf(make_spec(o, model));
  if (o.json_out) {
    json terms = json::object();
    for (const auto& [t, c] : pgf.terms) terms[t.to_string()] = c;
    out << dump(json{{"n", pgf.n}, {"constant", pgf.constant}, {"terms", terms}})
        << '\n';
    return kExitOk;
  }
  out << "T\tcoefficient\n";
  out << "{}\t" << format_double(pgf.constant) << '\n';
  for (const auto& [t, c] : pgf.terms)
    out << t.to_string() << '\t' << format_double(c) << '\n';
  return kExitOk;
}

int cmd_pmf(const Options& o, std::ostream& out) {
  const AffineModel model = load_model(o.model_path);
  const PmfTable table = pmf(make_spec(o, model), o.degree);
  const auto& probs = table.probabilities();
  const auto& basis = probs.basis();
  if (o.json_out) {
    json rows = json::array();
    for (std::size_t i = 0; i < probs.size(); ++i)
      rows.push_back({{"alpha", alpha_json(basis.exponents(i))}, {"p", probs[i]}});
    out << dump(json{{"degree", o.degree},
                     {"tail_mass", table.tail_mass()},
                     {"pmf", rows}})
        << '\n';
    return kExitOk;
  }
  if (o.csv) out << alpha_header(model.dimension()) << ",p\n";
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (o.csv)
      out << alpha_csv(basis.exponents(i)) << ',' << format_double(probs[i]) << '\n';
    else
      out << '(' << alpha_csv(basis.exponents(i)) << ")\t" << format_double(probs[i])
          << '\n';
  }
  if (!o.csv) out << "tail_mass=" << format_double(table.tail_mass()) << '\n';
  return kExitOk;
}

int cmd_sample(const Options& o, std::ostream& out) {
  const AffineModel model = load_model(o.model_path);
  const DistributionSpec spec = make_spec(o, model);
  const int degree = o.degree_opt ? *o.degree_opt : sampler_degree(spec);
  const auto draws = sample(spec, o.count, o.seed, degree);
  if (o.json_out) {
    out << dump(json{{"seed", o.seed}, {"degree", degree}, {"draws", draws}}) << '\n';
    return kExitOk;
  }
  out << alpha_header(model.dimension()) << '\n';
  for (const auto& d : draws) {
    for (std::size_t i = 0; i < d.size(); ++i) out << (i ? "," : "") << d[i];
    out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Infinitely divisible negative multinomial distributions"};
  app.name("negmnom");
  app.require_subcommand(1, 1);
  Options o;
  std::function<int()> action;

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", o.model_path, "Model JSON file")->required();
  };
  auto add_format = [&](CLI::App* sub, bool with_csv) {
    auto* j = sub->add_flag("--json", o.json_out, "JSON output");
    if (with_csv) sub->add_flag("--csv", o.csv, "CSV output")->excludes(j);
  };

  auto* check = app.add_subcommand("check-id", "b_T table and divisibility verdict");
  add_model(check);
  check->add_option("--tol", o.tol, "Slack on b_T >= 0")->check(CLI::NonNegativeNumber);
  add_format(check, false);
  check->callback([&] { action = [&] { return cmd_check_id(o, out, true); }; });

  auto* bt = app.add_subcommand("bt", "b_T table");
  add_model(bt);
  add_format(bt, false);
  bt->callback([&] { action = [&] { return cmd_check_id(o, out, false); }; });

  auto* expand = app.add_subcommand("expand", "Coefficients of (1-P)^-lambda");
  add_model(expand);
  expand->add_option("--lambda", o.lambda)->required();
  expand->add_option("--degree", o.degree)->required();
  add_format(expand, true);
  expand->callback([&] { action = [&] { return cmd_expand(o, out); }; });

  auto setup_contains = [&](CLI::App* sub) {
    add_model(sub);
    sub->add_option("--theta", o.theta, "Comma-separated point")->required();
    sub->add_option("--tol", o.tol, "Boundary band on the margin")
        ->check(CLI::NonNegativeNumber);
    add_format(sub, false);
    sub->callback([&] { action = [&] { return cmd_contains(o, out); }; });
  };
  auto setup_boundary = [&](CLI::App* sub) {
    add_model(sub);
    sub->add_option("--range", o.range, "lo:hi:step for s1")->required();
    sub->add_option("--range2", o.range2, "lo:hi:step for s2 (n = 3)");
    sub->add_option("--out", o.out_path, "CSV destination (default stdout)");
    sub->add_option("--threads", o.threads)->check(CLI::Range(1u, 64u));
    sub->add_flag("--csv", o.csv, "CSV output (the only format)");
    sub->callback([&] { action = [&] { return cmd_boundary(o, out, err); }; });
  };

  auto* domain = app.add_subcommand("domain", "Domain of the Laplace transform");
  domain->require_subcommand(1, 1);
  setup_contains(domain->add_subcommand("contains", "Membership of theta"));
  setup_boundary(domain->add_subcommand("boundary", "Boundary point cloud"));
  setup_contains(app.add_subcommand("domain-contains", "Membership of theta"));
  setup_boundary(app.add_subcommand("domain-boundary", "Boundary point cloud"));

  auto setup_spec = [&](CLI::App* sub, bool needs_lambda) {
    add_model(sub);
    sub->add_option("--a", o.a, "Comma-separated positive shift")->required();
    auto* lam = sub->add_option("--lambda", o.lambda);
    if (needs_lambda) lam->required();
    sub->add_option("--tol", o.tol, "Slack on b_T >= 0")->check(CLI::NonNegativeNumber);
  };

  auto* pgf = app.add_subcommand("pgf", "Normalized PGF kernel");
  setup_spec(pgf, false);
  add_format(pgf, false);
  pgf->callback([&] { action = [&] { return cmd_pgf(o, out); }; });

  auto* pmf_cmd = app.add_subcommand("pmf", "Probability table");
  setup_spec(pmf_cmd, true);
  pmf_cmd->add_option("--degree", o.degree)->required();
  add_format(pmf_cmd, true);
  pmf_cmd->callback([&] { action = [&] { return cmd_pmf(o, out); }; });

  auto* sample_cmd = app.add_subcommand("sample", "Seeded draws");
  setup_spec(sample_cmd, true);
  sample_cmd->add_option("--count", o.count)->required();
  sample_cmd->add_option("--seed", o.seed)->required();
  sample_cmd->add_option("--degree", o.degree_opt, "Truncation degree (default: automatic)");
  add_format(sample_cmd, true);
  sample_cmd->callback([&] { action = [&] { return cmd_sample(o, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "negmnom: " << msg << '\n';
    return kExitError;
  }

  try {
    return action();
  } catch (const DomainRejected& e) {
    err << "negmnom: rejected: " << e.what() << '\n';
    return kExitNegative;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "negmnom: " << msg << '\n';
    return kExitError;
  }
}

}  // namespace negmnom::cli

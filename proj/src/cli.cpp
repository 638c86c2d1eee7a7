#include "bdtree/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>

#include "bdtree/bounds.hpp"
#include "bdtree/error.hpp"
#include "bdtree/io.hpp"
#include "bdtree/operators.hpp"
#include "bdtree/report.hpp"
#include "bdtree/spectral.hpp"
#include "bdtree/tree.hpp"

namespace bdtree {

namespace {

// Relative slack when comparing a certificate with the exact eigenvalue.
constexpr double kExactSlack = 1e-10;
// path_indicator_delta is quadratic in the vertex count.
constexpr std::size_t kPathIndicatorLimit = 5000;

const std::vector<Family> kAllFamilies = {Family::F_I,     Family::F_II,     Family::W,
                                          Family::F_I_mod, Family::F_II_mod, Family::W_mod};

struct Options {
  bool json = false;
  std::string tree_file;
  std::string eigenfunction_file;
  int iterate = 1;
  std::vector<std::string> families;
  std::vector<int> layers;
  std::string witness_file;
  std::string family;
  int cutoff = 0;
  bool check_exact = false;
  std::uint64_t seed = 1;
  std::size_t size = 50;
  std::size_t min_size = 2;
  double rate_min = 0.1;
  double rate_max = 10.0;
  double path_bias = RandomTreeOptions{}.path_bias;
};

void emit(const Report& report, const Options& o, std::ostream& out) {
  out << (o.json ? render_json(report) : render_text(report));
}

bool strictly_increasing(const RootedTree& tree, const VertexFunction& g) {
  for (Vertex i = 1; i < tree.size(); ++i) {
    if (!(g[i] > g[tree.parent(i)])) return false;
  }
  return true;
}

ExactSummary exact_summary(const RootedTree& tree, const EigenPair& pair) {
  return {pair.lambda0, pair.residual, strictly_increasing(tree, pair.g), pair.g};
}

int cmd_exact(const Options& o, std::ostream& out) {
  const auto tree = read_tree_file(o.tree_file);
  const auto measure = compute_measure(tree);
  Report report;
  report.command = "exact";
  report.tree = summarize(tree, measure);
  int code = kExitOk;
  try {
    const auto pair = solve_dirichlet(tree, measure);
    report.exact = exact_summary(tree, pair);
    if (!report.exact->monotone) {
      report.status = Status::Partial;
      report.messages.push_back("eigenfunction is not strictly increasing along every edge");
    }
    if (!o.eigenfunction_file.empty()) {
      std::ofstream file(o.eigenfunction_file);
      if (!file) throw Error(Errc::IoError, "cannot write '" + o.eigenfunction_file + "'");
      file << serialize_vertex_function(pair.g);
    }
  } catch (const ConvergenceFailure& e) {
    report.exact = ExactSummary{e.estimate(), e.residual(), false, {}};
    report.status = Status::Partial;
    report.messages.push_back(e.what());
    code = kExitConvergence;
  }
  emit(report, o, out);
  return code;
}

std::vector<Family> selected_families(const Options& o) {
  if (o.families.empty()) return kAllFamilies;
  std::vector<bool> wanted(kAllFamilies.size(), false);
  for (const auto& name : o.families) {
    const auto family = parse_family(name);
    if (!family) throw Error(Errc::InvalidFamily, "unknown family '" + name + "'");
    wanted[static_cast<std::size_t>(*family)] = true;
  }
  std::vector<Family> out;
  for (Family f : kAllFamilies) {
    if (wanted[static_cast<std::size_t>(f)]) out.push_back(f);
  }
  return out;
}

int cmd_bounds(const Options& o, std::ostream& out) {
  const auto families = selected_families(o);
  const auto tree = read_tree_file(o.tree_file);
  const auto measure = compute_measure(tree);
  Report report;
  report.command = "bounds";
  report.tree = summarize(tree, measure);

  const auto closed = closed_form_bounds(tree, measure);
  ClosedFormSummary cf{closed.delta, closed.argmax_delta, closed.sup_C, closed.lower, closed.upper,
                       std::nullopt};
  if (tree.size() <= kPathIndicatorLimit) {
    cf.path_indicator_delta = path_indicator_delta(tree, measure).delta;
  } else {
    report.messages.push_back("path indicator delta skipped above " +
                              std::to_string(kPathIndicatorLimit) + " vertices");
  }
  report.closed_form = cf;

  // Witnesses: sqrt(phi) for F_I; the o.iterate-th double-sum iterate from
  // f = 1 for the other families, whose ratio serves the W families.
  VertexFunction start(tree.size(), 1.0);
  start[kRoot] = 0.0;
  const auto iterates = iterate_double_sum(tree, measure, start, o.iterate);
  const auto& h = iterates.back().f;
  const auto w = ratio_function(tree, h);
  const int n = flat_cutoff(tree, h);
  const std::string iterate_source = "double_sum_iterate_" + std::to_string(o.iterate);

  for (Family family : families) {
    switch (family) {
      case Family::F_I:
        report.certificates.push_back(
            summarize("sqrt_phi", lower_bound(tree, measure, sqrt_phi_function(tree, measure),
                                              DomainTag::make(Family::F_I))));
        break;
      case Family::F_II:
        report.certificates.push_back(summarize(iterate_source, iterates.back().lower));
        break;
      case Family::W:
        report.certificates.push_back(summarize(
            "ratio_of_" + iterate_source, lower_bound(tree, measure, w, DomainTag::make(Family::W))));
        break;
      case Family::F_I_mod:
        report.certificates.push_back(summarize(
            iterate_source, upper_bound(tree, measure, h, DomainTag::make(Family::F_I_mod, n))));
        break;
      case Family::F_II_mod:
        report.certificates.push_back(summarize(iterate_source, iterates.back().upper));
        break;
      case Family::W_mod:
        report.certificates.push_back(
            summarize("ratio_of_" + iterate_source,
                      upper_bound(tree, measure, w,
                                  DomainTag::make(Family::W_mod, ratio_cutoff(tree, w)))));
        break;
    }
  }
  if (!bounds_consistent(report, kExactSlack)) {
    report.status = Status::Partial;
    report.messages.push_back("a lower bound exceeds an upper bound");
  }
  emit(report, o, out);
  return kExitOk;
}

int cmd_approx(const Options& o, std::ostream& out) {
  const auto tree = read_tree_file(o.tree_file);
  const auto measure = compute_measure(tree);
  Report report;
  report.command = "approx";
  report.tree = summarize(tree, measure);
  std::vector<ApproxRow> rows;
  for (const auto& entry : lambda0_sequence(tree, measure, o.layers)) {
    rows.push_back({entry.layer, entry.lambda0});
  }
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].lambda0 > rows[k - 1].lambda0 * (1.0 + kExactSlack)) {
      report.status = Status::Partial;
      report.messages.push_back("sequence increases at layer " + std::to_string(rows[k].layer));
    }
  }
  report.approx = std::move(rows);
  emit(report, o, out);
  return kExitOk;
}

int cmd_certify(const Options& o, std::ostream& out) {
  const auto family = parse_family(o.family);
  if (!family) throw Error(Errc::InvalidFamily, "unknown family '" + o.family + "'");
  const auto tree = read_tree_file(o.tree_file);
  const auto measure = compute_measure(tree);
  const auto witness = read_vertex_function_file(o.witness_file, tree.size());

  std::optional<int> cutoff;
  if (o.cutoff != 0) cutoff = o.cutoff;
  if (is_modified(*family) && !cutoff) {
    cutoff = *family == Family::W_mod ? ratio_cutoff(tree, witness) : flat_cutoff(tree, witness);
  }
  const auto tag = DomainTag::make(*family, cutoff);

  Report report;
  report.command = "certify";
  report.tree = summarize(tree, measure);
  const auto check = check_domain(tree, witness, tag);
  report.domain = DomainVerdict{tag, check.admissible, check.vertex, check.condition};
  if (!check) {
    report.status = Status::Failed;
    report.messages.push_back("witness is not admissible for " + o.family);
    emit(report, o, out);
    return kExitDomain;
  }
  const auto cert = is_modified(*family) ? upper_bound(tree, measure, witness, tag)
                                         : lower_bound(tree, measure, witness, tag);
  report.certificates.push_back(summarize("witness_file", cert));

  int code = kExitOk;
  if (o.check_exact) {
    try {
      const auto pair = solve_dirichlet(tree, measure);
      report.exact = exact_summary(tree, pair);
      if (!bounds_consistent(report, kExactSlack)) {
        report.status = Status::Failed;
        report.messages.push_back("certificate contradicts the exact eigenvalue");
        code = kExitDomain;
      }
    } catch (const ConvergenceFailure& e) {
      report.exact = ExactSummary{e.estimate(), e.residual(), false, {}};
      report.status = Status::Partial;
      report.messages.push_back(e.what());
      code = kExitConvergence;
    }
  }
  emit(report, o, out);
  return code;
}

int cmd_random(const Options& o, std::ostream& out) {
  RandomTreeOptions options;
  options.min_vertices = o.min_size;
  options.max_vertices = o.size;
  options.rate_min = o.rate_min;
  options.rate_max = o.rate_max;
  options.path_bias = o.path_bias;
  out << serialize_tree(random_tree(o.seed, options));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Certified bounds for the first Dirichlet eigenvalue of birth-death processes on trees",
               "bdtree"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", o.json, "Emit the report as JSON");

  auto* exact = app.add_subcommand("exact", "Solve the Dirichlet eigenproblem exactly");
  exact->add_option("file", o.tree_file, "Tree file")->required();
  exact->add_option("--eigenfunction", o.eigenfunction_file,
                    "Also write the eigenfunction to this file");

  auto* bounds = app.add_subcommand("bounds", "Closed-form and variational bounds");
  bounds->add_option("file", o.tree_file, "Tree file")->required();
  bounds->add_option("--iterate", o.iterate, "Double-sum iteration steps")
      ->check(CLI::Range(1, 1000000));
  bounds->add_option("--families", o.families, "Families to certify (default: all)")
      ->delimiter(',');

  auto* approx = app.add_subcommand("approx", "Eigenvalues of the tree collapsed at layers");
  approx->add_option("file", o.tree_file, "Tree file")->required();
  approx->add_option("--layers", o.layers, "Ascending layer list")->delimiter(',')->required();

  auto* certify = app.add_subcommand("certify", "Check a witness and emit its certificate");
  certify->add_option("file", o.tree_file, "Tree file")->required();
  certify->add_option("--witness", o.witness_file, "Witness function file")->required();
  certify->add_option("--family", o.family, "F_I, F_II, W, F_I_mod, F_II_mod or W_mod")
      ->required();
  certify->add_option("--cutoff", o.cutoff, "Cutoff layer of a modified family")
      ->check(CLI::PositiveNumber);
  certify->add_flag("--check-exact", o.check_exact, "Compare against the exact eigenvalue");

  auto* random = app.add_subcommand("random", "Print a random tree file");
  random->add_option("--seed", o.seed, "Generator seed")->required();
  random->add_option("--size", o.size, "Maximum vertex count")->required();
  random->add_option("--min-size", o.min_size, "Minimum vertex count");
  random->add_option("--rate-min", o.rate_min, "Smallest rate")->required();
  random->add_option("--rate-max", o.rate_max, "Largest rate")->required();
  random->add_option("--path-bias", o.path_bias, "Probability of extending the newest vertex");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*exact) return cmd_exact(o, out);
    if (*bounds) return cmd_bounds(o, out);
    if (*approx) return cmd_approx(o, out);
    if (*certify) return cmd_certify(o, out);
    if (*random) return cmd_random(o, out);
  } catch (const ConvergenceFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::DomainViolation ? kExitDomain : kExitInput;
  }
  return kExitInput;
}

}  // namespace bdtree

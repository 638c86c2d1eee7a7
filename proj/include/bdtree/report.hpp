#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bdtree/bounds.hpp"
#include "bdtree/operators.hpp"
#include "bdtree/tree.hpp"
#include "bdtree/vertex_function.hpp"

namespace bdtree {

enum class Status { Ok, Partial, Failed };

struct TreeSummary {
  std::size_t vertices = 0;
  int max_layer = 0;
  double total_measure = 0.0;
};

struct ExactSummary {
  double lambda0 = 0.0;
  double residual = 0.0;
  bool monotone = false;
  VertexFunction eigenfunction;
};

struct ClosedFormSummary {
  double delta = 0.0;
  Vertex argmax_delta = 0;
  long long sup_C = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> path_indicator_delta;
};

struct CertificateSummary {
  std::string source;  // which construction produced the witness
  BoundKind kind = BoundKind::Lower;
  DomainTag family;
  double value = 0.0;
  Vertex extremal_vertex = 0;
  VertexFunction witness;
};

struct ApproxRow {
  int layer = 0;
  double lambda0 = 0.0;
};

struct DomainVerdict {
  DomainTag family;
  bool admissible = false;
  std::optional<Vertex> vertex;
  std::string condition;
};

// Everything a CLI subcommand prints. Rendering order is fixed.
struct Report {
  std::string command;
  std::optional<TreeSummary> tree;
  std::optional<ExactSummary> exact;
  std::optional<ClosedFormSummary> closed_form;
  std::vector<CertificateSummary> certificates;
  std::optional<std::vector<ApproxRow>> approx;
  std::optional<DomainVerdict> domain;
  Status status = Status::Ok;
  std::vector<std::string> messages;
};

TreeSummary summarize(const RootedTree& tree, const Measure& measure);
CertificateSummary summarize(std::string source, const BoundCertificate& cert);

// Exactly 12 significant digits, trailing zeros kept; "inf" for infinity.
std::string format_number(double x);

std::string status_name(Status status);

std::string render_text(const Report& report);
std::string render_json(const Report& report);

// Every lower value <= every upper value (and <= exact <= upper when the
// exact value is present), with relative slack `tolerance`.
bool bounds_consistent(const Report& report, double tolerance);

}  // namespace bdtree

#include "bdtree/report.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace bdtree {

namespace {

std::string inline_function(const VertexFunction& f) {
  std::string out;
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (v) out += ' ';
    out += std::to_string(v) + ":" + format_number(f[v]);
  }
  return out;
}

std::string kind_name(BoundKind kind) { return kind == BoundKind::Lower ? "lower" : "upper"; }

std::string cutoff_text(const DomainTag& tag) {
  return tag.cutoff_layer ? std::to_string(*tag.cutoff_layer) : "none";
}

// JSON mirrors the text report: values are the 12-digit numbers, read back.
nlohmann::json number(double x) {
  if (std::isinf(x)) return format_number(x);
  return std::stod(format_number(x));
}

nlohmann::json function_json(const VertexFunction& f) {
  auto out = nlohmann::json::array();
  for (double v : f.values()) out.push_back(number(v));
  return out;
}

class Lines {
 public:
  void add(const std::string& key, const std::string& value) {
    text_ += key + ": " + value + "\n";
  }
  std::string take() { return std::move(text_); }

 private:
  std::string text_;
};

}  // namespace

TreeSummary summarize(const RootedTree& tree, const Measure& measure) {
  return {tree.size(), tree.max_layer(), measure.total()};
}

CertificateSummary summarize(std::string source, const BoundCertificate& cert) {
  return {std::move(source), cert.kind, cert.family, cert.value, cert.extremal_vertex,
          cert.witness};
}

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  // snprintf honours LC_NUMERIC; the library never changes the C locale.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g", x);
  return buf;
}

std::string status_name(Status status) {
  switch (status) {
    case Status::Ok: return "ok";
    case Status::Partial: return "partial";
    case Status::Failed: return "failed";
  }
  return "failed";
}

std::string render_text(const Report& r) {
  Lines out;
  out.add("command", r.command);
  if (r.tree) {
    out.add("tree.vertices", std::to_string(r.tree->vertices));
    out.add("tree.max_layer", std::to_string(r.tree->max_layer));
    out.add("tree.total_measure", format_number(r.tree->total_measure));
  }
  if (r.exact) {
    out.add("exact.lambda0", format_number(r.exact->lambda0));
    out.add("exact.residual", format_number(r.exact->residual));
    out.add("exact.monotone", r.exact->monotone ? "true" : "false");
    out.add("exact.eigenfunction", inline_function(r.exact->eigenfunction));
  }
  if (r.closed_form) {
    const auto& c = *r.closed_form;
    out.add("closed_form.delta", format_number(c.delta));
    out.add("closed_form.argmax", std::to_string(c.argmax_delta));
    out.add("closed_form.sup_C", std::to_string(c.sup_C));
    out.add("closed_form.lower", format_number(c.lower));
    out.add("closed_form.upper", format_number(c.upper));
    out.add("closed_form.path_indicator_delta",
            c.path_indicator_delta ? format_number(*c.path_indicator_delta) : "skipped");
  }
  if (!r.certificates.empty()) {
    out.add("certificates", std::to_string(r.certificates.size()));
    for (std::size_t k = 0; k < r.certificates.size(); ++k) {
      const auto& c = r.certificates[k];
      const std::string key = "certificate." + std::to_string(k) + ".";
      out.add(key + "source", c.source);
      out.add(key + "kind", kind_name(c.kind));
      out.add(key + "family", std::string(family_name(c.family.family)));
      out.add(key + "cutoff", cutoff_text(c.family));
      out.add(key + "value", format_number(c.value));
      out.add(key + "vertex", std::to_string(c.extremal_vertex));
      out.add(key + "witness", inline_function(c.witness));
    }
  }
  if (r.approx) {
    out.add("approx", std::to_string(r.approx->size()));
    for (std::size_t k = 0; k < r.approx->size(); ++k) {
      const auto& row = (*r.approx)[k];
      out.add("approx." + std::to_string(k),
              std::to_string(row.layer) + " " + format_number(row.lambda0));
    }
  }
  if (r.domain) {
    out.add("domain.family", std::string(family_name(r.domain->family.family)));
    out.add("domain.cutoff", cutoff_text(r.domain->family));
    out.add("domain.admissible", r.domain->admissible ? "true" : "false");
    if (!r.domain->admissible) {
      out.add("domain.vertex", r.domain->vertex ? std::to_string(*r.domain->vertex) : "none");
      out.add("domain.condition", r.domain->condition);
    }
  }
  out.add("status", status_name(r.status));
  for (const auto& m : r.messages) out.add("message", m);
  return out.take();
}

std::string render_json(const Report& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["command"] = r.command;
  if (r.tree) {
    j["tree"] = {{"vertices", r.tree->vertices},
                 {"max_layer", r.tree->max_layer},
                 {"total_measure", number(r.tree->total_measure)}};
  }
  if (r.exact) {
    j["exact"] = {{"lambda0", number(r.exact->lambda0)},
                  {"residual", number(r.exact->residual)},
                  {"monotone", r.exact->monotone},
                  {"eigenfunction", function_json(r.exact->eigenfunction)}};
  }
  if (r.closed_form) {
    const auto& c = *r.closed_form;
    j["closed_form"] = {{"delta", number(c.delta)},
                        {"argmax", c.argmax_delta},
                        {"sup_C", c.sup_C},
                        {"lower", number(c.lower)},
                        {"upper", number(c.upper)}};
    j["closed_form"]["path_indicator_delta"] =
        c.path_indicator_delta ? ordered_json(number(*c.path_indicator_delta)) : ordered_json();
  }
  if (!r.certificates.empty()) {
    auto certs = ordered_json::array();
    for (const auto& c : r.certificates) {
      ordered_json e;
      e["source"] = c.source;
      e["kind"] = kind_name(c.kind);
      e["family"] = std::string(family_name(c.family.family));
      e["cutoff"] = c.family.cutoff_layer ? ordered_json(*c.family.cutoff_layer) : ordered_json();
      e["value"] = number(c.value);
      e["vertex"] = c.extremal_vertex;
      e["witness"] = function_json(c.witness);
      certs.push_back(std::move(e));
    }
    j["certificates"] = std::move(certs);
  }
  if (r.approx) {
    auto rows = ordered_json::array();
    for (const auto& row : *r.approx) {
      rows.push_back({{"layer", row.layer}, {"lambda0", number(row.lambda0)}});
    }
    j["approx"] = std::move(rows);
  }
  if (r.domain) {
    ordered_json d;
    d["family"] = std::string(family_name(r.domain->family.family));
    d["cutoff"] = r.domain->family.cutoff_layer ? ordered_json(*r.domain->family.cutoff_layer)
                                                : ordered_json();
    d["admissible"] = r.domain->admissible;
    if (!r.domain->admissible) {
      d["vertex"] = r.domain->vertex ? ordered_json(*r.domain->vertex) : ordered_json();
      d["condition"] = r.domain->condition;
    }
    j["domain"] = std::move(d);
  }
  j["status"] = status_name(r.status);
  j["messages"] = r.messages;
  return j.dump(2) + "\n";
}

bool bounds_consistent(const Report& r, double tolerance) {
  std::vector<double> lowers;
  std::vector<double> uppers;
  if (r.closed_form) {
    lowers.push_back(r.closed_form->lower);
    uppers.push_back(r.closed_form->upper);
  }
  for (const auto& c : r.certificates) {
    (c.kind == BoundKind::Lower ? lowers : uppers).push_back(c.value);
  }
  if (r.exact) {
    lowers.push_back(r.exact->lambda0);
    uppers.push_back(r.exact->lambda0);
  }
  for (double lo : lowers) {
    for (double hi : uppers) {
      if (lo > hi + tolerance * std::abs(hi)) return false;
    }
  }
  return true;
}

}  // namespace bdtree

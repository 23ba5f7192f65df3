#include "asymwave/report_io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include "asymwave/errors.hpp"

namespace asymwave {

namespace {

using nlohmann::ordered_json;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

template <class T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json report_object(const BifurcationReport& r) {
  ordered_json j;
  j["model"] = r.model;
  j["k1"] = r.k1;
  j["k2"] = r.k2;
  j["coprime"] = r.coprime;
  j["order"] = r.order;
  j["exploratory"] = r.exploratory;
  if (r.mu0) {
    ordered_json mu = ordered_json::object();
    for (std::size_t i = 0; i < r.mu0->size(); ++i) mu[r.mu0->names()[i]] = (*r.mu0)[i];
    j["mu0"] = mu;
  } else {
    j["mu0"] = nullptr;
  }
  if (r.certificate) {
    const auto& c = *r.certificate;
    j["kernel_certificate"] = {
        {"passed", c.passed},
        {"kernel_dimension", c.kernel_dimension},
        {"k_check", c.k_check},
        {"min_gap", c.min_gap},
        {"min_gap_k", c.min_gap_k},
        {"residual_k1", c.residual_k1},
        {"residual_k2", c.residual_k2},
        {"growth_ok", c.growth_ok},
        {"growth_witness", c.growth_witness},
        {"extra_roots", c.extra_roots},
    };
  } else {
    j["kernel_certificate"] = nullptr;
  }
  j["resonance_nhat"] = opt(r.resonance_nhat);
  j["order_scale"] = opt(r.order_scale);
  j["zero_threshold"] = r.zero_threshold;
  j["C_scaled"] = opt(r.C_scaled);
  if (!r.transversality) {
    j["transversality"] = nullptr;
  } else if (r.transversality->degenerate) {
    j["transversality"] = kDegenerateMarker;
  } else {
    const auto& t = *r.transversality;
    j["transversality"] = {
        {"params", t.params},
        {"jacobian", t.jacobian},
        {"determinant", t.determinant},
        {"determinant_error", t.determinant_error},
        {"steps", t.steps},
    };
  }
  j["verdict"] = std::string(to_string(r.verdict));
  j["diagnostics"] = r.diagnostics;
  return j;
}

}  // namespace

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::string to_csv(std::span<const BifurcationReport> rows) {
  std::vector<std::string> mu_names;
  for (const auto& r : rows) {
    if (r.model != rows.front().model)
      throw Error(ErrorKind::InvalidArgument, "CSV rows must share one model");
    if (r.mu0 && mu_names.empty()) mu_names = r.mu0->names();
  }
  if (mu_names.empty() && !rows.empty())
    mu_names = Model(parse_model_kind(rows.front().model)).parameter_names();

  std::string out = "model,k1,k2,coprime,order";
  for (const auto& n : mu_names) out += ",mu0_" + n;
  out += ",resonance_nhat,C_scaled,transversality_det,verdict,diagnostics\n";

  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{}", r.model, r.k1, r.k2, r.coprime ? 1 : 0, r.order);
    for (std::size_t i = 0; i < mu_names.size(); ++i)
      out += "," + (r.mu0 ? format_number((*r.mu0)[i]) : std::string());
    out += "," + (r.resonance_nhat ? format_number(*r.resonance_nhat) : std::string());
    out += "," + (r.C_scaled ? format_number(*r.C_scaled) : std::string());
    std::string det;
    if (r.transversality)
      det = r.transversality->degenerate ? kDegenerateMarker
                                         : format_number(r.transversality->determinant);
    out += "," + det;
    out += fmt::format(",{},{}\n", to_string(r.verdict), csv_escape(join(r.diagnostics, "; ")));
  }
  return out;
}

std::string to_json(const BifurcationReport& report) {
  return report_object(report).dump(2) + "\n";
}

std::string to_json(std::span<const BifurcationReport> rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) arr.push_back(report_object(r));
  return arr.dump(2) + "\n";
}

}  // namespace asymwave

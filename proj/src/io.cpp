#include "quadfr/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace quadfr {

namespace {

struct NamedMatrix {
  std::string name;
  Eigen::MatrixXd value;
};

std::vector<NamedMatrix> collect(const OperatorSet& ops, const SchemeInstance* scheme) {
  std::vector<NamedMatrix> out = {
      {"V", ops.V},   {"M", ops.M},   {"Dx", ops.Dx}, {"Dy", ops.Dy},
      {"L", ops.L},   {"W", ops.W},   {"Nx", ops.Nx}, {"Ny", ops.Ny},
  };
  if (scheme) {
    out.push_back({"Q", scheme->Q});
    out.push_back({"C", scheme->C});
  }
  return out;
}

void append_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

nlohmann::json mode_json(ModeIndex m) { return nlohmann::json::array({m.v, m.w}); }

nlohmann::json metadata(const OperatorSet& ops) {
  nlohmann::json j;
  j["basis"] = ops.basis.name();
  j["basis_kind"] = to_string(ops.basis.kind);
  j["k_max"] = ops.basis.k_max;
  j["norm_p"] = std::isinf(ops.basis.norm_p) ? nlohmann::json("inf") : nlohmann::json(ops.basis.norm_p);
  j["ordering"] = to_string(ops.basis.ordering);
  j["point_set"] = ops.points.label;
  j["n_sol"] = ops.n_sol();
  j["n_flux"] = ops.n_flux();
  j["face_order"] = {"bottom", "right", "top", "left"};
  nlohmann::json modes = nlohmann::json::array();
  for (auto m : ops.basis.modes) modes.push_back(mode_json(m));
  j["modes"] = modes;
  return j;
}

}  // namespace

std::string git_blob_hash(std::string_view content) {
  std::string data = "blob " + std::to_string(content.size());
  data.push_back('\0');
  data.append(content);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("SHA-1 digest failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

std::string operator_hash(const OperatorSet& ops, const SchemeInstance* scheme) {
  std::string bytes;
  for (const auto& [name, m] : collect(ops, scheme)) {
    bytes += name;
    bytes.push_back('\0');
    append_u64(bytes, static_cast<std::uint64_t>(m.rows()));
    append_u64(bytes, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) append_u64(bytes, std::bit_cast<std::uint64_t>(m(i, j)));
  }
  return git_blob_hash(bytes);
}

nlohmann::json to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json operators_json(const OperatorSet& ops, const SchemeInstance* scheme) {
  nlohmann::json j;
  j["metadata"] = metadata(ops);
  j["metadata"]["operator_hash"] = operator_hash(ops, scheme);
  nlohmann::json pts = nlohmann::json::array();
  for (auto p : ops.points.coords) pts.push_back({p.x, p.y});
  j["solution_points"] = pts;
  nlohmann::json fpts = nlohmann::json::array();
  for (auto p : ops.faces.all_points()) fpts.push_back({p.x, p.y});
  j["flux_points"] = fpts;
  for (const auto& [name, m] : collect(ops, scheme)) j["matrices"][name] = to_json(m);
  if (scheme) j["metadata"]["q"] = scheme->q_values;
  return j;
}

std::string operators_csv(const OperatorSet& ops, const SchemeInstance* scheme) {
  std::ostringstream os;
  const auto meta = metadata(ops);
  for (const auto& key : {"basis", "ordering", "point_set", "n_sol", "n_flux"})
    os << "# " << key << ": " << (meta[key].is_string() ? meta[key].get<std::string>() : meta[key].dump())
       << '\n';
  os << "# operator_hash: " << operator_hash(ops, scheme) << '\n';
  os << "matrix,row,col,value\n" << std::setprecision(17);
  for (const auto& [name, m] : collect(ops, scheme))
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        os << name << ',' << i << ',' << j << ',' << m(i, j) << '\n';
  return os.str();
}

nlohmann::json family_json(const QFamily& family, const OperatorSet& ops) {
  nlohmann::json j;
  j["basis"] = family.basis.name();
  j["n_params"] = family.n_params();
  j["labels"] = family.canonical_labels;
  j["reference_family"] = family.reference ? nlohmann::json(to_string(*family.reference)) : nlohmann::json();
  const std::size_t n = family.basis.size();
  nlohmann::json gens = nlohmann::json::array();
  for (std::size_t g = 0; g < family.n_params(); ++g) {
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = r; c < n; ++c) {
        const double v = family.generators[g](r, c);
        if (v == 0.0) continue;
        nlohmann::json e = {{"row", mode_json(family.basis.modes[r])},
                            {"col", mode_json(family.basis.modes[c])},
                            {"value", v}};
        if (g < family.exact_generators.size()) {
          const std::size_t idx = r * n - r * (r - 1) / 2 + (c - r);
          e["exact"] = family.exact_generators[g][idx].str();
        }
        entries.push_back(std::move(e));
      }
    }
    gens.push_back({{"label", family.canonical_labels[g]}, {"entries", entries}});
  }
  j["generators"] = gens;

  nlohmann::json table = nlohmann::json::array();
  if (family.reference) {
    const auto suite = inequality_suite(*family.reference);
    // Agreement of the closed-form conditions with the Cholesky test on a
    // deterministic sample of the box [-0.6, 0.6]^m.
    SeededRng rng(0);
    const int samples = 2000;
    std::vector<int> agree_count(suite.size(), 0);
    int conjunction_agree = 0;
    std::vector<double> q(family.n_params());
    for (int s = 0; s < samples; ++s) {
      for (auto& x : q) x = rng.uniform(-0.6, 0.6);
      const bool stable = check_stability(ops, family, q).stable;
      bool all = true;
      for (std::size_t i = 0; i < suite.size(); ++i) {
        const bool h = suite[i].holds(q);
        all = all && h;
        if (h || !stable) ++agree_count[i];
      }
      if (all == stable) ++conjunction_agree;
    }
    const std::vector<double> zero(family.n_params(), 0.0);
    for (std::size_t i = 0; i < suite.size(); ++i) {
      table.push_back({{"inequality", suite[i].label},
                       {"value_at_zero", suite[i].g(zero)},
                       {"necessary_on_samples", agree_count[i] == samples}});
    }
    j["inequality_check"] = {{"samples", samples},
                             {"box", {-0.6, 0.6}},
                             {"agreement_with_cholesky", conjunction_agree}};
  }
  j["inequalities"] = table;
  return j;
}

nlohmann::json to_json(const StabilityReport& report) {
  nlohmann::json j;
  j["stable"] = report.stable;
  j["failing_pivot"] = report.failing_pivot ? nlohmann::json(*report.failing_pivot) : nlohmann::json();
  j["min_pivot"] = report.min_pivot;
  j["threshold"] = report.threshold;
  return j;
}

nlohmann::json to_json(const MorletConfig& cfg) {
  nlohmann::json j;
  j["n"] = cfg.n;
  j["sigma"] = cfg.sigma;
  j["seed"] = cfg.rng_seed;
  nlohmann::json centres = nlohmann::json::array();
  for (auto c : cfg.centers) centres.push_back({c.x, c.y});
  j["centers"] = centres;
  j["kappas"] = cfg.kappas;
  return j;
}

nlohmann::json make_manifest(std::string_view command, nlohmann::json config) {
  nlohmann::json j;
  j["tool"] = "quadfr";
  j["version"] = "0.1.0";
  j["command"] = std::string(command);
  j["config"] = std::move(config);
  return j;
}

void write_text(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace quadfr

#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "quadfr/experiments.hpp"
#include "quadfr/stability.hpp"

namespace quadfr {

/// SHA-1 of "blob <size>\0" + content, as computed by git hash-object.
std::string git_blob_hash(std::string_view content);

/// Hash of the raw little-endian operator matrices (V, M, Dx, Dy, L, W, Nx,
/// Ny, and Q, C when a scheme is given) in row-major order.
std::string operator_hash(const OperatorSet& ops, const SchemeInstance* scheme = nullptr);

nlohmann::json to_json(const Eigen::MatrixXd& m);
nlohmann::json operators_json(const OperatorSet& ops, const SchemeInstance* scheme = nullptr);

/// Long format "matrix,row,col,value" at 17 significant digits, preceded by
/// "# key: value" metadata lines.
std::string operators_csv(const OperatorSet& ops, const SchemeInstance* scheme = nullptr);

/// Generators with entries keyed by modes, plus the closed-form inequalities
/// checked against Cholesky at sample points.
nlohmann::json family_json(const QFamily& family, const OperatorSet& ops);

nlohmann::json to_json(const StabilityReport& report);
nlohmann::json to_json(const MorletConfig& cfg);

/// Manifest skeleton with version, command and timestamp fields.
nlohmann::json make_manifest(std::string_view command, nlohmann::json config);

void write_text(const std::string& path, std::string_view content);

}  // namespace quadfr

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratum/energy.hpp"
#include "stratum/geometry.hpp"
#include "stratum/materials.hpp"

namespace stratum::io {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* kVersion = "0.1.0";

/// Locale-independent "%.17g" rendering; round-trips doubles exactly.
std::string format_double(double v);

/// Line-oriented profile format: `interval a b`, `knot x y`,
/// `jump x ylow yhigh`, `cut x ybottom ytop`, `#` comments.
geom::Profile load_profile(const std::string& path);
geom::Profile parse_profile(std::istream& in, const std::string& origin);
void save_profile(const geom::Profile& p, std::ostream& out);
void save_profile_file(const geom::Profile& p, const std::string& path);

enum class Lateral { Free, Periodic };

struct Config {
  mat::Materials materials;
  std::optional<double> delta;
  mat::BoundaryLayer f = mat::BoundaryLayer::Atan;
  double fem_depth = 0.0;       // 0: auto (2 max h)
  double fem_resolution = 0.0;  // 0: auto ((b-a)/32)
  double tol_solve = 1e-10;
  Lateral lateral = Lateral::Free;
  std::string snapshot;  // normalized key=value lines for the manifest
};

/// Flat key=value file; unknown keys rejected, invariant violations
/// reported with the failed inequality.
Config load_config(const std::string& path);
Config parse_config(std::istream& in, const std::string& origin);

mat::TransitionParams transition_of(const Config& c);

void emit_report_header(std::ostream& out);
void emit_report(const energy::EnergyReport& r, std::ostream& out);

/// FNV-1a over the byte content of a file.
std::uint64_t file_hash(const std::string& path);
std::uint64_t bytes_hash(const std::string& bytes);

struct RunManifest {
  std::string config_snapshot;
  std::vector<std::pair<std::string, std::uint64_t>> input_hashes;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::vector<std::pair<std::string, double>> tolerances;

  void write(std::ostream& out) const;
};

}  // namespace stratum::io

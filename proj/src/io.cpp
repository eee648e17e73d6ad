#include "stratum/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace stratum::io {

using geom::Interval;
using geom::Profile;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Guard against a comma decimal point from an inherited locale.
  for (char& c : buf) {
    if (c == ',') c = '.';
  }
  return buf;
}

namespace {

double parse_real(const std::string& tok, const std::string& origin,
                  int line) {
  double v = 0.0;
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) {
    throw IoError(origin + ":" + std::to_string(line) +
                  ": malformed number '" + tok + "'");
  }
  return v;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) {
    if (t[0] == '#') break;
    toks.push_back(t);
  }
  return toks;
}

}  // namespace

Profile parse_profile(std::istream& in, const std::string& origin) {
  std::optional<Interval> interval;
  std::vector<geom::Knot> knots;
  std::vector<geom::JumpMark> jumps;
  std::vector<geom::CutMark> cuts;
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    auto want = [&](std::size_t n) {
      if (toks.size() != n + 1) {
        throw IoError(origin + ":" + std::to_string(ln) + ": '" + toks[0] +
                      "' takes " + std::to_string(n) + " numbers");
      }
    };
    auto num = [&](std::size_t i) { return parse_real(toks[i], origin, ln); };
    if (toks[0] == "interval") {
      want(2);
      if (interval) {
        throw IoError(origin + ":" + std::to_string(ln) +
                      ": duplicate interval line");
      }
      try {
        interval.emplace(num(1), num(2));
      } catch (const std::exception& e) {
        throw IoError(origin + ":" + std::to_string(ln) + ": " + e.what());
      }
    } else if (toks[0] == "knot") {
      want(2);
      knots.push_back({num(1), num(2)});
    } else if (toks[0] == "jump") {
      want(3);
      jumps.push_back({num(1), num(2), num(3)});
    } else if (toks[0] == "cut") {
      want(3);
      cuts.push_back({num(1), num(2), num(3)});
    } else {
      throw IoError(origin + ":" + std::to_string(ln) + ": unknown keyword '" +
                    toks[0] + "'");
    }
  }
  if (!interval) throw IoError(origin + ": missing interval line");
  try {
    return Profile(*interval, std::move(knots), std::move(jumps),
                   std::move(cuts));
  } catch (const std::exception& e) {
    throw IoError(origin + ": " + e.what());
  }
}

Profile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  return parse_profile(in, path);
}

void save_profile(const Profile& p, std::ostream& out) {
  out << "interval " << format_double(p.interval().a) << ' '
      << format_double(p.interval().b) << '\n';
  for (const auto& k : p.knots()) {
    out << "knot " << format_double(k.x) << ' ' << format_double(k.y) << '\n';
  }
  for (const auto& j : p.jumps()) {
    out << "jump " << format_double(j.x) << ' ' << format_double(j.y_low)
        << ' ' << format_double(j.y_high) << '\n';
  }
  for (const auto& c : p.cuts()) {
    out << "cut " << format_double(c.x) << ' ' << format_double(c.y_bottom)
        << ' ' << format_double(c.y_top) << '\n';
  }
}

void save_profile_file(const Profile& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  save_profile(p, out);
}

Config parse_config(std::istream& in, const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int ln = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw IoError(origin + ":" + std::to_string(ln) +
                    ": expected key = value");
    }
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }

  double gamma_f = 0.0, gamma_s = 0.0, gamma_fs = 0.0, e0 = 0.0;
  double lf_l = 1.0, lf_m = 1.0, ls_l = 1.0, ls_m = 1.0;
  bool have_gf = false, have_gs = false;
  Config c{mat::Materials(1.0, 1.0, 0.0, 0.0, mat::Tensor4::isotropic(1, 1),
                          mat::Tensor4::isotropic(1, 1)),
           std::nullopt,
           mat::BoundaryLayer::Atan,
           0.0,
           0.0,
           1e-10,
           Lateral::Free,
           ""};
  int ln2 = 0;
  for (const auto& [key, val] : kv) {
    ++ln2;
    auto real = [&, v = val] { return parse_real(v, origin, ln2); };
    if (key == "gamma_f") {
      gamma_f = real();
      have_gf = true;
    } else if (key == "gamma_s") {
      gamma_s = real();
      have_gs = true;
    } else if (key == "gamma_fs") {
      gamma_fs = real();
    } else if (key == "e0") {
      e0 = real();
    } else if (key == "lame_f.lambda") {
      lf_l = real();
    } else if (key == "lame_f.mu") {
      lf_m = real();
    } else if (key == "lame_s.lambda") {
      ls_l = real();
    } else if (key == "lame_s.mu") {
      ls_m = real();
    } else if (key == "delta") {
      c.delta = real();
      if (!(*c.delta > 0.0)) throw IoError(origin + ": delta > 0 violated");
    } else if (key == "f") {
      if (val == "atan") {
        c.f = mat::BoundaryLayer::Atan;
      } else if (val == "tanh") {
        c.f = mat::BoundaryLayer::Tanh;
      } else {
        throw IoError(origin + ": f must be atan or tanh");
      }
    } else if (key == "fem.depth") {
      c.fem_depth = real();
    } else if (key == "fem.resolution") {
      c.fem_resolution = real();
    } else if (key == "fem.tol_solve") {
      c.tol_solve = real();
    } else if (key == "fem.lateral") {
      if (val == "free") {
        c.lateral = Lateral::Free;
      } else if (val == "periodic") {
        c.lateral = Lateral::Periodic;
      } else {
        throw IoError(origin + ": fem.lateral must be free or periodic");
      }
    } else {
      throw IoError(origin + ": unknown key '" + key + "'");
    }
  }
  if (!have_gf || !have_gs) {
    throw IoError(origin + ": gamma_f and gamma_s are required");
  }
  try {
    c.materials =
        mat::Materials(gamma_f, gamma_s, gamma_fs, e0,
                       mat::Tensor4::isotropic(lf_l, lf_m),
                       mat::Tensor4::isotropic(ls_l, ls_m));
  } catch (const std::exception& e) {
    throw IoError(origin + ": " + e.what());
  }
  std::ostringstream snap;
  for (const auto& [key, val] : kv) snap << key << " = " << val << '\n';
  c.snapshot = snap.str();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  return parse_config(in, path);
}

mat::TransitionParams transition_of(const Config& c) {
  if (!c.delta) throw IoError("delta is required for this functional");
  return {*c.delta, c.f};
}

void emit_report_header(std::ostream& out) {
  out << "functional,bulk,surface,cut,wetting,total,depth,resolution\n";
}

void emit_report(const energy::EnergyReport& r, std::ostream& out) {
  out << energy::functional_name(r.functional_tag) << ','
      << format_double(r.bulk) << ',' << format_double(r.surface) << ','
      << format_double(r.cut_term) << ',' << format_double(r.wetting_term)
      << ',' << format_double(r.total) << ','
      << format_double(r.truncation_depth) << ','
      << format_double(r.resolution) << '\n';
}

std::uint64_t bytes_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return bytes_hash(ss.str());
}

void RunManifest::write(std::ostream& out) const {
  out << "version " << version << '\n';
  out << "seed " << seed << '\n';
  for (const auto& [name, hash] : input_hashes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(hash));
    out << "input " << name << ' ' << buf << '\n';
  }
  for (const auto& [name, v] : tolerances) {
    out << "tolerance " << name << ' ' << format_double(v) << '\n';
  }
  out << "config-begin\n" << config_snapshot << "config-end\n";
}

}  // namespace stratum::io

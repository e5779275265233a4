#pragma once

// Experiment driver: solves one Cauchy problem and writes snapshot, energy,
// equipartition, Huygens and propagation tables plus a JSON manifest.
// Needs OpenSSL (libcrypto) for the manifest checksums.

#include <openssl/sha.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "treewave/energy.hpp"
#include "treewave/io.hpp"
#include "treewave/verify.hpp"
#include "treewave/wave.hpp"

namespace treewave {

enum class Output { snapshots, energy, equipartition, huygens, propagation };

inline std::string_view to_string(Output o) {
  switch (o) {
    case Output::snapshots: return "snapshots";
    case Output::energy: return "energy";
    case Output::equipartition: return "equipartition";
    case Output::huygens: return "huygens";
    case Output::propagation: return "propagation";
  }
  return "";
}

struct ExperimentConfig {
  int q = 2;
  int steps = 8;
  ScalarMode mode = ScalarMode::exact;
  std::string solver = "both";      // closed | recurrence | both
  std::string initial = "delta0";   // keyword, JSON text, or path to a JSON file
  std::optional<int> radius;        // truncation radius; default steps + data radius + 2
  std::string schedule = "sqrt";    // Huygens N_n: "sqrt" or a fixed integer
  std::filesystem::path out = "treewave_out";
  std::uint64_t seed = 1;
  int data_radius = 2;              // support radius for initial = "random"
  std::size_t expansion_limit = 100000;
  std::set<Output> outputs{Output::snapshots, Output::energy, Output::equipartition, Output::huygens,
                           Output::propagation};
};

struct ExperimentResult {
  std::filesystem::path manifest;
  int snapshot_count = 0;
  std::string agreement;  // "exact", "mismatch", "max_abs_diff=..." or "not-run"
};

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
  std::string hex;
  char buf[3];
  for (unsigned char c : digest) {
    std::snprintf(buf, sizeof buf, "%02x", c);
    hex += buf;
  }
  return hex;
}

/// Validates the config; errors name the offending field.
inline void validate(const ExperimentConfig& c) {
  if (c.q < 2) throw UsageError("q: must be >= 2, got " + std::to_string(c.q));
  if (c.steps < 1) throw UsageError("steps: must be >= 1, got " + std::to_string(c.steps));
  if (c.solver != "closed" && c.solver != "recurrence" && c.solver != "both") {
    throw UsageError("solver: expected closed|recurrence|both, got '" + c.solver + "'");
  }
  if (c.schedule != "sqrt") {
    int n = 0;
    auto [p, ec] = std::from_chars(c.schedule.data(), c.schedule.data() + c.schedule.size(), n);
    if (ec != std::errc() || p != c.schedule.data() + c.schedule.size() || n < 0) {
      throw UsageError("schedule: expected 'sqrt' or a nonnegative integer, got '" + c.schedule + "'");
    }
  }
  if (c.radius && *c.radius < 0) throw UsageError("radius: must be nonnegative");
  if (c.data_radius < 0) throw UsageError("data_radius: must be nonnegative");
  if (c.out.empty()) throw UsageError("out: empty output directory");
}

inline int shell_margin(const std::string& schedule, int n) {
  return schedule == "sqrt" ? sqrt_schedule(n) : std::stoi(schedule);
}

/// Initial data (f, g) from a keyword, inline JSON or a JSON file:
///   delta0          f = delta_0, g = 0
///   delta0-velocity f = 0, g = delta_0
///   random          seeded small integers on B(0, data_radius) for f and g
///   {"f": <tree function>, "g": <tree function>}   either key optional
template <WaveScalar T>
std::pair<TreeFunction<T>, TreeFunction<T>> load_initial(const ExperimentConfig& c) {
  ScalarField<T> k{c.q};
  TreeFunction<T> f(c.q), g(c.q);
  const std::string& s = c.initial;
  if (s == "delta0") {
    f.set(VertexAddress(), k.one());
    return {f, g};
  }
  if (s == "delta0-velocity") {
    g.set(VertexAddress(), k.one());
    return {f, g};
  }
  if (s == "random") {
    std::mt19937_64 rng(c.seed);
    auto fe = detail::seeded_data(c.q, c.data_radius, 3, rng);
    auto ge = detail::seeded_data(c.q, c.data_radius, 3, rng);
    for (const auto& [cell, v] : fe.cells()) f.set(cell.anchor, scalar_from_json<T>(to_json(v), c.q));
    for (const auto& [cell, v] : ge.cells()) g.set(cell.anchor, scalar_from_json<T>(to_json(v), c.q));
    return {f, g};
  }
  std::string text = s;
  if (!s.empty() && s.front() != '{') {
    std::ifstream in(s);
    if (!in) throw UsageError("initial: not a keyword, JSON object or readable file: '" + s + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("initial: malformed JSON: ") + e.what());
  }
  if (!j.is_object() || (!j.contains("f") && !j.contains("g"))) {
    throw UsageError("initial: JSON must be an object with keys \"f\" and/or \"g\"");
  }
  if (j.contains("f")) f = tree_function_from_json<T>(j.at("f"), c.q);
  if (j.contains("g")) g = tree_function_from_json<T>(j.at("g"), c.q);
  for (const auto* h : {&f, &g}) {
    for (const auto& [cell, v] : h->cells()) {
      if (!cell.anchor.is_valid_for(c.q)) {
        throw UsageError("initial: vertex '" + cell.anchor.to_string() + "' invalid for q=" + std::to_string(c.q));
      }
    }
  }
  return {f, g};
}

namespace detail {

class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
  }

  void write(const std::string& name, const std::string& content) {
    std::filesystem::path p = root_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << content;
    checksums_[name] = sha256_hex(content);
  }

  const std::map<std::string, std::string>& checksums() const { return checksums_; }
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  std::map<std::string, std::string> checksums_;
};

inline std::string snapshot_name(int n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshots/u_%+04d.csv", n);
  return buf;
}

template <WaveScalar T>
std::string exact_pair(const T& v) {
  auto [a, b] = exact_columns(v);
  return a + ',' + b;
}

template <WaveScalar T>
ExperimentResult run_typed(const ExperimentConfig& c, std::chrono::steady_clock::time_point start) {
  auto [f, g] = load_initial<T>(c);
  const int N = data_radius(f, g);
  const int R = c.radius.value_or(c.steps + N + 2);
  for (int n = -c.steps; n <= c.steps; ++n) {
    int need = std::abs(n) + N + 2;
    if (need > R) {
      throw TruncationError("snapshot n=" + std::to_string(n) + " needs truncation radius " + std::to_string(need) +
                            " (|n| + data radius + 2) but radius is " + std::to_string(R));
    }
  }
  Ball ball(c.q, R);
  OutputDir dir(c.out);
  ExperimentResult result;

  std::optional<WaveTrajectory<T>> closed, rec;
  if (c.solver != "recurrence") closed = solve(f, g, -c.steps, c.steps, SolverMode::closed_form, ball);
  if (c.solver != "closed") rec = solve(f, g, -c.steps, c.steps, SolverMode::recurrence, ball);
  const WaveTrajectory<T>& u = closed ? *closed : *rec;
  result.snapshot_count = static_cast<int>(u.snapshots().size());
  result.agreement = "not-run";
  if (closed && rec) {
    if constexpr (ScalarField<T>::mode == ScalarMode::exact) {
      bool same = true;
      for (int n = -c.steps; n <= c.steps; ++n) same = same && closed->at(n) == rec->at(n);
      result.agreement = same ? "exact" : "mismatch";
    } else {
      double worst = 0;
      for (int n = -c.steps; n <= c.steps; ++n) {
        auto diff = closed->at(n) - rec->at(n);
        for (const auto& [cell, v] : diff.cells()) worst = std::max(worst, std::abs(v));
      }
      result.agreement = "max_abs_diff=" + format_double(worst);
    }
  }

  if (c.outputs.contains(Output::snapshots)) {
    for (const auto& [n, snap] : u.snapshots()) {
      std::ostringstream os;
      write_snapshot_csv(os, snap, c.expansion_limit);
      dir.write(snapshot_name(n), os.str());
    }
  }
  const int inner = c.steps - 1;
  if (c.outputs.contains(Output::energy)) {
    std::ostringstream os;
    os << "n,K_a,K_b,P_a,P_b,E_a,E_b,gap_a,gap_b,K,P,E,gap\n";
    for (int n = -inner; n <= inner; ++n) {
      auto r = energies(u, n, ball);
      os << n << ',' << exact_pair(r.kinetic) << ',' << exact_pair(r.potential) << ',' << exact_pair(r.total) << ','
         << exact_pair(r.gap) << ',' << format_double(to_double(r.kinetic)) << ','
         << format_double(to_double(r.potential)) << ',' << format_double(to_double(r.total)) << ','
         << format_double(to_double(r.gap)) << '\n';
    }
    dir.write("energy.csv", os.str());
  }
  if (c.outputs.contains(Output::equipartition)) {
    Ball wide(c.q, 2 * inner + N + 2);
    const double bound = equipartition_bound_constant(f, g);
    std::ostringstream os;
    os << "n,gap_a,gap_b,gap_operator_a,gap_operator_b,gap,gap_operator,half_E,bound,within_bound\n";
    for (int n = -inner; n <= inner; ++n) {
      auto r = energies(u, n, ball);
      T op = equipartition_gap_operator(f, g, n, wide);
      double b = bound * std::pow(static_cast<double>(c.q), -std::abs(n));
      bool ok = n == 0 || std::abs(to_double(r.gap)) <= b;
      os << n << ',' << exact_pair(r.gap) << ',' << exact_pair(op) << ',' << format_double(to_double(r.gap)) << ','
         << format_double(to_double(op)) << ',' << format_double(to_double(r.total) / 2) << ','
         << format_double(b) << ',' << (ok ? "true" : "false") << '\n';
    }
    dir.write("equipartition.csv", os.str());
  }
  if (c.outputs.contains(Output::huygens)) {
    std::ostringstream os;
    os << "n,N,mass_a,mass_b,gradient_a,gradient_b,kinetic_a,kinetic_b,mass,gradient,kinetic\n";
    for (int n = -inner; n <= inner; ++n) {
      auto r = huygens_report(u, n, shell_margin(c.schedule, n), ball);
      os << n << ',' << r.shell_margin << ',' << exact_pair(r.interior_mass) << ','
         << exact_pair(r.interior_gradient) << ',' << exact_pair(r.interior_kinetic) << ','
         << format_double(to_double(r.interior_mass)) << ',' << format_double(to_double(r.interior_gradient)) << ','
         << format_double(to_double(r.interior_kinetic)) << '\n';
    }
    dir.write("huygens.csv", os.str());
  }
  if (c.outputs.contains(Output::propagation)) {
    std::ostringstream os;
    os << "n,support_radius,light_cone_radius,within_light_cone,scaled_amplitude_a,scaled_amplitude_b,"
          "scaled_amplitude\n";
    for (const auto& r : propagation_bounds(u)) {
      os << r.n << ',' << r.support_radius << ',' << std::abs(r.n) + N << ','
         << (r.within_light_cone ? "true" : "false") << ',' << exact_pair(r.scaled_amplitude) << ','
         << format_double(to_double(r.scaled_amplitude)) << '\n';
    }
    dir.write("propagation.csv", os.str());
  }

  Json snaps = Json::array();
  for (const auto& [n, snap] : u.snapshots()) snaps.push_back(n);
  Json outputs = Json::array();
  for (Output o : c.outputs) outputs.push_back(std::string(to_string(o)));
  Json files = Json::object();
  for (const auto& [name, sum] : dir.checksums()) files[name] = sum;
  Json manifest{
      {"config",
       {{"q", c.q},
        {"steps", c.steps},
        {"mode", std::string(to_string(c.mode))},
        {"solver", c.solver},
        {"initial", c.initial},
        {"radius", R},
        {"schedule", c.schedule},
        {"seed", c.seed},
        {"data_radius", c.data_radius},
        {"outputs", outputs}}},
      {"mode", std::string(to_string(c.mode))},
      {"initial_data_radius", N},
      {"snapshots", snaps},
      {"snapshot_count", result.snapshot_count},
      {"closed_recurrence_agreement", result.agreement},
      {"wall_time_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
      {"sha256", files},
  };
  std::string text = manifest.dump(2) + "\n";
  std::filesystem::path mp = dir.root() / "manifest.json";
  std::ofstream(mp, std::ios::binary) << text;
  result.manifest = mp;
  return result;
}

}  // namespace detail

/// Radial profile input for the transforms driver: "delta<k>" (delta-profile
/// at radius k), "random" (seeded, radius data_radius), or a JSON profile
/// {"q": q, "entries": [{"index": n, "value": {...}}]} inline or in a file.
template <WaveScalar T>
RadialProfile<T> load_profile(const ExperimentConfig& c) {
  const std::string& s = c.initial;
  ScalarField<T> k{c.q};
  RadialProfile<T> p(c.q);
  if (s.rfind("delta", 0) == 0 && s.size() > 5 && s.find_first_not_of("0123456789", 5) == std::string::npos) {
    p.set(std::stoi(s.substr(5)), k.one());
    return p;
  }
  if (s == "random") {
    std::mt19937_64 rng(c.seed);
    for (int n = 0; n <= c.data_radius; ++n) p.set(n, k.from_int(detail::draw(rng, 3)));
    return p;
  }
  std::string text = s;
  if (!s.empty() && s.front() != '{') {
    std::ifstream in(s);
    if (!in) throw UsageError("initial: not a keyword, JSON object or readable file: '" + s + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    auto j = Json::parse(text);
    auto prof = radial_profile_from_json<T>(j);
    if (prof.q() != c.q) throw UsageError("initial: profile has q=" + std::to_string(prof.q()));
    return prof;
  } catch (const Json::exception& e) {
    throw UsageError(std::string("initial: malformed radial profile JSON: ") + e.what());
  }
}

namespace detail {

template <WaveScalar T>
ExperimentResult run_transforms_typed(const ExperimentConfig& c, std::chrono::steady_clock::time_point start) {
  auto p = load_profile<T>(c);
  const int top = std::max(0, p.max_index());
  OutputDir dir(c.out);
  auto a = abel(p);
  auto write = [&](const std::string& name, const auto& seq) {
    std::ostringstream os;
    write_sequence_csv(os, seq);
    dir.write(name, os.str());
  };
  write("abel.csv", a);
  write("abel_inverse.csv", abel_inverse(a));
  write("dual_abel.csv", dual_abel_profile(a, top + 2, TransformMethod::closed, Ball(c.q, 0)));
  write("dual_abel_inverse.csv", dual_abel_inverse(p, top));
  bool brute_ok = true;
  if (top <= 8) {
    Ball census(c.q, top + 2);
    brute_ok = abel(p, TransformMethod::brute, census) == a;
    for (int n = 0; n <= top + 2; ++n)
      brute_ok = brute_ok && dual_abel(a, n, TransformMethod::brute, census) == dual_abel(a, n);
  }
  {
    std::ostringstream os;
    os << "lambda,re,im\n";
    const double tau = spectral_constants<double>(c.q).tau;
    for (int i = 0; i < 100; ++i) {
      double l = (i + 0.5) * (tau / 2) / 100.0;
      auto z = spherical_transform(p, l);
      os << format_double(l) << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
    }
    dir.write("spherical_transform.csv", os.str());
  }
  Json files = Json::object();
  for (const auto& [name, sum] : dir.checksums()) files[name] = sum;
  Json manifest{
      {"config", {{"q", c.q}, {"mode", std::string(to_string(c.mode))}, {"initial", c.initial}, {"seed", c.seed}}},
      {"mode", std::string(to_string(c.mode))},
      {"brute_closed_agreement", top <= 8 ? (brute_ok ? "exact" : "mismatch") : "not-run"},
      {"inverse_round_trip", abel_inverse(a) == p},
      {"wall_time_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
      {"sha256", files},
  };
  std::filesystem::path mp = dir.root() / "manifest.json";
  std::ofstream(mp, std::ios::binary) << manifest.dump(2) << "\n";
  ExperimentResult r;
  r.manifest = mp;
  r.agreement = top <= 8 ? (brute_ok ? "exact" : "mismatch") : "not-run";
  return r;
}

}  // namespace detail

inline ExperimentResult run_transforms(const ExperimentConfig& config) {
  validate(config);
  auto start = std::chrono::steady_clock::now();
  if (config.mode == ScalarMode::exact) return detail::run_transforms_typed<QSurd>(config, start);
  return detail::run_transforms_typed<double>(config, start);
}

inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  auto start = std::chrono::steady_clock::now();
  if (config.mode == ScalarMode::exact) return detail::run_typed<QSurd>(config, start);
  return detail::run_typed<double>(config, start);
}

}  // namespace treewave

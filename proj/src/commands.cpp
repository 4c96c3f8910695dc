#include "resonax/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "resonax/errors.hpp"
#include "resonax/parallel.hpp"
#include "resonax/quadrature.hpp"
#include "resonax/resonances.hpp"
#include "resonax/verify.hpp"

namespace resonax {

using nlohmann::json;

namespace {

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidParameter("cannot write '" + path + "'");
  out << text;
}

std::string quote(const std::string& s) { return json(s).dump(); }

std::string complex_pair(cplx z) {
  return "[" + format_number(z.real()) + ", " + format_number(z.imag()) + "]";
}

std::string complex_list(const Eigen::VectorXcd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += complex_pair(v(i));
  }
  return s + "]";
}

std::string sheet_list(const SheetIndex& sheet) {
  std::string s = "[";
  for (int a = 0; a < sheet.size(); ++a) {
    if (a) s += ", ";
    s += std::to_string(sheet[a]);
  }
  return s + "]";
}

std::string region_json(const SearchRegion& r) {
  return "{\"re_min\": " + format_number(r.re_min) + ", \"re_max\": " + format_number(r.re_max) +
         ", \"im_min\": " + format_number(r.im_min) + ", \"im_max\": " + format_number(r.im_max) +
         ", \"nx\": " + std::to_string(r.grid_nx) + ", \"ny\": " + std::to_string(r.grid_ny) + "}";
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// RunReport: self-contained record of one invocation.
void write_report(const std::string& path, const RunConfig& cfg, const std::string& command,
                  const std::string& parameters, const std::string& results, double seconds) {
  if (path.empty()) return;
  std::ostringstream s;
  s << "{\n  \"tool_version\": " << quote(kVersion) << ",\n  \"command\": " << quote(command)
    << ",\n  \"model_digest\": " << quote(cfg.digest) << ",\n  \"parameters\": " << parameters
    << ",\n  \"results\": " << results << ",\n  \"timings\": {\"wall_seconds\": "
    << format_number(seconds) << ", \"threads\": " << worker_count() << "}\n}\n";
  write_text(path, s.str(), std::cout);
}

SheetIndex parse_sheet_for(const ModelSpec& model, const std::string& text) {
  const SheetIndex sheet = SheetIndex::parse(text);
  if (sheet.size() != model.channel_count()) {
    throw InvalidParameter("--sheet has " + std::to_string(sheet.size()) + " entries, model has " +
                           std::to_string(model.channel_count()) + " channels");
  }
  return sheet;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg{parse_model(text), 100, 1.0, SolverOptions{}, std::string{}};
  const json doc = json::parse(text);  // already validated as JSON by parse_model
  cfg.digest = fnv1a_hex(doc.dump());
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_object()) throw SchemaError("'grid' must be an object");
    for (const auto& [key, value] : g.items()) {
      if (key == "n_points") {
        if (!value.is_number_integer()) throw SchemaError("grid.n_points must be an integer");
        cfg.n_points = value.get<int>();
      } else if (key == "map_scale") {
        if (!value.is_number()) throw SchemaError("grid.map_scale must be a number");
        cfg.map_scale = value.get<double>();
      } else {
        throw SchemaError("unknown key '" + key + "' in grid");
      }
    }
  }
  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    if (!s.is_object()) throw SchemaError("'solver' must be an object");
    for (const auto& [key, value] : s.items()) {
      if (!value.is_number()) throw SchemaError("solver." + key + " must be a number");
      if (key == "cond_limit") {
        cfg.solver.cond_limit = value.get<double>();
      } else if (key == "subtraction_tol") {
        cfg.solver.subtraction_tol = value.get<double>();
      } else {
        throw SchemaError("unknown key '" + key + "' in solver");
      }
    }
  }
  if (cfg.n_points < 8) throw ValidationError("grid.n_points must be at least 8");
  if (!(cfg.map_scale > 0.0) || !std::isfinite(cfg.map_scale)) {
    throw ValidationError("grid.map_scale must be positive");
  }
  if (!(cfg.solver.cond_limit > 1.0)) throw ValidationError("solver.cond_limit must exceed 1");
  if (!(cfg.solver.subtraction_tol >= 0.0)) {
    throw ValidationError("solver.subtraction_tol must be non-negative");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_file(path)); }

Problem make_problem(const RunConfig& config) {
  return Problem(config.model, build_grid(config.n_points, config.map_scale), config.solver);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SchemaError*>(&e)) return kExitSchema;
  if (dynamic_cast<const ValidationError*>(&e)) return kExitValidation;
  if (dynamic_cast<const InvalidRegion*>(&e) || dynamic_cast<const InvalidParameter*>(&e)) {
    return kExitUsage;
  }
  return kExitSolver;
}

int cmd_validate(const std::string& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config);
    const ModelSpec& m = cfg.model;
    out << "channels: " << m.channel_count() << "\n";
    out << "thresholds:";
    for (const auto& c : m.channels()) out << " " << format_number(c.threshold);
    out << "\n";
    out << "potential: " << to_string(m.potential().kind()) << "\n";
    out << "partial_wave: " << m.partial_wave() << "\n";
    out << "grid: " << cfg.n_points << " nodes, map scale " << format_number(cfg.map_scale) << "\n";
    out << "sheets: " << (1 << m.channel_count()) << "\n";
    out << "digest: " << cfg.digest << "\n";
    return int(kExitOk);
  });
}

int cmd_scan(const ScanArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = Clock::now();
    const RunConfig cfg = load_run_config(args.config);
    const Problem problem = make_problem(cfg);
    const SheetIndex sheet = parse_sheet_for(cfg.model, args.sheet);
    SearchRegion region = parse_region(args.region);
    region.grid_nx = args.nx;
    region.grid_ny = args.ny;
    const ScanGrid grid = scan(problem, region, sheet);

    std::ostringstream csv;
    csv << "re_z,im_z,re_det,im_det,abs_det\n";
    for (const auto& p : grid.points) {
      csv << format_number(p.z.real()) << "," << format_number(p.z.imag()) << ","
          << format_number(p.value.real()) << "," << format_number(p.value.imag()) << ","
          << format_number(std::abs(p.value)) << "\n";
    }
    write_text(args.out, csv.str(), out);

    std::string rows = "[";
    for (std::size_t k = 0; k < grid.points.size(); ++k) {
      if (k) rows += ", ";
      rows += "[" + format_number(grid.points[k].z.real()) + ", " +
              format_number(grid.points[k].z.imag()) + ", " +
              format_number(grid.points[k].value.real()) + ", " +
              format_number(grid.points[k].value.imag()) + "]";
    }
    rows += "]";
    write_report(args.report, cfg, "scan",
                 "{\"config\": " + quote(args.config) + ", \"sheet\": " + sheet_list(sheet) +
                     ", \"region\": " + region_json(region) + "}",
                 "{\"columns\": [\"re_z\", \"im_z\", \"re_det\", \"im_det\"], \"rows\": " + rows +
                     "}",
                 seconds_since(t0));
    return int(kExitOk);
  });
}

int cmd_find(const FindArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = Clock::now();
    const RunConfig cfg = load_run_config(args.config);
    const Problem problem = make_problem(cfg);
    const int m = cfg.model.channel_count();
    SheetIndex sheet = SheetIndex::physical(m);
    if (!args.sheet.empty()) {
      sheet = parse_sheet_for(cfg.model, args.sheet);
    } else if (!args.bound_states) {
      throw InvalidParameter("--sheet is required unless --bound-states is given");
    }
    if (args.bound_states && !sheet.is_physical()) {
      throw InvalidParameter("--bound-states searches the physical sheet only");
    }
    SearchRegion region = parse_region(args.region);
    region.grid_nx = args.nx;
    region.grid_ny = args.ny;
    region.boundary_points = args.boundary_points;
    const RootTarget target =
        args.bound_states ? RootTarget::FredholmDeterminant : RootTarget::TruncatedSMatrix;
    const FindResult found = find_resonances(problem, region, sheet, target);

    std::ostringstream js;
    js << "{\n  \"sheet\": " << sheet_list(sheet) << ",\n  \"target\": "
       << quote(args.bound_states ? "fredholm_determinant" : "truncated_smatrix")
       << ",\n  \"count\": " << found.count << ",\n  \"warning\": "
       << (found.warning.empty() ? std::string("null") : quote(found.warning))
       << ",\n  \"results\": [";
    for (std::size_t k = 0; k < found.roots.size(); ++k) {
      const ResonanceResult& r = found.roots[k];
      js << (k ? ",\n" : "\n") << "    {\"sheet\": " << sheet_list(r.sheet)
         << ", \"z_star\": " << complex_pair(r.z_star)
         << ", \"residual\": " << format_number(r.residual) << ", \"kind\": "
         << quote(std::string(to_string(r.kind))) << ", \"amplitude\": "
         << complex_list(r.null_vector) << ", \"extended\": " << complex_list(r.extended)
         << ", \"gamow_coeff\": " << complex_list(r.gamow_coeffs)
         << ", \"degenerate_null\": " << (r.degenerate_null ? "true" : "false");
      if (r.degenerate_null) {
        js << ", \"extra_amplitudes\": [";
        for (std::size_t e = 0; e < r.extra_null_vectors.size(); ++e) {
          js << (e ? ", " : "") << complex_list(r.extra_null_vectors[e]);
        }
        js << "]";
      }
      js << "}";
    }
    js << (found.roots.empty() ? "]\n}\n" : "\n  ]\n}\n");
    write_text(args.out, js.str(), out);
    if (!found.warning.empty()) err << "warning: " << found.warning << "\n";
    if (!args.out.empty()) {
      for (const auto& r : found.roots) {
        out << to_string(r.kind) << " " << format_number(r.z_star.real()) << " "
            << format_number(r.z_star.imag()) << " residual " << format_number(r.residual)
            << "\n";
      }
    }
    write_report(args.report, cfg, "find",
                 "{\"config\": " + quote(args.config) + ", \"sheet\": " + sheet_list(sheet) +
                     ", \"region\": " + region_json(region) +
                     ", \"bound_states\": " + (args.bound_states ? "true" : "false") + "}",
                 js.str(), seconds_since(t0));
    return int(kExitOk);
  });
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = Clock::now();
    const RunConfig cfg = load_run_config(args.config);
    Problem problem = make_problem(cfg);
    if (args.flip_a_sign) problem.set_a_factor_sign(-1.0);
    const VerifyReport rep = verify_identities(problem, args.samples, args.seed);

    std::string results = "[";
    char line[160];
    for (std::size_t k = 0; k < rep.checks.size(); ++k) {
      const IdentityCheck& c = rep.checks[k];
      std::snprintf(line, sizeof line, "%-26s max_dev %.3e  tol %.1e  samples %d  skipped %d  %s\n",
                    c.name.c_str(), c.max_deviation, c.tolerance, c.samples, c.skipped,
                    c.passed() ? "PASS" : "FAIL");
      out << line;
      if (k) results += ", ";
      results += "{\"name\": " + quote(c.name) + ", \"max_deviation\": " +
                 format_number(c.max_deviation) + ", \"tolerance\": " +
                 format_number(c.tolerance) + ", \"samples\": " + std::to_string(c.samples) +
                 ", \"skipped\": " + std::to_string(c.skipped) + "}";
    }
    results += "]";
    out << (rep.passed() ? "all identities hold\n" : "identity check FAILED\n");
    write_report(args.report, cfg, "verify",
                 "{\"config\": " + quote(args.config) + ", \"samples\": " +
                     std::to_string(args.samples) + ", \"seed\": " + std::to_string(args.seed) +
                     "}",
                 results, seconds_since(t0));
    return rep.passed() ? int(kExitOk) : int(kExitIdentity);
  });
}

}  // namespace resonax

#include "saftea/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "saftea/demand.hpp"
#include "saftea/detail/text.hpp"
#include "saftea/json_io.hpp"
#include "saftea/report.hpp"
#include "saftea/scenario.hpp"
#include "saftea/service.hpp"

namespace saftea::cli {

namespace {

using nlohmann::json;

enum class Format { table, json, csv };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string bundle_path;
  std::string currency = "usd";
  std::string format = "table";
  std::string price_basis = "reference";
};

Format parse_format(const std::string& text) {
  if (text == "table") return Format::table;
  if (text == "json") return Format::json;
  if (text == "csv") return Format::csv;
  throw ValidationError("format", "unknown format '" + text + "' (table, json, csv)");
}

DatasetBundle resolve_bundle(const Globals& g) {
  if (g.bundle_path.empty()) return default_bundle();
  return load_bundle(std::filesystem::path(g.bundle_path));
}

EvaluationOptions options_of(const Globals& g) {
  EvaluationOptions o;
  o.currency = parse_currency(g.currency);
  o.basis = PriceBasis::parse(g.price_basis);
  return o;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json value = json::parse(ss.str(), nullptr, false);
  if (value.is_discarded()) throw ValidationError("package", path + " is not valid JSON");
  return value;
}

IncentivePackage resolve_package(const std::string& scenario, const std::string& package_file) {
  if (!scenario.empty() && !package_file.empty()) {
    throw ValidationError("package", "use either --scenario or --package, not both");
  }
  if (!package_file.empty()) return io::package_from_json(read_json_file(package_file));
  if (!scenario.empty()) return named_package(scenario);
  return kBasePackage;
}

std::string human(double v) {
  char buf[64];
  if (std::abs(v) >= 1e4) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.6g", v);
  }
  return buf;
}

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return human(v.get<double>());
  return v.dump();
}

std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.is_null() ? "" : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void print_table(std::ostream& out, const json& rows, const std::vector<std::string>& columns) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width;
  for (const auto& c : columns) width.push_back(c.size());
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      line.push_back(row.contains(columns[i]) ? cell(row[columns[i]]) : "");
      width[i] = std::max(width[i], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) text += "  ";
      text += line[i] + std::string(width[i] - line[i].size(), ' ');
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
  };
  emit(columns);
  for (const auto& line : cells) emit(line);
}

void print_csv(std::ostream& out, const json& rows, const std::vector<std::string>& columns) {
  out << detail::join(columns, ",") << '\n';
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (const auto& c : columns) line.push_back(row.contains(c) ? csv_cell(row[c]) : "");
    out << detail::join(line, ",") << '\n';
  }
}

void print_rows(std::ostream& out, Format f, const json& rows, const std::vector<std::string>& columns) {
  switch (f) {
    case Format::json: out << rows.dump(2) << '\n'; break;
    case Format::csv: print_csv(out, rows, columns); break;
    case Format::table: print_table(out, rows, columns); break;
  }
}

void flatten(const json& value, const std::string& prefix, json& rows) {
  if (value.is_object()) {
    for (const auto& [k, v] : value.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) flatten(value[i], prefix + "." + std::to_string(i), rows);
  } else {
    rows.push_back({{"field", prefix}, {"value", value}});
  }
}

void print_evaluation_table(std::ostream& out, const json& r) {
  const json& m = r["margin"];
  const std::string cur = r["currency"].get<std::string>();
  out << "route        " << r["route"].get<std::string>() << '\n';
  out << "package      " << (r["package_name"].is_null() ? "custom" : r["package_name"].get<std::string>()) << '\n';
  out << "price basis  " << r["price_basis"].get<std::string>() << '\n';
  out << "currency     " << cur << "\n\n";

  out << "Levers\n";
  json levers = json::array();
  for (const auto& [k, v] : r["package"].items()) levers.push_back({{"lever", k}, {"value", v}});
  print_table(out, levers, {"lever", "value"});

  out << "\nVariable cost (" << cur << "/kg SAF)\n";
  print_table(out, m["cost"]["lines"], {"commodity", "unit", "quantity", "unit_price", "tax_rate", "pre_tax_cost", "tax_cost"});

  out << "\nMargin (" << cur << "/kg SAF)\n";
  json lines = json::array({
      {{"item", "saf revenue"}, {"value", m["revenue"]["saf"]}},
      {{"item", "by-product revenue"}, {"value", m["revenue"]["byproduct"]}},
      {{"item", "carbon credit revenue"}, {"value", m["revenue"]["carbon"]}},
      {{"item", "total revenue"}, {"value", m["revenue"]["total"]}},
      {{"item", "other variable cost"}, {"value", m["cost"]["other_variable"]}},
      {{"item", "other variable tax"}, {"value", m["cost"]["other_variable_tax"]}},
      {{"item", "total variable cost"}, {"value", m["cost"]["total_variable"]}},
      {{"item", "contribution margin"}, {"value", m["contribution_margin"]}},
      {{"item", "fixed cost"}, {"value", m["fixed_cost"]}},
      {{"item", "net margin"}, {"value", m["net_margin"]}},
  });
  print_table(out, lines, {"item", "value"});

  out << "\nWaterfall (" << cur << "/kg SAF)\n";
  json wf = json::array({{{"step", "baseline"}, {"delta", r["waterfall"]["baseline"]}}});
  for (const auto& d : r["waterfall"]["deltas"]) wf.push_back({{"step", d["lever"]}, {"delta", d["delta"]}});
  wf.push_back({{"step", "total"}, {"delta", r["waterfall"]["total"]}});
  print_table(out, wf, {"step", "delta"});

  const json& d = r["dcf"];
  out << "\nDCF (" << cur << ")\n";
  json dcf = json::array({
      {{"item", "annual free cash flow"}, {"value", d["annual_free_cash_flow"]}},
      {{"item", "max capex at npv=0"}, {"value", d["max_capex"]}},
      {{"item", "reference capex"}, {"value", d["capex_basis"]}},
      {{"item", "npv at reference capex"}, {"value", d["npv"]}},
      {{"item", "irr at reference capex"}, {"value", d["irr"].is_null() ? json("none") : d["irr"]}},
      {{"item", "grant"}, {"value", d["grant"]}},
      {{"item", "grant needed"}, {"value", d["grant_needed"]}},
  });
  print_table(out, dcf, {"item", "value"});

  if (!r["package_name"].is_null()) {
    out << "\nDeviations from published values\n";
    if (r["deviations"].empty()) {
      out << "none\n";
    } else {
      print_table(out, r["deviations"], {"target_id", "target", "computed", "relative_error"});
    }
  }
}

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

void serve(const DatasetBundle& bundle, const std::string& host, int port, const std::string& origin,
           std::ostream& out) {
  service::Service svc(bundle, origin);
  g_interrupted = false;
  auto previous_int = std::signal(SIGINT, on_signal);
  auto previous_term = std::signal(SIGTERM, on_signal);
  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!done) {
      if (g_interrupted) {
        service::stop_server();
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  });
  try {
    service::run_server(svc, {host, port}, [&](int bound) {
      out << "listening on http://" << host << ":" << bound << std::endl;
    });
  } catch (...) {
    done = true;
    watcher.join();
    std::signal(SIGINT, previous_int);
    std::signal(SIGTERM, previous_term);
    throw;
  }
  done = true;
  watcher.join();
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Techno-economic evaluation of SAF incentive packages for HEFA and ATJ routes", "saftea"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--bundle", g.bundle_path, "Bundle directory (default: embedded reference data)");
  app.add_option("--currency", g.currency, "Reporting currency: usd or brl")->capture_default_str();
  app.add_option("--format", g.format, "Output format: table, json or csv")->capture_default_str();
  app.add_option("--price-basis", g.price_basis, "reference, table9, table7, table7:2014-2024, ...")
      ->capture_default_str();

  std::function<void()> action;

  std::string route_text, scenario, package_file;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate one route under an incentive package");
  evaluate_cmd->add_option("--route", route_text, "hefa or atj")->required();
  evaluate_cmd->add_option("--scenario", scenario, "base, s1 or s2");
  evaluate_cmd->add_option("--package", package_file, "JSON package file");
  evaluate_cmd->callback([&] {
    action = [&] {
      const Format f = parse_format(g.format);
      const DatasetBundle bundle = resolve_bundle(g);
      const EvaluationOptions options = options_of(g);
      const Route route = parse_route(route_text);
      const IncentivePackage pkg = resolve_package(scenario, package_file);
      const json result = io::to_json(evaluate(route, pkg, bundle, options));
      if (f == Format::json) {
        out << result.dump(2) << '\n';
      } else if (f == Format::csv) {
        json rows = json::array();
        flatten(result, "", rows);
        print_csv(out, rows, {"field", "value"});
      } else {
        print_evaluation_table(out, result);
      }
    };
  });

  std::string sweep_route, lever_text, fixed_scenario, fixed_file;
  double from = 0.0, to = 0.0;
  int steps = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one lever over a grid");
  sweep_cmd->add_option("--route", sweep_route, "hefa or atj")->required();
  sweep_cmd->add_option("--lever", lever_text, "tax_discount, carbon_price, saf_premium, byproduct_premium, capital_grant")
      ->required();
  sweep_cmd->add_option("--from", from, "First grid value")->required();
  sweep_cmd->add_option("--to", to, "Last grid value")->required();
  sweep_cmd->add_option("--steps", steps, "Number of grid points (>= 2)")->required();
  sweep_cmd->add_option("--scenario", fixed_scenario, "Package for the other levers (default base)");
  sweep_cmd->add_option("--package", fixed_file, "JSON package file for the other levers");
  sweep_cmd->callback([&] {
    action = [&] {
      const Format f = parse_format(g.format);
      const DatasetBundle bundle = resolve_bundle(g);
      const EvaluationOptions options = options_of(g);
      SweepSpec spec;
      spec.lever = parse_lever(lever_text);
      spec.from = from;
      spec.to = to;
      spec.steps = steps;
      spec.fixed = resolve_package(fixed_scenario, fixed_file);
      const Route route = parse_route(sweep_route);
      const auto rows = sweep(route, spec, bundle, bundle.finance.defaults, options);
      print_rows(out, f, io::to_json(rows, options.currency),
                 {"lever_value", "contribution_margin", "net_margin", "max_capex", "currency"});
    };
  });

  int year = 0;
  std::string policy_text, bound_text;
  bool interpolate = false;
  auto* demand_cmd = app.add_subcommand("demand", "Query expected SAF demand (kt/y)");
  demand_cmd->add_option("--year", year, "Year in 2027-2037")->required();
  demand_cmd->add_option("--policy", policy_text, "corsia, probioqav or total (default: all)");
  demand_cmd->add_option("--bound", bound_text, "lower or higher (default: both)");
  demand_cmd->add_flag("--interpolate", interpolate, "Interpolate between milestone years");
  demand_cmd->callback([&] {
    action = [&] {
      const Format f = parse_format(g.format);
      const DatasetBundle bundle = resolve_bundle(g);
      std::vector<demand::Policy> policies = {demand::Policy::corsia, demand::Policy::probioqav, demand::Policy::total};
      std::vector<demand::CiBound> bounds = {demand::CiBound::lower, demand::CiBound::higher};
      if (!policy_text.empty()) policies = {demand::parse_policy(policy_text)};
      if (!bound_text.empty()) bounds = {demand::parse_bound(bound_text)};
      json rows = json::array();
      for (auto p : policies) {
        for (auto b : bounds) rows.push_back(io::to_json(demand::demand_at(bundle.demand, year, p, b, interpolate)));
      }
      print_rows(out, f, rows, {"year", "policy", "ci_bound", "volume_kt_per_year", "source"});
    };
  });

  auto* reproduce_cmd = app.add_subcommand("reproduce", "Compare computed values against the published ones");
  reproduce_cmd->callback([&] {
    action = [&] {
      const Format f = parse_format(g.format);
      const DatasetBundle bundle = resolve_bundle(g);
      print_rows(out, f, io::to_json(report::reproduce(bundle)),
                 {"section", "id", "computed", "published", "relative_error", "absolute_error", "status", "note"});
    };
  });

  std::string history_route = "hefa";
  bool no_taxes = false;
  auto* history_cmd = app.add_subcommand("history", "Year-by-year variable cost from historical prices (BRL/kg)");
  history_cmd->add_option("--route", history_route, "hefa or atj")->capture_default_str();
  history_cmd->add_flag("--no-taxes", no_taxes, "Exclude input taxes");
  history_cmd->callback([&] {
    action = [&] {
      const Format f = parse_format(g.format);
      const DatasetBundle bundle = resolve_bundle(g);
      const Route route = parse_route(history_route);
      print_rows(out, f, io::to_json(report::historical_comparison(bundle, route, !no_taxes), route),
                 {"year", "pre_tax_cost", "taxes", "total_variable", "byproduct_credit", "net_cost", "jet_fuel_price"});
    };
  });

  std::string host = "127.0.0.1", origin = "*";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve_cmd->add_option("--port", port, "TCP port")->capture_default_str();
  serve_cmd->add_option("--host", host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--cors-origin", origin, "Allowed CORS origin")->capture_default_str();
  serve_cmd->callback([&] {
    action = [&] {
      if (port < 0 || port > 65535) throw ValidationError("port", "port must be in 0-65535");
      serve(resolve_bundle(g), host, port, origin, out);
    };
  });

  std::string export_dir;
  auto* bundle_cmd = app.add_subcommand("bundle", "Inspect or export the dataset bundle");
  bundle_cmd->require_subcommand(1);
  auto* export_cmd = bundle_cmd->add_subcommand("export", "Write the bundle files to a directory");
  export_cmd->add_option("--out", export_dir, "Target directory")->required();
  export_cmd->callback([&] {
    action = [&] {
      const DatasetBundle bundle = resolve_bundle(g);
      if (!g.bundle_path.empty() &&
          std::filesystem::weakly_canonical(g.bundle_path) == std::filesystem::weakly_canonical(export_dir)) {
        throw ValidationError("out", "refusing to overwrite the source bundle");
      }
      write_bundle(bundle, export_dir);
      out << "wrote bundle to " << export_dir << '\n';
    };
  });
  auto* show_cmd = bundle_cmd->add_subcommand("show", "Print the bundle summary as JSON");
  show_cmd->callback([&] {
    action = [&] { out << io::bundle_summary(resolve_bundle(g)).dump(2) << '\n'; };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what();
    if (!e.field().empty()) err << " (field: " << e.field() << ")";
    err << '\n';
    return kExitValidation;
  } catch (const BundleError& e) {
    err << "error: bundle " << e.what() << '\n';
    return e.kind() == BundleError::Kind::missing_file ? kExitIo : kExitValidation;
  } catch (const service::PortInUse& e) {
    err << "error: port in use: " << e.what() << '\n';
    return kExitIo;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace saftea::cli

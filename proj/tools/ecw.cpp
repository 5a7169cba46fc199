// Command-line front end: graph generation, spectra, hitting times, Kemeny's
// constant, hitting-time sums and the verification suite for G_q(g).

#include "ecw/errors.hpp"
#include "ecw/graph.hpp"
#include "ecw/oracle.hpp"
#include "ecw/spectral.hpp"
#include "ecw/verify.hpp"
#include "ecw/walk.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum class Mode { exact, real };
enum class Method { closed, spectral, oracle };
enum class Format { text, json, csv, edges };

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::string command;
  int q = 1;
  int g = 0;
  Mode mode = Mode::exact;
  Method method = Method::closed;
  std::string out;
  std::optional<Format> format;
  std::vector<long long> pair;
  std::optional<std::size_t> max_nodes;
  std::vector<long long> corrupt;
};

std::size_t node_cap(const CliConfig& cfg) {
  if (cfg.max_nodes) return *cfg.max_nodes;
  if (const char* env = std::getenv("ECW_MAX_NODES")) {
    try {
      std::size_t used = 0;
      const auto cap = std::stoull(env, &used);
      if (used == std::string(env).size()) return cap;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("ECW_MAX_NODES is not a non-negative integer: '") + env + "'");
  }
  return ecw::kDefaultNodeCap;
}

ecw::GraphParams params_of(const CliConfig& cfg) {
  ecw::GraphParams p{cfg.q, cfg.g};
  try {
    p.validate();
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  }
  return p;
}

std::optional<std::pair<ecw::NodeId, ecw::NodeId>> pair_of(const std::vector<long long>& raw, std::size_t n) {
  if (raw.empty()) return std::nullopt;
  for (long long v : raw)
    if (v < 0 || static_cast<std::size_t>(v) >= n)
      throw UsageError("node id " + std::to_string(v) + " outside 0.." + std::to_string(n - 1));
  return std::pair{static_cast<ecw::NodeId>(raw[0]), static_cast<ecw::NodeId>(raw[1])};
}

Format format_or(const CliConfig& cfg, Format fallback) { return cfg.format.value_or(fallback); }

std::string rational_json(const ecw::Rational& r) { return ecw::to_string(r); }

void run_gen(const CliConfig& cfg, std::ostream& out) {
  const auto graph = ecw::build_graph(params_of(cfg), node_cap(cfg));
  switch (format_or(cfg, Format::json)) {
    case Format::json:
      out << ecw::to_json(graph) << '\n';
      break;
    case Format::csv:
    case Format::edges:
      ecw::write_edge_list(out, graph);
      break;
    case Format::text:
      throw UsageError("gen supports --format json|edges");
  }
}

void run_spectrum(const CliConfig& cfg, std::ostream& out) {
  const auto params = params_of(cfg);
  const auto format = format_or(cfg, Format::csv);
  if (cfg.method == Method::oracle) {
    const auto graph = ecw::build_graph(params, node_cap(cfg));
    const auto values = ecw::dense_spectrum(ecw::assemble_matrices(graph).normalized);
    if (format == Format::json) {
      nlohmann::ordered_json doc = {{"q", params.q}, {"g", params.g}, {"values", values}};
      out << doc.dump(2) << '\n';
    } else {
      out << "value\n";
      for (double v : values) out << ecw::format_double(v) << '\n';
    }
    return;
  }
  const auto spectrum = ecw::recursive_spectrum(params);
  if (format == Format::json) {
    nlohmann::ordered_json doc = {{"q", params.q}, {"g", params.g}};
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : spectrum.entries)
      entries.push_back({{"value", rational_json(e.value)}, {"multiplicity", e.multiplicity}});
    doc["entries"] = std::move(entries);
    out << doc.dump(2) << '\n';
  } else {
    ecw::write_spectrum_csv(out, spectrum);
  }
}

void run_hit(const CliConfig& cfg, std::ostream& out) {
  const auto params = params_of(cfg);
  const auto cap = node_cap(cfg);
  const auto graph = ecw::build_graph(params, cap);
  const auto pair = pair_of(cfg.pair, graph.node_count());

  if (cfg.method == Method::spectral) {
    const auto eig = ecw::dense_eigenpairs(ecw::assemble_matrices(graph));
    if (pair) {
      out << ecw::format_double(ecw::spectral_hitting(graph, eig.vectors, eig.values, pair->first, pair->second)) << '\n';
    } else {
      ecw::write_table_csv(out, ecw::spectral_hitting_table(graph, eig.vectors, eig.values));
    }
    return;
  }
  if (cfg.method == Method::oracle) {
    if (cfg.mode == Mode::exact) {
      const auto table = ecw::oracle_hitting_table_exact(graph);
      if (pair) out << ecw::to_string(table(pair->first, pair->second)) << '\n';
      else ecw::write_table_csv(out, table);
    } else {
      const auto table = ecw::oracle_hitting_table_float(graph);
      if (pair) out << ecw::format_double(table(pair->first, pair->second)) << '\n';
      else ecw::write_table_csv(out, table);
    }
    return;
  }
  if (pair) {
    const auto value = ecw::hitting_pair(graph, pair->first, pair->second);
    out << (cfg.mode == Mode::exact ? ecw::to_string(value) : ecw::format_double(value.get_d())) << '\n';
  } else if (cfg.mode == Mode::exact) {
    ecw::write_table_csv(out, ecw::hitting_table_exact(params, ecw::Execution::parallel,
                                                       std::min(cap, ecw::kDefaultExactTableCap)));
  } else {
    ecw::write_table_csv(out, ecw::hitting_table_float(params, ecw::Execution::parallel,
                                                       std::min(cap, ecw::kDefaultFloatTableCap)));
  }
}

void run_kemeny(const CliConfig& cfg, std::ostream& out) {
  const auto params = params_of(cfg);
  switch (cfg.method) {
    case Method::closed: {
      const auto k = ecw::kemeny_closed(params);
      out << (cfg.mode == Mode::exact ? ecw::to_string(k) : ecw::format_double(k.get_d())) << '\n';
      break;
    }
    case Method::spectral: {
      const auto k = ecw::kemeny_from_spectrum(ecw::recursive_spectrum(params));
      out << (cfg.mode == Mode::exact ? ecw::to_string(k) : ecw::format_double(k.get_d())) << '\n';
      break;
    }
    case Method::oracle:
      out << ecw::format_double(ecw::kemeny_oracle(ecw::build_graph(params, node_cap(cfg)))) << '\n';
      break;
  }
}

ecw::AggregateSums sums_for(const CliConfig& cfg, const ecw::GraphParams& params) {
  if (cfg.method == Method::closed)
    return {ecw::sum_hitting(params), ecw::sum_additive(params), ecw::sum_multiplicative(params)};
  if (cfg.method == Method::oracle) {
    const auto graph = ecw::build_graph(params, node_cap(cfg));
    return ecw::table_sums(ecw::oracle_hitting_table_exact(graph), graph);
  }
  throw UsageError("this command supports --method closed|oracle");
}

void run_sums(const CliConfig& cfg, std::ostream& out) {
  const auto params = params_of(cfg);
  const auto s = sums_for(cfg, params);
  if (format_or(cfg, Format::text) == Format::json) {
    nlohmann::ordered_json doc = {{"q", params.q},
                                  {"g", params.g},
                                  {"H", rational_json(s.hitting)},
                                  {"H_plus", rational_json(s.additive)},
                                  {"H_star", rational_json(s.multiplicative)}};
    out << doc.dump(2) << '\n';
  } else {
    out << "H " << ecw::to_string(s.hitting) << '\n'
        << "H+ " << ecw::to_string(s.additive) << '\n'
        << "H* " << ecw::to_string(s.multiplicative) << '\n';
  }
}

void run_mean_hit(const CliConfig& cfg, std::ostream& out) {
  const auto params = params_of(cfg);
  ecw::Rational mean;
  if (cfg.method == Method::closed) {
    mean = ecw::mean_hitting(params);
  } else {
    const auto s = sums_for(cfg, params);
    const ecw::Integer n(static_cast<unsigned long>(ecw::node_count(params)));
    mean = s.hitting / ecw::Rational(n * (n - 1));
    mean.canonicalize();
  }
  out << (cfg.mode == Mode::exact ? ecw::to_string(mean) : ecw::format_double(mean.get_d())) << '\n';
}

int run_verify(const CliConfig& cfg, std::ostream& out) {
  const auto params = params_of(cfg);
  ecw::VerifyOptions options;
  options.node_cap = node_cap(cfg);
  if (!cfg.corrupt.empty()) {
    const auto n = ecw::node_count(params);
    options.corrupt_entry = pair_of(cfg.corrupt, n);
  }
  const auto report = ecw::verify(params, options);
  if (format_or(cfg, Format::text) == Format::json)
    out << ecw::report_to_json(report) << '\n';
  else
    ecw::print_report(out, report);
  return report.overall() ? kExitOk : kExitFailed;
}

int dispatch(const CliConfig& cfg, std::ostream& out) {
  if (cfg.command == "gen") run_gen(cfg, out);
  else if (cfg.command == "spectrum") run_spectrum(cfg, out);
  else if (cfg.command == "hit") run_hit(cfg, out);
  else if (cfg.command == "kemeny") run_kemeny(cfg, out);
  else if (cfg.command == "sums") run_sums(cfg, out);
  else if (cfg.command == "mean-hit") run_mean_hit(cfg, out);
  else if (cfg.command == "verify") return run_verify(cfg, out);
  else throw UsageError("unknown command " + cfg.command);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-walk analytics on iterated edge-corona graphs G_q(g)", "ecw"};
  app.require_subcommand(1);
  CliConfig cfg;

  const std::map<std::string, Mode> modes{{"exact", Mode::exact}, {"float", Mode::real}};
  const std::map<std::string, Method> methods{
      {"closed", Method::closed}, {"spectral", Method::spectral}, {"oracle", Method::oracle}};
  const std::map<std::string, Format> formats{
      {"text", Format::text}, {"json", Format::json}, {"csv", Format::csv}, {"edges", Format::edges}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "clique size q >= 1")->required();
    sub->add_option("--g", cfg.g, "iteration count g >= 0")->required();
    sub->add_option("--mode", cfg.mode, "exact|float")->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
    sub->add_option("--method", cfg.method, "closed|spectral|oracle")
        ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
    sub->add_option("--out", cfg.out, "output file (default: standard output)");
    sub->add_option("--format", cfg.format, "json|csv|edges|text")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--max-nodes", cfg.max_nodes, "node cap (overrides ECW_MAX_NODES)");
  };

  add_common(app.add_subcommand("gen", "emit the graph as JSON or an edge list"));
  add_common(app.add_subcommand("spectrum", "eigenvalue multiset of P_g (recursive, or dense with --method oracle)"));
  auto* hit = app.add_subcommand("hit", "hitting time of one pair, or the full table as CSV");
  add_common(hit);
  hit->add_option("--pair", cfg.pair, "source and target node ids")->expected(2);
  add_common(app.add_subcommand("kemeny", "Kemeny's constant"));
  add_common(app.add_subcommand("sums", "H, H+ and H* hitting-time sums"));
  add_common(app.add_subcommand("mean-hit", "mean hitting time"));
  auto* verify = app.add_subcommand("verify", "cross-check every result against the brute-force oracle");
  add_common(verify);
  verify->add_option("--corrupt", cfg.corrupt, "test hook: perturb one recursion-table entry")
      ->expected(2)
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.out.empty()) return dispatch(cfg, std::cout);
    std::ostringstream buffer;
    const int code = dispatch(cfg, buffer);
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw UsageError("cannot open output file " + cfg.out);
    file << buffer.str();
    return code;
  } catch (const UsageError& e) {
    std::cerr << "ecw: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ecw::ResourceLimitError& e) {
    std::cerr << "ecw: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ecw: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "ecw: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "ecw: error: " << e.what() << '\n';
    return kExitFailed;
  }
}

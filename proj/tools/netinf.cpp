// netinf: command-line front end. Every invocation prints one JSON object on
// stdout. Exit 0 on success, 2 on bad arguments, 1 on runtime failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netinf/error.hpp"
#include "netinf/geom.hpp"
#include "netinf/graph.hpp"
#include "netinf/harness.hpp"
#include "netinf/rng.hpp"
#include "netinf/sbm.hpp"
#include "netinf/trees.hpp"
#include "netinf/urns.hpp"

namespace {

using netinf::Graph;
using netinf::ParameterError;
using netinf::RngStream;
using netinf::Tree;
using Json = nlohmann::ordered_json;

constexpr const char* kUncertainty = "+-3 standard errors (binomial or normal)";

// Seed, replica count and parallelism shared by the stochastic commands.
struct Common {
  std::optional<std::uint64_t> seed;
  std::size_t replicas = 1000;
  std::size_t jobs = 1;
  std::string csv;
  std::string config;
};

void add_seed(CLI::App* cmd, Common& c, bool required = true) {
  auto* opt = cmd->add_option("--seed", c.seed, "RNG seed (no default)");
  if (required) opt->required();
}

void add_replicas(CLI::App* cmd, Common& c, std::size_t fallback) {
  c.replicas = fallback;
  cmd->add_option("--replicas", c.replicas, "Monte Carlo replicas")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "worker threads; output does not depend on it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_csv(CLI::App* cmd, Common& c) {
  cmd->add_option("--csv", c.csv, "write raw samples to this CSV file");
}

Json header(const std::string& command, const Common& c, bool with_replicas) {
  Json out;
  out["command"] = command;
  out["version"] = NETINF_VERSION;
  out["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  out["replicas"] = with_replicas ? Json(c.replicas) : Json(nullptr);
  return out;
}

RngStream stream_of(const Common& c) { return RngStream(*c.seed, 0); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

Json parse_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

// One row per value, model in the first column, statistic named in the header.
void write_samples(const std::string& path, const std::string& statistic,
                   const std::vector<const netinf::harness::SampleSet*>& sets) {
  std::ostringstream out;
  out.precision(17);
  out << "model," << statistic << '\n';
  for (const auto* s : sets) {
    for (double v : s->values) out << s->model_tag << ',' << v << '\n';
  }
  write_file(path, out.str());
}

Json moments_json(const netinf::harness::Moments& m) {
  return {{"mean", m.mean},
          {"variance", m.variance},
          {"standard_error", m.standard_error},
          {"count", m.count}};
}

Json power_json(const netinf::harness::PowerReport& r) {
  return {{"power", r.power},
          {"size", r.size},
          {"power_minus_size", r.power - r.size},
          {"threshold", r.threshold},
          {"reject_above", r.reject_above},
          {"standard_errors", {{"power", r.standard_errors.first}, {"size", r.standard_errors.second}}},
          {"null", moments_json(r.null_moments)},
          {"alt", moments_json(r.alt_moments)}};
}

Json one_based(const std::vector<std::size_t>& v) {
  Json out = Json::array();
  for (auto x : v) out.push_back(x + 1);
  return out;
}

Graph load_graph(const std::string& path) { return netinf::parse_edge_list(read_file(path)); }

Tree load_tree(const std::string& path) {
  const Graph g = load_graph(path);
  try {
    return Tree::from_graph(g);
  } catch (const ParameterError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// SBM parameters: symmetric shorthand or the {k, p, Q, regime} schema.

struct SbmArgs {
  std::size_t k = 2;
  std::optional<double> a, b;
  std::vector<double> prior;
  std::string q_json;
  std::string regime = "logarithmic";
  std::string params_file;
};

void add_sbm_args(CLI::App* cmd, SbmArgs& s) {
  cmd->add_option("--k", s.k, "number of communities")->check(CLI::PositiveNumber);
  cmd->add_option("--a", s.a, "within-community rate (symmetric model)");
  cmd->add_option("--b", s.b, "across-community rate (symmetric model)");
  cmd->add_option("--p", s.prior, "community prior");
  cmd->add_option("--Q", s.q_json, "rate matrix as JSON, e.g. [[9,1],[1,9]]");
  cmd->add_option("--regime", s.regime, "logarithmic, linear or constant")
      ->check(CLI::IsMember({"logarithmic", "linear", "constant"}));
  cmd->add_option("--params", s.params_file, "SBM parameters as JSON {k, p, Q, regime}");
}

netinf::sbm::Regime parse_regime(const std::string& s) {
  if (s == "logarithmic") return netinf::sbm::Regime::kLogarithmic;
  if (s == "linear") return netinf::sbm::Regime::kLinear;
  if (s == "constant") return netinf::sbm::Regime::kConstant;
  throw ParameterError("unknown regime '" + s + "'");
}

netinf::sbm::SbmParams from_schema(const Json& j) {
  if (!j.is_object() || !j.contains("Q")) throw ParameterError("SBM parameters need Q");
  netinf::sbm::SbmParams p;
  try {
    p.rates = j.at("Q").get<std::vector<std::vector<double>>>();
    const std::size_t k = j.contains("k") ? j.at("k").get<std::size_t>() : p.rates.size();
    if (j.contains("p")) {
      p.prior = j.at("p").get<std::vector<double>>();
    } else {
      p.prior.assign(k, k == 0 ? 0.0 : 1.0 / static_cast<double>(k));
    }
    if (k != p.prior.size()) throw ParameterError("k disagrees with the length of p");
    p.regime = parse_regime(j.value("regime", std::string("logarithmic")));
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("malformed SBM parameters: ") + e.what());
  }
  p.validate();
  return p;
}

netinf::sbm::SbmParams resolve_sbm(const SbmArgs& s) {
  if (!s.params_file.empty()) {
    // A bad parameter file is malformed input, not a bad argument.
    try {
      return from_schema(parse_json_file(s.params_file));
    } catch (const ParameterError& e) {
      throw std::runtime_error(s.params_file + ": " + e.what());
    }
  }
  if (!s.q_json.empty()) {
    Json j;
    try {
      j["Q"] = Json::parse(s.q_json);
    } catch (const Json::parse_error& e) {
      throw ParameterError(std::string("--Q is not valid JSON: ") + e.what());
    }
    j["k"] = s.prior.empty() ? j["Q"].size() : s.prior.size();
    if (!s.prior.empty()) j["p"] = s.prior;
    j["regime"] = s.regime;
    return from_schema(j);
  }
  if (!s.a || !s.b) throw ParameterError("give --a and --b, or --Q, or --params");
  auto p = netinf::sbm::SbmParams::symmetric(s.k, *s.a, *s.b, parse_regime(s.regime));
  if (!s.prior.empty()) p.prior = s.prior;
  p.validate();
  return p;
}

Json sbm_json(const netinf::sbm::SbmParams& p) {
  const char* regime = p.regime == netinf::sbm::Regime::kLogarithmic ? "logarithmic"
                       : p.regime == netinf::sbm::Regime::kLinear    ? "linear"
                                                                      : "constant";
  return {{"k", p.k()}, {"p", p.prior}, {"Q", p.rates}, {"regime", regime}};
}

// ---------------------------------------------------------------------------
// Graph models and statistics used by geom and mc.

struct ModelArgs {
  std::size_t n = 0;
  double p = 0.5;
  std::size_t d = 2;
  std::string method = "auto";
};

netinf::geom::GramMethod parse_method(const std::string& s) {
  if (s == "auto") return netinf::geom::GramMethod::kAuto;
  if (s == "explicit") return netinf::geom::GramMethod::kExplicit;
  if (s == "bartlett") return netinf::geom::GramMethod::kBartlett;
  throw ParameterError("unknown method '" + s + "'");
}

netinf::harness::GraphGenerator generator(const std::string& model, const ModelArgs& m) {
  const auto method = parse_method(m.method);
  if (model == "er") return [m](RngStream& r) { return netinf::geom::sample_er(m.n, m.p, r); };
  if (model == "rgg") {
    return [m, method](RngStream& r) { return netinf::geom::sample_rgg(m.n, m.p, m.d, r, method); };
  }
  if (model == "wishart") {
    return [m, method](RngStream& r) {
      return netinf::geom::h_map(netinf::geom::sample_wishart(
          m.n, m.d, netinf::geom::EntryDist::kGaussian, netinf::geom::MatrixKind::kWishart, r,
          method));
    };
  }
  throw ParameterError("unknown graph model '" + model + "'");
}

netinf::harness::GraphStatistic statistic(const std::string& name, double p) {
  if (name == "tau") return [p](const Graph& g) { return netinf::geom::signed_triangle_stat(g, p); };
  if (name == "triangles") {
    return [](const Graph& g) { return static_cast<double>(netinf::geom::triangle_count(g)); };
  }
  if (name == "edges") return [](const Graph& g) { return static_cast<double>(g.edge_count()); };
  throw ParameterError("unknown statistic '" + name + "'");
}

void add_model_args(CLI::App* cmd, ModelArgs& m, bool with_d = true) {
  cmd->add_option("--n", m.n, "number of vertices")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--p", m.p, "edge density")->capture_default_str();
  if (with_d) {
    cmd->add_option("--d", m.d, "dimension")->capture_default_str()->check(CLI::PositiveNumber);
  }
  cmd->add_option("--method", m.method, "Gram sampling: auto, explicit or bartlett")
      ->check(CLI::IsMember({"auto", "explicit", "bartlett"}))
      ->capture_default_str();
}

Json model_json(const ModelArgs& m) {
  return {{"n", m.n}, {"p", m.p}, {"d", m.d}, {"method", m.method}};
}

// Calibration tables: a JSON object keyed by "n,p,d".
std::string table_key(std::size_t n, double p, std::size_t d) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu,%.17g,%zu", n, p, d);
  return buf;
}

Json calibration_json(const netinf::geom::Calibration& c) {
  return {{"n", c.n},
          {"p", c.p},
          {"d", c.d},
          {"replicas", c.replicas},
          {"er", moments_json(c.er)},
          {"geo", moments_json(c.geo)},
          {"tau_threshold", c.tau_threshold}};
}

std::optional<Json> table_lookup(const std::string& path, std::size_t n, double p, std::size_t d) {
  if (path.empty()) return std::nullopt;
  std::ifstream probe(path);
  if (!probe) return std::nullopt;
  const Json table = parse_json_file(path);
  const auto key = table_key(n, p, d);
  if (!table.is_object() || !table.contains(key)) return std::nullopt;
  return table.at(key);
}

void table_store(const std::string& path, const Json& entry) {
  Json table = Json::object();
  if (std::ifstream(path)) table = parse_json_file(path);
  if (!table.is_object()) throw std::runtime_error(path + ": calibration table is not an object");
  table[table_key(entry.at("n").get<std::size_t>(), entry.at("p").get<double>(),
                  entry.at("d").get<std::size_t>())] = entry;
  write_file(path, table.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Config files: `--config file.json` supplies any flag not given explicitly.

std::string scalar_arg(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  return v.dump();
}

std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const Json cfg = parse_json_file(path);
  if (!cfg.is_object()) throw std::runtime_error(path + ": config must be a JSON object");
  auto given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    for (auto& ch : flag) {
      if (ch == '_') ch = '-';
    }
    if (given(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    if (value.is_null()) continue;
    const bool flat_array =
        value.is_array() && std::none_of(value.begin(), value.end(), [](const Json& e) {
          return e.is_array() || e.is_object();
        });
    if (flat_array) {
      args.push_back(flag);
      for (const auto& e : value) args.push_back(scalar_arg(e));
    } else {
      args.push_back(flag);
      args.push_back(value.is_structured() ? value.dump() : scalar_arg(value));
    }
  }
  return args;
}

// ---------------------------------------------------------------------------

struct Cli {
  CLI::App app{"Simulation and inference for random network models"};
  std::function<Json()> action;

  // Option storage lives as long as the command body that captures it.
  template <class T>
  std::shared_ptr<T> state() {
    return std::make_shared<T>();
  }

  CLI::App* leaf(CLI::App* group, const std::string& name, const std::string& help,
                 std::shared_ptr<Common> common, std::function<Json()> body) {
    auto* cmd = group->add_subcommand(name, help);
    cmd->add_option("--config", common->config, "JSON file of flag values; flags override");
    cmd->callback([this, body] { action = body; });
    return cmd;
  }
};

void build_sbm(Cli& cli) {
  auto* group = cli.app.add_subcommand("sbm", "stochastic block models");
  group->require_subcommand(1);

  {
    auto c = cli.state<Common>();
    auto s = cli.state<SbmArgs>();
    auto n = std::make_shared<std::size_t>(0);
    auto edges = std::make_shared<std::string>();
    auto* cmd = cli.leaf(group, "gen", "sample a labeled SBM graph", c, [c, s, n, edges] {
      const auto params = resolve_sbm(*s);
      auto rng = stream_of(*c);
      const auto lg = netinf::sbm::sample_sbm(*n, params, rng);
      if (!edges->empty()) write_file(*edges, netinf::serialize_edge_list(lg.graph));
      std::vector<std::size_t> sizes(params.k(), 0);
      for (auto l : lg.labels) ++sizes[l];
      if (!c->csv.empty()) {
        std::ostringstream out;
        out << "vertex,community\n";
        for (std::size_t v = 0; v < lg.labels.size(); ++v) {
          out << v + 1 << ',' << lg.labels[v] + 1 << '\n';
        }
        write_file(c->csv, out.str());
      }
      Json out = header("sbm gen", *c, false);
      out["parameters"] = {{"n", *n}, {"sbm", sbm_json(params)}};
      out["edge_count"] = lg.graph.edge_count();
      out["community_sizes"] = sizes;
      out["edges_file"] = edges->empty() ? Json(nullptr) : Json(*edges);
      return out;
    });
    add_sbm_args(cmd, *s);
    add_seed(cmd, *c);
    add_csv(cmd, *c);
    cmd->add_option("--n", *n, "number of vertices")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--edges", *edges, "write the edge list here");
  }

  {
    auto c = cli.state<Common>();
    auto s = cli.state<SbmArgs>();
    auto pair = std::make_shared<std::vector<std::size_t>>();
    auto n = std::make_shared<std::optional<double>>();
    auto* cmd = cli.leaf(group, "chd", "CH-divergence between two communities", c, [c, s, pair, n] {
      const auto params = resolve_sbm(*s);
      const auto prof = netinf::sbm::community_profiles(params);
      std::size_t i = 0, j = 1;
      if (!pair->empty()) {
        if (pair->size() != 2) throw ParameterError("--pair takes two community indices");
        i = (*pair)[0] - 1;
        j = (*pair)[1] - 1;
      }
      if (i >= params.k() || j >= params.k() || i == j) {
        throw ParameterError("--pair needs two distinct communities in 1..k");
      }
      const auto r = netinf::sbm::ch_divergence(prof[i], prof[j]);
      Json out = header("sbm chd", *c, false);
      out["parameters"] = {{"sbm", sbm_json(params)}, {"pair", {i + 1, j + 1}}};
      out["d_plus"] = r.d_plus;
      out["t_star"] = r.t_star;
      if (params.regime == netinf::sbm::Regime::kLogarithmic && params.k() >= 2) {
        try {
          const auto verdict = netinf::sbm::exact_recovery_solvable(params);
          out["solvable"] = verdict.solvable;
          out["boundary"] = verdict.boundary;
          out["min_pair"] = {verdict.min_pair->first + 1, verdict.min_pair->second + 1};
          out["min_value"] = verdict.min_value;
        } catch (const ParameterError& e) {
          // Equal rows of Q can never be told apart.
          out["solvable"] = false;
          out["note"] = e.what();
        }
      }
      if (*n) {
        // Pairwise MAP errors for Poisson profiles scaled by ln n.
        const double ln_n = std::log(**n);
        std::vector<std::vector<double>> pe(params.k(), std::vector<double>(params.k(), 0.0));
        for (std::size_t a = 0; a < params.k(); ++a) {
          for (std::size_t b = a + 1; b < params.k(); ++b) {
            std::vector<double> la(prof[a]), lb(prof[b]);
            for (auto& x : la) x *= ln_n;
            for (auto& x : lb) x *= ln_n;
            pe[a][b] = pe[b][a] =
                netinf::sbm::pairwise_error(la, lb, params.prior[a], params.prior[b]).value;
          }
        }
        const auto bounds = netinf::sbm::map_error_bounds(pe);
        out["parameters"]["n"] = **n;
        out["bounds"] = {{"lower", bounds.lower}, {"upper", bounds.upper}};
      }
      return out;
    });
    add_sbm_args(cmd, *s);
    cmd->add_option("--pair", *pair, "communities to compare (1-based), default 1 2");
    cmd->add_option("--n", *n, "graph size for MAP error bounds");
  }

  {
    auto c = cli.state<Common>();
    auto s = cli.state<SbmArgs>();
    auto* cmd = cli.leaf(group, "solvable", "exact recovery verdict", c, [c, s] {
      const auto params = resolve_sbm(*s);
      const auto v = netinf::sbm::exact_recovery_solvable(params);
      Json out = header("sbm solvable", *c, false);
      out["parameters"] = {{"sbm", sbm_json(params)}};
      out["solvable"] = v.solvable;
      out["boundary"] = v.boundary;
      out["min_pair"] = v.min_pair ? Json{v.min_pair->first + 1, v.min_pair->second + 1}
                                   : Json(nullptr);
      out["min_value"] = v.min_value;
      return out;
    });
    add_sbm_args(cmd, *s);
  }

  {
    auto c = cli.state<Common>();
    auto s = cli.state<SbmArgs>();
    auto* cmd = cli.leaf(group, "partition", "finest recoverable partition", c, [c, s] {
      const auto params = resolve_sbm(*s);
      Json blocks = Json::array();
      for (const auto& b : netinf::sbm::finest_partition(params)) blocks.push_back(one_based(b));
      Json out = header("sbm partition", *c, false);
      out["parameters"] = {{"sbm", sbm_json(params)}};
      out["blocks"] = blocks;
      return out;
    });
    add_sbm_args(cmd, *s);
  }

  {
    auto c = cli.state<Common>();
    auto s = cli.state<SbmArgs>();
    auto n = std::make_shared<std::size_t>(0);
    auto corruption = std::make_shared<double>(0.1);
    auto rounds = std::make_shared<std::size_t>(2);
    auto* cmd = cli.leaf(group, "recover", "genie-aided recovery by degree profiling", c,
                         [c, s, n, corruption, rounds] {
      const auto params = resolve_sbm(*s);
      const RngStream base = stream_of(*c);
      std::vector<double> accuracy(c->replicas);
      netinf::harness::for_each_replica(c->replicas, c->jobs, [&](std::size_t r) {
        auto local = base.replica(r);
        const auto lg = netinf::sbm::sample_sbm(*n, params, local);
        const auto labels = netinf::sbm::genie_recover(lg, params, *corruption, *rounds, local);
        accuracy[r] = netinf::sbm::label_accuracy(labels, lg.labels);
      });
      std::size_t exact = 0;
      for (double a : accuracy) exact += a == 1.0;
      const double rate = static_cast<double>(exact) / static_cast<double>(c->replicas);
      Json out = header("sbm recover", *c, true);
      out["parameters"] = {{"n", *n}, {"corruption", *corruption}, {"rounds", *rounds},
                           {"sbm", sbm_json(params)}};
      out["mean_accuracy"] = c->replicas >= 2 ? Json(netinf::harness::mean_var(accuracy).mean)
                                              : Json(accuracy[0]);
      out["exact_recovery_rate"] = rate;
      out["standard_error"] = std::sqrt(rate * (1 - rate) / static_cast<double>(c->replicas));
      out["uncertainty"] = kUncertainty;
      if (params.regime == netinf::sbm::Regime::kLogarithmic) {
        out["solvable"] = netinf::sbm::exact_recovery_solvable(params).solvable;
      }
      return out;
    });
    add_sbm_args(cmd, *s);
    add_seed(cmd, *c);
    add_replicas(cmd, *c, 10);
    cmd->add_option("--n", *n, "number of vertices")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--corruption", *corruption, "initial label corruption rate")
        ->capture_default_str();
    cmd->add_option("--rounds", *rounds, "degree-profiling rounds")->capture_default_str();
  }
}

void build_geom(Cli& cli) {
  auto* group = cli.app.add_subcommand("geom", "random geometric graphs on the sphere");
  group->require_subcommand(1);

  {
    auto c = cli.state<Common>();
    auto m = cli.state<ModelArgs>();
    auto model = std::make_shared<std::string>("rgg");
    auto edges = std::make_shared<std::string>();
    auto* cmd = cli.leaf(group, "gen", "sample one graph", c, [c, m, model, edges] {
      auto rng = stream_of(*c);
      const Graph g = generator(*model, *m)(rng);
      if (!edges->empty()) write_file(*edges, netinf::serialize_edge_list(g));
      Json out = header("geom gen", *c, false);
      out["parameters"] = model_json(*m);
      out["parameters"]["model"] = *model;
      out["edge_count"] = g.edge_count();
      out["triangles"] = netinf::geom::triangle_count(g);
      out["tau"] = netinf::geom::signed_triangle_stat(g, m->p);
      if (*model == "rgg") out["threshold"] = netinf::geom::threshold(m->p, m->d);
      out["edges_file"] = edges->empty() ? Json(nullptr) : Json(*edges);
      return out;
    });
    add_model_args(cmd, *m);
    add_seed(cmd, *c);
    cmd->add_option("--model", *model, "er, rgg or wishart")
        ->check(CLI::IsMember({"er", "rgg", "wishart"}))
        ->capture_default_str();
    cmd->add_option("--edges", *edges, "write the edge list here");
  }

  {
    auto c = cli.state<Common>();
    auto m = cli.state<ModelArgs>();
    auto graph = std::make_shared<std::string>();
    auto table = std::make_shared<std::string>();
    auto* cmd = cli.leaf(group, "detect", "signed-triangle geometry test", c,
                         [c, m, graph, table] {
      Json out = header("geom detect", *c, true);
      out["model"] = "G(n, p, d) vs G(n, p)";
      out["parameters"] = model_json(*m);
      out["n"] = m->n;
      out["p"] = m->p;
      out["d"] = m->d;
      out["statistic"] = "tau";
      out["uncertainty"] = kUncertainty;
      if (!graph->empty()) {
        const Graph g = load_graph(*graph);
        if (g.size() != m->n) throw ParameterError("--n does not match the graph");
        Json cal;
        if (auto hit = table_lookup(*table, m->n, m->p, m->d)) {
          cal = *hit;
        } else {
          cal = calibration_json(netinf::geom::calibrate_tau(m->n, m->p, m->d, c->replicas,
                                                             stream_of(*c), c->jobs));
          if (!table->empty()) table_store(*table, cal);
        }
        const auto det = netinf::geom::detect_geometry(g, m->p, cal.at("tau_threshold"));
        out["graph"] = *graph;
        out["tau"] = det.statistic;
        out["verdict"] = det.geometric ? "geometric" : "erdos-renyi";
        out["calibration"] = cal;
        return out;
      }
      const auto rep = netinf::harness::power_test(generator("er", *m), generator("rgg", *m),
                                                   statistic("tau", m->p), c->replicas,
                                                   stream_of(*c), c->jobs);
      out["power"] = rep.power;
      out["size"] = rep.size;
      out["verdict"] = rep.power - rep.size >= 0.9   ? "separated"
                       : rep.power - rep.size <= 0.1 ? "indistinguishable"
                                                     : "partial";
      out["calibration"] = power_json(rep);
      return out;
    });
    add_model_args(cmd, *m);
    add_seed(cmd, *c);
    add_replicas(cmd, *c, 1000);
    cmd->add_option("--graph", *graph, "edge list to classify instead of a power study");
    cmd->add_option("--table", *table, "calibration table to read and extend");
  }

  {
    auto c = cli.state<Common>();
    auto m = cli.state<ModelArgs>();
    auto table = std::make_shared<std::string>();
    auto* cmd = cli.leaf(group, "calibrate", "calibrate the tau threshold", c, [c, m, table] {
      const auto cal = netinf::geom::calibrate_tau(m->n, m->p, m->d, c->replicas, stream_of(*c),
                                                   c->jobs);
      const Json entry = calibration_json(cal);
      if (!table->empty()) table_store(*table, entry);
      Json out = header("geom calibrate", *c, true);
      out["parameters"] = model_json(*m);
      out["statistic"] = "tau";
      out["calibration"] = entry;
      out["table"] = table->empty() ? Json(nullptr) : Json(*table);
      out["uncertainty"] = kUncertainty;
      return out;
    });
    add_model_args(cmd, *m);
    add_seed(cmd, *c);
    add_replicas(cmd, *c, 1000);
    cmd->add_option("--table", *table, "calibration table to create or extend");
  }

  {
    auto c = cli.state<Common>();
    auto p = std::make_shared<double>(0.5);
    auto graph = std::make_shared<std::string>();
    auto candidates = std::make_shared<std::vector<std::size_t>>();
    auto table = std::make_shared<std::string>();
    auto* cmd = cli.leaf(group, "dimest", "estimate the dimension of a geometric graph", c,
                         [c, p, graph, candidates, table] {
      const Graph g = load_graph(*graph);
      std::map<std::size_t, double> means;
      Json cals = Json::object();
      std::uint64_t tag = 0;
      for (auto d : *candidates) {
        ++tag;
        Json cal;
        if (auto hit = table_lookup(*table, g.size(), *p, d)) {
          cal = *hit;
        } else {
          cal = calibration_json(netinf::geom::calibrate_tau(
              g.size(), *p, d, c->replicas, stream_of(*c).substream(tag), c->jobs));
          if (!table->empty()) table_store(*table, cal);
        }
        means[d] = cal.at("geo").at("mean").get<double>();
        cals[std::to_string(d)] = cal;
      }
      const auto d_hat = netinf::geom::estimate_dimension(g, *p, *candidates, means);
      Json out = header("geom dimest", *c, true);
      out["parameters"] = {{"graph", *graph}, {"n", g.size()}, {"p", *p},
                           {"candidates", *candidates}};
      out["statistic"] = "tau";
      out["tau"] = netinf::geom::signed_triangle_stat(g, *p);
      out["d_hat"] = d_hat;
      out["calibration"] = cals;
      return out;
    });
    add_seed(cmd, *c);
    add_replicas(cmd, *c, 200);
    cmd->add_option("--graph", *graph, "edge list")->required();
    cmd->add_option("--p", *p, "edge density")->capture_default_str();
    cmd->add_option("--candidates", *candidates, "candidate dimensions")->required();
    cmd->add_option("--table", *table, "calibration table to read and extend");
  }

  {
    auto c = cli.state<Common>();
    auto n = std::make_shared<std::size_t>(10000);
    auto cc = std::make_shared<double>(5.0);
    auto d = std::make_shared<std::size_t>(2);
    auto* cmd = cli.leaf(group, "sparse", "triangle test at p = c/n (reported, not asserted)", c,
                         [c, n, cc, d] {
      const auto rep = netinf::geom::sparse_triangle_experiment(*n, *cc, *d, c->replicas,
                                                                stream_of(*c), c->jobs);
      Json out = header("geom sparse", *c, true);
      out["parameters"] = {{"n", *n}, {"c", *cc}, {"d", *d}, {"p", rep.p}};
      out["statistic"] = "triangles";
      out["power"] = rep.test.power;
      out["size"] = rep.test.size;
      out["calibration"] = power_json(rep.test);
      out["uncertainty"] = kUncertainty;
      return out;
    });
    add_seed(cmd, *c);
    add_replicas(cmd, *c, 200);
    cmd->add_option("--n", *n, "number of vertices")->capture_default_str();
    cmd->add_option("--c", *cc, "mean degree")->capture_default_str();
    cmd->add_option("--d", *d, "dimension")->capture_default_str();
  }
}

void build_wishart(Cli& cli) {
  auto* group = cli.app.add_subcommand("wishart", "Wishart and GOE matrices");
  group->require_subcommand(1);

  {
    auto c = cli.state<Common>();
    auto m = cli.state<ModelArgs>();
    auto entries = std::make_shared<std::string>("gaussian");
    auto kind = std::make_shared<std::string>("wishart_scaled_nodiag");
    auto* cmd = cli.leaf(group, "sample", "moments of Tr(A^3)", c, [c, m, entries, kind] {
      const auto e = netinf::geom::parse_entry_dist(*entries);
      const auto k = netinf::geom::parse_matrix_kind(*kind);
      const auto method = parse_method(m->method);
      const auto n = m->n, d = m->d;
      const auto s = netinf::harness::collect(
          [=](RngStream& r) {
            return netinf::geom::tr_cubed(netinf::geom::sample_wishart(n, d, e, k, r, method));
          },
          c->replicas, stream_of(*c), std::string(netinf::geom::to_string(k)), c->jobs);
      if (!c->csv.empty()) write_samples(c->csv, "tr_cubed", {&s});
      Json out = header("wishart sample", *c, true);
      out["parameters"] = {{"n", n}, {"d", d}, {"entries", *entries}, {"kind", *kind},
                           {"method", m->method}};
      out["statistic"] = "tr_cubed";
      out["moments"] = c->replicas >= 2 ? moments_json(netinf::harness::mean_var(s))
                                        : Json({{"mean", s.values[0]}});
      if (k == netinf::geom::MatrixKind::kWishartScaledNoDiag) {
        const double nd = static_cast<double>(n);
        out["expected_mean"] = nd * (nd - 1) * (nd - 2) / std::sqrt(static_cast<double>(d));
      } else if (k == netinf::geom::MatrixKind::kGoeNoDiag) {
        out["expected_mean"] = 0.0;
      }
      if (e == netinf::geom::EntryDist::kRademacher) {
        out["note"] = "rademacher entries are atomic, outside the log-concave hypothesis";
      }
      out["uncertainty"] = kUncertainty;
      return out;
    });
    add_model_args(cmd, *m);
    add_seed(cmd, *c);
    add_replicas(cmd, *c, 1000);
    add_csv(cmd, *c);
    cmd->add_option("--entries", *entries, "gaussian, uniform-scaled or rademacher")
        ->capture_default_str();
    cmd->add_option("--kind", *kind, "wishart, goe_shifted, wishart_scaled_nodiag, goe_nodiag")
        ->capture_default_str();
  }

  {
    auto c = cli.state<Common>();
    auto m = cli.state<ModelArgs>();
    auto stat = std::make_shared<std::string>("tau");
    auto* cmd = cli.leaf(group, "compare", "H(W(n, d)) against G(n, 1/2, d)", c, [c, m, stat] {
      ModelArgs args = *m;
      args.p = 0.5;
      const auto f = statistic(*stat, 0.5);
      const RngStream rng = stream_of(*c);
      auto draw = [&](const std::string& model) -> netinf::harness::Draw {
        const auto gen = generator(model, args);
        return [gen, f](RngStream& r) { return f(gen(r)); };
      };
      const auto w = netinf::harness::collect(draw("wishart"), c->replicas,
                                              rng.substream(netinf::kNullPhase), "wishart",
                                              c->jobs);
      const auto g = netinf::harness::collect(draw("rgg"), c->replicas,
                                              rng.substream(netinf::kAltPhase), "rgg", c->jobs);
      if (!c->csv.empty()) write_samples(c->csv, *stat, {&w, &g});
      const double ks = netinf::harness::ks_distance(w, g);
      Json out = header("wishart compare", *c, true);
      out["parameters"] = {{"n", args.n}, {"d", args.d}, {"method", args.method}};
      out["statistic"] = *stat;
      out["ks"] = ks;
      out["tv_lower_bound"] = netinf::harness::tv_lower_bound(w, g);
      out["pass"] = ks < 0.05;
      out["wishart"] = moments_json(netinf::harness::mean_var(w));
      out["rgg"] = moments_json(netinf::harness::mean_var(g));
      return out;
    });
    m->method = "explicit";
    add_model_args(cmd, *m);
    add_seed(cmd, *c);
    add_replicas(cmd, *c, 1000);
    add_csv(cmd, *c);
    cmd->add_option("--statistic", *stat, "tau, triangles or edges")
        ->check(CLI::IsMember({"tau", "triangles", "edges"}))
        ->capture_default_str();
  }
}

struct UrnArgs {
  std::vector<std::uint64_t> counts{1, 1};
  std::uint64_t k = 1;
  std::string replacement;
};

netinf::urns::UrnState resolve_urn(const UrnArgs& u) {
  if (u.replacement.empty()) {
    auto s = netinf::urns::UrnState::diagonal(u.counts, u.k);
    s.validate();
    return s;
  }
  netinf::urns::UrnState s;
  s.counts = u.counts;
  try {
    s.replacement = Json::parse(u.replacement).get<std::vector<std::vector<std::uint64_t>>>();
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("--replacement must be a JSON matrix: ") + e.what());
  }
  s.validate();
  return s;
}

void add_urn_args(CLI::App* cmd, UrnArgs& u) {
  cmd->add_option("--counts", u.counts, "initial ball counts per color")->capture_default_str();
  cmd->add_option("--k", u.k, "balls added per draw (diagonal replacement)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--replacement", u.replacement, "replacement matrix as JSON");
}

void build_urn(Cli& cli) {
  auto* group = cli.app.add_subcommand("urn", "Polya urns");
  group->require_subcommand(1);

  {
    auto c = cli.state<Common>();
    auto u = cli.state<UrnArgs>();
    auto steps = std::make_shared<std::uint64_t>(1000);
    auto checkpoints = std::make_shared<std::vector<std::uint64_t>>();
    auto* cmd = cli.leaf(group, "run", "one urn trajectory", c, [c, u, steps, checkpoints] {
      const auto initial = resolve_urn(*u);
      auto rng = stream_of(*c);
      const auto traj = netinf::urns::urn_run(initial, *steps, *checkpoints, rng);
      Json snaps = Json::array();
      for (const auto& s : traj.snapshots) {
        snaps.push_back({{"step", s.step}, {"total", s.total}, {"counts", s.counts}});
      }
      if (!c->csv.empty()) {
        std::ostringstream out;
        out << "step,total";
        for (std::size_t i = 0; i < initial.colors(); ++i) out << ",color" << i + 1;
        out << '\n';
        for (const auto& s : traj.snapshots) {
          out << s.step << ',' << s.total;
          for (auto x : s.counts) out << ',' << x;
          out << '\n';
        }
        write_file(c->csv, out.str());
      }
      Json out = header("urn run", *c, false);
      out["parameters"] = {{"initial", initial.counts}, {"replacement", initial.replacement},
                           {"steps", *steps}, {"checkpoints", *checkpoints}};
      out["final_counts"] = traj.final_state.counts;
      out["final_total"] = traj.final_state.total();
      out["snapshots"] = snaps;
      return out;
    });
    add_urn_args(cmd, *u);
    add_seed(cmd, *c);
    add_csv(cmd, *c);
    cmd->add_option("--steps", *steps, "number of draws")->capture_default_str();
    cmd->add_option("--checkpoints", *checkpoints, "steps at which to record the state");
  }

  {
    auto c = cli.state<Common>();
    auto u = cli.state<UrnArgs>();
    auto n_final = std::make_shared<std::uint64_t>(10000);
    auto n_values = std::make_shared<std::vector<std::uint64_t>>();
    auto* cmd = cli.leaf(group, "check", "KS check of the limit law", c, [c, u, n_final, n_values] {
      const auto initial = resolve_urn(*u);
      Json out = header("urn check", *c, true);
      out["initial"] = initial.counts;
      out["replacement"] = initial.replacement;
      out["runs"] = c->replicas;
      const bool triangular = !u->replacement.empty();
      if (triangular) {
        if (n_values->size() < 2) throw ParameterError("triangular check needs two --n-values");
        const auto rep = netinf::urns::triangular_urn_scaling(initial, *n_values, c->replicas,
                                                              stream_of(*c), c->jobs);
        Json moments = Json::array();
        for (const auto& m : rep.moments) moments.push_back(moments_json(m));
        double worst = 0.0;
        for (double k : rep.consecutive_ks) worst = std::max(worst, k);
        out["law"] = "red / sqrt(total), consecutive sizes compared";
        out["n_values"] = rep.n_values;
        out["moments"] = moments;
        out["consecutive_ks"] = rep.consecutive_ks;
        out["ks"] = worst;
        out["pass"] = worst < 0.05;
        return out;
      }
      netinf::urns::LimitLaw law;
      std::vector<double> params(initial.counts.begin(), initial.counts.end());
      if (u->k > 1) {
        law = {netinf::urns::LawKind::kDirichletScaled, {static_cast<double>(u->k)}};
      } else if (initial.colors() == 2) {
        law = {netinf::urns::LawKind::kBeta, params};
      } else {
        law = {netinf::urns::LawKind::kDirichlet, params};
      }
      const auto rep = netinf::urns::limit_law_check(initial, law, *n_final, c->replicas,
                                                     stream_of(*c), c->jobs);
      out["n_final"] = *n_final;
      out["law"] = law.kind == netinf::urns::LawKind::kBeta ? "beta" : "dirichlet";
      out["alpha"] = rep.alpha;
      out["marginal_ks"] = rep.marginal_ks;
      out["ks"] = rep.ks;
      out["pass"] = rep.ks < 0.05;
      return out;
    });
    add_urn_args(cmd, *u);
    add_seed(cmd, *c);
    add_replicas(cmd, *c, 1000);
    cmd->add_option("--n-final", *n_final, "stop once the urn holds this many balls")
        ->capture_default_str();
    cmd->add_option("--n-values", *n_values, "sizes compared for a triangular replacement");
  }
}

Tree seed_tree(const std::string& shape, std::size_t size, netinf::trees::Model model) {
  if (shape == "default") return netinf::trees::default_seed(model);
  if (size == 0) throw ParameterError("seed size must be positive");
  if (shape == "star") return Tree::star(size);
  if (shape == "path") return Tree::path(size);
  throw ParameterError("unknown seed shape '" + shape + "'");
}

void build_tree(Cli& cli) {
  auto* group = cli.app.add_subcommand("tree", "uniform and preferential attachment trees");
  group->require_subcommand(1);

  {
    auto c = cli.state<Common>();
    auto model = std::make_shared<std::string>("ua");
    auto n = std::make_shared<std::size_t>(0);
    auto shape = std::make_shared<std::string>("default");
    auto seed_size = std::make_shared<std::size_t>(2);
    auto edges = std::make_shared<std::string>();
    auto sidecar = std::make_shared<std::string>();
    auto relabel = std::make_shared<bool>(false);
    auto* cmd = cli.leaf(group, "grow", "grow one tree", c,
                         [c, model, n, shape, seed_size, edges, sidecar, relabel] {
      const auto m = netinf::trees::parse_model(*model);
      auto rng = stream_of(*c);
      const auto rt = netinf::trees::grow(m, *n, seed_tree(*shape, *seed_size, m), rng);
      Tree tree = rt.tree;
      Json meta = {{"model", netinf::trees::to_string(m)}, {"seed_size", rt.seed_size}};
      if (*relabel) {
        const auto rl = netinf::trees::relabel_uniform(rt, rng);
        tree = rl.tree;
        meta["arrival_permutation"] = one_based(rl.perm);
      }
      if (!edges->empty()) write_file(*edges, netinf::serialize_edge_list(tree));
      if (!sidecar->empty()) write_file(*sidecar, meta.dump(2) + "\n");
      const auto md = netinf::trees::max_degree(tree);
      Json out = header("tree grow", *c, false);
      out["parameters"] = {{"model", *model}, {"n", *n}, {"seed_tree", *shape},
                           {"seed_size", rt.seed_size}, {"relabel", *relabel}};
      out["max_degree"] = {{"vertex", md.vertex + 1}, {"degree", md.degree}};
      out["centroid"] = one_based(netinf::trees::centroid(tree));
      out["sidecar"] = meta;
      return out;
    });
    add_seed(cmd, *c);
    cmd->add_option("--model", *model, "ua or pa")->capture_default_str();
    cmd->add_option("--n", *n, "number of vertices")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--seed-tree", *shape, "default, star or path")->capture_default_str();
    cmd->add_option("--seed-size", *seed_size, "vertices in a star or path seed")
        ->capture_default_str();
    cmd->add_option("--edges", *edges, "write the edge list here");
    cmd->add_option("--sidecar", *sidecar, "write the JSON sidecar here");
    cmd->add_flag("--relabel", *relabel, "hide the arrival order by a uniform relabeling");
  }

  {
    auto c = cli.state<Common>();
    auto model = std::make_shared<std::string>("ua");
    auto n = std::make_shared<std::size_t>(1000);
    auto eps = std::make_shared<double>(0.1);
    auto k = std::make_shared<std::optional<std::size_t>>();
    auto scoring = std::make_shared<std::string>("root");
    auto graph = std::make_shared<std::string>();
    auto* cmd = cli.leaf(group, "root", "root-finding confidence sets", c,
                         [c, model, n, eps, k, scoring, graph] {
      const auto m = netinf::trees::parse_model(*model);
      const std::size_t kk = k->value_or(
          netinf::trees::required_k(*eps, netinf::trees::KBound::kCentroidUa));
      if (!graph->empty()) {
        const Tree t = load_tree(*graph);
        const auto set = netinf::trees::root_confidence_set(t, kk, *eps);
        Json out = header("tree root", *c, false);
        out["parameters"] = {{"graph", *graph}, {"n", t.size()}, {"epsilon", *eps}, {"K", kk}};
        out["confidence_set"] = one_based(set.vertices);
        return out;
      }
      if (!c->seed) throw CLI::RequiredError("--seed");
      const auto sc = *scoring == "either" ? netinf::trees::Scoring::kEitherEndpoint
                                           : netinf::trees::Scoring::kRootOnly;
      const auto rep = netinf::trees::root_finding_experiment(
          m, *n, netinf::trees::default_seed(m), kk, *eps, sc, c->replicas, stream_of(*c), true,
          c->jobs);
      Json out = header("tree root", *c, true);
      out["parameters"] = {{"model", *model}, {"n", *n}, {"epsilon", *eps}, {"K", kk},
                           {"scoring", *scoring}};
      out["n"] = rep.n;
      out["model"] = netinf::trees::to_string(m);
      out["epsilon"] = rep.epsilon;
      out["K"] = rep.k;
      out["success_rate"] = rep.success_rate;
      out["standard_error"] = rep.standard_error;
      out["uncertainty"] = kUncertainty;
      if (m == netinf::trees::Model::kUA) {
        const double bound = 1.0 - 4.0 * *eps / (1.0 - *eps);
        out["guarantee"] = {
            {"statement",
             "liminf P(root in the K smallest-psi vertices) >= 1 - 4 eps / (1 - eps) "
             "for K >= 2.5 ln(1/eps) / eps, uniform attachment"},
            {"bound", bound},
            {"asymptotic", true},
            {"K_meets_requirement",
             kk >= netinf::trees::required_k(*eps, netinf::trees::KBound::kCentroidUa)},
            {"observed_meets_bound", rep.success_rate >= bound}};
      } else {
        out["guarantee"] = {
            {"statement",
             "success >= 1 - eps for K = c ln(1/eps)^2 / eps^4 with an unspecified constant c"},
            {"K_with_c_equal_1",
             netinf::trees::required_k(*eps, netinf::trees::KBound::kPaUpper)},
            {"asymptotic", true}};
      }
      return out;
    });
    add_seed(cmd, *c, false);
    add_replicas(cmd, *c, 1000);
    cmd->add_option("--model", *model, "ua or pa")->capture_default_str();
    cmd->add_option("--n", *n, "tree size")->capture_default_str();
    cmd->add_option("--epsilon", *eps, "error level")->capture_default_str();
    cmd->add_option("--k", *k, "confidence set size (default from epsilon)");
    cmd->add_option("--scoring", *scoring, "root or either (either seed endpoint)")
        ->check(CLI::IsMember({"root", "either"}))
        ->capture_default_str();
    cmd->add_option("--graph", *graph, "tree edge list; prints its confidence set");
  }

  {
    auto c = cli.state<Common>();
    auto model = std::make_shared<std::string>("pa");
    auto n = std::make_shared<std::size_t>(1000);
    auto seed_size = std::make_shared<std::size_t>(10);
    auto first = std::make_shared<std::string>("star");
    auto second = std::make_shared<std::string>("path");
    auto* cmd = cli.leaf(group, "seedtest", "seed influence on the maximum degree", c,
                         [c, model, n, seed_size, first, second] {
      const auto m = netinf::trees::parse_model(*model);
      const Tree ta = seed_tree(*first, *seed_size, m), tb = seed_tree(*second, *seed_size, m);
      const RngStream rng = stream_of(*c);
      auto draw = [&](const Tree& seed) -> netinf::harness::Draw {
        const auto nn = *n;
        return [m, nn, seed](RngStream& r) {
          return static_cast<double>(netinf::trees::max_degree(netinf::trees::grow(m, nn, seed, r)).degree);
        };
      };
      const auto a = netinf::harness::collect(draw(ta), c->replicas, rng.substream(1), *first,
                                              c->jobs);
      const auto b = netinf::harness::collect(draw(tb), c->replicas, rng.substream(2), *second,
                                              c->jobs);
      if (!c->csv.empty()) write_samples(c->csv, "max_degree", {&a, &b});
      Json out = header("tree seedtest", *c, true);
      out["parameters"] = {{"model", *model}, {"n", *n}, {"seed_size", *seed_size},
                           {"seeds", {*first, *second}}};
      out["statistic"] = "max_degree";
      out["ks"] = netinf::harness::ks_distance(a, b);
      out["tv_lower_bound"] = netinf::harness::tv_lower_bound(a, b);
      out[*first] = moments_json(netinf::harness::mean_var(a));
      out[*second + (*first == *second ? "_2" : "")] = moments_json(netinf::harness::mean_var(b));
      return out;
    });
    add_seed(cmd, *c);
    add_replicas(cmd, *c, 500);
    add_csv(cmd, *c);
    cmd->add_option("--model", *model, "ua or pa")->capture_default_str();
    cmd->add_option("--n", *n, "tree size")->capture_default_str();
    cmd->add_option("--seed-size", *seed_size, "vertices in each seed")->capture_default_str();
    cmd->add_option("--first", *first, "star or path")->capture_default_str();
    cmd->add_option("--second", *second, "star or path")->capture_default_str();
  }
}

void build_mc(Cli& cli) {
  auto* group = cli.app.add_subcommand("mc", "generic Monte Carlo comparisons of graph models");
  group->require_subcommand(1);

  struct McArgs {
    ModelArgs m;
    std::string null_model = "er";
    std::string alt_model = "rgg";
    std::string stat = "tau";
  };
  auto add_mc = [](CLI::App* cmd, McArgs& a) {
    add_model_args(cmd, a.m);
    cmd->add_option("--null", a.null_model, "er, rgg or wishart")->capture_default_str();
    cmd->add_option("--alt", a.alt_model, "er, rgg or wishart")->capture_default_str();
    cmd->add_option("--statistic", a.stat, "tau, triangles or edges")
        ->check(CLI::IsMember({"tau", "triangles", "edges"}))
        ->capture_default_str();
  };
  auto mc_params = [](const McArgs& a) {
    Json p = model_json(a.m);
    p["null"] = a.null_model;
    p["alt"] = a.alt_model;
    return p;
  };

  {
    auto c = cli.state<Common>();
    auto a = cli.state<McArgs>();
    auto* cmd = cli.leaf(group, "power", "power and size of a threshold test", c, [c, a, mc_params] {
      const auto rep = netinf::harness::power_test(
          generator(a->null_model, a->m), generator(a->alt_model, a->m),
          statistic(a->stat, a->m.p), c->replicas, stream_of(*c), c->jobs);
      Json out = header("mc power", *c, true);
      out["parameters"] = mc_params(*a);
      out["statistic"] = a->stat;
      out["power"] = rep.power;
      out["size"] = rep.size;
      out["calibration"] = power_json(rep);
      out["uncertainty"] = kUncertainty;
      return out;
    });
    add_mc(cmd, *a);
    add_seed(cmd, *c);
    add_replicas(cmd, *c, 1000);
  }

  {
    auto c = cli.state<Common>();
    auto a = cli.state<McArgs>();
    auto* cmd = cli.leaf(group, "tv", "statistic-induced TV lower bound", c, [c, a, mc_params] {
      const auto f = statistic(a->stat, a->m.p);
      auto draw = [&](const std::string& model) -> netinf::harness::Draw {
        const auto gen = generator(model, a->m);
        return [gen, f](RngStream& r) { return f(gen(r)); };
      };
      const RngStream rng = stream_of(*c);
      const auto x = netinf::harness::collect(draw(a->null_model), c->replicas,
                                              rng.substream(netinf::kNullPhase), a->null_model,
                                              c->jobs);
      const auto y = netinf::harness::collect(draw(a->alt_model), c->replicas,
                                              rng.substream(netinf::kAltPhase), a->alt_model,
                                              c->jobs);
      if (!c->csv.empty()) write_samples(c->csv, a->stat, {&x, &y});
      Json out = header("mc tv", *c, true);
      out["parameters"] = mc_params(*a);
      out["statistic"] = a->stat;
      out["tv_lower_bound"] = netinf::harness::tv_lower_bound(x, y);
      out["ks"] = netinf::harness::ks_distance(x, y);
      out["null"] = moments_json(netinf::harness::mean_var(x));
      out["alt"] = moments_json(netinf::harness::mean_var(y));
      return out;
    });
    add_mc(cmd, *a);
    add_seed(cmd, *c);
    add_replicas(cmd, *c, 1000);
    add_csv(cmd, *c);
  }
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  cli.app.require_subcommand(1);
  cli.app.set_version_flag("--version", std::string(NETINF_VERSION));
  build_sbm(cli);
  build_geom(cli);
  build_wishart(cli);
  build_urn(cli);
  build_tree(cli);
  build_mc(cli);

  std::vector<std::string> args;
  try {
    args = apply_config(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector

  try {
    cli.app.parse(args);
    const Json out = cli.action();
    std::cout << out.dump(2) << '\n';
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return cli.app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return cli.app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const netinf::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

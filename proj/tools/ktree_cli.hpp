#pragma once

#include "ktree/closed_forms.hpp"
#include "ktree/families.hpp"
#include "ktree/ktc.hpp"
#include "ktree/oracle.hpp"
#include "ktree/recurse.hpp"
#include "ktree/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ktree::cli {

/// Exit codes besides 0 (success) and 1 (verification found a FAIL).
enum ExitCode { kUsage = 2, kBudget = 3, kIo = 4 };

struct IoError : Error {
  using Error::Error;
};

namespace detail {

inline std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Writes `text` to `path`, or to `out` when the path is empty or "-".
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path);
  file << text;
  if (!file) throw IoError("write failed for " + path);
}

inline KClique parse_clique(const std::string& text) {
  std::vector<Vertex> ids;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw InvalidArgument("");
      ids.push_back(v);
    } catch (const std::exception&) {
      throw InvalidArgument("bad vertex id '" + item + "' in clique " + text);
    }
  }
  if (ids.empty()) throw InvalidArgument("empty clique");
  return KClique(std::move(ids));
}

inline Scope parse_scope(const std::string& text) {
  if (text == "global") return GlobalScope{};
  if (text.rfind("clique=", 0) == 0) return CliqueScope{parse_clique(text.substr(7))};
  if (text.rfind("vertex=", 0) == 0) {
    const KClique one = parse_clique(text.substr(7));
    if (one.size() != 1) throw InvalidArgument("vertex scope takes one id");
    return VertexScope{one[0]};
  }
  throw InvalidArgument("unknown scope '" + text + "'");
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string fraction_columns(const Rational& r) {
  std::ostringstream s;
  s.precision(12);
  s << numerator_of(r).str() << "," << denominator_of(r).str() << "," << to_double(r);
  return s.str();
}

inline std::string attachments_str(const KTree& t) {
  std::string out;
  for (std::size_t i = 0; i < t.attachments().size(); ++i) {
    if (i) out += ";";
    const KClique& a = t.attachments()[i];
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j) out += " ";
      out += std::to_string(a[j]);
    }
  }
  return out;
}

inline std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

inline nlohmann::json to_json(const verify::VerificationReport& report) {
  using nlohmann::json;
  json records = json::array();
  std::map<std::string, verify::Counters> per_check;
  for (const auto& r : report.records()) {
    per_check[r.check].count(r.status);
    json j = {{"instance", r.instance},
              {"check", r.check},
              {"status", verify::to_string(r.status)},
              {"margin", r.margin ? json(to_string(*r.margin)) : json(nullptr)},
              {"witness", r.witness}};
    if (!r.ktc.empty()) j["ktc"] = r.ktc;
    records.push_back(std::move(j));
  }
  json checks = json::object();
  for (const auto& [name, c] : per_check) {
    checks[name] = {{"pass", c.pass}, {"fail", c.fail}, {"skip", c.skip}};
  }
  const auto t = report.totals();
  return {{"instances", report.instances()},
          {"totals", {{"pass", t.pass}, {"fail", t.fail}, {"skip", t.skip}}},
          {"checks", checks},
          {"records", records}};
}

}  // namespace detail

/// Runs one CLI invocation. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"k-tree sub-tree statistics, extremal families and verification"};
  app.require_subcommand(1);
  std::function<int()> action;

  // gen
  int gen_k = 1, gen_n = 1;
  std::size_t class_budget = families::GenerationOptions{}.class_budget;
  unsigned workers = 1;
  auto* gen = app.add_subcommand("gen", "All isomorphism classes of k-trees on n vertices as .ktc blocks");
  gen->add_option("--k", gen_k, "clique size")->required()->check(CLI::PositiveNumber);
  gen->add_option("--n", gen_n, "vertex count")->required()->check(CLI::PositiveNumber);
  gen->add_option("--class-budget", class_budget, "maximum classes per level")->check(CLI::PositiveNumber);
  gen->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  gen->callback([&] {
    action = [&] {
      families::GenerationOptions options{class_budget, workers};
      if (gen_n < gen_k) throw InvalidArgument("--n must be at least --k");
      bool first = true;
      families::for_each_ktree(gen_k, gen_n, options, [&](const KTree& t) {
        if (t.order() != gen_n) return;
        if (!first) out << "\n";
        first = false;
        out << serialize_ktc(t);
      });
      return 0;
    };
  });

  // family
  std::string family_name;
  families::FamilySpec spec;
  auto* family = app.add_subcommand("family", "One member of a named family as a .ktc block");
  family->add_option("--family", family_name, "star, path, broom or caterpillar")->required();
  family->add_option("--k", spec.k, "clique size")->required()->check(CLI::PositiveNumber);
  family->add_option("--n", spec.n, "vertex count (star, path)");
  family->add_option("--handle,--s", spec.handle, "path length (broom) or stem length (caterpillar)");
  family->add_option("--bristles,--m", spec.bristles, "extra leaves (broom)");
  family->callback([&] {
    action = [&] {
      spec.family = families::parse_family(family_name);
      out << serialize_ktc(families::make(spec));
      return 0;
    };
  });

  // stats
  std::string stats_in;
  std::vector<std::string> scopes, engines;
  int budget = oracle::default_budget();
  auto* stats = app.add_subcommand("stats", "Exact sub-k-tree counts and mean orders as CSV");
  stats->add_option("--in", stats_in, ".ktc file, - for standard input")->required();
  stats->add_option("--scope", scopes, "global, clique=<v1,..,vk> or vertex=<v>; repeatable");
  stats->add_option("--engine", engines, "oracle or recursive; repeatable");
  stats->add_option("--budget", budget, "oracle enumeration budget on n-k")->check(CLI::PositiveNumber);
  stats->callback([&] {
    action = [&] {
      const KTree t = parse_ktc(detail::read_input(stats_in));
      if (scopes.empty()) scopes.push_back("global");
      if (engines.empty()) engines.push_back("recursive");
      std::ostringstream csv;
      csv << "k,n,scope,engine,N,R,Nbar,Rbar,mu_num,mu_den,mu\n";
      for (const std::string& scope_text : scopes) {
        const Scope scope = detail::parse_scope(scope_text);
        for (const std::string& engine : engines) {
          SubtreeStats s;
          if (engine == "oracle") {
            s = oracle::stats(t, scope, budget);
          } else if (engine == "recursive") {
            s = recurse::stats(t, scope);
          } else {
            throw InvalidArgument("unknown engine '" + engine + "'");
          }
          csv << t.k() << "," << t.order() << "," << detail::csv_field(to_string(scope)) << "," << engine
              << "," << s.count_containing << "," << s.order_sum_containing << "," << s.count_avoiding
              << "," << s.order_sum_avoiding << "," << detail::fraction_columns(s.mean) << "\n";
        }
      }
      out << csv.str();
      return 0;
    };
  });

  // char-tree
  std::string char_in, char_clique, char_dot;
  auto* char_tree = app.add_subcommand("char-tree", "1-characteristic tree of a k-tree at a k-clique");
  char_tree->add_option("--in", char_in, ".ktc file, - for standard input")->required();
  char_tree->add_option("--clique", char_clique, "comma-separated vertex ids")->required();
  char_tree->add_option("--dot", char_dot, "write DOT here (- for standard output)");
  char_tree->callback([&] {
    action = [&] {
      const KTree t = parse_ktc(detail::read_input(char_in));
      const auto ct = recurse::characteristic_tree(t, detail::parse_clique(char_clique));
      if (!char_dot.empty()) {
        detail::emit(char_dot, ct.to_dot(), out);
        if (char_dot == "-") return 0;
      }
      std::ostringstream text;
      text << "node,vertex,parent\n";
      std::vector<int> parent(static_cast<std::size_t>(ct.node_count()), -1);
      for (auto [p, c] : ct.edges) parent[c] = p;
      for (int i = 0; i < ct.node_count(); ++i) {
        text << i << "," << (i == 0 ? "C" : std::to_string(ct.vertex_of_node[i])) << ","
             << (i == 0 ? "" : std::to_string(parent[i])) << "\n";
      }
      out << text.str();
      return 0;
    };
  });

  // verify
  verify::VerifyOptions vopt;
  std::string check_list = "all", json_path;
  bool no_timestamp = false;
  auto* ver = app.add_subcommand("verify", "Machine-check the theorems over all classes up to n-max");
  ver->add_option("--k", vopt.k, "clique size")->required()->check(CLI::PositiveNumber);
  ver->add_option("--n-min", vopt.n_min, "smallest order (default k)");
  ver->add_option("--n-max", vopt.n_max, "largest order")->required();
  ver->add_option("--checks", check_list, "comma list of checks, or all");
  ver->add_option("--json", json_path, "write the full report here (- for standard output)");
  ver->add_flag("--fail-fast", vopt.fail_fast, "stop after the first level with a FAIL");
  ver->add_option("--workers", vopt.workers, "worker threads")->check(CLI::PositiveNumber);
  ver->add_option("--seed", vopt.seed, "seed for relabeling and sampled checks");
  ver->add_option("--budget", vopt.oracle_budget, "oracle enumeration budget on n-k")
      ->check(CLI::PositiveNumber);
  ver->add_option("--class-budget", vopt.generation.class_budget, "maximum classes per level")
      ->check(CLI::PositiveNumber);
  ver->add_flag("--no-timestamp", no_timestamp, "omit the timestamp from the JSON report");
  ver->callback([&] {
    action = [&] {
      vopt.checks = verify::parse_checks(check_list);
      vopt.generation.workers = vopt.workers;
      vopt.aux.seed = vopt.seed;
      const auto report = verify::run_verify(vopt, [&](int n, std::size_t classes) {
        err << "n=" << n << ": " << classes << " classes\n";
      });
      if (!json_path.empty()) {
        nlohmann::json j = detail::to_json(report);
        j["seed"] = vopt.seed;
        j["k"] = vopt.k;
        j["n_min"] = vopt.n_min < 0 ? vopt.k : vopt.n_min;
        j["n_max"] = vopt.n_max;
        j["check_list"] = check_list;
        if (!no_timestamp) j["generated_at"] = detail::timestamp();
        detail::emit(json_path, j.dump(2) + "\n", out);
      }
      std::map<std::string, verify::Counters> per_check;
      for (const auto& r : report.records()) per_check[r.check].count(r.status);
      std::ostream& summary = json_path == "-" ? err : out;
      for (const auto& [name, c] : per_check) {
        summary << name << " pass=" << c.pass << " fail=" << c.fail << " skip=" << c.skip << "\n";
      }
      for (const auto& r : report.records()) {
        if (r.status == verify::Status::Fail) {
          summary << "FAIL " << r.check << " " << r.witness << "\n" << r.ktc;
        }
      }
      const auto t = report.totals();
      summary << "instances=" << report.instances() << " pass=" << t.pass << " fail=" << t.fail
              << " skip=" << t.skip << " seed=" << vopt.seed << "\n";
      return report.ok() ? 0 : 1;
    };
  });

  // extremal
  int ext_k = 1, ext_n = 1, top = 1;
  std::string objective = "min-global", filter = "all", csv_path;
  auto* ext = app.add_subcommand("extremal", "Rank all classes on n vertices by an objective");
  ext->add_option("--k", ext_k, "clique size")->required()->check(CLI::PositiveNumber);
  ext->add_option("--n", ext_n, "vertex count")->required()->check(CLI::PositiveNumber);
  ext->add_option("--objective", objective, "min-global, max-global or max-local");
  ext->add_option("--filter", filter, "all, series-reduced or path-type");
  ext->add_option("--top", top, "keep entries of rank <= top")->check(CLI::PositiveNumber);
  ext->add_option("--csv", csv_path, "write the table here instead of standard output");
  ext->add_option("--class-budget", class_budget, "maximum classes per level")->check(CLI::PositiveNumber);
  ext->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  ext->callback([&] {
    action = [&] {
      const auto entries = verify::top_ranks(
          verify::find_extremal(ext_k, ext_n, verify::parse_objective(objective), verify::parse_filter(filter),
                                families::GenerationOptions{class_budget, workers}),
          top);
      std::ostringstream csv;
      csv << "rank,k,n,value_num,value_den,value,code,attachments,witnesses\n";
      for (const auto& e : entries) {
        csv << e.rank << "," << ext_k << "," << ext_n << "," << detail::fraction_columns(e.value) << ","
            << e.code << "," << detail::csv_field(detail::attachments_str(e.tree)) << ","
            << detail::csv_field(verify::detail::cliques_str(e.witnesses)) << "\n";
      }
      detail::emit(csv_path, csv.str(), out);
      return 0;
    };
  });

  // plot-data
  int plot_k = 1, plot_n_min = 0, plot_n_max = 40;
  std::string plot_csv;
  auto* plot = app.add_subcommand("plot-data", "Mean orders of stars and caterpillars against the band");
  plot->add_option("--k", plot_k, "clique size")->required()->check(CLI::PositiveNumber);
  plot->add_option("--n-min", plot_n_min, "smallest order (default k+3)");
  plot->add_option("--n-max", plot_n_max, "largest order");
  plot->add_option("--csv", plot_csv, "write the table here instead of standard output");
  plot->callback([&] {
    action = [&] {
      const int k = plot_k;
      const int lo = std::max(plot_n_min, k + 3);
      std::ostringstream csv;
      csv.precision(12);
      csv << "k,n,family,mu_num,mu_den,mu,band_lower,band_upper,asymptote\n";
      for (int n = lo; n <= plot_n_max; ++n) {
        const double lower = (n + k) / 2.0 - 0.1 - std::pow(n, 3) / std::pow(2.0, (n - k) / 4.0);
        const double upper = (3.0 * n + k - 3) / 4;
        auto row = [&](const char* name, const KTree& t, double asymptote) {
          const auto s = recurse::global_stats_fast(t);
          csv << k << "," << n << "," << name << "," << detail::fraction_columns(s.mean) << "," << lower << ","
              << upper << "," << asymptote << "\n";
        };
        row("star", families::make_k_star(k, n), (n + k) / 2.0);
        // Caterpillars exist for n = 2s + 3 - k with s >= k + 1.
        if ((n + k - 3) % 2 == 0 && (n + k - 3) / 2 >= k + 1) {
          row("caterpillar", families::make_k_caterpillar(k, (n + k - 3) / 2), 0.75 * n + k / 4.0 - 37.0 / 12);
        }
      }
      detail::emit(plot_csv, csv.str(), out);
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }
  try {
    return action();
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace ktree::cli

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bslimit/commands.hpp"

using namespace bslimit;

namespace {

void add_graph_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("inputs", c.inputs, "Edge-list files, in sequence order");
  sub->add_option("--d", c.degree_bound, "Degree bound (default: from header or max degree)");
  sub->add_flag("--allow-disconnected", c.allow_disconnected, "Accept disconnected graphs");
  sub->add_option("--color-seed", c.color_seed, "Shuffle the greedy distance-coloring order");
}

void add_common(CLI::App* sub, RunConfig& c) {
  add_graph_options(sub, c);
  sub->add_option("--r", c.r, "Radius");
  sub->add_option("--depth", c.depth, "Maximum radius / trie depth");
  sub->add_option("--seed", c.seed, "Seed for every sampled step");
  sub->add_option("--out", c.out, "Write the report here instead of stdout");
  sub->add_flag("--brief", c.brief, "Drop per-entry detail that passed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local statistics and finite-depth limit objects for bounded-degree graphs"};
  app.require_subcommand(1);
  RunConfig c;
  std::string mode = "last";

  auto* stats = app.add_subcommand("stats", "Distributions of r-ball classes, uncolored and colored");
  add_common(stats, c);

  auto* converge = app.add_subcommand("converge", "TV distances and convergence verdicts across a sequence");
  add_common(converge, c);
  converge->add_option("--epsilon", c.epsilon, "Tolerance (decimal or a/b), default 1e-3");
  converge->add_flag("--colored", c.colored, "Also compare colored distributions");

  auto* color = app.add_subcommand("color", "Emit the coloring bundle");
  add_common(color, c);

  auto* build = app.add_subcommand("build", "Build the type trie");
  add_common(build, c);
  build->add_option("--mode", mode, "last | cesaro")->check(CLI::IsMember({"last", "cesaro"}));

  auto* inv = app.add_subcommand("verify-invariance", "Check the invariance identities on a graph");
  add_common(inv, c);
  inv->add_option("--mode", mode, "last | cesaro")->check(CLI::IsMember({"last", "cesaro"}));
  inv->add_option("--trie", c.trie_path, "Use a stored trie instead of building one");
  inv->add_option("--a", c.colors, "Edge colors to check (default: all)");

  auto* leaf = app.add_subcommand("verify-leafball", "Reconstruct leaf r-balls from chains");
  add_common(leaf, c);
  leaf->add_option("--sample", c.sample, "Number of sampled vertices (default: all)");

  auto* verify = app.add_subcommand("verify", "Invariance and leafball checks together");
  add_common(verify, c);
  verify->add_option("--mode", mode, "last | cesaro")->check(CLI::IsMember({"last", "cesaro"}));
  verify->add_option("--trie", c.trie_path, "Use a stored trie instead of building one");
  verify->add_option("--a", c.colors, "Edge colors to check (default: all)");
  verify->add_option("--sample", c.sample, "Number of sampled vertices (default: all)");

  auto* chain = app.add_subcommand("chain", "Chain-space operations");
  chain->require_subcommand(1);
  auto* sample = chain->add_subcommand("sample", "Draw chains from the trie measure");
  add_common(sample, c);
  sample->add_option("--mode", mode, "last | cesaro")->check(CLI::IsMember({"last", "cesaro"}));
  sample->add_option("--trie", c.trie_path, "Sample from a stored trie");
  sample->add_option("--count", c.count, "Number of chains");

  auto* generate = app.add_subcommand("generate", "Write a test graph as an edge list");
  generate->add_option("family", c.family, "cycle | path | star | complete | torus | regular")->required();
  generate->add_option("--n", c.n, "Vertices (leaves for star)");
  generate->add_option("--width", c.width, "Torus width");
  generate->add_option("--height", c.height, "Torus height");
  generate->add_option("--degree", c.regular_degree, "Degree for regular");
  generate->add_option("--seed", c.seed, "Seed for regular");
  generate->add_option("--out", c.out, "Write the edge list here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  c.mode = mode == "cesaro" ? EstimationMode::cesaro : EstimationMode::last;
  if (sample->parsed())
    c.command = "chain sample";
  else
    c.command = app.get_subcommands().front()->get_name();

  CommandResult res = run_command(c);
  std::string payload = res.text.empty() || res.exit_code != kExitOk ? res.report.dump(2) + "\n" : res.text;
  if (res.report.contains("error")) std::cerr << "error: " << res.report["error"]["message"].get<std::string>() << "\n";
  if (c.out.empty()) {
    std::cout << payload;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write '" << c.out << "'\n";
      return kExitUsage;
    }
    f << payload;
  }
  return res.exit_code;
}

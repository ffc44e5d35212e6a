// Writes the planted two-community tweet fixture as JSON lines.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tweetnet/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the planted-community tweet fixture"};
  std::string output = "planted_tweets.jsonl";
  std::uint64_t seed = 2018;
  int malformed = 3;
  app.add_option("-o,--output", output, "Destination file");
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--malformed", malformed, "Broken lines to interleave")
      ->check(CLI::Range(0, 3));
  CLI11_PARSE(app, argc, argv);

  std::ofstream out(output, std::ios::binary);
  if (!out) {
    std::cerr << "make_fixture: cannot write " << output << "\n";
    return 3;
  }
  out << tweetnet::synth::planted_fixture_jsonl(seed, malformed);
  return out ? 0 : 3;
}

// Minimal DIMACS solver for the bench harness tests: exit 10 on SAT, 20 on UNSAT.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "peblab/formulas.hpp"

int main(int argc, char** argv) {
  int delay_ms = 0;
  std::string path;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--delay-ms" && i + 1 < argc) {
      delay_ms = std::stoi(argv[++i]);
    } else {
      path = a;
    }
  }
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
  const auto r = peblab::brute_force_sat(peblab::from_dimacs(buf.str()));
  std::cout << (r.satisfiable ? "s SATISFIABLE" : "s UNSATISFIABLE") << "\n";
  return r.satisfiable ? 10 : 20;
}

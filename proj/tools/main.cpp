#include <iostream>

#include "catsim_app/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return catsim::app::run(args, std::cout, std::cerr);
}

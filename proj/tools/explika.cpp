#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "explika/cli.hpp"

int main(int argc, char** argv) {
  explika::CliEnvironment env;
  env.color = explika::color_enabled(std::getenv("EXPLIKA_COLOR"), isatty(STDOUT_FILENO) != 0);
  return explika::run_cli({argv, argv + argc}, std::cout, std::cerr, env);
}

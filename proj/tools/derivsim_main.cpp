#include "derivsim/cli.hpp"

int main(int argc, char** argv) { return derivsim::cli::run_cli(argc, argv); }

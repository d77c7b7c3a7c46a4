#include "uavcov/cli.hpp"

int main(int argc, char** argv) { return uavcov::cli::run_cli(argc, argv); }

#include "cli.hpp"

int main(int argc, char** argv) { return scocg::cli::cli_main(argc, argv); }

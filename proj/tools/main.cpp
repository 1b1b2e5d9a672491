#include "cli.hpp"

int main(int argc, char** argv) { return liftkit::cli::cli_main(argc, argv); }

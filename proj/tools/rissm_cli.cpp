// Thin executable wrapper around the library's CLI entry point.
#include <rissm/cli.hpp>

int main(int argc, char** argv) { return rissm::cli::run(argc, argv); }

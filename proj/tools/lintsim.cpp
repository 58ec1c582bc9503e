#include "lint/runner.hpp"

int main(int argc, char** argv) { return lint::cli::run_main(argc, argv); }

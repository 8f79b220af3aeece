#include "horokit/cli.hpp"

int main(int argc, char** argv) { return horokit::run_cli(argc, argv); }

#include "qwit/cli.hpp"

int main(int argc, char** argv) { return qwit::run_cli(argc, argv); }

#include "qclob/cli.hpp"

int main(int argc, char** argv) { return qclob::run_cli(argc, argv); }

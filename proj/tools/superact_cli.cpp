#include "superact/cli.hpp"

int main(int argc, char** argv) { return superact::run_cli(argc, argv); }

#include "tfvtg/cli.hpp"

int main(int argc, char** argv) { return tfvtg::run_cli(argc, argv); }

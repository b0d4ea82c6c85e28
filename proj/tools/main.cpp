#include "fundnet/cli.hpp"

int main(int argc, char** argv) { return fundnet::run_cli(argc, argv); }

#include "hrfe/cli.hpp"

int main(int argc, char** argv) { return hrfe::cli_main(argc, argv); }

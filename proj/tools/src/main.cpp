#include "rqtool/cli.hpp"

int main(int argc, char** argv) { return rqtool::cli_main(argc, argv); }

#include "crahnflood/cli.hpp"

int main(int argc, char** argv) { return crahn::cli_main(argc, argv); }

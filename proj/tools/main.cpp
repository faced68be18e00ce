#include "routegame/cli.hpp"

int main(int argc, char** argv) { return routegame::run_cli(argc, argv); }

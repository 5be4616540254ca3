#include "app/commands.hpp"

int main(int argc, char** argv) { return sicf::app::run_cli(argc, argv); }

#include "landair/cli_app.hpp"

int main(int argc, char** argv) { return landair::cli::run(argc, argv); }

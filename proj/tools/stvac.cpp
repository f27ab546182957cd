#include <string>
#include <vector>

#include "commands.hpp"

int main(int argc, char** argv) { return stvac::cli::run(std::vector<std::string>(argv, argv + argc)); }

#include "fdglm/cli.hpp"

int main(int argc, char** argv) {
    return fdglm::cli::run(argc, argv);
}

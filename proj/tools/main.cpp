#include "emofuse/cli.hpp"

int main(int argc, char** argv) {
    return emofuse::run_cli(argc, argv);
}

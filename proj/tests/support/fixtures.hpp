#pragma once

#include "crnsign/textio.hpp"

#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#ifndef CRNSIGN_SOURCE_DIR
#error "CRNSIGN_SOURCE_DIR must point at the repository root"
#endif

namespace crnsign::testing {

inline std::string source_path(const std::string &rel) {
    return std::string(CRNSIGN_SOURCE_DIR) + "/" + rel;
}

inline std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline Network load_fixture(const std::string &name) {
    return parse_network(read_text(source_path("fixtures/" + name + ".crn")));
}

} // namespace crnsign::testing

#pragma once

#include <iosfwd>
#include <string>

#include "slimtt/tensor_train.hpp"

namespace slimtt {

/// Binary TT container. Layout (all integers little-endian):
///   bytes 0..7   magic "SLIMTT01"
///   byte  8      kind: 'T' tensor, 'O' operator
///   byte  9      cyclic flag (0/1)
///   u32          order d
///   u32 x d      modes n_1..n_d
///   u32 x (d+1)  ranks r_0..r_d
///   doubles      cores in order, each in its little-endian storage layout
/// Round trips are bit-exact.
void save_tt(const TtTensor& t, std::ostream& out);
void save_tt(const TtOperator& a, std::ostream& out);
void save_tt_file(const TtTensor& t, const std::string& path);
void save_tt_file(const TtOperator& a, const std::string& path);

struct ContainerInfo {
    char kind = '?';
    bool cyclic = false;
    std::vector<int> modes;
    std::vector<int> ranks;
};

ContainerInfo peek_tt(std::istream& in);
ContainerInfo peek_tt_file(const std::string& path);

TtTensor load_tt_tensor(std::istream& in);
TtOperator load_tt_operator(std::istream& in);
TtTensor load_tt_tensor_file(const std::string& path);
TtOperator load_tt_operator_file(const std::string& path);

} // namespace slimtt

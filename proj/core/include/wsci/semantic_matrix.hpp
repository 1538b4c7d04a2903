// core/include/wsci/semantic_matrix.hpp

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef WSCI_SEMANTIC_MATRIX_HPP_
#define WSCI_SEMANTIC_MATRIX_HPP_

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "wsci/errors.hpp"

namespace wsci {

struct SemanticBlock {
  std::string name;
  int offset = 0;
  int width = 0;
};

/// Category-level semantic matrix: one m-dim column per category, stacked
/// from named blocks (attributes, word vectors, visual encodings).
struct SemanticMatrix {
  Eigen::MatrixXd A;  // m x C
  std::vector<SemanticBlock> blocks;

  int dim() const { return static_cast<int>(A.rows()); }
  int categories() const { return static_cast<int>(A.cols()); }
};

/// Stacks per-category blocks vertically after L2-normalizing each block's
/// columns, so heterogeneous sources contribute on a common scale.
SemanticMatrix hybrid_concat(
    const std::vector<std::pair<std::string, Eigen::MatrixXd>> &blocks);

void save_semantic_matrix(const SemanticMatrix &matrix,
                          const std::string &path);
SemanticMatrix load_semantic_matrix(const std::string &path);

}  // namespace wsci

#endif  // WSCI_SEMANTIC_MATRIX_HPP_

// core/src/semantic_matrix.cpp

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

#include "wsci/semantic_matrix.hpp"

#include <fstream>
#include <sstream>

#include "text_format.hpp"

namespace wsci {

SemanticMatrix hybrid_concat(
    const std::vector<std::pair<std::string, Eigen::MatrixXd>> &blocks) {
  if (blocks.empty()) throw DomainError("hybrid_concat needs at least 1 block");
  const Eigen::Index C = blocks.front().second.cols();
  Eigen::Index m = 0;
  for (const auto &[name, block] : blocks) {
    if (block.cols() != C)
      throw ShapeError("block '" + name + "' has " +
                       std::to_string(block.cols()) + " columns, expected " +
                       std::to_string(C));
    if (block.rows() < 1)
      throw ShapeError("block '" + name + "' is empty");
    m += block.rows();
  }

  SemanticMatrix out;
  out.A.resize(m, C);
  int offset = 0;
  for (const auto &[name, block] : blocks) {
    Eigen::MatrixXd normalized = block;
    for (Eigen::Index c = 0; c < C; ++c) {
      const double norm = normalized.col(c).norm();
      if (norm == 0.0)
        throw DomainError("block '" + name + "' has an all-zero column " +
                          std::to_string(c + 1));
      normalized.col(c) /= norm;
    }
    out.A.middleRows(offset, block.rows()) = normalized;
    out.blocks.push_back({name, offset, static_cast<int>(block.rows())});
    offset += static_cast<int>(block.rows());
  }
  return out;
}

void save_semantic_matrix(const SemanticMatrix &matrix,
                          const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write semantic matrix '" + path + "'");
  out << "semantic-matrix m=" << matrix.dim() << " C=" << matrix.categories()
      << " blocks=";
  for (std::size_t i = 0; i < matrix.blocks.size(); ++i) {
    if (i) out << ",";
    out << matrix.blocks[i].name << ":" << matrix.blocks[i].width;
  }
  out << "\n";
  // column-major: one line per category column
  for (int c = 0; c < matrix.categories(); ++c) {
    for (int r = 0; r < matrix.dim(); ++r) {
      if (r) out << " ";
      out << detail::fmt_double(matrix.A(r, c));
    }
    out << "\n";
  }
}

SemanticMatrix load_semantic_matrix(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open semantic matrix '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty semantic matrix", 1);

  SemanticMatrix out;
  int m = 0, C = 0;
  {
    std::istringstream hs(line);
    std::string magic, tok;
    hs >> magic;
    if (magic != "semantic-matrix")
      throw ParseError("missing 'semantic-matrix' magic", 1);
    std::string blocks_field;
    while (hs >> tok) {
      int value = 0;
      if (tok.rfind("m=", 0) == 0 && detail::parse_int(tok.substr(2), &value))
        m = value;
      else if (tok.rfind("C=", 0) == 0 &&
               detail::parse_int(tok.substr(2), &value))
        C = value;
      else if (tok.rfind("blocks=", 0) == 0)
        blocks_field = tok.substr(7);
      else
        throw ParseError("unrecognized header token '" + tok + "'", 1);
    }
    if (m < 1 || C < 1 || blocks_field.empty())
      throw ParseError("header must carry m=, C= and blocks=", 1);
    int offset = 0;
    std::istringstream bs(blocks_field);
    std::string entry;
    while (std::getline(bs, entry, ',')) {
      const auto colon = entry.find(':');
      int width = 0;
      if (colon == std::string::npos ||
          !detail::parse_int(entry.substr(colon + 1), &width) || width < 1)
        throw ParseError("bad block descriptor '" + entry + "'", 1);
      out.blocks.push_back({entry.substr(0, colon), offset, width});
      offset += width;
    }
    if (offset != m)
      throw ShapeError("block widths sum to " + std::to_string(offset) +
                       ", header says m=" + std::to_string(m));
  }

  out.A.resize(m, C);
  for (int c = 0; c < C; ++c) {
    if (!std::getline(in, line))
      throw ParseError("expected " + std::to_string(C) + " columns, got " +
                           std::to_string(c),
                       c + 1);
    std::istringstream vs(line);
    for (int r = 0; r < m; ++r)
      if (!(vs >> out.A(r, c)))
        throw ParseError("column " + std::to_string(c + 1) + " has fewer than " +
                             std::to_string(m) + " values",
                         c + 2);
  }
  for (int c = 0; c < C; ++c)
    if (out.A.col(c).norm() == 0.0)
      throw DomainError("semantic matrix has an all-zero column " +
                        std::to_string(c + 1));
  return out;
}

}  // namespace wsci

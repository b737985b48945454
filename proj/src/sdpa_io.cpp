#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "oprel/blocksdp.hpp"

namespace oprel {

void BlockSdp::validate() const {
  if (num_vars < 0) throw ShapeError("BlockSdp: negative variable count");
  if (static_cast<int>(cost.size()) != num_vars) throw ShapeError("BlockSdp: cost length");
  if (F.size() != blocks.size()) throw ShapeError("BlockSdp: F/blocks length mismatch");
  for (size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].size < 1) throw ShapeError("BlockSdp: empty block");
    if (static_cast<int>(F[b].size()) != num_vars + 1)
      throw ShapeError("BlockSdp: F matrix count mismatch");
    for (const SparseSym& mat : F[b])
      for (const SparseEntry& e : mat) {
        if (e.row < 0 || e.col < 0 || e.row >= blocks[b].size || e.col >= blocks[b].size ||
            e.row > e.col)
          throw ShapeError("BlockSdp: entry outside block upper triangle");
        if (blocks[b].diagonal && e.row != e.col)
          throw ShapeError("BlockSdp: off-diagonal entry in diagonal block");
      }
  }
}

std::string export_sdpa(const BlockSdp& problem) {
  problem.validate();
  std::ostringstream out;
  char buf[64];
  out << problem.num_vars << "\n";
  out << problem.blocks.size() << "\n";
  for (size_t b = 0; b < problem.blocks.size(); ++b) {
    if (b) out << ' ';
    out << (problem.blocks[b].diagonal ? -problem.blocks[b].size : problem.blocks[b].size);
  }
  out << "\n";
  for (int i = 0; i < problem.num_vars; ++i) {
    if (i) out << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", problem.cost[i]);
    out << buf;
  }
  out << "\n";
  for (size_t b = 0; b < problem.blocks.size(); ++b) {
    for (int mat = 0; mat <= problem.num_vars; ++mat) {
      for (const SparseEntry& e : problem.F[b][mat]) {
        if (e.value == 0.0) continue;
        std::snprintf(buf, sizeof buf, "%.17g", e.value);
        out << mat << ' ' << (b + 1) << ' ' << (e.row + 1) << ' ' << (e.col + 1) << ' ' << buf
            << "\n";
      }
    }
  }
  return out.str();
}

void export_sdpa_file(const BlockSdp& problem, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("export_sdpa: cannot open " + path);
  f << export_sdpa(problem);
}

namespace {

// Tokenize a structure/cost line, treating SDPA's permitted separators
// (commas, braces, parentheses) as whitespace.
std::vector<std::string> tokenize(const std::string& line) {
  std::string cleaned = line;
  for (char& c : cleaned)
    if (c == ',' || c == '{' || c == '}' || c == '(' || c == ')') c = ' ';
  std::istringstream in(cleaned);
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '"' || c == '*';
  }
  return true;
}

}  // namespace

BlockSdp import_sdpa(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int header = 0;  // 0: mDIM, 1: nBLOCK, 2: structure, 3: cost, 4: entries
  BlockSdp p;
  int nblocks = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (header < 2 && is_comment_or_blank(line)) continue;
    std::vector<std::string> toks = tokenize(line);
    if (header >= 2 && toks.empty()) continue;
    try {
      switch (header) {
        case 0:
          p.num_vars = std::stoi(toks.at(0));
          if (p.num_vars < 0) throw ParseError("negative mDIM", line_no);
          ++header;
          break;
        case 1:
          nblocks = std::stoi(toks.at(0));
          if (nblocks < 1) throw ParseError("nBLOCK must be positive", line_no);
          ++header;
          break;
        case 2: {
          if (static_cast<int>(toks.size()) != nblocks)
            throw ParseError("block structure entry count mismatch", line_no);
          for (const std::string& t : toks) {
            int s = std::stoi(t);
            if (s == 0) throw ParseError("zero block size", line_no);
            p.blocks.push_back({std::abs(s), s < 0});
          }
          p.F.assign(nblocks, std::vector<SparseSym>(p.num_vars + 1));
          ++header;
          if (p.num_vars == 0) ++header;  // the cost line is empty
          break;
        }
        case 3: {
          if (static_cast<int>(toks.size()) != p.num_vars)
            throw ParseError("cost vector length mismatch", line_no);
          for (const std::string& t : toks) p.cost.push_back(std::stod(t));
          ++header;
          break;
        }
        default: {
          if (toks.size() != 5) throw ParseError("expected 'matno blkno i j value'", line_no);
          const int mat = std::stoi(toks[0]);
          const int blk = std::stoi(toks[1]);
          const int i = std::stoi(toks[2]);
          const int j = std::stoi(toks[3]);
          const double v = std::stod(toks[4]);
          if (mat < 0 || mat > p.num_vars) throw ParseError("matno out of range", line_no);
          if (blk < 1 || blk > nblocks) throw ParseError("blkno out of range", line_no);
          const int size = p.blocks[blk - 1].size;
          if (i < 1 || j < 1 || i > size || j > size || i > j)
            throw ParseError("entry indices out of range", line_no);
          p.F[blk - 1][mat].push_back({i - 1, j - 1, v});
          break;
        }
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("malformed numeric field", line_no);
    }
  }
  if (header < 4) throw ParseError("truncated SDPA input", line_no);
  p.validate();
  return p;
}

BlockSdp import_sdpa_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("import_sdpa: cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return import_sdpa(buf.str());
}

}  // namespace oprel

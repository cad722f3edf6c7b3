#include "qbo/sdpa_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>
#include <vector>

#include "qbo/error.hpp"

namespace qbo {

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Entry {  // SDPA entry: F_mat[blk](r, c) = val, all 1-based
  int mat, blk, r, c;
  double val;
};

}  // namespace

std::string export_sdpa_string(const SDPInstance& inst) {
  inst.check();
  const std::size_t nb = inst.blocks.size();
  const std::size_t ne = inst.equalities.size();
  if (nb == 0 && ne == 0)
    throw Error(Error::Code::ValidationFailed, "nothing to export");

  std::vector<Entry> entries;
  for (std::size_t j = 0; j < nb; ++j) {
    const PSDBlock& b = inst.blocks[j];
    const int blk = static_cast<int>(j) + 1;
    for (const auto& e : b.lin)
      entries.push_back({static_cast<int>(e.var) + 1, blk, e.r + 1, e.c + 1, e.coef});
    for (const auto& e : b.cst)  // F0 = -const offset
      entries.push_back({0, blk, e.r + 1, e.c + 1, -e.value});
  }
  // Each equality Ex = d appears as the opposed pair Ex - d >= 0 and
  // d - Ex >= 0 on a trailing diagonal block.
  const int eq_blk = static_cast<int>(nb) + 1;
  for (std::size_t i = 0; i < ne; ++i) {
    const EqRow& row = inst.equalities[i];
    const int rp = 2 * static_cast<int>(i) + 1, rm = rp + 1;
    for (const auto& t : row.terms) {
      entries.push_back({static_cast<int>(t.var) + 1, eq_blk, rp, rp, t.coef});
      entries.push_back({static_cast<int>(t.var) + 1, eq_blk, rm, rm, -t.coef});
    }
    if (row.rhs != 0.0) {
      entries.push_back({0, eq_blk, rp, rp, row.rhs});
      entries.push_back({0, eq_blk, rm, rm, -row.rhs});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.mat, a.blk, a.r, a.c) < std::tie(b.mat, b.blk, b.r, b.c);
  });
  // Merge duplicates so the text form is canonical.
  std::vector<Entry> merged;
  for (const Entry& e : entries) {
    if (!merged.empty()) {
      Entry& m = merged.back();
      if (std::tie(m.mat, m.blk, m.r, m.c) == std::tie(e.mat, e.blk, e.r, e.c)) {
        m.val += e.val;
        continue;
      }
    }
    merged.push_back(e);
  }

  std::ostringstream os;
  os << "*QBO v1\n";
  os << "*QBO meta kind=" << inst.meta.kind << " level=" << inst.meta.level
     << "\n";
  for (const auto& [k, v] : inst.meta.info) os << "*QBO info " << k << " " << v << "\n";
  os << "*QBO objconst " << g17(inst.obj_const) << "\n";
  os << "*QBO eqrows " << ne << "\n";
  for (std::size_t j = 0; j < nb; ++j)
    if (!inst.blocks[j].label.empty())
      os << "*QBO label " << j << " " << inst.blocks[j].label << "\n";
  os << inst.var_count << "\n";
  os << (nb + (ne ? 1 : 0)) << "\n";
  for (std::size_t j = 0; j < nb; ++j) {
    if (j) os << " ";
    os << inst.blocks[j].size;
  }
  if (ne) {
    if (nb) os << " ";
    os << "-" << 2 * ne;
  }
  os << "\n";
  std::vector<double> c(inst.var_count, 0.0);
  for (const auto& t : inst.objective) c[t.var] -= t.coef;  // SDPA minimizes
  for (std::uint32_t i = 0; i < inst.var_count; ++i) {
    if (i) os << " ";
    os << g17(c[i]);
  }
  os << "\n";
  for (const Entry& e : merged) {
    if (e.val == 0.0) continue;
    os << e.mat << " " << e.blk << " " << e.r << " " << e.c << " " << g17(e.val)
       << "\n";
  }
  return os.str();
}

void export_sdpa(const SDPInstance& inst, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Error::Code::IOFailure, "cannot write " + path);
  f << export_sdpa_string(inst);
  if (!f.good()) throw Error(Error::Code::IOFailure, "write failed: " + path);
}

namespace {

// SDPA data lines may use commas and braces as separators.
std::vector<double> numbers_on_line(const std::string& line) {
  std::string s = line;
  for (char& ch : s)
    if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')')
      ch = ' ';
  std::vector<double> out;
  std::istringstream is(s);
  double v;
  while (is >> v) out.push_back(v);
  return out;
}

}  // namespace

SDPInstance import_sdpa_string(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  bool annotated = false;
  std::string meta_kind;
  int meta_level = 0;
  std::map<std::string, std::string> meta_info;
  double obj_const = 0.0;
  long eqrows = 0;
  std::map<int, std::string> labels;
  std::vector<std::string> data_lines;

  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '*' || line[0] == '"') {
      std::istringstream cs(line);
      std::string star, tag;
      cs >> star >> tag;
      if (star == "*QBO") {
        if (tag == "v1") annotated = true;
        else if (tag == "meta") {
          std::string kv;
          while (cs >> kv) {
            auto pos = kv.find('=');
            if (pos == std::string::npos) continue;
            const std::string key = kv.substr(0, pos), val = kv.substr(pos + 1);
            if (key == "kind") meta_kind = val;
            if (key == "level") meta_level = std::atoi(val.c_str());
          }
        } else if (tag == "info") {
          std::string key;
          cs >> key;
          std::string rest;
          std::getline(cs, rest);
          if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
          meta_info[key] = rest;
        } else if (tag == "objconst") {
          cs >> obj_const;
        } else if (tag == "eqrows") {
          cs >> eqrows;
        } else if (tag == "label") {
          int idx = -1;
          cs >> idx;
          std::string rest;
          std::getline(cs, rest);
          if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
          if (idx >= 0) labels[idx] = rest;
        }
      }
      continue;
    }
    data_lines.push_back(line);
  }
  if (data_lines.size() < 4)
    throw Error(Error::Code::ParseError, "sdpa: missing header lines");

  const auto mline = numbers_on_line(data_lines[0]);
  const auto bline = numbers_on_line(data_lines[1]);
  const auto sline = numbers_on_line(data_lines[2]);
  if (mline.size() != 1 || bline.size() != 1)
    throw Error(Error::Code::ParseError, "sdpa: malformed mDIM/nBLOCK");
  const long mdim = static_cast<long>(mline[0]);
  const long nblock = static_cast<long>(bline[0]);
  if (mdim < 0 || nblock < 1 || static_cast<long>(sline.size()) != nblock)
    throw Error(Error::Code::ParseError, "sdpa: malformed BLOCKsTRUCT");
  std::vector<long> bstruct(sline.size());
  for (std::size_t i = 0; i < sline.size(); ++i)
    bstruct[i] = static_cast<long>(sline[i]);
  const auto cvec = numbers_on_line(data_lines[3]);
  if (static_cast<long>(cvec.size()) != mdim)
    throw Error(Error::Code::ParseError, "sdpa: cost vector length mismatch");

  std::vector<Entry> entries;
  for (std::size_t li = 4; li < data_lines.size(); ++li) {
    const auto v = numbers_on_line(data_lines[li]);
    if (v.size() != 5)
      throw Error(Error::Code::ParseError,
                  "sdpa: entry line needs 5 fields: " + data_lines[li]);
    Entry e{static_cast<int>(v[0]), static_cast<int>(v[1]),
            static_cast<int>(v[2]), static_cast<int>(v[3]), v[4]};
    if (e.mat < 0 || e.mat > mdim || e.blk < 1 || e.blk > nblock)
      throw Error(Error::Code::ParseError, "sdpa: entry out of range");
    if (e.r > e.c) std::swap(e.r, e.c);
    entries.push_back(e);
  }

  SDPInstance inst;
  inst.var_count = static_cast<std::uint32_t>(mdim);
  inst.obj_const = obj_const;
  inst.meta.kind = meta_kind;
  inst.meta.level = meta_level;
  inst.meta.info = meta_info;
  for (long i = 0; i < mdim; ++i)
    if (cvec[i] != 0.0)
      inst.objective.push_back({static_cast<std::uint32_t>(i), -cvec[i]});

  const bool has_eq_block = annotated && eqrows > 0;
  const long psd_blocks = nblock - (has_eq_block ? 1 : 0);
  if (has_eq_block && bstruct[psd_blocks] != -2 * eqrows)
    throw Error(Error::Code::ParseError, "sdpa: equality block size mismatch");

  // Diagonal blocks (negative BLOCKsTRUCT) split into 1x1 PSD blocks; our
  // annotated exports only write positive sizes here, so this path is for
  // foreign files and never disturbs round trips.
  struct Target {
    std::size_t base;
    bool diag;
    int size;
  };
  std::vector<Target> tgt(static_cast<std::size_t>(psd_blocks));
  for (long j = 0; j < psd_blocks; ++j) {
    const long sz = std::labs(bstruct[j]);
    if (sz < 1) throw Error(Error::Code::ParseError, "sdpa: empty block");
    tgt[j] = {inst.blocks.size(), bstruct[j] < 0, static_cast<int>(sz)};
    auto it = labels.find(static_cast<int>(j));
    const std::string label = it != labels.end() ? it->second : std::string();
    if (bstruct[j] < 0) {
      for (long i = 0; i < sz; ++i) inst.blocks.push_back({1, {}, {}, label});
    } else {
      inst.blocks.push_back({static_cast<int>(sz), {}, {}, label});
    }
  }

  std::vector<EqRow> eqs(static_cast<std::size_t>(has_eq_block ? eqrows : 0));
  for (const Entry& e : entries) {
    if (has_eq_block && e.blk == nblock) {
      if (e.r != e.c)
        throw Error(Error::Code::ParseError, "sdpa: off-diagonal equality entry");
      const long row = e.r;  // 1-based within the pair block
      if (row < 1 || row > 2 * eqrows)
        throw Error(Error::Code::ParseError, "sdpa: equality row out of range");
      if (row % 2 == 0) continue;  // mirrored opposite, redundant
      EqRow& er = eqs[static_cast<std::size_t>((row - 1) / 2)];
      if (e.mat == 0)
        er.rhs = e.val;
      else
        er.terms.push_back({static_cast<std::uint32_t>(e.mat - 1), e.val});
      continue;
    }
    const Target& t = tgt[static_cast<std::size_t>(e.blk - 1)];
    if (e.r < 1 || e.c > t.size)
      throw Error(Error::Code::ParseError, "sdpa: entry outside block");
    int r = e.r - 1, c = e.c - 1;
    std::size_t bi = t.base;
    if (t.diag) {
      if (r != c)
        throw Error(Error::Code::ParseError,
                    "sdpa: off-diagonal entry in diagonal block");
      bi += static_cast<std::size_t>(r);
      r = c = 0;
    }
    PSDBlock& b = inst.blocks[bi];
    if (e.mat == 0)
      b.cst.push_back({r, c, -e.val});
    else
      b.lin.push_back({r, c, static_cast<std::uint32_t>(e.mat - 1), e.val});
  }
  inst.equalities = std::move(eqs);
  inst.check();
  return inst;
}

SDPInstance import_sdpa(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Error::Code::IOFailure, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return import_sdpa_string(ss.str());
}

}  // namespace qbo

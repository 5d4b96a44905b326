#include <set>

#include "binary_io.hpp"
#include "svp/energy.hpp"
#include "svp/error.hpp"

namespace svp {

namespace {
constexpr char kTableMagic[4] = {'R', 'P', 'E', 'T'};
constexpr uint32_t kTableVersion = 1;
}  // namespace

std::string SerializeTable(const EnergyTable& table) {
  SVP_CHECK_ARG(table.grid_spec.n >= 1, "table grid spec has n = 0");
  detail::ByteWriter w;
  w.Raw(std::string_view(kTableMagic, 4));
  w.U32(kTableVersion);
  w.U32(table.grid_spec.n);
  w.U8(static_cast<uint8_t>(table.grid_spec.generator));
  w.U64(table.grid_spec.seed);
  w.U32(static_cast<uint32_t>(table.rows.size()));
  for (const EnergyRow& row : table.rows) {
    SVP_CHECK_ARG(row.scores.size() == table.grid_spec.n,
                  "table row length differs from grid size");
    w.U16(row.i);
    w.U16(row.j);
    for (float s : row.scores) w.F32(s);
  }
  return w.Take();
}

EnergyTable DeserializeTable(const std::string& bytes) {
  if (bytes.size() < 8) {
    throw Error(ErrorCode::kCorruptTable, "energy table file is truncated");
  }
  detail::ByteReader r(bytes, ErrorCode::kCorruptTable);
  if (r.Raw(4) != std::string_view(kTableMagic, 4)) {
    throw Error(ErrorCode::kFormat, "not an energy table file (bad magic)");
  }
  const uint32_t version = r.U32();
  if (version != kTableVersion) {
    throw Error(ErrorCode::kFormat,
                "unsupported energy table version " + std::to_string(version));
  }
  EnergyTable table;
  table.grid_spec.n = r.U32();
  const uint8_t generator = r.U8();
  if (generator > static_cast<uint8_t>(GridGenerator::kRandomUniform)) {
    throw Error(ErrorCode::kFormat, "unknown grid generator id in energy table");
  }
  table.grid_spec.generator = static_cast<GridGenerator>(generator);
  table.grid_spec.seed = r.U64();
  if (table.grid_spec.n == 0) {
    throw Error(ErrorCode::kCorruptTable, "energy table grid spec has n = 0");
  }
  const uint32_t pair_count = r.U32();
  const size_t row_bytes = 4 + size_t{table.grid_spec.n} * 4;
  if (r.remaining() != pair_count * row_bytes) {
    throw Error(ErrorCode::kCorruptTable,
                "energy table payload does not hold " + std::to_string(pair_count) +
                    " rows of " + std::to_string(table.grid_spec.n) + " scores");
  }
  std::set<std::pair<uint16_t, uint16_t>> seen;
  table.rows.resize(pair_count);
  for (EnergyRow& row : table.rows) {
    row.i = r.U16();
    row.j = r.U16();
    if (row.i == row.j || !seen.insert({row.i, row.j}).second) {
      throw Error(ErrorCode::kCorruptTable, "energy table has a self or duplicate pair");
    }
    row.scores.resize(table.grid_spec.n);
    for (float& s : row.scores) s = r.F32();
  }
  return table;
}

void SaveTable(const EnergyTable& table, const std::string& path) {
  detail::WriteFileAtomic(path, SerializeTable(table));
}

EnergyTable LoadTable(const std::string& path) {
  return DeserializeTable(detail::ReadFile(path));
}

}  // namespace svp

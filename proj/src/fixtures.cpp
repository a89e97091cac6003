#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "resilock/error.hpp"
#include "resilock/generators.hpp"

namespace resilock {

namespace {

// Sign patterns, one string per row of Bbar ('+' = 1, '-' = -1).
constexpr std::array<std::string_view, 6> kFixture6x24 = {
    "+++++-----++++++++---+-+",
    "+-+++-++++--+++++-+-+-++",
    "++++++-+++-+---+-+-+--++",
    "++-++++-++++-++---+--++-",
    "+++-++++-++-+-++---+++--",
    "++++-++++-++++--+++++---",
};

// Stored transposed: each string is one column of Bbar.
constexpr std::array<std::string_view, 32> kFixture8x32T = {
    "++++++++",
    "+++++++-",
    "++++++-+",
    "++++++--",
    "++++--++",
    "++--++++",
    "--++++++",
    "++++--+-",
    "++--+++-",
    "--+++++-",
    "++++---+",
    "++--++-+",
    "--++++-+",
    "+-+-+-++",
    "+--++-++",
    "-++-+-++",
    "-+-++-++",
    "+--+-+++",
    "+-+--+++",
    "-+-+-+++",
    "-++--+++",
    "++++----",
    "++--++--",
    "+--++-+-",
    "+-+-+-+-",
    "+--+-++-",
    "+-+--++-",
    "+--+-+-+",
    "+--++--+",
    "+-+-+--+",
    "+-+--+-+",
    "++----++",
};

// Stored transposed: each string is one column of Bbar.
constexpr std::array<std::string_view, 46> kFixture12x46T = {
    "++++++++++++",
    "-++-+++--+-+",
    "--++-+++----",
    "-+-++-++-+-+",
    "--+-++-+----",
    "---+-++-----",
    "----+-++----",
    "-+---+-+-+-+",
    "-++---+--+-+",
    "-+++---+-+-+",
    "--+++-------",
    "-+-+++---+-+",
    "++++++++--++",
    "-++-+++-+--+",
    "--++-+++++--",
    "-+-++-+++--+",
    "--+-++-+++--",
    "---+-++-++--",
    "----+-++++--",
    "-+---+-++--+",
    "-++---+-+--+",
    "-+++---++--+",
    "--+++---++--",
    "-+-+++--+--+",
    "++++++++++--",
    "-++-+++--++-",
    "--++-+++--++",
    "-+-++-++-++-",
    "--+-++-+--++",
    "---+-++---++",
    "----+-++--++",
    "-+---+-+-++-",
    "-++---+--++-",
    "-+++---+-++-",
    "--+++-----++",
    "-+-+++---++-",
    "++++++++----",
    "-++-+++-+-+-",
    "--++-+++++++",
    "-+-++-+++-+-",
    "--+-++-+++++",
    "---+-++-++++",
    "----+-++++++",
    "-+---+-++-+-",
    "-++---+-+-+-",
    "-+++---++-+-",
};

template <std::size_t N>
Matrix from_signs(const std::array<std::string_view, N>& rows) {
  Matrix out(N, rows[0].size());
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(i, j) = rows[i][j] == '+' ? 1.0 : -1.0;
  }
  return out;
}

}  // namespace

std::vector<std::string> appendix_fixture_names() { return {"6x24", "8x32", "12x46"}; }

ControlMatrix appendix_fixture(const std::string& name) {
  if (name == "6x24") return ControlMatrix(from_signs(kFixture6x24));
  if (name == "8x32") return ControlMatrix(from_signs(kFixture8x32T).transpose());
  if (name == "12x46") return ControlMatrix(from_signs(kFixture12x46T).transpose());
  throw Error(ErrorCode::kUnknownFixture, "no fixture named '" + name + "' (expected 6x24, 8x32 or 12x46)");
}

}  // namespace resilock

#ifndef HAAR_FIXTURES_HPP
#define HAAR_FIXTURES_HPP

// Small named instances shared by the tests, the acceptance suite and the
// CLI demos.

#include <string>
#include <vector>

#include "constructions.hpp"
#include "dynamics.hpp"
#include "equivalences.hpp"

namespace haar::fixtures
{

inline Groupoid pair2() { return pair_groupoid({"1", "2"}); }
inline Groupoid pair3() { return pair_groupoid({"1", "2", "3"}); }

/// Z/2 = {e, g}.
inline Groupoid z2() { return group_as_groupoid(cyclic_table(2, {"e", "g"})); }

/// Z/2 acting on {z1, z2} by swapping.
inline Action swap_action()
{
  Groupoid g = z2();
  const Arrow e = g.index("e"), s = g.index("g");
  std::vector<std::size_t> table(4, npos);
  table[e * 2 + 0] = 0;
  table[e * 2 + 1] = 1;
  table[s * 2 + 0] = 1;
  table[s * 2 + 1] = 0;
  return Action(g, {"z1", "z2"}, {e, e}, table);
}

/// A group acting trivially on the given points.
inline Action trivial_action(const Groupoid &group, const std::vector<std::string> &points)
{
  const std::size_t n = group.size(), k = points.size();
  std::vector<std::size_t> table(n * k);
  for (Arrow x = 0; x < n; ++x)
    for (std::size_t z = 0; z < k; ++z)
      table[x * k + z] = z;
  return Action(group, points, std::vector<Arrow>(k, group.units().front()), table);
}

/// {1,2,3} x {a,b} as a (PAIR3, PAIR2)-equivalence by coordinate actions.
inline Equivalence rect32()
{
  return rectangle_equivalence({"1", "2", "3"}, {"a", "b"}, {"*"}, {0, 0, 0}, {0, 0});
}

/// Z/3 acting on itself by rotation, elements "0", "1", "2".
inline Action z3_rotation()
{
  Groupoid g = group_as_groupoid(cyclic_table(3));
  std::vector<std::size_t> table(9);
  for (Arrow x = 0; x < 3; ++x)
    for (std::size_t z = 0; z < 3; ++z)
      table[x * 3 + z] = (x + z) % 3;
  return Action(g, {"0", "1", "2"}, {0, 0, 0}, table);
}

} // namespace haar::fixtures

#endif // HAAR_FIXTURES_HPP

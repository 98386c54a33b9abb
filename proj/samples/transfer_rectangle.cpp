// Transfers a weighted Haar system on the pair groupoid of {1,2,3} across the
// rectangle {1,2,3} x {a,b} and prints the result on the pair groupoid of {a,b}.

#include <iostream>

#include <haar/haar.hpp>

int main()
{
  using namespace haar;

  Groupoid g = pair_groupoid({"1", "2", "3"});
  HaarSystem lambda = source_weighted_haar(g, {1, 2, 3});
  Equivalence e = rectangle_equivalence({"1", "2", "3"}, {"a", "b"}, {"*"}, {0, 0, 0}, {0, 0});
  std::cout << validate_equivalence(e);

  TransferResult res = transfer_haar(lambda, e);
  const Groupoid &h = res.haar.groupoid();
  for (Arrow x = 0; x < h.size(); ++x)
    std::cout << h.name(x) << "  " << to_string(res.haar.weight(x)) << "\n";
  std::cout << check_haar(h, res.haar.system());
  return 0;
}

#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "geonarrate/calculus.hpp"

#include "support/disk_oracle.hpp"

using namespace geonarrate;
using namespace geonarrate::testing;

namespace {
const Calculus& rcc8 = Calculus::rcc8();
}

TEST_CASE("table laws hold exhaustively") {
  rcc8.validate();
  Calculus::size_order().validate();
  for (int a = 0; a < rcc8.atom_count(); ++a) {
    CHECK(rcc8.converse_atom(rcc8.converse_atom(a)) == a);
    CHECK(rcc8.compose(atom(Rcc8::eq), a) == RelationSet::single(a));
    CHECK(rcc8.compose(a, atom(Rcc8::eq)) == RelationSet::single(a));
  }
}

TEST_CASE("converse of relation sets") {
  CHECK(rcc8.converse(rel(Rcc8::eq)) == rel(Rcc8::eq));
  RelationSet symmetric = rel(Rcc8::dc) | rel(Rcc8::ec) | rel(Rcc8::po);
  CHECK(rcc8.converse(symmetric) == symmetric);
  CHECK(rcc8.converse(rel(Rcc8::tpp) | rel(Rcc8::ntpp)) == (rel(Rcc8::tppi) | rel(Rcc8::ntppi)));
}

TEST_CASE("composition basics") {
  CHECK(rcc8.compose(rel(Rcc8::eq), rel(Rcc8::po)) == rel(Rcc8::po));
  CHECK(rcc8.compose(rel(Rcc8::ntpp), rel(Rcc8::ntpp)) == rel(Rcc8::ntpp));
  CHECK(rcc8.compose(rel(Rcc8::ntpp), rel(Rcc8::ntppi)) == rcc8.universal());
  CHECK(rcc8.compose(RelationSet::none(), rel(Rcc8::po)).empty());
  CHECK(rcc8.compose(rel(Rcc8::po), RelationSet::none()).empty());
}

TEST_CASE("neighborhood distances and neighbors") {
  CHECK(rcc8.cnd_distance(atom(Rcc8::dc), atom(Rcc8::dc)) == 0);
  CHECK(rcc8.cnd_distance(atom(Rcc8::dc), atom(Rcc8::ec)) == 1);
  CHECK(rcc8.cnd_distance(atom(Rcc8::dc), atom(Rcc8::ntpp)) == 4);
  CHECK(rcc8.neighbors(atom(Rcc8::dc)) == rel(Rcc8::ec));
  CHECK(rcc8.neighbors(atom(Rcc8::eq)).contains(atom(Rcc8::po)));
  for (int a = 0; a < rcc8.atom_count(); ++a) {
    CHECK_FALSE(rcc8.neighbors(a).contains(a));
    for (int b = 0; b < rcc8.atom_count(); ++b) {
      CHECK(rcc8.cnd_distance(a, b) == rcc8.cnd_distance(b, a));
      CHECK((rcc8.cnd_distance(a, b) == 0) == (a == b));
    }
  }
}

TEST_CASE("size entailment of topology") {
  CHECK(size_entailed(rel(Rcc8::ntpp)) == rel(SizeRel::smaller));
  CHECK(size_entailed(rel(Rcc8::tpp)) == rel(SizeRel::smaller));
  CHECK(size_entailed(rel(Rcc8::tppi)) == rel(SizeRel::larger));
  CHECK(size_entailed(rel(Rcc8::eq)) == rel(SizeRel::equal));
  CHECK(size_entailed(rel(Rcc8::dc) | rel(Rcc8::ec)) == Calculus::size_order().universal());
  CHECK(size_entailed(rcc8.universal()) == Calculus::size_order().universal());
}

// Soundness of the composition table: for sampled disk triples the measured
// third relation always lies inside the table entry. Tangent configurations
// are constructed explicitly so every base relation appears as input.
TEST_CASE("composition table is sound on 10000 disk triples") {
  std::mt19937_64 rng(oracle_seed());
  std::uniform_int_distribution<int> pick(0, 7);
  int violations = 0;
  std::set<std::pair<int, int>> covered;
  for (int n = 0; n < 10000; ++n) {
    Disk a = random_disk(rng);
    Rcc8 r1 = static_cast<Rcc8>(pick(rng));
    Rcc8 r2 = static_cast<Rcc8>(pick(rng));
    Disk b = disk_with_relation(a, r1, rng);
    Disk c = disk_with_relation(b, r2, rng);
    Rcc8 ab = classify_disks(a, b);
    Rcc8 bc = classify_disks(b, c);
    Rcc8 ac = classify_disks(a, c);
    covered.insert({atom(ab), atom(bc)});
    if (!rcc8.compose(atom(ab), atom(bc)).contains(atom(ac))) ++violations;
  }
  CHECK(violations == 0);
  CHECK(covered.size() == 64);  // every table cell exercised
}

// JEPD: classification of any valid disk pair yields exactly one relation,
// and swapping the arguments yields the converse.
TEST_CASE("disk classification is jointly exhaustive and converse-coherent") {
  std::mt19937_64 rng(oracle_seed() + 1);
  std::uniform_int_distribution<int> pick(0, 7);
  for (int n = 0; n < 5000; ++n) {
    Disk a = random_disk(rng);
    Disk b = n % 2 ? disk_with_relation(a, static_cast<Rcc8>(pick(rng)), rng) : random_disk(rng);
    Rcc8 ab = classify_disks(a, b);
    Rcc8 ba = classify_disks(b, a);
    CHECK(atom(ba) == rcc8.converse_atom(atom(ab)));
  }
}

// Soundness of the neighborhood graph: along continuous linear motions every
// change of relation crosses exactly one edge, and the set of edges observed
// over the sampled motions is exactly the embedded edge set.
TEST_CASE("neighborhood graph matches 10000 continuous motions") {
  std::mt19937_64 rng(oracle_seed() + 2);
  std::uniform_real_distribution<double> radius(0.2, 5.0);
  std::uniform_real_distribution<double> offset(-1.0, 1.0);
  int violations = 0;
  std::set<std::pair<int, int>> observed_edges;
  for (int n = 0; n < 10000; ++n) {
    Disk fixed{0, 0, radius(rng)};
    // Every fourth motion uses equal radii and aims exactly at the center,
    // so the pass goes through coincidence; others vary radius and offset.
    double moving_r = (n % 4 == 0) ? fixed.r : radius(rng);
    double y = (n % 4 == 0) ? 0.0 : offset(rng) * (fixed.r + moving_r) * 0.4;
    double reach = (fixed.r + moving_r) * 1.5;
    Disk start{-reach, y, moving_r};
    double travel = (n % 2 == 0) ? 2 * reach : reach;  // full pass or stop inside
    auto sequence = motion_relation_sequence(fixed, start, travel, 0.0);
    for (size_t s = 0; s + 1 < sequence.size(); ++s) {
      int u = atom(sequence[s]), v = atom(sequence[s + 1]);
      observed_edges.insert({std::min(u, v), std::max(u, v)});
      if (!rcc8.neighbors(u).contains(v)) ++violations;
    }
  }
  CHECK(violations == 0);
  std::set<std::pair<int, int>> embedded;
  for (int a = 0; a < rcc8.atom_count(); ++a) {
    for (int b : rcc8.neighbors(a)) embedded.insert({std::min(a, b), std::max(a, b)});
  }
  CHECK(observed_edges == embedded);
}

TEST_CASE("custom calculus loads from text and validates") {
  std::stringstream text(R"(# strict linear order over points
atoms ; before, same, after
identity ; same
converse ; before ; after
converse ; same ; same
converse ; after ; before
neighbor ; before ; {same}
neighbor ; same ; {before,after}
neighbor ; after ; {same}
before ; before ; {before}
before ; same ; {before}
before ; after ; {before,same,after}
same ; before ; {before}
same ; same ; {same}
same ; after ; {after}
after ; before ; {before,same,after}
after ; same ; {after}
after ; after ; {after}
)");
  Calculus order = Calculus::from_text(text);
  CHECK(order.atom_count() == 3);
  auto before = order.atom_by_name("before");
  auto after = order.atom_by_name("after");
  REQUIRE(before);
  REQUIRE(after);
  CHECK(order.compose(*before, *after) == order.universal());
  CHECK(order.cnd_distance(*before, *after) == 2);
}

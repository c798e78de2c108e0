#include <gtest/gtest.h>

#include "entrofilt/mesh.hpp"

namespace entrofilt {
namespace {

TEST(Mesh, PeriodicIntervalWrapsAround) {
  const auto m = build_mesh<1>({{0.0}, {1.0}}, {4}, {true});
  EXPECT_EQ(m.neighbor(0, 0), 3);
  EXPECT_EQ(m.neighbor(0, 1), 1);
  EXPECT_EQ(m.neighbor(3, 1), 0);
}

TEST(Mesh, WalledSquareCornerCounts) {
  const auto m = build_mesh<2>({{0.0, 0.0}, {1.0, 1.0}}, {3, 3}, {false, false});
  int boundary = 0;
  for (int f = 0; f < 4; ++f) boundary += m.is_boundary(0, f);
  EXPECT_EQ(boundary, 2);
  EXPECT_EQ(m.adjacency_with_self(0).size(), 3u);
  EXPECT_EQ(m.adjacency_with_self(4).size(), 5u);  // centre
  EXPECT_EQ(m.boundary_tag(0, 0), "left");
  EXPECT_EQ(m.boundary_tag(0, 2), "bottom");
  EXPECT_EQ(m.boundary_tag(0, 1), "");
}

TEST(Mesh, SizesAndJacobian) {
  const auto m = build_mesh<1>({{-5.0}, {5.0}}, {100}, {false});
  EXPECT_NEAR(m.element_size()[0], 0.1, 1e-15);
  EXPECT_NEAR(m.jacobian(), 0.05, 1e-15);
  const auto m2 = build_mesh<2>({{0.0, 0.0}, {4.0, 1.0}}, {8, 4}, {false, false});
  EXPECT_NEAR(m2.jacobian(), 0.5 * 0.5 * 0.5 * 0.25, 1e-15);
  EXPECT_NEAR(m2.min_element_size(), 0.25, 1e-15);
}

TEST(Mesh, RejectsBadCountsAndBoxes) {
  EXPECT_THROW(build_mesh<1>({{0.0}, {1.0}}, {0}, {false}), ConfigError);
  EXPECT_THROW(build_mesh<2>({{0.0, 0.0}, {1.0, 1.0}}, {3, -1}, {false, false}),
               ConfigError);
  EXPECT_THROW(build_mesh<1>({{1.0}, {1.0}}, {4}, {false}), ConfigError);
}

TEST(Mesh, NeighborRelationIsAnInvolution) {
  for (bool px : {false, true}) {
    for (bool py : {false, true}) {
      const auto m = build_mesh<2>({{0.0, 0.0}, {2.0, 1.0}}, {5, 3}, {px, py});
      for (int e = 0; e < m.n_elements(); ++e) {
        int interior = 0;
        for (int f = 0; f < 4; ++f) {
          const int nb = m.neighbor(e, f);
          if (nb == MeshTopology<2>::kBoundary) continue;
          ++interior;
          EXPECT_EQ(m.neighbor(nb, f ^ 1), e);
        }
        EXPECT_EQ(m.adjacency_with_self(e).size(),
                  static_cast<size_t>(1 + interior));
        if (px && py) {
          EXPECT_EQ(interior, 4);
        }
      }
    }
  }
}

TEST(Mesh, ElementVolumesSumToDomain) {
  const Box<2> box{{-0.5, -0.3}, {0.7, 1.9}};
  const auto m = build_mesh<2>(box, {7, 13}, {false, true});
  EXPECT_NEAR(m.n_elements() * m.element_volume(), box.volume(), 1e-12);
}

TEST(Mesh, MapsReferenceCornersToElementCorners) {
  const auto m = build_mesh<2>({{0.0, 0.0}, {4.0, 1.0}}, {4, 2}, {false, false});
  const auto lo = m.map_to_physical(5, {-1.0, -1.0});
  const auto hi = m.map_to_physical(5, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(lo[0], 1.0);
  EXPECT_DOUBLE_EQ(lo[1], 0.5);
  EXPECT_DOUBLE_EQ(hi[0], 2.0);
  EXPECT_DOUBLE_EQ(hi[1], 1.0);
}

}  // namespace
}  // namespace entrofilt

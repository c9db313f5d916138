#include "lanekit/coordmaps.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

using lanekit::CoordMaps;
using lanekit::load_coord_maps;
using lanekit::make_coord_maps;
using lanekit::write_coord_maps;

TEST(CoordMapsTest, ThreeByTwoWorkedExample) {
  const CoordMaps m = make_coord_maps(3, 2);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(m.x(i, 0), -1.0);
    EXPECT_EQ(m.x(i, 1), 0.0);
    EXPECT_EQ(m.x(i, 2), 1.0);
  }
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(m.y(0, j), -1.0);
    EXPECT_EQ(m.y(1, j), 1.0);
  }
}

TEST(CoordMapsTest, TwoByTwoCorners) {
  const CoordMaps m = make_coord_maps(2, 2);
  EXPECT_EQ(m.x(0, 0), -1.0);
  EXPECT_EQ(m.x(0, 1), 1.0);
  EXPECT_EQ(m.y(0, 0), -1.0);
  EXPECT_EQ(m.y(1, 0), 1.0);
}

TEST(CoordMapsTest, BoundaryColumnsAreExact) {
  for (int w : {2, 3, 7, 17, 64})
    for (int h : {2, 5, 33}) {
      const CoordMaps m = make_coord_maps(w, h);
      for (int i = 0; i < h; ++i) {
        EXPECT_EQ(m.x(i, 0), -1.0);
        EXPECT_EQ(m.x(i, w - 1), 1.0);
      }
      EXPECT_EQ(m.y(0, 0), -1.0);
      EXPECT_EQ(m.y(h - 1, 0), 1.0);
    }
}

TEST(CoordMapsTest, UniformSpacing) {
  const CoordMaps m = make_coord_maps(8, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 1; j < 8; ++j)
      EXPECT_NEAR(m.x(i, j) - m.x(i, j - 1), 2.0 / 7.0, 1e-15);
  for (int i = 1; i < 5; ++i)
    EXPECT_NEAR(m.y(i, 0) - m.y(i - 1, 0), 2.0 / 4.0, 1e-15);
}

TEST(CoordMapsTest, RowAndColumnConstancy) {
  const CoordMaps m = make_coord_maps(9, 6);
  for (int i = 1; i < 6; ++i)
    for (int j = 0; j < 9; ++j) EXPECT_EQ(m.x(i, j), m.x(0, j));
  for (int i = 0; i < 6; ++i)
    for (int j = 1; j < 9; ++j) EXPECT_EQ(m.y(i, j), m.y(i, 0));
}

TEST(CoordMapsTest, TransposeSwapsRoles) {
  const CoordMaps a = make_coord_maps(7, 4);
  const CoordMaps b = make_coord_maps(4, 7);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 7; ++j) {
      EXPECT_EQ(a.x(i, j), b.y(j, i));
      EXPECT_EQ(a.y(i, j), b.x(j, i));
    }
}

TEST(CoordMapsTest, SymmetricAboutCenter) {
  const CoordMaps m = make_coord_maps(11, 9);
  double sx = 0.0, sy = 0.0;
  for (double v : m.x_map) sx += v;
  for (double v : m.y_map) sy += v;
  EXPECT_NEAR(sx, 0.0, 1e-9);
  EXPECT_NEAR(sy, 0.0, 1e-9);
}

TEST(CoordMapsTest, RejectsDegenerateDimensions) {
  EXPECT_THROW(make_coord_maps(1, 5), std::invalid_argument);
  EXPECT_THROW(make_coord_maps(5, 1), std::invalid_argument);
}

TEST(CoordMapsDumpTest, HeaderAndPayloadLayout) {
  const CoordMaps m = make_coord_maps(3, 2);
  std::ostringstream os(std::ios::binary);
  write_coord_maps(m, os);
  const std::string bytes = os.str();
  ASSERT_EQ(bytes.size(), 4u + 4u + 4u + 2u * 6u * 4u);
  EXPECT_EQ(bytes.substr(0, 4), "CMAP");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 3);  // W little-endian
  EXPECT_EQ(static_cast<unsigned char>(bytes[5]), 0);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 2);  // H little-endian
  float first_x = 0.0f;
  std::memcpy(&first_x, bytes.data() + 12, 4);
  EXPECT_EQ(first_x, -1.0f);
}

TEST(CoordMapsDumpTest, RoundTripsThroughTheStream) {
  const CoordMaps m = make_coord_maps(5, 4);
  std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
  write_coord_maps(m, ss);
  const CoordMaps back = load_coord_maps(ss);
  EXPECT_EQ(back.width, 5);
  EXPECT_EQ(back.height, 4);
  for (std::size_t i = 0; i < m.x_map.size(); ++i) {
    EXPECT_EQ(back.x_map[i], static_cast<double>(static_cast<float>(m.x_map[i])));
    EXPECT_EQ(back.y_map[i], static_cast<double>(static_cast<float>(m.y_map[i])));
  }
}

TEST(CoordMapsDumpTest, RejectsBadMagic) {
  std::istringstream is("XXXX????", std::ios::binary);
  EXPECT_THROW(load_coord_maps(is), std::runtime_error);
}

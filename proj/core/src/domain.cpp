#include "scallop/domain.hpp"

#include <cmath>
#include <random>

#include "scallop/errors.hpp"

namespace scallop {

double WorkingDomain::diameter() const {
  double acc = 0.0;
  for (const auto& iv : box) {
    double w = iv[1] - iv[0];
    acc += w * w;
  }
  return std::sqrt(acc);
}

bool WorkingDomain::contains(const FsVector& x) const {
  for (int k = 0; k < dim(); ++k) {
    double v = x.at(k + 1);
    if (v < box[k][0] || v > box[k][1]) return false;
  }
  return true;
}

namespace {

std::vector<FsVector> make_grid(const std::vector<std::array<double, 2>>& box,
                                int resolution) {
  const int d = static_cast<int>(box.size());
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(resolution);
  std::vector<FsVector> grid;
  grid.reserve(total);
  std::vector<int> idx(d, 0);
  std::vector<double> coords(d);
  for (std::size_t count = 0; count < total; ++count) {
    for (int k = 0; k < d; ++k) {
      double t = resolution == 1 ? 0.5
                                 : static_cast<double>(idx[k]) / (resolution - 1);
      coords[k] = box[k][0] + t * (box[k][1] - box[k][0]);
    }
    grid.push_back(FsVector::from_dense(coords));
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < resolution) break;
      idx[k] = 0;
    }
  }
  return grid;
}

}  // namespace

WorkingDomain WorkingDomain::regular(std::vector<std::array<double, 2>> box,
                                     int resolution) {
  if (box.empty()) throw UsageError("WorkingDomain: box must be nonempty");
  if (resolution < 2) throw UsageError("WorkingDomain: resolution must be >= 2");
  for (const auto& iv : box)
    if (!(iv[0] < iv[1])) throw UsageError("WorkingDomain: empty box interval");
  WorkingDomain dom;
  dom.box = std::move(box);
  dom.resolution = resolution;
  dom.sample_grid = make_grid(dom.box, resolution);
  return dom;
}

WorkingDomain WorkingDomain::masked(
    std::vector<std::array<double, 2>> box, int resolution,
    const std::function<bool(const FsVector&)>& keep) {
  WorkingDomain dom = regular(std::move(box), resolution);
  std::vector<FsVector> kept;
  kept.reserve(dom.sample_grid.size());
  for (FsVector& p : dom.sample_grid)
    if (keep(p)) kept.push_back(std::move(p));
  dom.sample_grid = std::move(kept);
  return dom;
}

std::vector<FsVector> WorkingDomain::random_points(std::size_t count,
                                                   std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<FsVector> pts;
  pts.reserve(count);
  std::vector<double> coords(dim());
  for (std::size_t i = 0; i < count; ++i) {
    for (int k = 0; k < dim(); ++k)
      coords[k] = box[k][0] + unit(rng) * (box[k][1] - box[k][0]);
    pts.push_back(FsVector::from_dense(coords));
  }
  return pts;
}

}  // namespace scallop

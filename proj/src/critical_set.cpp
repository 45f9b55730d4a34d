#include "foldvol/critical_set.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "foldvol/error.hpp"
#include "foldvol/quadrature.hpp"

namespace foldvol {

CriticalSet::CriticalSet(std::vector<double> circles, std::vector<int> coorientations,
                         double collar_width)
    : circles_(std::move(circles)), coorientations_(std::move(coorientations)) {
  if (circles_.empty()) throw Error(ErrorKind::kMalformedInput, "critical set has no circles");
  for (double& c : circles_) {
    if (!std::isfinite(c)) throw Error(ErrorKind::kMalformedInput, "nonfinite circle position");
    c = wrap01(c);
  }
  if (!coorientations_.empty()) {
    if (coorientations_.size() != circles_.size()) {
      throw Error(ErrorKind::kMalformedInput, "one coorientation per circle required");
    }
    std::vector<std::pair<double, int>> tagged;
    for (size_t i = 0; i < circles_.size(); ++i) {
      if (coorientations_[i] != 1 && coorientations_[i] != -1) {
        throw Error(ErrorKind::kMalformedInput, "coorientations must be +1 or -1");
      }
      tagged.emplace_back(circles_[i], coorientations_[i]);
    }
    std::sort(tagged.begin(), tagged.end());
    for (size_t i = 0; i < tagged.size(); ++i) {
      circles_[i] = tagged[i].first;
      coorientations_[i] = tagged[i].second;
    }
  } else {
    std::sort(circles_.begin(), circles_.end());
  }
  const double gap = min_gap();
  if (!(gap > 0.0)) throw Error(ErrorKind::kMalformedInput, "critical circles must be distinct");
  collar_width_ = collar_width > 0.0 ? collar_width : 0.25 * gap;
  if (!(2.0 * collar_width_ < gap)) {
    throw Error(ErrorKind::kMalformedInput,
                "collars overlap: width " + std::to_string(collar_width_) + " vs gap " +
                    std::to_string(gap));
  }
}

double CriticalSet::min_gap() const {
  if (circles_.size() == 1) return 1.0;
  double gap = circles_.front() + 1.0 - circles_.back();
  for (size_t i = 1; i < circles_.size(); ++i) gap = std::min(gap, circles_[i] - circles_[i - 1]);
  return gap;
}

std::pair<double, double> CriticalSet::region_bounds(size_t j) const {
  const double lo = circles_[j];
  const double hi = j + 1 < circles_.size() ? circles_[j + 1] : circles_.front() + 1.0;
  return {lo, hi};
}

size_t CriticalSet::region_of(double x, double* lifted) const {
  const double w = wrap01(x);
  // Last circle <= w, or the wrapping region when w < c_0.
  auto it = std::upper_bound(circles_.begin(), circles_.end(), w);
  size_t j;
  double lift = w;
  if (it == circles_.begin()) {
    j = circles_.size() - 1;
    lift = w + 1.0;
  } else {
    j = static_cast<size_t>(it - circles_.begin()) - 1;
  }
  if (lifted) *lifted = lift;
  return j;
}

size_t CriticalSet::nearest(double x, double* offset) const {
  size_t best = 0;
  double best_t = wrapped_offset(x, circles_[0]);
  for (size_t i = 1; i < circles_.size(); ++i) {
    const double t = wrapped_offset(x, circles_[i]);
    if (std::abs(t) < std::abs(best_t)) {
      best = i;
      best_t = t;
    }
  }
  if (offset) *offset = best_t;
  return best;
}

Blend CriticalSet::blend() const {
  const double room = 0.5 * min_gap() - collar_width_;
  return Blend{collar_width_, std::min(collar_width_, room)};
}

CriticalSet CriticalSet::with_coorientations(std::vector<int> signs) const {
  return CriticalSet(circles_, std::move(signs), collar_width_);
}

CriticalSet CriticalSet::with_collar_width(double width) const {
  return CriticalSet(circles_, coorientations_, width);
}

CriticalSet CriticalSet::merged(const std::vector<double>& extra) const {
  std::vector<double> all = circles_;
  all.insert(all.end(), extra.begin(), extra.end());
  return CriticalSet(std::move(all), {}, 0.0);
}

bool CriticalSet::same_circles(const CriticalSet& other, double tol) const {
  if (circles_.size() != other.circles_.size()) return false;
  for (size_t i = 0; i < circles_.size(); ++i) {
    if (std::abs(wrapped_offset(circles_[i], other.circles_[i])) > tol) return false;
  }
  return true;
}

double CollarSpec::t(double x) const { return wrapped_offset(x, center); }

CollarSpec CollarSpec::of(const CriticalSet& z, size_t i) {
  return CollarSpec{i, z.circles()[i], z.collar_width()};
}

}  // namespace foldvol

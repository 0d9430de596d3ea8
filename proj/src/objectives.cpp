#include "safl/objectives.hpp"

namespace safl {

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::least_squares: return "least_squares";
    case LossKind::ridge: return "ridge";
    case LossKind::lasso: return "lasso";
    case LossKind::logistic: return "logistic";
  }
  return "unknown";
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "least_squares") return LossKind::least_squares;
  if (name == "ridge") return LossKind::ridge;
  if (name == "lasso") return LossKind::lasso;
  if (name == "logistic") return LossKind::logistic;
  throw std::invalid_argument("unknown objective kind '" + name + "'");
}

}  // namespace safl

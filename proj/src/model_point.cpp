#include "coarselab/model_point.hpp"

#include <sstream>

namespace coarselab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Index: return "index";
    case ErrorKind::EmptySpace: return "empty-space";
    case ErrorKind::Size: return "size";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Data: return "data";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Window: return "window";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Assignment: return "assignment";
    case ErrorKind::Arity: return "arity";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Invariant: return "invariant";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

bool is_reduced(const std::string& word) {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] < '0' || word[i] > '2') return false;
    if (i > 0 && word[i] == word[i - 1]) return false;
  }
  return true;
}

namespace {

struct JsonVisitor {
  Json operator()(const HalfPlane& p) const { return Json{{"x", p.x}, {"y", p.y}}; }
  Json operator()(const TreeAddress& p) const { return Json{{"word", p.word}}; }
  Json operator()(const Integer& p) const { return Json{{"n", p.n}}; }
  Json operator()(const CombNode& p) const {
    return Json{{"level", p.level()}, {"base", p.base}, {"offsets", p.offsets}};
  }
  Json operator()(const Tuple& p) const {
    Json parts = Json::array();
    for (const auto& q : p.parts) parts.push_back(to_json(q));
    return Json{{"parts", parts}};
  }
};

void write_text(std::ostringstream& os, const ModelPoint& p) {
  if (const auto* h = std::get_if<HalfPlane>(&p)) {
    for (double v : h->x) os << v << ' ';
    os << h->y;
  } else if (const auto* t = std::get_if<TreeAddress>(&p)) {
    os << (t->word.empty() ? "root" : t->word);
  } else if (const auto* z = std::get_if<Integer>(&p)) {
    os << z->n;
  } else if (const auto* c = std::get_if<CombNode>(&p)) {
    os << c->base;
    for (auto o : c->offsets) os << '/' << o;
  } else {
    const auto& tup = std::get<Tuple>(p);
    os << '(';
    for (std::size_t i = 0; i < tup.parts.size(); ++i) {
      if (i) os << " | ";
      write_text(os, tup.parts[i]);
    }
    os << ')';
  }
}

}  // namespace

Json to_json(const ModelPoint& p) { return std::visit(JsonVisitor{}, static_cast<const ModelPoint::variant&>(p)); }

std::string to_text(const ModelPoint& p) {
  std::ostringstream os;
  os.precision(17);
  write_text(os, p);
  return os.str();
}

}  // namespace coarselab

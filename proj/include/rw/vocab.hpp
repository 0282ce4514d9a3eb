#ifndef RW_VOCAB_HPP
#define RW_VOCAB_HPP

#include <map>
#include <string>
#include <vector>

namespace rw {

// Finite vocabulary: ordered unary predicates, ordered constants, and
// query-only relations of arity >= 2.
struct Vocabulary {
  std::vector<std::string> unary_predicates;
  std::vector<std::string> constants;
  std::vector<std::pair<std::string, int>> relations;

  int k() const { return static_cast<int>(unary_predicates.size()); }
  int atom_count() const { return 1 << unary_predicates.size(); }

  int predicate_index(const std::string& name) const {
    for (size_t i = 0; i < unary_predicates.size(); ++i)
      if (unary_predicates[i] == name) return static_cast<int>(i);
    return -1;
  }
  int constant_index(const std::string& name) const {
    for (size_t i = 0; i < constants.size(); ++i)
      if (constants[i] == name) return static_cast<int>(i);
    return -1;
  }
  int relation_arity(const std::string& name) const {
    for (auto& r : relations)
      if (r.first == name) return r.second;
    return -1;
  }
  bool is_predicate(const std::string& n) const { return predicate_index(n) >= 0; }
  bool is_constant(const std::string& n) const { return constant_index(n) >= 0; }
  bool is_relation(const std::string& n) const { return relation_arity(n) >= 0; }

  void validate() const;  // throws on duplicate names
};

}  // namespace rw

#endif

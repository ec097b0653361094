#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcc {

enum class ErrorCode {
  CyclicGraph,
  MultipleRoots,
  NoRoot,
  UnlabeledLeaf,
  DuplicateLabel,
  LeafWithInDegreeNot1,
  SelfLoop,
  UnknownNode,
  NotAnEdge,
  InadmissibleContraction,
  InadmissibleExpansion,
  InadmissibleStep,
  InvalidWitness,
  KeyMismatch,
  LeafSetMismatch,
  NotWeaklyGalled,
  NotATree,
  Degree2Node,
  SizeCapExceeded,
  BudgetExhausted,
  InvalidParameters,
  GenerationFailed,
  SyntaxError,
  UnresolvedHybridTag,
  DuplicateHybridDefinition,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mcc

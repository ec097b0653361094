#include "mcc/error.hpp"

namespace mcc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CyclicGraph: return "CyclicGraph";
    case ErrorCode::MultipleRoots: return "MultipleRoots";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::UnlabeledLeaf: return "UnlabeledLeaf";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::LeafWithInDegreeNot1: return "LeafWithInDegreeNot1";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NotAnEdge: return "NotAnEdge";
    case ErrorCode::InadmissibleContraction: return "InadmissibleContraction";
    case ErrorCode::InadmissibleExpansion: return "InadmissibleExpansion";
    case ErrorCode::InadmissibleStep: return "InadmissibleStep";
    case ErrorCode::InvalidWitness: return "InvalidWitness";
    case ErrorCode::KeyMismatch: return "KeyMismatch";
    case ErrorCode::LeafSetMismatch: return "LeafSetMismatch";
    case ErrorCode::NotWeaklyGalled: return "NotWeaklyGalled";
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::Degree2Node: return "Degree2Node";
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnresolvedHybridTag: return "UnresolvedHybridTag";
    case ErrorCode::DuplicateHybridDefinition: return "DuplicateHybridDefinition";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace mcc

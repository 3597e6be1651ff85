#pragma once

// Reverse-HashTree forest. Every node's id is the hash of its parent's id
// (or a random nonce for roots) and its own canonical info, so a bill's
// lineage is tamper-evident top-down. Unspent bills are exactly the leaves;
// spending a bill appends children under it and nothing is ever removed.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "billchain/rht/bill.hpp"

namespace billchain::rht {

enum class RhtErrc {
  kDuplicateId,
  kNotFound,
  kParentSpent,
  kMalformedPath,
  kRootHasPath,
  kNoChildren,
};

class RhtError : public std::runtime_error {
 public:
  RhtError(RhtErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  RhtErrc code() const { return code_; }

 private:
  RhtErrc code_;
};

enum class LeafStatus { kLeaf, kSpent, kNotFound };

class RhtForest {
 public:
  struct Node {
    BillInfo info;
    std::optional<RootNonce> root_nonce;  // set for roots only
    std::optional<EBillId> parent;        // set for non-roots only
    std::vector<EBillId> children;        // in output order

    bool is_root() const { return root_nonce.has_value(); }
    bool is_leaf() const { return children.empty(); }
  };

  EBillId issue_root(const RootNonce& nonce, const BillInfo& info);

  // Spends `parent` by attaching one child per info. Validates everything
  // before mutating, so a failed call leaves the forest untouched.
  std::vector<EBillId> append_children(const EBillId& parent, std::span<const BillInfo> children);

  LeafStatus leaf_status(const EBillId& id) const;
  bool is_leaf(const EBillId& id) const { return leaf_status(id) == LeafStatus::kLeaf; }

  // Throws RhtError(kNotFound) for unknown ids.
  const SigPublicKey& owner_of(const EBillId& id) const;

  const Node* find(const EBillId& id) const;
  bool contains(const EBillId& id) const { return find(id) != nullptr; }

  // Walks the full lineage named by info.path, recomputing every ancestor id
  // from its stored info, and finally checks that `claimed` is a stored child
  // of the last ancestor whose id recomputes from `info`.
  bool verify_path(const BillInfo& info, const EBillId& claimed) const;

  // Ids of every node, depth-first from the roots in issue order.
  std::vector<EBillId> depth_first() const;
  std::vector<EBillId> leaves() const;
  const std::vector<EBillId>& roots() const { return roots_; }
  size_t size() const { return nodes_.size(); }

  // First internal node whose ciphertext is not the homomorphic product of
  // its children's ciphertexts.
  std::optional<EBillId> find_conservation_violation(const PaillierPublicKey& pk) const;

  // Deterministic depth-first dump using the canonical encodings.
  Bytes serialize() const;

  // One node per line, depth-first:
  //   <id> <parent-id | R:nonce> <amount_ct> <owner> <path ids comma-joined | ->
  std::string export_text() const;

  // Structural import of export_text() output. Ids are taken as written and
  // not re-validated, so tampered exports load and can then be checked with
  // verify_path(). Throws std::invalid_argument on malformed lines.
  static RhtForest import_text(std::string_view text);

 private:
  void insert_node(const EBillId& id, Node node);

  std::unordered_map<EBillId, Node, FixedBytesHash> nodes_;
  std::vector<EBillId> roots_;
};

}  // namespace billchain::rht

#include "billchain/rht/forest.hpp"

#include <algorithm>
#include <sstream>

namespace billchain::rht {

namespace {

std::string path_text(const std::vector<EBillId>& path) {
  if (path.empty()) return "-";
  std::string out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) out.push_back(',');
    out += path[i].hex();
  }
  return out;
}

std::vector<EBillId> parse_path(const std::string& field) {
  std::vector<EBillId> out;
  if (field == "-") return out;
  std::stringstream ss(field);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(EBillId::from_hex_string(item));
  return out;
}

bool is_prefix_path(const std::vector<EBillId>& path, size_t len,
                    const std::vector<EBillId>& candidate) {
  if (candidate.size() != len) return false;
  return std::equal(candidate.begin(), candidate.end(), path.begin());
}

}  // namespace

void RhtForest::insert_node(const EBillId& id, Node node) {
  const bool root = node.is_root();
  nodes_.emplace(id, std::move(node));
  if (root) roots_.push_back(id);
}

EBillId RhtForest::issue_root(const RootNonce& nonce, const BillInfo& info) {
  if (!info.path.empty()) throw RhtError(RhtErrc::kRootHasPath, "root bill must have an empty path");
  const EBillId id = compute_root_id(nonce, info);
  if (contains(id)) throw RhtError(RhtErrc::kDuplicateId, "bill id already present");
  insert_node(id, Node{info, nonce, std::nullopt, {}});
  return id;
}

std::vector<EBillId> RhtForest::append_children(const EBillId& parent,
                                                std::span<const BillInfo> children) {
  auto it = nodes_.find(parent);
  if (it == nodes_.end()) throw RhtError(RhtErrc::kNotFound, "parent bill not found");
  if (!it->second.is_leaf()) throw RhtError(RhtErrc::kParentSpent, "parent bill already spent");
  if (children.empty()) throw RhtError(RhtErrc::kNoChildren, "a spend needs at least one child");

  std::vector<EBillId> expected_path = it->second.info.path;
  expected_path.push_back(parent);

  std::vector<EBillId> ids;
  ids.reserve(children.size());
  for (const BillInfo& child : children) {
    if (child.path != expected_path) {
      throw RhtError(RhtErrc::kMalformedPath, "child path must extend the parent path");
    }
    EBillId id = compute_child_id(parent, child);
    if (contains(id) || std::find(ids.begin(), ids.end(), id) != ids.end()) {
      throw RhtError(RhtErrc::kDuplicateId, "bill id already present");
    }
    ids.push_back(id);
  }

  for (size_t i = 0; i < children.size(); ++i) {
    insert_node(ids[i], Node{children[i], std::nullopt, parent, {}});
  }
  // insert_node may rehash; look the parent up again.
  nodes_.at(parent).children = ids;
  return ids;
}

LeafStatus RhtForest::leaf_status(const EBillId& id) const {
  const Node* node = find(id);
  if (!node) return LeafStatus::kNotFound;
  return node->is_leaf() ? LeafStatus::kLeaf : LeafStatus::kSpent;
}

const SigPublicKey& RhtForest::owner_of(const EBillId& id) const {
  const Node* node = find(id);
  if (!node) throw RhtError(RhtErrc::kNotFound, "bill not found: " + id.hex());
  return node->info.owner;
}

const RhtForest::Node* RhtForest::find(const EBillId& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

bool RhtForest::verify_path(const BillInfo& info, const EBillId& claimed) const {
  const Node* target = find(claimed);
  if (!target) return false;

  if (info.path.empty()) {
    return target->is_root() && compute_root_id(*target->root_nonce, info) == claimed;
  }

  for (size_t depth = 0; depth < info.path.size(); ++depth) {
    const EBillId& ancestor_id = info.path[depth];
    const Node* ancestor = find(ancestor_id);
    if (!ancestor) return false;
    if (!is_prefix_path(info.path, depth, ancestor->info.path)) return false;
    if (depth == 0) {
      if (!ancestor->is_root()) return false;
      if (compute_root_id(*ancestor->root_nonce, ancestor->info) != ancestor_id) return false;
    } else {
      const EBillId& parent_id = info.path[depth - 1];
      if (ancestor->parent != parent_id) return false;
      if (compute_child_id(parent_id, ancestor->info) != ancestor_id) return false;
    }
  }

  const EBillId& parent_id = info.path.back();
  const Node* parent = find(parent_id);
  if (target->parent != parent_id) return false;
  if (std::find(parent->children.begin(), parent->children.end(), claimed) ==
      parent->children.end()) {
    return false;
  }
  return compute_child_id(parent_id, info) == claimed;
}

std::vector<EBillId> RhtForest::depth_first() const {
  std::vector<EBillId> order;
  order.reserve(nodes_.size());
  std::vector<EBillId> stack;
  for (auto r = roots_.rbegin(); r != roots_.rend(); ++r) stack.push_back(*r);
  while (!stack.empty()) {
    const EBillId id = stack.back();
    stack.pop_back();
    order.push_back(id);
    const Node& node = nodes_.at(id);
    for (auto c = node.children.rbegin(); c != node.children.rend(); ++c) stack.push_back(*c);
  }
  return order;
}

std::vector<EBillId> RhtForest::leaves() const {
  std::vector<EBillId> out;
  for (const EBillId& id : depth_first()) {
    if (nodes_.at(id).is_leaf()) out.push_back(id);
  }
  return out;
}

std::optional<EBillId> RhtForest::find_conservation_violation(const PaillierPublicKey& pk) const {
  for (const EBillId& id : depth_first()) {
    const Node& node = nodes_.at(id);
    if (node.is_leaf()) continue;
    std::vector<Ciphertext> outs;
    outs.reserve(node.children.size());
    for (const EBillId& c : node.children) outs.push_back(nodes_.at(c).info.amount_ct);
    if (!verify_balance(pk, node.info.amount_ct, outs)) return id;
  }
  return std::nullopt;
}

Bytes RhtForest::serialize() const {
  Encoder enc;
  enc.put_string("billchain/rht/v1");
  enc.put_count(nodes_.size());
  for (const EBillId& id : depth_first()) {
    const Node& node = nodes_.at(id);
    enc.put_fixed(id);
    if (node.is_root()) {
      enc.put_uint(0).put_fixed(*node.root_nonce);
    } else {
      enc.put_uint(1).put_fixed(*node.parent);
    }
    encode(enc, node.info);
    enc.put_count(node.children.size());
  }
  return std::move(enc).bytes();
}

std::string RhtForest::export_text() const {
  std::string out;
  for (const EBillId& id : depth_first()) {
    const Node& node = nodes_.at(id);
    out += id.hex();
    out += ' ';
    out += node.is_root() ? "R:" + node.root_nonce->hex() : node.parent->hex();
    out += ' ';
    out += node.info.amount_ct.value.get_str(16);
    out += ' ';
    out += node.info.owner.hex();
    out += ' ';
    out += path_text(node.info.path);
    out += '\n';
  }
  return out;
}

RhtForest RhtForest::import_text(std::string_view text) {
  RhtForest forest;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string id_hex, parent_field, amount_hex, owner_hex, path_field, extra;
    if (!(fields >> id_hex >> parent_field >> amount_hex >> owner_hex >> path_field) ||
        (fields >> extra)) {
      throw std::invalid_argument("forest export line " + std::to_string(line_no) +
                                  ": expected 5 fields");
    }
    try {
      const EBillId id = EBillId::from_hex_string(id_hex);
      if (forest.contains(id)) throw std::invalid_argument("duplicate id");
      Node node;
      if (node.info.amount_ct.value.set_str(amount_hex, 16) != 0) {
        throw std::invalid_argument("bad ciphertext");
      }
      node.info.owner = SigPublicKey::from_hex_string(owner_hex);
      node.info.path = parse_path(path_field);
      if (parent_field.rfind("R:", 0) == 0) {
        node.root_nonce = RootNonce::from_hex_string(parent_field.substr(2));
      } else {
        const EBillId parent = EBillId::from_hex_string(parent_field);
        auto pit = forest.nodes_.find(parent);
        if (pit == forest.nodes_.end()) throw std::invalid_argument("parent precedes child");
        pit->second.children.push_back(id);
        node.parent = parent;
      }
      forest.insert_node(id, std::move(node));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("forest export line " + std::to_string(line_no) + ": " +
                                  e.what());
    }
  }
  return forest;
}

}  // namespace billchain::rht

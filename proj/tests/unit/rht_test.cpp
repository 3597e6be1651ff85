#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "billchain/crypto/bigint.hpp"
#include "billchain/rht/forest.hpp"
#include "fixtures.hpp"

namespace billchain::rht {
namespace {

using billchain::testing::test_key;

SigPublicKey owner(uint8_t tag) {
  SigPublicKey pk;
  pk.bytes.fill(tag);
  return pk;
}

RootNonce nonce(uint8_t tag) {
  RootNonce n;
  n.bytes.fill(tag);
  return n;
}

void put_len(Bytes& out, size_t len) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<uint8_t>(len >> shift));
}

// Built byte by byte rather than through Encoder.
Bytes manual_id_preimage(ByteView parent, uint64_t ct, const SigPublicKey& pk,
                         const std::vector<EBillId>& path) {
  Bytes out;
  put_len(out, parent.size());
  append(out, parent);
  Bytes ct_bytes;
  for (uint64_t v = ct; v > 0; v >>= 8) ct_bytes.insert(ct_bytes.begin(), uint8_t(v & 0xff));
  put_len(out, ct_bytes.size());
  append(out, ct_bytes);
  put_len(out, 32);
  append(out, pk.view());
  put_len(out, path.size());
  for (const EBillId& id : path) {
    put_len(out, 32);
    append(out, id.view());
  }
  return out;
}

TEST(BillId, MatchesManualEncoding) {
  const BillInfo root_info{Ciphertext{0x1234}, owner(1), {}};
  const EBillId root = compute_root_id(nonce(9), root_info);
  EXPECT_EQ(root.view().size(), 32u);
  EXPECT_EQ(root.bytes, hash256(manual_id_preimage(nonce(9).view(), 0x1234, owner(1), {})).bytes);

  const BillInfo child_info{Ciphertext{0x0100}, owner(2), {root}};
  EXPECT_EQ(compute_child_id(root, child_info).bytes,
            hash256(manual_id_preimage(root.view(), 0x0100, owner(2), {root})).bytes);

  const Bytes enc = canonical(child_info);
  Decoder dec(enc);
  EXPECT_EQ(decode_bill_info(dec), child_info);
  EXPECT_TRUE(dec.at_end());
}

TEST(BillId, EveryFieldChangesTheId) {
  const BillInfo base{Ciphertext{77}, owner(1), {}};
  const EBillId id = compute_root_id(nonce(1), base);
  EXPECT_NE(compute_root_id(nonce(2), base), id);
  EXPECT_NE(compute_root_id(nonce(1), BillInfo{Ciphertext{78}, owner(1), {}}), id);
  EXPECT_NE(compute_root_id(nonce(1), BillInfo{Ciphertext{77}, owner(3), {}}), id);
  EXPECT_NE(compute_root_id(nonce(1), BillInfo{Ciphertext{77}, owner(1), {id}}), id);
}

TEST(Forest, IssueSpendAndErrors) {
  RhtForest f;
  const BillInfo root_info{Ciphertext{10}, owner(1), {}};
  const EBillId root = f.issue_root(nonce(1), root_info);
  EXPECT_EQ(f.leaf_status(root), LeafStatus::kLeaf);
  EXPECT_EQ(f.owner_of(root), owner(1));
  EXPECT_TRUE(f.verify_path(root_info, root));

  try {
    f.issue_root(nonce(1), root_info);
    FAIL();
  } catch (const RhtError& e) {
    EXPECT_EQ(e.code(), RhtErrc::kDuplicateId);
  }
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const RhtError& e) {
      return e.code();
    }
    ADD_FAILURE() << "no RhtError";
    return RhtErrc::kNoChildren;
  };
  EXPECT_EQ(code_of([&] { f.issue_root(nonce(2), BillInfo{Ciphertext{1}, owner(1), {root}}); }),
            RhtErrc::kRootHasPath);

  const std::vector<BillInfo> kids = {{Ciphertext{3}, owner(2), {root}},
                                      {Ciphertext{4}, owner(3), {root}}};
  EXPECT_EQ(code_of([&] { f.append_children(root, {}); }), RhtErrc::kNoChildren);
  const std::vector<BillInfo> bad_path = {{Ciphertext{3}, owner(2), {}}};
  EXPECT_EQ(code_of([&] { f.append_children(root, bad_path); }), RhtErrc::kMalformedPath);
  const std::vector<BillInfo> twins = {kids[0], kids[0]};
  EXPECT_EQ(code_of([&] { f.append_children(root, twins); }), RhtErrc::kDuplicateId);
  EXPECT_EQ(f.size(), 1u);  // failed calls left nothing behind

  const std::vector<EBillId> ids = f.append_children(root, kids);
  ASSERT_EQ(ids.size(), 2u);
  EXPECT_EQ(f.leaf_status(root), LeafStatus::kSpent);
  EXPECT_EQ(f.find(root)->children, ids);
  EXPECT_EQ(*f.find(ids[1])->parent, root);
  EXPECT_EQ(code_of([&] { f.append_children(root, kids); }), RhtErrc::kParentSpent);
  EXPECT_EQ(code_of([&] { f.append_children(EBillId{}, kids); }), RhtErrc::kNotFound);
  EXPECT_EQ(code_of([&] { f.owner_of(EBillId{}); }), RhtErrc::kNotFound);
  EXPECT_EQ(f.leaf_status(EBillId{}), LeafStatus::kNotFound);

  EXPECT_TRUE(f.verify_path(kids[0], ids[0]));
  EXPECT_TRUE(f.verify_path(kids[1], ids[1]));
  EXPECT_FALSE(f.verify_path(kids[0], ids[1]));
  EXPECT_FALSE(f.verify_path(BillInfo{Ciphertext{5}, owner(2), {root}}, ids[0]));
  EXPECT_EQ(f.leaves(), ids);
  EXPECT_EQ(f.depth_first(), (std::vector<EBillId>{root, ids[0], ids[1]}));
}

struct BuiltForest {
  RhtForest forest;
  std::map<EBillId, BillInfo> infos;
  std::vector<EBillId> order;  // insertion order
};

// Three generations with balanced ciphertexts under a small test key.
BuiltForest build_balanced(uint64_t seed) {
  const PaillierKeyPair& k = test_key(256);
  DeterministicRandom rng(seed);
  BuiltForest b;
  std::map<EBillId, Opening> openings;
  for (uint8_t r = 0; r < 3; ++r) {
    const Opening o{100 + r, random_unit(rng, k.pub.n)};
    const BillInfo info{encrypt(k.pub, o.amount, o.randomness), owner(r), {}};
    const EBillId id = b.forest.issue_root(nonce(r), info);
    b.infos[id] = info;
    openings[id] = o;
    b.order.push_back(id);
  }
  for (int step = 0; step < 6; ++step) {
    const std::vector<EBillId> leaves = b.forest.leaves();
    const EBillId parent = leaves[step % leaves.size()];
    const Opening& in = openings.at(parent);
    const mpz_class a = in.amount / 3;
    const std::vector<mpz_class> outs = {a, in.amount - a};
    const EncryptedSplit s = encrypt_outputs(k.pub, in, outs, 32, rng);
    std::vector<EBillId> path = b.infos.at(parent).path;
    path.push_back(parent);
    std::vector<BillInfo> kids;
    for (size_t i = 0; i < outs.size(); ++i) {
      kids.push_back(BillInfo{s.outputs[i], owner(uint8_t(10 + step + i)), path});
    }
    const std::vector<EBillId> ids = b.forest.append_children(parent, kids);
    for (size_t i = 0; i < ids.size(); ++i) {
      b.infos[ids[i]] = kids[i];
      openings[ids[i]] = s.out_openings[i];
      b.order.push_back(ids[i]);
    }
  }
  return b;
}

TEST(Forest, ConservationHoldsAndDetectsViolations) {
  const BuiltForest b = build_balanced(1);
  const PaillierPublicKey& pk = test_key(256).pub;
  EXPECT_FALSE(b.forest.find_conservation_violation(pk).has_value());
  for (const EBillId& id : b.order) EXPECT_TRUE(b.forest.verify_path(b.infos.at(id), id));

  // Re-import with one child's ciphertext changed: its parent no longer balances.
  const EBillId victim = b.order.back();
  const std::string old_ct = b.infos.at(victim).amount_ct.value.get_str(16);
  std::string text = b.forest.export_text();
  const size_t line = text.find(victim.hex() + " ");
  ASSERT_NE(line, std::string::npos);
  const size_t at = text.find(" " + old_ct + " ", line);
  text.replace(at + 1, old_ct.size(), mpz_class(b.infos.at(victim).amount_ct.value + 1).get_str(16));
  const RhtForest tampered = RhtForest::import_text(text);
  EXPECT_EQ(tampered.find_conservation_violation(pk), b.forest.find(victim)->parent);
}

TEST(Forest, ExportImportRoundTrip) {
  const BuiltForest b = build_balanced(2);
  const RhtForest copy = RhtForest::import_text(b.forest.export_text());
  EXPECT_EQ(copy.serialize(), b.forest.serialize());
  EXPECT_EQ(copy.export_text(), b.forest.export_text());
  EXPECT_EQ(copy.roots(), b.forest.roots());
  EXPECT_EQ(build_balanced(2).forest.serialize(), b.forest.serialize());

  EXPECT_THROW(RhtForest::import_text("abc\n"), std::invalid_argument);
  EXPECT_THROW(RhtForest::import_text(std::string(64, 'a') + " " + std::string(64, 'b') +
                                      " 1 " + std::string(64, 'c') + " -\n"),
               std::invalid_argument);  // parent not yet defined
  EXPECT_EQ(RhtForest::import_text("# comment\n\n").size(), 0u);
}

TEST(Forest, TamperedNodeBreaksItselfAndDescendants) {
  const BuiltForest b = build_balanced(3);
  // Pick an internal non-root node.
  EBillId victim;
  for (const EBillId& id : b.order) {
    const auto* n = b.forest.find(id);
    if (!n->is_root() && !n->is_leaf()) {
      victim = id;
      break;
    }
  }
  ASSERT_NE(victim, EBillId{});
  const std::string old_owner = b.infos.at(victim).owner.hex();
  std::string text = b.forest.export_text();
  const size_t line = text.find(victim.hex() + " ");
  const size_t at = text.find(old_owner, line);
  text.replace(at, old_owner.size(), owner(0xee).hex());
  const RhtForest tampered = RhtForest::import_text(text);

  std::set<EBillId> affected = {victim};
  for (const EBillId& id : b.order) {
    for (const EBillId& anc : b.infos.at(id).path) {
      if (anc == victim) affected.insert(id);
    }
  }
  ASSERT_GT(affected.size(), 1u);
  for (const EBillId& id : b.order) {
    const BillInfo& info = id == victim ? tampered.find(id)->info : b.infos.at(id);
    EXPECT_EQ(tampered.verify_path(info, id), affected.count(id) == 0) << id.hex();
  }
}

}  // namespace
}  // namespace billchain::rht

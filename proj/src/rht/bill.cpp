#include "billchain/rht/bill.hpp"

namespace billchain::rht {

namespace {
constexpr size_t kMaxPathLength = 1u << 16;
}

void encode(Encoder& enc, const BillInfo& info) {
  encode(enc, info.amount_ct);
  enc.put_fixed(info.owner);
  enc.put_count(info.path.size());
  for (const EBillId& id : info.path) enc.put_fixed(id);
}

BillInfo decode_bill_info(Decoder& dec) {
  BillInfo info;
  info.amount_ct = decode_ciphertext(dec);
  info.owner = dec.get_fixed<SigPublicKey>();
  const size_t depth = dec.get_count(kMaxPathLength);
  info.path.reserve(depth);
  for (size_t i = 0; i < depth; ++i) info.path.push_back(dec.get_fixed<EBillId>());
  return info;
}

Bytes canonical(const BillInfo& info) {
  Encoder enc;
  encode(enc, info);
  return std::move(enc).bytes();
}

EBillId compute_id(ByteView parent, const BillInfo& info) {
  Encoder enc;
  enc.put_bytes(parent);
  encode(enc, info);
  return EBillId::from_view(hash256(enc.bytes()).view());
}

}  // namespace billchain::rht

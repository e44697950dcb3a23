//! Random well-formed DER tree generation.

use certlint::der::{tag, DerNode, Oid, TagClass};
use num_bigint::BigInt;
use rand::Rng;

fn random_oid(rng: &mut impl Rng) -> Oid {
    let first: u64 = rng.gen_range(0..3);
    let second: u64 = if first == 2 { rng.gen_range(0..1000) } else { rng.gen_range(0..40) };
    let mut arcs = vec![first, second];
    for _ in 0..rng.gen_range(0..6) {
        arcs.push(rng.gen_range(0..1u64 << 28));
    }
    Oid::new(arcs).expect("generated arcs are valid")
}

fn random_primitive(rng: &mut impl Rng) -> DerNode {
    match rng.gen_range(0..6) {
        0 => {
            let len = rng.gen_range(0..32);
            let bytes = (0..len).map(|_| rng.gen()).collect();
            DerNode::octet_string(bytes)
        }
        1 => DerNode::integer(&BigInt::from(rng.gen::<i64>())),
        2 => DerNode::oid(&random_oid(rng)),
        3 => DerNode::boolean(rng.gen()),
        4 => DerNode::null(),
        _ => {
            // Context or private class, occasionally with a high tag number
            // to exercise multi-byte tag encoding.
            let class = if rng.gen() { TagClass::ContextSpecific } else { TagClass::Private };
            let tag_number = if rng.gen_ratio(1, 4) {
                rng.gen_range(31..100_000)
            } else {
                rng.gen_range(0..31)
            };
            let len = rng.gen_range(0..24);
            let bytes = (0..len).map(|_| rng.gen()).collect();
            DerNode::primitive(class, tag_number, bytes)
        }
    }
}

/// A random well-formed DER tree of at most `max_depth` nesting levels.
/// Every tree this returns satisfies encode-parse byte identity.
pub fn random_der_tree(rng: &mut impl Rng, max_depth: usize) -> DerNode {
    if max_depth == 0 || rng.gen_ratio(2, 5) {
        return random_primitive(rng);
    }
    let child_count = rng.gen_range(0..4);
    let children: Vec<DerNode> =
        (0..child_count).map(|_| random_der_tree(rng, max_depth - 1)).collect();
    match rng.gen_range(0..3) {
        0 => DerNode::constructed(TagClass::Universal, tag::SET, children),
        1 => DerNode::context(rng.gen_range(0..50), children),
        _ => DerNode::sequence(children),
    }
}
